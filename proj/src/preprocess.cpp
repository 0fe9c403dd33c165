#include "fxcast/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "fxcast/errors.hpp"

namespace fxcast {

std::vector<double> daily_returns(const std::vector<double>& values) {
    if (values.size() < 2) {
        throw InsufficientDataError("daily_returns needs at least 2 values");
    }
    std::vector<double> out(values.size() - 1);
    for (std::size_t t = 1; t < values.size(); ++t) {
        out[t - 1] = (values[t] - values[t - 1]) / values[t - 1];
    }
    return out;
}

std::vector<double> daily_returns(const RateSeries& series) {
    return daily_returns(series.values);
}

std::vector<int> make_labels(const std::vector<double>& returns) {
    if (returns.size() < 2) {
        throw InsufficientDataError("make_labels needs at least 2 returns");
    }
    std::vector<int> labels(returns.size() - 1);
    for (std::size_t t = 0; t + 1 < returns.size(); ++t) {
        labels[t] = returns[t + 1] > 0.0 ? 1 : 0;
    }
    return labels;
}

ScalerParams minmax_fit(const std::vector<double>& train_values) {
    if (train_values.size() < 2) {
        throw InsufficientDataError("minmax_fit needs at least 2 values");
    }
    auto [lo, hi] = std::minmax_element(train_values.begin(), train_values.end());
    if (*lo == *hi) {
        throw DomainError("degenerate scale: all training values equal");
    }
    return ScalerParams{*lo, *hi};
}

std::vector<double> minmax_transform(const ScalerParams& params,
                                     const std::vector<double>& values) {
    double span = params.max - params.min;
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = (values[i] - params.min) / span;  // unclipped
    }
    return out;
}

double minmax_inverse_one(const ScalerParams& params, double scaled) {
    return scaled * (params.max - params.min) + params.min;
}

std::vector<double> minmax_inverse(const ScalerParams& params, const std::vector<double>& scaled) {
    std::vector<double> out(scaled.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        out[i] = minmax_inverse_one(params, scaled[i]);
    }
    return out;
}

WindowedDataset sliding_windows(const std::vector<double>& values, std::size_t window_len) {
    if (window_len == 0) throw ArgumentError("window_len must be positive");
    if (values.size() <= window_len) {
        throw InsufficientDataError("series length must exceed window_len");
    }
    WindowedDataset ds;
    ds.window_len = window_len;
    std::size_t n = values.size() - window_len;
    ds.inputs.reserve(n);
    ds.targets.reserve(n);
    ds.origin_indices.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ds.inputs.emplace_back(values.begin() + static_cast<long>(i),
                               values.begin() + static_cast<long>(i + window_len));
        ds.targets.push_back(values[i + window_len]);
        ds.origin_indices.push_back(i + window_len);
    }
    return ds;
}

LabeledDataset make_labeled_dataset(const std::vector<double>& returns, std::size_t window_len) {
    if (returns.size() < window_len + 1) {
        throw InsufficientDataError("not enough returns for labeled windows");
    }
    LabeledDataset ds;
    // Window [i, i+window_len) predicts sign of returns[i+window_len].
    std::size_t n = returns.size() - window_len;
    for (std::size_t i = 0; i < n; ++i) {
        ds.features.emplace_back(returns.begin() + static_cast<long>(i),
                                 returns.begin() + static_cast<long>(i + window_len));
        ds.labels.push_back(returns[i + window_len] > 0.0 ? 1 : 0);
    }
    return ds;
}

ChronoSplit chrono_split(std::size_t n_samples, double train_fraction) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0) {
        throw ArgumentError("train_fraction must be in (0, 1)");
    }
    if (n_samples < 2) throw InsufficientDataError("need at least 2 samples to split");
    std::size_t n_train = static_cast<std::size_t>(
        std::floor(static_cast<double>(n_samples) * train_fraction));
    if (n_train == 0 || n_train == n_samples) {
        throw ArgumentError("split leaves an empty side");
    }
    return ChronoSplit{{0, n_train}, {n_train, n_samples}};
}

}  // namespace fxcast
