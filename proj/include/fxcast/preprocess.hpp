#pragma once

#include <cstddef>
#include <vector>

#include "fxcast/dataio.hpp"

namespace fxcast {

// Min-Max fit parameters; max > min strictly.
struct ScalerParams {
    double min = 0.0;
    double max = 1.0;
};

// Fixed-length input windows with next-step targets.
// inputs[i] is the scaled slice [i, i+window_len); targets[i] is scaled
// series[i+window_len]; origin_indices[i] = i + window_len.
struct WindowedDataset {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    std::size_t window_len = 50;
    std::vector<std::size_t> origin_indices;
};

// Windows of past returns paired with next-return direction labels.
struct LabeledDataset {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;  // {0,1}
};

struct SplitRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // half-open
    std::size_t size() const { return end - begin; }
};

struct ChronoSplit {
    SplitRange train;
    SplitRange test;
};

// r_t = (X_t - X_{t-1}) / X_{t-1}; output length = input length - 1.
std::vector<double> daily_returns(const RateSeries& series);
std::vector<double> daily_returns(const std::vector<double>& values);

// labels[t] = 1 iff returns[t+1] > 0 (exact zero maps to 0).
std::vector<int> make_labels(const std::vector<double>& returns);

ScalerParams minmax_fit(const std::vector<double>& train_values);
std::vector<double> minmax_transform(const ScalerParams& params, const std::vector<double>& values);
std::vector<double> minmax_inverse(const ScalerParams& params, const std::vector<double>& scaled);
double minmax_inverse_one(const ScalerParams& params, double scaled);

WindowedDataset sliding_windows(const std::vector<double>& values, std::size_t window_len);

// Returns-window features with direction labels for the classifier.
LabeledDataset make_labeled_dataset(const std::vector<double>& returns, std::size_t window_len);

// First floor(n * fraction) samples train, remainder test, no shuffling.
ChronoSplit chrono_split(std::size_t n_samples, double train_fraction);

}  // namespace fxcast
