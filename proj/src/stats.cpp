#include "fxcast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "fxcast/errors.hpp"

namespace fxcast::stats {

namespace {

void check_pair(const std::vector<double>& a, const std::vector<double>& b, const char* name) {
    if (a.empty() || a.size() != b.size()) {
        throw ArgumentError(std::string(name) + ": empty or mismatched inputs");
    }
}

int sign(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace

double rmse(const std::vector<double>& preds, const std::vector<double>& targets) {
    check_pair(preds, targets, "rmse");
    double acc = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        double r = preds[i] - targets[i];
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(preds.size()));
}

double mae(const std::vector<double>& preds, const std::vector<double>& targets) {
    check_pair(preds, targets, "mae");
    double acc = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) acc += std::abs(preds[i] - targets[i]);
    return acc / static_cast<double>(preds.size());
}

double directional_accuracy(const std::vector<double>& pred_series,
                            const std::vector<double>& actual_series) {
    check_pair(pred_series, actual_series, "directional_accuracy");
    if (pred_series.size() < 2) {
        throw InsufficientDataError("directional_accuracy needs at least 2 points");
    }
    std::size_t hits = 0;
    for (std::size_t t = 1; t < pred_series.size(); ++t) {
        int ps = sign(pred_series[t] - actual_series[t - 1]);
        int as = sign(actual_series[t] - actual_series[t - 1]);
        if (ps == as) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(pred_series.size() - 1);
}

MetricsReport metrics(const std::vector<double>& preds, const std::vector<double>& actuals) {
    MetricsReport r;
    r.rmse = rmse(preds, actuals);
    r.mae = mae(preds, actuals);
    r.directional_accuracy = directional_accuracy(preds, actuals);
    r.n = preds.size();
    return r;
}

DmResult diebold_mariano(const std::vector<double>& losses_a,
                         const std::vector<double>& losses_b, std::size_t horizon) {
    check_pair(losses_a, losses_b, "diebold_mariano");
    std::size_t n = losses_a.size();
    if (n < 10) throw InsufficientDataError("diebold_mariano needs n >= 10");
    if (horizon == 0) throw ArgumentError("diebold_mariano: horizon must be positive");

    std::vector<double> d(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = losses_a[i] - losses_b[i];
        mean += d[i];
    }
    mean /= static_cast<double>(n);

    // Long-run variance: autocovariances with rectangular weights up to
    // lag horizon-1. Horizon 1 reduces to the sample variance of d.
    double lrv = 0.0;
    for (std::size_t lag = 0; lag < horizon; ++lag) {
        double gamma = 0.0;
        for (std::size_t t = lag; t < n; ++t) gamma += (d[t] - mean) * (d[t - lag] - mean);
        gamma /= static_cast<double>(n);
        lrv += lag == 0 ? gamma : 2.0 * gamma;
    }

    DmResult result;
    result.horizon = horizon;
    result.n = n;
    if (lrv <= 0.0) {
        result.degenerate_variance = true;
        if (mean == 0.0) {
            result.statistic = 0.0;
            result.p_value = 1.0;
        } else {
            result.statistic = mean > 0.0 ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
            result.p_value = 0.0;
        }
        return result;
    }
    result.statistic = mean / std::sqrt(lrv / static_cast<double>(n));
    result.p_value = std::erfc(std::abs(result.statistic) / std::sqrt(2.0));
    return result;
}

HurstResult hurst_exponent(const std::vector<double>& series, bool parallel) {
    std::size_t n = series.size();
    if (n < 100) throw InsufficientDataError("hurst_exponent needs at least 100 points");

    std::vector<std::size_t> sizes;
    for (std::size_t w = 10; w <= n / 2; w *= 2) sizes.push_back(w);
    if (sizes.size() < 4) throw InsufficientDataError("hurst_exponent: fewer than 4 window sizes");

    std::vector<double> mean_rs(sizes.size(), 0.0);
    std::vector<char> usable(sizes.size(), 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
    for (long long si = 0; si < static_cast<long long>(sizes.size()); ++si) {
        std::size_t w = sizes[static_cast<std::size_t>(si)];
        std::size_t n_blocks = n / w;
        double acc = 0.0;
        std::size_t used = 0;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            const double* block = series.data() + b * w;
            double mean = 0.0;
            for (std::size_t i = 0; i < w; ++i) mean += block[i];
            mean /= static_cast<double>(w);
            double var = 0.0;
            double cum = 0.0, cmin = 0.0, cmax = 0.0;
            for (std::size_t i = 0; i < w; ++i) {
                double dev = block[i] - mean;
                var += dev * dev;
                cum += dev;
                cmin = std::min(cmin, cum);
                cmax = std::max(cmax, cum);
            }
            double sd = std::sqrt(var / static_cast<double>(w));
            if (sd <= 0.0) continue;  // degenerate block
            acc += (cmax - cmin) / sd;
            ++used;
        }
        if (used > 0) {
            mean_rs[static_cast<std::size_t>(si)] = acc / static_cast<double>(used);
            usable[static_cast<std::size_t>(si)] = 1;
        }
    }

    // Anis-Lloyd expected R/S under the null, removing the small-block
    // upward bias of the classical statistic.
    auto expected_rs = [](std::size_t w) {
        double dn = static_cast<double>(w);
        double sum = 0.0;
        for (std::size_t i = 1; i < w; ++i) {
            sum += std::sqrt((dn - static_cast<double>(i)) / static_cast<double>(i));
        }
        double front;
        if (w <= 340) {
            front = std::exp(std::lgamma((dn - 1.0) / 2.0) - std::lgamma(dn / 2.0)) /
                    std::sqrt(M_PI);
        } else {
            front = 1.0 / std::sqrt(dn * M_PI / 2.0);
        }
        return (dn - 0.5) / dn * front * sum;
    };

    HurstResult result;
    std::vector<double> corrected;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        if (!usable[si] || mean_rs[si] <= 0.0) continue;
        result.log_sizes.push_back(std::log(static_cast<double>(sizes[si])));
        result.log_rs.push_back(std::log(mean_rs[si]));
        corrected.push_back(std::log(mean_rs[si]) - std::log(expected_rs(sizes[si])));
    }
    if (result.log_sizes.size() < 4) {
        throw DomainError("hurst_exponent: degenerate series, too few usable window sizes");
    }

    // H = 0.5 + least-squares slope of the bias-corrected log(R/S) on log(w).
    std::size_t m = result.log_sizes.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += result.log_sizes[i];
        sy += corrected[i];
        sxx += result.log_sizes[i] * result.log_sizes[i];
        sxy += result.log_sizes[i] * corrected[i];
        syy += corrected[i] * corrected[i];
    }
    double dm = static_cast<double>(m);
    double cov = sxy - sx * sy / dm;
    double varx = sxx - sx * sx / dm;
    double vary = syy - sy * sy / dm;
    result.h = 0.5 + cov / varx;
    result.r_squared = vary > 0.0 ? (cov * cov) / (varx * vary) : 1.0;
    return result;
}

std::string dm_to_json(const DmResult& r) {
    nlohmann::json j = {{"statistic", r.statistic},
                        {"p_value", r.p_value},
                        {"horizon", r.horizon},
                        {"n", r.n},
                        {"degenerate_variance", r.degenerate_variance}};
    return j.dump(2);
}

std::string hurst_to_json(const HurstResult& r) {
    nlohmann::json j = {{"H", r.h},
                        {"r_squared", r.r_squared},
                        {"log_sizes", r.log_sizes},
                        {"log_rs", r.log_rs}};
    return j.dump(2);
}

}  // namespace fxcast::stats
