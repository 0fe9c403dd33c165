#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fxcast::stats {

struct MetricsReport {
    double rmse = 0.0;
    double mae = 0.0;
    double directional_accuracy = 0.0;
    std::size_t n = 0;
};

struct DmResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t horizon = 1;
    std::size_t n = 0;
    bool degenerate_variance = false;
};

struct HurstResult {
    double h = 0.5;
    std::vector<double> log_sizes;
    std::vector<double> log_rs;
    double r_squared = 0.0;
};

double rmse(const std::vector<double>& preds, const std::vector<double>& targets);
double mae(const std::vector<double>& preds, const std::vector<double>& targets);

// Fraction of steps where sign(pred_t - actual_{t-1}) matches
// sign(actual_t - actual_{t-1}). Zero change counts as a match only when
// both sides are zero.
double directional_accuracy(const std::vector<double>& pred_series,
                            const std::vector<double>& actual_series);

MetricsReport metrics(const std::vector<double>& preds, const std::vector<double>& actuals);

// Equal-predictive-accuracy test on per-step loss series. LRV uses the
// rectangular kernel up to lag horizon-1; two-sided normal p-value.
DmResult diebold_mariano(const std::vector<double>& losses_a,
                         const std::vector<double>& losses_b, std::size_t horizon = 1);

// Classical rescaled-range estimate: window sizes geometric from 10 to
// n/2, block R/S averaged per size, H = log-log regression slope.
HurstResult hurst_exponent(const std::vector<double>& series, bool parallel = true);

std::string dm_to_json(const DmResult& r);
std::string hurst_to_json(const HurstResult& r);

}  // namespace fxcast::stats
