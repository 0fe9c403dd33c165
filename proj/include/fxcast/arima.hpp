#pragma once

#include <string>
#include <vector>

namespace fxcast::arima {

struct ArimaParams {
    double phi = 0.0;        // AR(1)
    double theta = 0.0;      // MA(1)
    double intercept = 0.0;  // mean of the differenced series
    double sigma2 = 0.0;     // innovation variance
    bool boundary_clamped = false;
};

std::vector<double> difference(const std::vector<double>& series);
std::vector<double> integrate(const std::vector<double>& diffs, double first_value);

// Conditional-sum-of-squares fit of ARIMA(1,1,1): coarse grid over
// (phi, theta) with the intercept solved in closed form, then Nelder-Mead
// refinement from the grid optimum.
ArimaParams fit_css(const std::vector<double>& series, bool parallel = true);

// CSS objective for a given (phi, theta) with closed-form intercept;
// exposed for optimizer sanity checks.
double css_objective(const std::vector<double>& diffs, double phi, double theta,
                     double* intercept_out = nullptr);

// One-step-ahead forecast of the NEXT level, given the full history of
// levels. Runs the residual recursion with frozen parameters.
double forecast_one_step(const ArimaParams& params, const std::vector<double>& history);

// Rolling one-step forecasts for indices [start, n) of the series,
// appending each true observation as it arrives. forecasts[k] predicts
// series[start + k].
std::vector<double> rolling_forecasts(const ArimaParams& params,
                                      const std::vector<double>& series, std::size_t start);

std::string to_json(const ArimaParams& params);
ArimaParams params_from_json(const std::string& text);

}  // namespace fxcast::arima
