#include "fxcast/arima.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "fxcast/errors.hpp"

namespace fxcast::arima {

std::vector<double> difference(const std::vector<double>& series) {
    if (series.size() < 2) throw InsufficientDataError("difference needs at least 2 values");
    std::vector<double> out(series.size() - 1);
    for (std::size_t t = 1; t < series.size(); ++t) out[t - 1] = series[t] - series[t - 1];
    return out;
}

std::vector<double> integrate(const std::vector<double>& diffs, double first_value) {
    std::vector<double> out(diffs.size() + 1);
    out[0] = first_value;
    for (std::size_t t = 0; t < diffs.size(); ++t) out[t + 1] = out[t] + diffs[t];
    return out;
}

double css_objective(const std::vector<double>& diffs, double phi, double theta,
                     double* intercept_out) {
    // eps_t = w_t - c - phi*(w_{t-1} - c) - theta*eps_{t-1} is linear in c:
    // eps_t = a_t + c*b_t with b_t = -(1 - phi) - theta*b_{t-1}, so the
    // least-squares intercept has the closed form c = -sum(ab)/sum(b^2).
    std::size_t n = diffs.size();
    double a_prev = 0.0, b_prev = 0.0;
    double sum_ab = 0.0, sum_bb = 0.0, sum_aa = 0.0;
    std::vector<double> a_vals(n - 1), b_vals(n - 1);
    for (std::size_t t = 1; t < n; ++t) {
        double a = diffs[t] - phi * diffs[t - 1] - theta * a_prev;
        double b = -(1.0 - phi) - theta * b_prev;
        a_vals[t - 1] = a;
        b_vals[t - 1] = b;
        sum_ab += a * b;
        sum_bb += b * b;
        sum_aa += a * a;
        a_prev = a;
        b_prev = b;
    }
    double c = sum_bb > 0.0 ? -sum_ab / sum_bb : 0.0;
    if (intercept_out) *intercept_out = c;
    return sum_aa + 2.0 * c * sum_ab + c * c * sum_bb;
}

namespace {

struct GridPoint {
    double phi = 0.0;
    double theta = 0.0;
    double css = std::numeric_limits<double>::infinity();
};

// Nelder-Mead on (phi, theta); intercept stays closed-form inside the
// objective. Parameters outside the open box get an infinite score.
GridPoint nelder_mead(const std::vector<double>& diffs, GridPoint start) {
    auto eval = [&](double phi, double theta) {
        if (std::abs(phi) >= 0.995 || std::abs(theta) >= 0.995) {
            return std::numeric_limits<double>::infinity();
        }
        return css_objective(diffs, phi, theta);
    };

    struct Vertex {
        double x, y, f;
    };
    std::array<Vertex, 3> simplex = {{
        {start.phi, start.theta, start.css},
        {start.phi + 0.02, start.theta, eval(start.phi + 0.02, start.theta)},
        {start.phi, start.theta + 0.02, eval(start.phi, start.theta + 0.02)},
    }};

    for (int iter = 0; iter < 200; ++iter) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        if (std::abs(simplex[2].f - simplex[0].f) <
            1e-12 * (1.0 + std::abs(simplex[0].f))) {
            break;
        }
        double cx = 0.5 * (simplex[0].x + simplex[1].x);
        double cy = 0.5 * (simplex[0].y + simplex[1].y);

        double rx = cx + (cx - simplex[2].x);
        double ry = cy + (cy - simplex[2].y);
        double fr = eval(rx, ry);
        if (fr < simplex[0].f) {
            double ex = cx + 2.0 * (cx - simplex[2].x);
            double ey = cy + 2.0 * (cy - simplex[2].y);
            double fe = eval(ex, ey);
            simplex[2] = fe < fr ? Vertex{ex, ey, fe} : Vertex{rx, ry, fr};
        } else if (fr < simplex[1].f) {
            simplex[2] = {rx, ry, fr};
        } else {
            double kx = cx + 0.5 * (simplex[2].x - cx);
            double ky = cy + 0.5 * (simplex[2].y - cy);
            double fk = eval(kx, ky);
            if (fk < simplex[2].f) {
                simplex[2] = {kx, ky, fk};
            } else {
                for (int i = 1; i < 3; ++i) {
                    simplex[i].x = simplex[0].x + 0.5 * (simplex[i].x - simplex[0].x);
                    simplex[i].y = simplex[0].y + 0.5 * (simplex[i].y - simplex[0].y);
                    simplex[i].f = eval(simplex[i].x, simplex[i].y);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    return {simplex[0].x, simplex[0].y, simplex[0].f};
}

}  // namespace

ArimaParams fit_css(const std::vector<double>& series, bool parallel) {
    if (series.size() < 20) {
        throw InsufficientDataError("fit_css needs at least 20 observations");
    }
    std::vector<double> diffs = difference(series);

    // Coarse grid, step 0.01 over (-0.99, 0.99)^2.
    const int steps = 197;  // -0.98 .. 0.98
    std::vector<GridPoint> row_best(steps);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int ip = 0; ip < steps; ++ip) {
        double phi = -0.98 + 0.01 * ip;
        GridPoint best;
        for (int it = 0; it < steps; ++it) {
            double theta = -0.98 + 0.01 * it;
            double css = css_objective(diffs, phi, theta);
            if (css < best.css) best = {phi, theta, css};
        }
        row_best[ip] = best;
    }
    GridPoint best;
    for (const auto& cand : row_best) {
        if (cand.css < best.css) best = cand;
    }

    GridPoint refined = nelder_mead(diffs, best);
    if (refined.css > best.css) refined = best;

    ArimaParams params;
    params.boundary_clamped =
        std::abs(refined.phi) > 0.99 || std::abs(refined.theta) > 0.99;
    params.phi = std::clamp(refined.phi, -0.99, 0.99);
    params.theta = std::clamp(refined.theta, -0.99, 0.99);
    double intercept = 0.0;
    double css = css_objective(diffs, params.phi, params.theta, &intercept);
    params.intercept = intercept;
    params.sigma2 = css / static_cast<double>(diffs.size() - 1);
    return params;
}

double forecast_one_step(const ArimaParams& params, const std::vector<double>& history) {
    if (history.size() < 2) {
        throw InsufficientDataError("forecast_one_step needs at least 2 observations");
    }
    std::vector<double> w = difference(history);
    double eps = 0.0;
    for (std::size_t t = 1; t < w.size(); ++t) {
        eps = w[t] - params.intercept - params.phi * (w[t - 1] - params.intercept) -
              params.theta * eps;
    }
    double w_hat = params.intercept + params.phi * (w.back() - params.intercept) +
                   params.theta * eps;
    return history.back() + w_hat;
}

std::vector<double> rolling_forecasts(const ArimaParams& params,
                                      const std::vector<double>& series, std::size_t start) {
    if (start < 2 || start >= series.size()) {
        throw ArgumentError("rolling_forecasts: start out of range");
    }
    // Residual recursion over the whole differenced series (eps_0 = 0);
    // the forecast of series[k] only consumes residuals through w[k-2],
    // so a single pass serves every rolling origin.
    std::vector<double> w = difference(series);
    std::vector<double> eps(w.size(), 0.0);
    for (std::size_t j = 1; j < w.size(); ++j) {
        eps[j] = w[j] - params.intercept - params.phi * (w[j - 1] - params.intercept) -
                 params.theta * eps[j - 1];
    }
    std::vector<double> forecasts;
    forecasts.reserve(series.size() - start);
    for (std::size_t k = start; k < series.size(); ++k) {
        double w_hat = params.intercept + params.phi * (w[k - 2] - params.intercept) +
                       params.theta * eps[k - 2];
        forecasts.push_back(series[k - 1] + w_hat);
    }
    return forecasts;
}

std::string to_json(const ArimaParams& params) {
    nlohmann::json j = {{"phi", params.phi},
                        {"theta", params.theta},
                        {"intercept", params.intercept},
                        {"sigma2", params.sigma2},
                        {"boundary_clamped", params.boundary_clamped}};
    return j.dump(2);
}

ArimaParams params_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ArimaParams p;
    p.phi = j.at("phi").get<double>();
    p.theta = j.at("theta").get<double>();
    p.intercept = j.at("intercept").get<double>();
    p.sigma2 = j.at("sigma2").get<double>();
    p.boundary_clamped = j.value("boundary_clamped", false);
    return p;
}

}  // namespace fxcast::arima
