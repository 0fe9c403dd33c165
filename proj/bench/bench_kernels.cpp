// Micro-benchmark comparing the OpenMP kernels against their serial
// reference paths. Both produce bit-identical results (see the parallel
// consistency tests); this target reports the speed difference only.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "fxcast/arima.hpp"
#include "fxcast/gboost.hpp"
#include "fxcast/lstm.hpp"
#include "fxcast/rng.hpp"
#include "fxcast/stats.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double time_once(const std::function<void()>& fn) {
    auto start = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n", name, serial,
                parallel, serial / parallel);
}

}  // namespace

int main() {
    fxcast::Rng rng(1234);

    // LSTM batch gradient: 256 windows of length 50, 50 hidden units.
    {
        fxcast::lstm::LstmConfig cfg;
        cfg.seed = 1;
        auto params = fxcast::lstm::init_params(cfg);
        fxcast::WindowedDataset ds;
        ds.window_len = cfg.window_len;
        for (int i = 0; i < 256; ++i) {
            std::vector<double> w(cfg.window_len);
            for (double& x : w) x = rng.uniform();
            ds.inputs.push_back(w);
            ds.targets.push_back(rng.uniform());
            ds.origin_indices.push_back(i + cfg.window_len);
        }
        cfg.parallel = false;
        double serial = time_once(
            [&] { fxcast::lstm::batch_gradient(params, ds, 0, ds.inputs.size(), cfg); });
        cfg.parallel = true;
        double parallel = time_once(
            [&] { fxcast::lstm::batch_gradient(params, ds, 0, ds.inputs.size(), cfg); });
        row("lstm batch gradient", serial, parallel);
    }

    // Boosted tree fitting: 2000 samples x 50 features, 30 stages.
    {
        fxcast::gboost::Matrix features;
        std::vector<int> labels;
        for (int i = 0; i < 2000; ++i) {
            std::vector<double> x(50);
            for (double& v : x) v = rng.uniform(-1, 1);
            features.push_back(x);
            labels.push_back(x[3] + 0.5 * rng.normal() > 0 ? 1 : 0);
        }
        fxcast::gboost::GbcConfig cfg;
        cfg.n_estimators = 30;
        cfg.learning_rate = 0.1;
        cfg.early_stop.tol = -1.0;
        cfg.parallel = false;
        double serial = time_once([&] { fxcast::gboost::train(features, labels, cfg); });
        cfg.parallel = true;
        double parallel = time_once([&] { fxcast::gboost::train(features, labels, cfg); });
        row("gbc split search", serial, parallel);
    }

    // ARIMA grid: 197x197 candidate pairs over a 2000-point series.
    {
        std::vector<double> series(2000);
        double level = 100.0;
        for (double& v : series) {
            level += 0.3 * rng.normal();
            v = level;
        }
        double serial = time_once([&] { fxcast::arima::fit_css(series, false); });
        double parallel = time_once([&] { fxcast::arima::fit_css(series, true); });
        row("arima css grid", serial, parallel);
    }

    // Hurst rescaled-range blocks over a 200k-point random walk.
    {
        std::vector<double> series(200000);
        double level = 0.0;
        for (double& v : series) {
            level += rng.normal();
            v = level;
        }
        double serial = time_once([&] { fxcast::stats::hurst_exponent(series, false); });
        double parallel = time_once([&] { fxcast::stats::hurst_exponent(series, true); });
        row("hurst rescaled range", serial, parallel);
    }

    return 0;
}
