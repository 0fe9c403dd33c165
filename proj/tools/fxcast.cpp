// fxcast: forecasting and backtesting toolkit for daily FX rate series.
//
// Subcommands: ingest | train | evaluate | backtest | report
// All artifacts land under --out with a manifest.json at the root.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fxcast/arima.hpp"
#include "fxcast/backtest.hpp"
#include "fxcast/dataio.hpp"
#include "fxcast/errors.hpp"
#include "fxcast/gboost.hpp"
#include "fxcast/lstm.hpp"
#include "fxcast/preprocess.hpp"
#include "fxcast/rng.hpp"
#include "fxcast/stats.hpp"
#include "fxcast/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "fxcast 1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitData = 2;
constexpr int kExitTrain = 3;
constexpr int kExitMissing = 4;
constexpr int kExitBacktest = 5;
constexpr int kExitUsage = 64;

struct MissingArtifactError : fxcast::Error {
    using Error::Error;
};

struct RunOptions {
    std::string out_dir;
    std::uint64_t seed = 42;
    std::size_t window_len = 50;
    double train_fraction = 0.8;
    bool parallel = true;
    bool unsafe_fit_all = false;
    std::string gbc_features = "returns";  // or "rates"
};

// Exclusive-create lockfile; released on scope exit.
class DirLock {
public:
    explicit DirLock(const fs::path& dir) : path_(dir / ".lock") {
        fs::create_directories(dir);
        std::ofstream probe(path_, std::ios::out | std::ios::app);
        if (fs::exists(path_) && fs::file_size(path_) > 0) {
            throw fxcast::ArgumentError("output directory is locked: " + path_.string());
        }
        std::ofstream out(path_);
        out << "locked\n";
    }
    ~DirLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }

private:
    fs::path path_;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw fxcast::Error("failed to write " + path.string());
}

json load_manifest(const fs::path& out_dir) {
    fs::path p = out_dir / "manifest.json";
    if (!fs::exists(p)) {
        json j;
        j["tool_version"] = kToolVersion;
        j["artifacts"] = json::array();
        j["config"] = json::object();
        j["metrics"] = json::object();
        return j;
    }
    return json::parse(read_file(p));
}

void record_artifact(json& manifest, const std::string& name) {
    auto& arr = manifest["artifacts"];
    for (const auto& a : arr) {
        if (a.get<std::string>() == name) return;
    }
    arr.push_back(name);
}

void save_manifest(const fs::path& out_dir, const json& manifest) {
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string hex_hash(const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fxcast::fnv1a64(bytes)));
    return buf;
}

fxcast::RateSeries load_series(const RunOptions& opts) {
    fs::path p = fs::path(opts.out_dir) / "series.csv";
    if (!fs::exists(p)) {
        throw MissingArtifactError("series.csv not found; run `fxcast ingest` first");
    }
    return fxcast::rate_series_from_csv(read_file(p));
}

struct PipelineData {
    fxcast::RateSeries series;
    fxcast::ScalerParams scaler;
    fxcast::WindowedDataset windows;      // scaled rates, full series
    fxcast::ChronoSplit split;            // over window samples
    std::vector<double> returns;          // raw daily returns
    fxcast::LabeledDataset gbc_data;      // return windows + labels
    fxcast::ChronoSplit gbc_split;        // over gbc samples
};

// Rebuilds the deterministic feature pipeline shared by train/evaluate/
// backtest. The scaler is fitted on the training portion of the rates
// unless --unsafe-fit-all asks for the leaky variant.
PipelineData build_pipeline(const RunOptions& opts, const fxcast::RateSeries& series,
                            std::optional<fxcast::ScalerParams> fixed_scaler = {}) {
    PipelineData d;
    d.series = series;

    std::size_t n = series.values.size();
    if (n <= opts.window_len + 2) {
        throw fxcast::InsufficientDataError("series too short for the configured window");
    }
    std::size_t n_samples = n - opts.window_len;
    d.split = fxcast::chrono_split(n_samples, opts.train_fraction);

    if (fixed_scaler) {
        d.scaler = *fixed_scaler;
    } else if (opts.unsafe_fit_all) {
        d.scaler = fxcast::minmax_fit(series.values);
    } else {
        // Training samples draw on series values [0, window + n_train).
        std::size_t train_end = opts.window_len + d.split.train.end;
        std::vector<double> train_values(series.values.begin(),
                                         series.values.begin() + static_cast<long>(train_end));
        d.scaler = fxcast::minmax_fit(train_values);
    }

    auto scaled = fxcast::minmax_transform(d.scaler, series.values);
    d.windows = fxcast::sliding_windows(scaled, opts.window_len);

    d.returns = fxcast::daily_returns(series.values);
    if (opts.gbc_features == "rates") {
        std::vector<double> feats = scaled;
        auto ds = fxcast::sliding_windows(feats, opts.window_len);
        d.gbc_data.features = ds.inputs;
        for (std::size_t i = 0; i < ds.targets.size(); ++i) {
            std::size_t idx = ds.origin_indices[i];
            d.gbc_data.labels.push_back(
                series.values[idx] > series.values[idx - 1] ? 1 : 0);
        }
    } else {
        d.gbc_data = fxcast::make_labeled_dataset(d.returns, opts.window_len);
    }
    d.gbc_split = fxcast::chrono_split(d.gbc_data.features.size(), opts.train_fraction);
    return d;
}

fxcast::WindowedDataset slice_windows(const fxcast::WindowedDataset& ds,
                                      fxcast::SplitRange r) {
    fxcast::WindowedDataset out;
    out.window_len = ds.window_len;
    out.inputs.assign(ds.inputs.begin() + static_cast<long>(r.begin),
                      ds.inputs.begin() + static_cast<long>(r.end));
    out.targets.assign(ds.targets.begin() + static_cast<long>(r.begin),
                       ds.targets.begin() + static_cast<long>(r.end));
    out.origin_indices.assign(ds.origin_indices.begin() + static_cast<long>(r.begin),
                              ds.origin_indices.begin() + static_cast<long>(r.end));
    return out;
}

// ---------------------------------------------------------------- ingest

int cmd_ingest(const RunOptions& opts, const std::string& source,
               const std::string& cache_dir) {
    DirLock lock(opts.out_dir);
    std::string text;
    if (source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0) {
        std::string cache = cache_dir;
        if (cache.empty()) {
            const char* env = std::getenv("FXCAST_CACHE_DIR");
            cache = env ? env : (fs::path(opts.out_dir) / ".cache").string();
        }
        bool stale = false;
        text = fxcast::fetch_remote(source, cache, &stale);
        if (stale) std::cerr << "warning: network unavailable, using cached copy\n";
    } else {
        if (!fs::exists(source)) {
            throw fxcast::DataError("input file not found: " + source);
        }
        text = read_file(source);
    }

    fxcast::ValidationReport report;
    auto bars = fxcast::parse_ohlc_csv(text);
    auto filled = fxcast::forward_fill(bars, &report);
    auto raw = fxcast::to_rate_series(filled, fxcast::Orientation::UsdPerBdt);
    auto inverted = fxcast::invert_rates(raw);

    json manifest = load_manifest(opts.out_dir);
    manifest["tool_version"] = kToolVersion;
    manifest["input_hash"] = hex_hash(text);
    manifest["config"]["seed"] = opts.seed;
    manifest["config"]["window_len"] = opts.window_len;
    manifest["config"]["train_fraction"] = opts.train_fraction;

    write_file(fs::path(opts.out_dir) / "series.csv", fxcast::rate_series_to_csv(inverted));
    json vr = {{"rows_parsed", report.rows_parsed},
               {"rows_kept", report.rows_kept},
               {"dropped_rows", report.dropped_rows},
               {"duplicate_dates", report.duplicate_dates},
               {"ohlc_violations", report.ohlc_violations}};
    write_file(fs::path(opts.out_dir) / "validation_report.json", vr.dump(2) + "\n");
    record_artifact(manifest, "series.csv");
    record_artifact(manifest, "validation_report.json");
    save_manifest(opts.out_dir, manifest);

    std::cout << "ingested " << inverted.values.size() << " rows ("
              << report.dropped_rows.size() << " dropped)\n";
    return kExitOk;
}

// ----------------------------------------------------------------- train

struct TrainFlags {
    fxcast::lstm::LstmConfig lstm;
    fxcast::gboost::GbcConfig gbc;
    std::string models = "lstm,gbc,arima";
    std::string lstm_activation = "relu";
};

bool wants(const std::string& models, const std::string& name) {
    return models.find(name) != std::string::npos;
}

int cmd_train(const RunOptions& opts, TrainFlags flags) {
    DirLock lock(opts.out_dir);
    auto series = load_series(opts);
    auto data = build_pipeline(opts, series);

    std::vector<fs::path> written;
    auto guard_write = [&](const fs::path& p, const std::string& content) {
        write_file(p, content);
        written.push_back(p);
    };

    json manifest = load_manifest(opts.out_dir);
    try {
        fs::path out(opts.out_dir);
        json scaler = {{"min", data.scaler.min}, {"max", data.scaler.max}};
        guard_write(out / "scaler.json", scaler.dump(2) + "\n");
        record_artifact(manifest, "scaler.json");

        if (wants(flags.models, "lstm")) {
            auto cfg = flags.lstm;
            cfg.window_len = opts.window_len;
            cfg.seed = fxcast::split_seed(opts.seed, "lstm");
            cfg.parallel = opts.parallel;
            cfg.cell_activation = flags.lstm_activation == "tanh"
                                      ? fxcast::lstm::CellActivation::Tanh
                                      : fxcast::lstm::CellActivation::Relu;
            auto train_ds = slice_windows(data.windows, data.split.train);
            auto result = fxcast::lstm::train(train_ds, cfg);
            guard_write(out / "lstm_model.json",
                        fxcast::lstm::to_json(result.params, cfg) + "\n");
            std::ostringstream log;
            log << "epoch,loss,seconds\n";
            for (std::size_t e = 0; e < result.history.epoch_loss.size(); ++e) {
                log << e + 1 << ',' << result.history.epoch_loss[e] << ','
                    << result.history.epoch_seconds[e] << '\n';
            }
            // logs/ carries wall-clock times and is excluded from the
            // reproducible artifact list.
            write_file(out / "logs" / "lstm_training_log.csv", log.str());
            record_artifact(manifest, "lstm_model.json");
        }

        if (wants(flags.models, "gbc")) {
            auto cfg = flags.gbc;
            cfg.seed = fxcast::split_seed(opts.seed, "gbc");
            cfg.parallel = opts.parallel;
            std::vector<std::vector<double>> features(
                data.gbc_data.features.begin(),
                data.gbc_data.features.begin() + static_cast<long>(data.gbc_split.train.end));
            std::vector<int> labels(
                data.gbc_data.labels.begin(),
                data.gbc_data.labels.begin() + static_cast<long>(data.gbc_split.train.end));
            auto model = fxcast::gboost::train(features, labels, cfg);
            guard_write(out / "gbc_model.json", fxcast::gboost::to_json(model) + "\n");
            record_artifact(manifest, "gbc_model.json");
            std::cout << "gbc stages used: " << model.n_stages_used << "\n";
        }

        if (wants(flags.models, "arima")) {
            // Fit on levels up to the first test target, mirroring the
            // LSTM's training horizon.
            std::size_t train_end = opts.window_len + data.split.train.end;
            std::vector<double> train_levels(
                series.values.begin(), series.values.begin() + static_cast<long>(train_end));
            auto params = fxcast::arima::fit_css(train_levels, opts.parallel);
            guard_write(out / "arima_params.json", fxcast::arima::to_json(params) + "\n");
            record_artifact(manifest, "arima_params.json");
        }

        manifest["config"]["seed"] = opts.seed;
        manifest["config"]["window_len"] = opts.window_len;
        manifest["config"]["train_fraction"] = opts.train_fraction;
        manifest["config"]["models"] = flags.models;
        save_manifest(opts.out_dir, manifest);
    } catch (...) {
        // Remove partial outputs so a failed run leaves no half-written models.
        for (const auto& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        throw;
    }
    std::cout << "trained: " << flags.models << "\n";
    return kExitOk;
}

// -------------------------------------------------------------- evaluate

struct EvalOutputs {
    json metrics;
    std::string metrics_csv;
};

int cmd_evaluate(const RunOptions& opts) {
    DirLock lock(opts.out_dir);
    fs::path out(opts.out_dir);
    auto series = load_series(opts);

    if (!fs::exists(out / "scaler.json")) {
        throw MissingArtifactError("scaler.json not found; run `fxcast train` first");
    }
    json sj = json::parse(read_file(out / "scaler.json"));
    fxcast::ScalerParams scaler{sj.at("min").get<double>(), sj.at("max").get<double>()};
    auto data = build_pipeline(opts, series, scaler);

    auto test_ds = slice_windows(data.windows, data.split.test);
    std::vector<double> actual;
    for (auto idx : test_ds.origin_indices) actual.push_back(series.values[idx]);

    json manifest = load_manifest(opts.out_dir);
    json metrics = json::object();
    std::ostringstream csv;
    csv << "model,rmse,mae,dir_acc,n\n";

    std::vector<double> lstm_preds, arima_preds;

    if (fs::exists(out / "lstm_model.json")) {
        fxcast::lstm::LstmParams params;
        fxcast::lstm::LstmConfig cfg;
        fxcast::lstm::from_json(read_file(out / "lstm_model.json"), params, cfg);
        cfg.parallel = opts.parallel;
        lstm_preds = fxcast::lstm::predict_series(params, scaler, test_ds, cfg);
        auto m = fxcast::stats::metrics(lstm_preds, actual);
        metrics["lstm"] = {{"rmse", m.rmse},
                           {"mae", m.mae},
                           {"directional_accuracy", m.directional_accuracy},
                           {"n", m.n}};
        csv << "lstm," << m.rmse << ',' << m.mae << ',' << m.directional_accuracy << ','
            << m.n << '\n';
        std::ostringstream pc;
        pc << "idx,actual,forecast\n";
        for (std::size_t i = 0; i < lstm_preds.size(); ++i) {
            pc << test_ds.origin_indices[i] << ',' << actual[i] << ',' << lstm_preds[i] << '\n';
        }
        write_file(out / "predictions_lstm.csv", pc.str());
        record_artifact(manifest, "predictions_lstm.csv");
    }

    if (fs::exists(out / "arima_params.json")) {
        auto params = fxcast::arima::params_from_json(read_file(out / "arima_params.json"));
        std::size_t start = test_ds.origin_indices.front();
        arima_preds = fxcast::arima::rolling_forecasts(params, series.values, start);
        auto m = fxcast::stats::metrics(arima_preds, actual);
        metrics["arima"] = {{"rmse", m.rmse},
                            {"mae", m.mae},
                            {"directional_accuracy", m.directional_accuracy},
                            {"n", m.n}};
        csv << "arima," << m.rmse << ',' << m.mae << ',' << m.directional_accuracy << ','
            << m.n << '\n';
        std::ostringstream pc;
        pc << "idx,actual,forecast\n";
        for (std::size_t i = 0; i < arima_preds.size(); ++i) {
            pc << start + i << ',' << actual[i] << ',' << arima_preds[i] << '\n';
        }
        write_file(out / "predictions_arima.csv", pc.str());
        record_artifact(manifest, "predictions_arima.csv");
    }

    if (fs::exists(out / "gbc_model.json")) {
        auto model = fxcast::gboost::model_from_json(read_file(out / "gbc_model.json"));
        std::vector<std::vector<double>> test_features(
            data.gbc_data.features.begin() + static_cast<long>(data.gbc_split.test.begin),
            data.gbc_data.features.end());
        std::vector<int> test_labels(
            data.gbc_data.labels.begin() + static_cast<long>(data.gbc_split.test.begin),
            data.gbc_data.labels.end());
        auto margins = fxcast::gboost::predict_margin(model, test_features);
        auto probs = fxcast::gboost::predict_proba(model, test_features);
        auto labels = fxcast::gboost::predict_label(model, test_features);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) hits += labels[i] == test_labels[i];
        double acc = static_cast<double>(hits) / static_cast<double>(labels.size());

        // rmse/mae of margins against signed labels: diagnostic only, a
        // classifier has no natural regression error.
        std::vector<double> signed_labels(test_labels.size());
        for (std::size_t i = 0; i < test_labels.size(); ++i) {
            signed_labels[i] = test_labels[i] == 1 ? 1.0 : -1.0;
        }
        metrics["gbc"] = {{"directional_accuracy", acc},
                          {"n", labels.size()},
                          {"diagnostic_margin_rmse", fxcast::stats::rmse(margins, signed_labels)},
                          {"diagnostic_margin_mae", fxcast::stats::mae(margins, signed_labels)},
                          {"diagnostic", true}};
        csv << "gbc," << fxcast::stats::rmse(margins, signed_labels) << ','
            << fxcast::stats::mae(margins, signed_labels) << ',' << acc << ','
            << labels.size() << '\n';

        std::ostringstream pc;
        pc << "idx,margin,prob,label\n";
        for (std::size_t i = 0; i < margins.size(); ++i) {
            pc << data.gbc_split.test.begin + i << ',' << margins[i] << ',' << probs[i] << ','
               << labels[i] << '\n';
        }
        write_file(out / "predictions_gbc.csv", pc.str());
        record_artifact(manifest, "predictions_gbc.csv");
    }

    if (metrics.empty()) {
        throw MissingArtifactError("no trained models found; run `fxcast train` first");
    }

    if (!lstm_preds.empty() && !arima_preds.empty()) {
        std::vector<double> la(actual.size()), lb(actual.size());
        for (std::size_t i = 0; i < actual.size(); ++i) {
            la[i] = (lstm_preds[i] - actual[i]) * (lstm_preds[i] - actual[i]);
            lb[i] = (arima_preds[i] - actual[i]) * (arima_preds[i] - actual[i]);
        }
        auto dm = fxcast::stats::diebold_mariano(la, lb, 1);
        write_file(out / "dm.json", fxcast::stats::dm_to_json(dm) + "\n");
        record_artifact(manifest, "dm.json");
    }

    auto hurst = fxcast::stats::hurst_exponent(series.values, opts.parallel);
    write_file(out / "hurst.json", fxcast::stats::hurst_to_json(hurst) + "\n");
    record_artifact(manifest, "hurst.json");

    write_file(out / "metrics.json", metrics.dump(2) + "\n");
    write_file(out / "metrics.csv", csv.str());
    record_artifact(manifest, "metrics.json");
    record_artifact(manifest, "metrics.csv");
    manifest["metrics"] = metrics;
    save_manifest(opts.out_dir, manifest);

    std::cout << "evaluate: wrote metrics for " << metrics.size() << " model(s), H="
              << hurst.h << "\n";
    return kExitOk;
}

// -------------------------------------------------------------- backtest

int cmd_backtest(const RunOptions& opts, const fxcast::backtest::BacktestConfig& cfg,
                 std::size_t hist_bins) {
    DirLock lock(opts.out_dir);
    fs::path out(opts.out_dir);
    auto series = load_series(opts);
    if (!fs::exists(out / "gbc_model.json")) {
        throw MissingArtifactError("gbc_model.json not found; run `fxcast train` first");
    }
    json sj = json::parse(read_file(out / "scaler.json"));
    fxcast::ScalerParams scaler{sj.at("min").get<double>(), sj.at("max").get<double>()};
    auto data = build_pipeline(opts, series, scaler);

    auto model = fxcast::gboost::model_from_json(read_file(out / "gbc_model.json"));
    std::vector<std::vector<double>> test_features(
        data.gbc_data.features.begin() + static_cast<long>(data.gbc_split.test.begin),
        data.gbc_data.features.end());
    std::vector<int> test_labels(
        data.gbc_data.labels.begin() + static_cast<long>(data.gbc_split.test.begin),
        data.gbc_data.labels.end());
    auto preds = fxcast::gboost::predict_label(model, test_features);

    // Realized return for sample i is the next-day return its label is
    // about: returns[window + gbc_test_begin + i].
    std::vector<double> trade_returns(test_labels.size());
    for (std::size_t i = 0; i < trade_returns.size(); ++i) {
        trade_returns[i] = data.returns[opts.window_len + data.gbc_split.test.begin + i];
    }

    auto ledger = fxcast::backtest::run_backtest(trade_returns, test_labels, preds, cfg);
    auto summary = fxcast::backtest::summarize(ledger, cfg);

    json manifest = load_manifest(opts.out_dir);
    write_file(out / "ledger.csv", fxcast::backtest::ledger_to_csv(ledger));
    write_file(out / "backtest_summary.json",
               fxcast::backtest::summary_to_json(summary) + "\n");
    record_artifact(manifest, "ledger.csv");
    record_artifact(manifest, "backtest_summary.json");

    // Equity curve includes the starting capital point.
    std::vector<double> equity{cfg.initial_capital};
    for (const auto& t : ledger) equity.push_back(t.equity);
    fxcast::svg::ChartOptions eq_opts;
    eq_opts.title = "Equity curve";
    write_file(out / "equity.svg", fxcast::svg::line_chart(equity, eq_opts));

    fxcast::svg::ChartOptions hist_opts;
    hist_opts.title = "Return distribution";
    write_file(out / "returns_hist.svg",
               fxcast::svg::histogram(trade_returns, hist_bins, hist_opts));

    // Actual vs one-step forecast overlay when LSTM predictions exist.
    if (fs::exists(out / "predictions_lstm.csv")) {
        std::istringstream in(read_file(out / "predictions_lstm.csv"));
        std::string line;
        std::getline(in, line);
        std::vector<double> actual, forecast;
        while (std::getline(in, line)) {
            std::istringstream row(line);
            std::string idx, a, f;
            std::getline(row, idx, ',');
            std::getline(row, a, ',');
            std::getline(row, f, ',');
            actual.push_back(std::stod(a));
            forecast.push_back(std::stod(f));
        }
        fxcast::svg::ChartOptions ov_opts;
        ov_opts.title = "Actual vs predicted";
        write_file(out / "overlay.svg", fxcast::svg::overlay_chart(actual, forecast, ov_opts));
        record_artifact(manifest, "overlay.svg");
    }
    record_artifact(manifest, "equity.svg");
    record_artifact(manifest, "returns_hist.svg");
    save_manifest(opts.out_dir, manifest);

    std::cout << "backtest: " << summary.n_trades << " trades, win rate "
              << summary.win_rate * 100.0 << "%, net pnl " << summary.net_pnl << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- report

int cmd_report(const RunOptions& opts) {
    DirLock lock(opts.out_dir);
    fs::path out(opts.out_dir);
    for (const char* required : {"metrics.json", "backtest_summary.json"}) {
        if (!fs::exists(out / required)) {
            throw MissingArtifactError(std::string(required) +
                                       " not found; run evaluate and backtest first");
        }
    }
    json manifest = load_manifest(opts.out_dir);
    json metrics = json::parse(read_file(out / "metrics.json"));
    json summary = json::parse(read_file(out / "backtest_summary.json"));

    std::ostringstream md;
    md << "# fxcast run report\n\n";
    md << "- tool: " << manifest.value("tool_version", kToolVersion) << "\n";
    md << "- input hash: `" << manifest.value("input_hash", "unknown") << "`\n";
    md << "- seed: " << manifest["config"].value("seed", 0) << "\n\n";

    md << "## Forecast metrics\n\n";
    md << "| model | rmse | mae | directional accuracy | n |\n";
    md << "|-------|------|-----|----------------------|---|\n";
    for (const auto& [name, m] : metrics.items()) {
        md << "| " << name;
        if (m.value("diagnostic", false)) md << " (diagnostic)";
        md << " | " << m.value("rmse", m.value("diagnostic_margin_rmse", 0.0)) << " | "
           << m.value("mae", m.value("diagnostic_margin_mae", 0.0)) << " | "
           << m.value("directional_accuracy", 0.0) << " | " << m.value("n", 0) << " |\n";
    }
    md << "\n";

    if (fs::exists(out / "dm.json")) {
        json dm = json::parse(read_file(out / "dm.json"));
        md << "## Diebold-Mariano (LSTM vs ARIMA, squared errors)\n\n";
        md << "- statistic: " << dm.value("statistic", 0.0) << "\n";
        md << "- p-value: " << dm.value("p_value", 1.0) << "\n";
        md << "- n: " << dm.value("n", 0) << "\n\n";
    }
    if (fs::exists(out / "hurst.json")) {
        json hurst = json::parse(read_file(out / "hurst.json"));
        md << "## Hurst exponent\n\n";
        md << "- H: " << hurst.value("H", 0.5) << "\n";
        md << "- r-squared: " << hurst.value("r_squared", 0.0) << "\n\n";
    }

    md << "## Backtest\n\n";
    md << "- trades: " << summary.value("n_trades", 0) << "\n";
    md << "- win rate: " << summary.value("win_rate", 0.0) * 100.0 << "%\n";
    md << "- net pnl: " << summary.value("net_pnl", 0.0) << "\n";
    md << "- final equity: " << summary.value("final_equity", 0.0) << "\n";
    md << "- max drawdown: " << summary.value("max_drawdown", 0.0) << "\n\n";
    md << "![equity](equity.svg)\n";
    md << "![returns](returns_hist.svg)\n";
    if (fs::exists(out / "overlay.svg")) md << "![overlay](overlay.svg)\n";

    write_file(out / "report.md", md.str());
    record_artifact(manifest, "report.md");
    save_manifest(opts.out_dir, manifest);
    std::cout << "report written to " << (out / "report.md").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FX rate forecasting and backtesting toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override");

    RunOptions opts;
    app.add_option("--out", opts.out_dir, "output directory")->required();
    app.add_option("--seed", opts.seed, "run seed, split per module");
    app.add_option("--window", opts.window_len, "sliding window length");
    app.add_option("--train-fraction", opts.train_fraction, "chronological train fraction");
    app.add_flag("!--no-parallel", opts.parallel, "disable OpenMP kernels");
    app.add_flag("--unsafe-fit-all", opts.unsafe_fit_all,
                 "fit the scaler on the full series (leaks test information)");
    app.add_option("--gbc-features", opts.gbc_features, "classifier features: returns|rates")
        ->check(CLI::IsMember({"returns", "rates"}));

    std::string source, cache_dir;
    auto* ingest = app.add_subcommand("ingest", "load, clean, and invert raw OHLC data");
    ingest->add_option("source", source, "CSV file path or http(s) url")->required();
    ingest->add_option("--cache-dir", cache_dir, "fetch cache directory");

    TrainFlags tf;
    auto* train = app.add_subcommand("train", "train selected models");
    train->add_option("--models", tf.models, "comma list of lstm,gbc,arima");
    train->add_option("--lstm-epochs", tf.lstm.epochs);
    train->add_option("--lstm-units", tf.lstm.hidden_units);
    train->add_option("--lstm-batch", tf.lstm.batch_size);
    train->add_option("--lstm-lr", tf.lstm.learning_rate);
    train->add_option("--lstm-activation", tf.lstm_activation)
        ->check(CLI::IsMember({"relu", "tanh"}));
    train->add_option("--lstm-clip", tf.lstm.grad_clip_norm);
    train->add_option("--gbc-estimators", tf.gbc.n_estimators);
    train->add_option("--gbc-lr", tf.gbc.learning_rate);
    train->add_option("--gbc-depth", tf.gbc.max_depth);
    train->add_option("--gbc-min-leaf", tf.gbc.min_samples_leaf);
    train->add_option("--gbc-patience", tf.gbc.early_stop.patience);
    train->add_option("--gbc-tol", tf.gbc.early_stop.tol);
    train->add_option("--gbc-val-fraction", tf.gbc.early_stop.validation_fraction);

    fxcast::backtest::BacktestConfig bt_cfg;
    std::size_t hist_bins = 0;
    auto* evaluate = app.add_subcommand("evaluate", "test-set metrics, DM test, Hurst");
    auto* backtest = app.add_subcommand("backtest", "trade ledger, summary, plots");
    backtest->add_option("--capital", bt_cfg.initial_capital);
    backtest->add_option("--stake", bt_cfg.stake_base);
    backtest->add_option("--bins", hist_bins, "histogram bins (0 = ceil(sqrt(n)))");
    auto* report = app.add_subcommand("report", "collate results into markdown");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(opts, source, cache_dir);
        if (train->parsed()) return cmd_train(opts, tf);
        if (evaluate->parsed()) return cmd_evaluate(opts);
        if (backtest->parsed()) return cmd_backtest(opts, bt_cfg, hist_bins);
        if (report->parsed()) return cmd_report(opts);
    } catch (const MissingArtifactError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMissing;
    } catch (const fxcast::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const fxcast::TrainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTrain;
    } catch (const fxcast::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (backtest->parsed()) return kExitBacktest;
        if (train->parsed()) return kExitTrain;
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
