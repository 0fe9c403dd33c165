#include "fxcast/lstm.hpp"

#include <chrono>
#include <cmath>

#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "fxcast/errors.hpp"
#include "fxcast/rng.hpp"

namespace fxcast::lstm {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double act(double x, CellActivation a) {
    return a == CellActivation::Relu ? (x > 0.0 ? x : 0.0) : std::tanh(x);
}

// Derivative from the pre-activation value (relu' at 0 defined as 0).
inline double act_grad(double pre, CellActivation a) {
    if (a == CellActivation::Relu) return pre > 0.0 ? 1.0 : 0.0;
    double t = std::tanh(pre);
    return 1.0 - t * t;
}

// y += A x for a (h x h) row-major matrix.
inline void matvec_add(const std::vector<double>& m, const std::vector<double>& x,
                       std::vector<double>& y) {
    std::size_t h = x.size();
    for (std::size_t r = 0; r < h; ++r) {
        const double* row = m.data() + r * h;
        double acc = 0.0;
        for (std::size_t c = 0; c < h; ++c) acc += row[c] * x[c];
        y[r] += acc;
    }
}

// y += A^T x.
inline void matvec_t_add(const std::vector<double>& m, const std::vector<double>& x,
                         std::vector<double>& y) {
    std::size_t h = x.size();
    for (std::size_t r = 0; r < h; ++r) {
        const double* row = m.data() + r * h;
        double xr = x[r];
        for (std::size_t c = 0; c < h; ++c) y[c] += row[c] * xr;
    }
}

// Per-step cache for backpropagation through time.
struct StepCache {
    std::vector<double> i, f, o, pre_g, g, c, h;
};

}  // namespace

void LstmConfig::validate() const {
    if (hidden_units == 0 || window_len == 0) throw ArgumentError("lstm: zero dimension");
    if (adam_beta1 <= 0.0 || adam_beta1 >= 1.0 || adam_beta2 <= 0.0 || adam_beta2 >= 1.0) {
        throw ArgumentError("lstm: adam betas must lie in (0,1)");
    }
    if (adam_epsilon <= 0.0) throw ArgumentError("lstm: adam epsilon must be positive");
    if (learning_rate <= 0.0) throw ArgumentError("lstm: learning rate must be positive");
    if (batch_size == 0) throw ArgumentError("lstm: batch size must be positive");
}

LstmParams LstmParams::zeros(std::size_t hidden) {
    LstmParams p;
    p.hidden = hidden;
    for (auto* v : {&p.w_i, &p.w_f, &p.w_o, &p.w_c, &p.b_i, &p.b_f, &p.b_o, &p.b_c, &p.w_dense}) {
        v->assign(hidden, 0.0);
    }
    for (auto* v : {&p.u_i, &p.u_f, &p.u_o, &p.u_c}) v->assign(hidden * hidden, 0.0);
    return p;
}

std::vector<std::vector<double>*> LstmParams::fields() {
    return {&w_i, &w_f, &w_o, &w_c, &u_i, &u_f, &u_o, &u_c,
            &b_i, &b_f, &b_o, &b_c, &w_dense};
}

std::vector<const std::vector<double>*> LstmParams::fields() const {
    return {&w_i, &w_f, &w_o, &w_c, &u_i, &u_f, &u_o, &u_c,
            &b_i, &b_f, &b_o, &b_c, &w_dense};
}

std::size_t LstmParams::flat_size() const {
    std::size_t n = 1;  // b_dense
    for (const auto* f : fields()) n += f->size();
    return n;
}

double* LstmParams::flat_at(std::size_t index) {
    for (auto* f : fields()) {
        if (index < f->size()) return f->data() + index;
        index -= f->size();
    }
    if (index == 0) return &b_dense;
    throw ArgumentError("lstm: flat index out of range");
}

AdamState AdamState::zeros(std::size_t hidden) {
    return AdamState{LstmParams::zeros(hidden), LstmParams::zeros(hidden), 0};
}

LstmParams init_params(const LstmConfig& config) {
    config.validate();
    std::size_t h = config.hidden_units;
    LstmParams p = LstmParams::zeros(h);
    Rng rng(config.seed);

    auto glorot = [&](std::vector<double>& w, std::size_t fan_in, std::size_t fan_out) {
        double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (double& x : w) x = rng.uniform(-bound, bound);
    };
    for (auto* w : {&p.w_i, &p.w_f, &p.w_o, &p.w_c}) glorot(*w, 1, h);
    for (auto* u : {&p.u_i, &p.u_f, &p.u_o, &p.u_c}) glorot(*u, h, h);
    glorot(p.w_dense, h, 1);
    p.b_f.assign(h, 1.0);  // forget bias 1 keeps early cell memory alive
    return p;
}

LstmState cell_step(const LstmParams& params, double x_t, const LstmState& state,
                    CellActivation activation) {
    std::size_t h = params.hidden;
    if (state.h.size() != h || state.c.size() != h) {
        throw DimensionError("cell_step: state size mismatch");
    }
    std::vector<double> pi(h), pf(h), po(h), pg(h);
    for (std::size_t r = 0; r < h; ++r) {
        pi[r] = params.w_i[r] * x_t + params.b_i[r];
        pf[r] = params.w_f[r] * x_t + params.b_f[r];
        po[r] = params.w_o[r] * x_t + params.b_o[r];
        pg[r] = params.w_c[r] * x_t + params.b_c[r];
    }
    matvec_add(params.u_i, state.h, pi);
    matvec_add(params.u_f, state.h, pf);
    matvec_add(params.u_o, state.h, po);
    matvec_add(params.u_c, state.h, pg);

    LstmState next{std::vector<double>(h), std::vector<double>(h)};
    for (std::size_t r = 0; r < h; ++r) {
        double ig = sigmoid(pi[r]);
        double fg = sigmoid(pf[r]);
        double og = sigmoid(po[r]);
        double g = act(pg[r], activation);
        next.c[r] = fg * state.c[r] + ig * g;
        next.h[r] = og * act(next.c[r], activation);
    }
    return next;
}

double forward(const LstmParams& params, const std::vector<double>& window,
               CellActivation activation) {
    LstmState state{std::vector<double>(params.hidden, 0.0),
                    std::vector<double>(params.hidden, 0.0)};
    for (double x : window) state = cell_step(params, x, state, activation);
    double y = params.b_dense;
    for (std::size_t r = 0; r < params.hidden; ++r) y += params.w_dense[r] * state.h[r];
    return y;
}

double mse_loss(const std::vector<double>& predictions, const std::vector<double>& targets) {
    if (predictions.empty() || predictions.size() != targets.size()) {
        throw ArgumentError("mse_loss: empty or mismatched inputs");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        double r = predictions[i] - targets[i];
        acc += r * r;
    }
    return acc / static_cast<double>(predictions.size());
}

namespace {

// Forward with cached gates, then exact BPTT for one sample.
// Accumulates into `grad`; returns the squared residual.
double sample_gradient(const LstmParams& p, const std::vector<double>& window, double target,
                       double inv_batch, CellActivation activation, LstmParams& grad) {
    std::size_t h = p.hidden;
    std::size_t T = window.size();
    std::vector<StepCache> cache(T);

    LstmState state{std::vector<double>(h, 0.0), std::vector<double>(h, 0.0)};
    for (std::size_t t = 0; t < T; ++t) {
        double x = window[t];
        StepCache& s = cache[t];
        s.i.resize(h);
        s.f.resize(h);
        s.o.resize(h);
        s.pre_g.resize(h);
        s.g.resize(h);
        s.c.resize(h);
        s.h.resize(h);

        std::vector<double> pi(h), pf(h), po(h), pg(h);
        for (std::size_t r = 0; r < h; ++r) {
            pi[r] = p.w_i[r] * x + p.b_i[r];
            pf[r] = p.w_f[r] * x + p.b_f[r];
            po[r] = p.w_o[r] * x + p.b_o[r];
            pg[r] = p.w_c[r] * x + p.b_c[r];
        }
        matvec_add(p.u_i, state.h, pi);
        matvec_add(p.u_f, state.h, pf);
        matvec_add(p.u_o, state.h, po);
        matvec_add(p.u_c, state.h, pg);
        for (std::size_t r = 0; r < h; ++r) {
            s.i[r] = sigmoid(pi[r]);
            s.f[r] = sigmoid(pf[r]);
            s.o[r] = sigmoid(po[r]);
            s.pre_g[r] = pg[r];
            s.g[r] = act(pg[r], activation);
            s.c[r] = s.f[r] * state.c[r] + s.i[r] * s.g[r];
            s.h[r] = s.o[r] * act(s.c[r], activation);
        }
        state.h = s.h;
        state.c = s.c;
    }

    double pred = p.b_dense;
    for (std::size_t r = 0; r < h; ++r) pred += p.w_dense[r] * state.h[r];
    double residual = pred - target;

    // d(batch mean MSE)/d pred
    double dy = 2.0 * residual * inv_batch;
    grad.b_dense += dy;
    std::vector<double> dh(h), dc(h, 0.0);
    for (std::size_t r = 0; r < h; ++r) {
        grad.w_dense[r] += dy * state.h[r];
        dh[r] = dy * p.w_dense[r];
    }

    std::vector<double> dpi(h), dpf(h), dpo(h), dpg(h);
    const std::vector<double> zeros(h, 0.0);
    for (std::size_t ti = T; ti-- > 0;) {
        const StepCache& s = cache[ti];
        const std::vector<double>& h_prev = ti > 0 ? cache[ti - 1].h : zeros;
        const std::vector<double>& c_prev = ti > 0 ? cache[ti - 1].c : zeros;
        double x = window[ti];

        for (std::size_t r = 0; r < h; ++r) {
            double d_o = dh[r] * act(s.c[r], activation);
            dpo[r] = d_o * s.o[r] * (1.0 - s.o[r]);
            double dc_r = dc[r] + dh[r] * s.o[r] * act_grad(s.c[r], activation);
            double d_f = dc_r * c_prev[r];
            dpf[r] = d_f * s.f[r] * (1.0 - s.f[r]);
            double d_i = dc_r * s.g[r];
            dpi[r] = d_i * s.i[r] * (1.0 - s.i[r]);
            double d_g = dc_r * s.i[r];
            dpg[r] = d_g * act_grad(s.pre_g[r], activation);
            dc[r] = dc_r * s.f[r];
        }
        for (std::size_t r = 0; r < h; ++r) {
            grad.w_i[r] += dpi[r] * x;
            grad.w_f[r] += dpf[r] * x;
            grad.w_o[r] += dpo[r] * x;
            grad.w_c[r] += dpg[r] * x;
            grad.b_i[r] += dpi[r];
            grad.b_f[r] += dpf[r];
            grad.b_o[r] += dpo[r];
            grad.b_c[r] += dpg[r];
            double* gi = grad.u_i.data() + r * h;
            double* gf = grad.u_f.data() + r * h;
            double* go = grad.u_o.data() + r * h;
            double* gc = grad.u_c.data() + r * h;
            for (std::size_t c = 0; c < h; ++c) {
                gi[c] += dpi[r] * h_prev[c];
                gf[c] += dpf[r] * h_prev[c];
                go[c] += dpo[r] * h_prev[c];
                gc[c] += dpg[r] * h_prev[c];
            }
        }
        std::fill(dh.begin(), dh.end(), 0.0);
        matvec_t_add(p.u_i, dpi, dh);
        matvec_t_add(p.u_f, dpf, dh);
        matvec_t_add(p.u_o, dpo, dh);
        matvec_t_add(p.u_c, dpg, dh);
    }
    return residual * residual;
}

void add_params(LstmParams& acc, const LstmParams& delta) {
    auto a = acc.fields();
    auto d = delta.fields();
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (std::size_t j = 0; j < a[k]->size(); ++j) (*a[k])[j] += (*d[k])[j];
    }
    acc.b_dense += delta.b_dense;
}

}  // namespace

LstmParams batch_gradient(const LstmParams& params, const WindowedDataset& data,
                          std::size_t begin, std::size_t end, const LstmConfig& config,
                          double* batch_sse) {
    if (begin >= end || end > data.inputs.size()) {
        throw ArgumentError("batch_gradient: empty or out-of-range batch");
    }
    for (std::size_t s = begin; s < end; ++s) {
        if (data.inputs[s].size() != config.window_len) {
            throw DimensionError("batch_gradient: window length mismatch");
        }
    }
    std::size_t n = end - begin;
    double inv_batch = 1.0 / static_cast<double>(n);
    std::vector<LstmParams> slots(n);
    std::vector<double> sse(n, 0.0);

    // Per-sample gradients go into fixed slots; the reduction below runs
    // in sample order so results are independent of thread count.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (config.parallel && n > 1)
#endif
    for (long long k = 0; k < static_cast<long long>(n); ++k) {
        std::size_t s = begin + static_cast<std::size_t>(k);
        slots[k] = LstmParams::zeros(params.hidden);
        sse[k] = sample_gradient(params, data.inputs[s], data.targets[s], inv_batch,
                                 config.cell_activation, slots[k]);
    }

    LstmParams grad = LstmParams::zeros(params.hidden);
    double total_sse = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        add_params(grad, slots[k]);
        total_sse += sse[k];
    }
    if (!std::isfinite(total_sse)) {
        throw NumericOverflowError("batch_gradient: non-finite loss");
    }
    if (batch_sse) *batch_sse = total_sse;
    return grad;
}

void adam_step(LstmParams& params, LstmParams grads, AdamState& state, const LstmConfig& config) {
    // Global-norm clipping before the moment updates.
    if (config.grad_clip_norm > 0.0) {
        double sq = grads.b_dense * grads.b_dense;
        for (const auto* f : grads.fields()) {
            for (double g : *f) sq += g * g;
        }
        double norm = std::sqrt(sq);
        if (norm > config.grad_clip_norm) {
            double scale = config.grad_clip_norm / norm;
            for (auto* f : grads.fields()) {
                for (double& g : *f) g *= scale;
            }
            grads.b_dense *= scale;
        }
    }

    state.t += 1;
    double b1 = config.adam_beta1;
    double b2 = config.adam_beta2;
    double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
    double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.t));

    auto pf = params.fields();
    auto gf = grads.fields();
    auto mf = state.m.fields();
    auto vf = state.v.fields();
    for (std::size_t k = 0; k < pf.size(); ++k) {
        for (std::size_t j = 0; j < pf[k]->size(); ++j) {
            double g = (*gf[k])[j];
            double& m = (*mf[k])[j];
            double& v = (*vf[k])[j];
            m = b1 * m + (1.0 - b1) * g;
            v = b2 * v + (1.0 - b2) * g * g;
            (*pf[k])[j] -= config.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + config.adam_epsilon);
        }
    }
    double g = grads.b_dense;
    double& m = state.m.b_dense;
    double& v = state.v.b_dense;
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g * g;
    params.b_dense -= config.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + config.adam_epsilon);
}

TrainResult train(const WindowedDataset& train_data, const LstmConfig& config) {
    config.validate();
    if (train_data.inputs.empty()) throw InsufficientDataError("lstm train: empty dataset");

    TrainResult result;
    result.params = init_params(config);
    AdamState adam = AdamState::zeros(config.hidden_units);
    std::size_t n = train_data.inputs.size();

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        auto t0 = std::chrono::steady_clock::now();
        double epoch_sse = 0.0;
        // Contiguous chronological batches, no shuffling.
        for (std::size_t b = 0; b < n; b += config.batch_size) {
            std::size_t e = std::min(b + config.batch_size, n);
            double sse = 0.0;
            LstmParams grads = batch_gradient(result.params, train_data, b, e, config, &sse);
            adam_step(result.params, std::move(grads), adam, config);
            epoch_sse += sse;
        }
        auto t1 = std::chrono::steady_clock::now();
        result.history.epoch_loss.push_back(epoch_sse / static_cast<double>(n));
        result.history.epoch_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    return result;
}

std::vector<double> predict_series(const LstmParams& params, const ScalerParams& scaler,
                                   const WindowedDataset& data, const LstmConfig& config) {
    std::vector<double> out(data.inputs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (config.parallel)
#endif
    for (long long i = 0; i < static_cast<long long>(data.inputs.size()); ++i) {
        double scaled = forward(params, data.inputs[i], config.cell_activation);
        out[i] = minmax_inverse_one(scaler, scaled);
    }
    return out;
}

std::string to_json(const LstmParams& params, const LstmConfig& config) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["config"] = {
        {"hidden_units", config.hidden_units},
        {"window_len", config.window_len},
        {"epochs", config.epochs},
        {"batch_size", config.batch_size},
        {"learning_rate", config.learning_rate},
        {"adam_beta1", config.adam_beta1},
        {"adam_beta2", config.adam_beta2},
        {"adam_epsilon", config.adam_epsilon},
        {"cell_activation", config.cell_activation == CellActivation::Relu ? "relu" : "tanh"},
        {"grad_clip_norm", config.grad_clip_norm},
        {"seed", config.seed},
    };
    const char* names[] = {"w_i", "w_f", "w_o", "w_c", "u_i", "u_f", "u_o", "u_c",
                           "b_i", "b_f", "b_o", "b_c", "w_dense"};
    auto fs = params.fields();
    j["hidden"] = params.hidden;
    for (std::size_t k = 0; k < fs.size(); ++k) j["params"][names[k]] = *fs[k];
    j["params"]["b_dense"] = params.b_dense;
    return j.dump(2);
}

void from_json(const std::string& text, LstmParams& params, LstmConfig& config) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format_version").get<int>() != 1) {
        throw FormatError("unsupported lstm model format version");
    }
    const auto& c = j.at("config");
    config.hidden_units = c.at("hidden_units").get<std::size_t>();
    config.window_len = c.at("window_len").get<std::size_t>();
    config.epochs = c.at("epochs").get<std::size_t>();
    config.batch_size = c.at("batch_size").get<std::size_t>();
    config.learning_rate = c.at("learning_rate").get<double>();
    config.adam_beta1 = c.at("adam_beta1").get<double>();
    config.adam_beta2 = c.at("adam_beta2").get<double>();
    config.adam_epsilon = c.at("adam_epsilon").get<double>();
    config.cell_activation = c.at("cell_activation").get<std::string>() == "tanh"
                                 ? CellActivation::Tanh
                                 : CellActivation::Relu;
    config.grad_clip_norm = c.at("grad_clip_norm").get<double>();
    config.seed = c.at("seed").get<std::uint64_t>();

    params = LstmParams::zeros(j.at("hidden").get<std::size_t>());
    const char* names[] = {"w_i", "w_f", "w_o", "w_c", "u_i", "u_f", "u_o", "u_c",
                           "b_i", "b_f", "b_o", "b_c", "w_dense"};
    auto fs = params.fields();
    for (std::size_t k = 0; k < fs.size(); ++k) {
        auto v = j.at("params").at(names[k]).get<std::vector<double>>();
        if (v.size() != fs[k]->size()) throw FormatError("lstm model: shape mismatch");
        *fs[k] = std::move(v);
    }
    params.b_dense = j.at("params").at("b_dense").get<double>();
}

}  // namespace fxcast::lstm
