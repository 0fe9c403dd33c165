#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fxcast/preprocess.hpp"

namespace fxcast::lstm {

enum class CellActivation { Relu, Tanh };

struct LstmConfig {
    std::size_t hidden_units = 50;
    std::size_t window_len = 50;
    std::size_t epochs = 50;
    std::size_t batch_size = 32;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    CellActivation cell_activation = CellActivation::Relu;
    double grad_clip_norm = 5.0;  // <= 0 disables clipping
    std::uint64_t seed = 0;
    bool parallel = true;

    void validate() const;
};

// Gate weights for a single-layer cell with scalar input, plus the dense
// linear head. W_* are (hidden x 1) since the input is univariate.
struct LstmParams {
    std::size_t hidden = 0;
    std::vector<double> w_i, w_f, w_o, w_c;  // input weights, one per unit
    std::vector<double> u_i, u_f, u_o, u_c;  // recurrent, hidden x hidden row-major
    std::vector<double> b_i, b_f, b_o, b_c;
    std::vector<double> w_dense;
    double b_dense = 0.0;

    static LstmParams zeros(std::size_t hidden);

    // Fixed field order, used by the optimizer, clipping, and serialization.
    std::vector<std::vector<double>*> fields();
    std::vector<const std::vector<double>*> fields() const;

    double* flat_at(std::size_t index);  // b_dense addressed as the last slot
    std::size_t flat_size() const;
};

struct LstmState {
    std::vector<double> h;
    std::vector<double> c;
};

struct TrainHistory {
    std::vector<double> epoch_loss;
    std::vector<double> epoch_seconds;
};

struct AdamState {
    LstmParams m;
    LstmParams v;
    std::size_t t = 0;

    static AdamState zeros(std::size_t hidden);
};

// Glorot-uniform weights, zero biases except forget bias = 1, seeded.
LstmParams init_params(const LstmConfig& config);

LstmState cell_step(const LstmParams& params, double x_t, const LstmState& state,
                    CellActivation activation);

double forward(const LstmParams& params, const std::vector<double>& window,
               CellActivation activation);

double mse_loss(const std::vector<double>& predictions, const std::vector<double>& targets);

// Analytic gradient of batch-mean MSE over [begin, end) of the dataset.
// Returns the batch loss through *batch_sse (sum of squared residuals).
LstmParams batch_gradient(const LstmParams& params, const WindowedDataset& data,
                          std::size_t begin, std::size_t end, const LstmConfig& config,
                          double* batch_sse = nullptr);

// In-place Adam update with optional global-norm clipping of grads.
void adam_step(LstmParams& params, LstmParams grads, AdamState& state, const LstmConfig& config);

struct TrainResult {
    LstmParams params;
    TrainHistory history;
};

TrainResult train(const WindowedDataset& train_data, const LstmConfig& config);

// Forward on every window, then inverse Min-Max back to rate units.
std::vector<double> predict_series(const LstmParams& params, const ScalerParams& scaler,
                                   const WindowedDataset& data, const LstmConfig& config);

std::string to_json(const LstmParams& params, const LstmConfig& config);
void from_json(const std::string& text, LstmParams& params, LstmConfig& config);

}  // namespace fxcast::lstm
