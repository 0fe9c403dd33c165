#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fxcast::gboost {

using Matrix = std::vector<std::vector<double>>;  // row-major samples

struct EarlyStop {
    double validation_fraction = 0.1;
    std::size_t patience = 50;
    double tol = 1e-4;  // on mean validation exponential loss
};

struct GbcConfig {
    std::size_t n_estimators = 10000;
    double learning_rate = 0.01;
    std::size_t max_depth = 3;
    std::size_t min_samples_leaf = 5;
    EarlyStop early_stop;
    std::uint64_t seed = 0;
    bool parallel = true;

    void validate() const;
};

// Binary tree in array form. Internal nodes split on
// feature value <= threshold (left) vs > threshold (right).
struct TreeNode {
    bool is_leaf = true;
    std::size_t feature_index = 0;
    double threshold = 0.0;
    double leaf_value = 0.0;
    int left = -1;
    int right = -1;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(const std::vector<double>& x) const;
};

struct GbcModel {
    double f0 = 0.0;
    double learning_rate = 0.01;
    std::vector<RegressionTree> trees;
    std::size_t n_stages_used = 0;
    std::vector<double> train_loss_per_stage;  // sum exp loss on the fit portion
};

// Sum (not mean) of exp(-y * f) over samples; labels in {-1, +1}.
double exp_loss(const std::vector<double>& margins, const std::vector<int>& labels_pm);

// f0 = 0.5 * ln(n_pos / n_neg), the constant minimizer of exp_loss.
double fit_initial_score(const std::vector<int>& labels_pm);

// Negative gradient of exp_loss: r_i = y_i * exp(-y_i * f_i).
std::vector<double> pseudo_residuals(const std::vector<int>& labels_pm,
                                     const std::vector<double>& margins);

// CART least-squares fit to residuals; leaves carry the exponential-loss
// Newton value sum(r) / sum(|r|).
RegressionTree fit_tree(const Matrix& features, const std::vector<double>& residuals,
                        const GbcConfig& config);

GbcModel train(const Matrix& features, const std::vector<int>& labels01,
               const GbcConfig& config);

std::vector<double> predict_margin(const GbcModel& model, const Matrix& features);
std::vector<int> predict_label(const GbcModel& model, const Matrix& features);
// p = 1 / (1 + exp(-2 * margin)), for reporting.
std::vector<double> predict_proba(const GbcModel& model, const Matrix& features);

std::string to_json(const GbcModel& model);
GbcModel model_from_json(const std::string& text);

}  // namespace fxcast::gboost
