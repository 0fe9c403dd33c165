#include "fxcast/gboost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "fxcast/errors.hpp"

namespace fxcast::gboost {

void GbcConfig::validate() const {
    if (n_estimators == 0) throw ArgumentError("gbc: n_estimators must be positive");
    if (learning_rate <= 0.0) throw ArgumentError("gbc: learning_rate must be positive");
    if (min_samples_leaf == 0) throw ArgumentError("gbc: min_samples_leaf must be positive");
    if (early_stop.validation_fraction <= 0.0 || early_stop.validation_fraction >= 1.0) {
        throw ArgumentError("gbc: validation_fraction must be in (0, 1)");
    }
    if (early_stop.patience == 0) throw ArgumentError("gbc: patience must be positive");
}

double RegressionTree::predict(const std::vector<double>& x) const {
    int idx = 0;
    while (!nodes[static_cast<std::size_t>(idx)].is_leaf) {
        const TreeNode& n = nodes[static_cast<std::size_t>(idx)];
        if (n.feature_index >= x.size()) throw DimensionError("tree predict: feature width mismatch");
        idx = x[n.feature_index] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(idx)].leaf_value;
}

double exp_loss(const std::vector<double>& margins, const std::vector<int>& labels_pm) {
    if (margins.empty() || margins.size() != labels_pm.size()) {
        throw ArgumentError("exp_loss: empty or mismatched inputs");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
        int y = labels_pm[i];
        if (y != 1 && y != -1) throw ArgumentError("exp_loss: labels must be -1 or +1");
        acc += std::exp(-static_cast<double>(y) * margins[i]);
    }
    return acc;
}

double fit_initial_score(const std::vector<int>& labels_pm) {
    std::size_t n_pos = 0, n_neg = 0;
    for (int y : labels_pm) {
        if (y == 1) {
            ++n_pos;
        } else if (y == -1) {
            ++n_neg;
        } else {
            throw ArgumentError("fit_initial_score: labels must be -1 or +1");
        }
    }
    if (n_pos == 0 || n_neg == 0) {
        throw DomainError("fit_initial_score: both classes must be present");
    }
    return 0.5 * std::log(static_cast<double>(n_pos) / static_cast<double>(n_neg));
}

std::vector<double> pseudo_residuals(const std::vector<int>& labels_pm,
                                     const std::vector<double>& margins) {
    if (labels_pm.size() != margins.size()) {
        throw ArgumentError("pseudo_residuals: length mismatch");
    }
    std::vector<double> r(margins.size());
    for (std::size_t i = 0; i < margins.size(); ++i) {
        double y = static_cast<double>(labels_pm[i]);
        r[i] = y * std::exp(-y * margins[i]);
    }
    return r;
}

namespace {

// Newton leaf for exponential loss: sum(r) / sum(|r|), with |r| = exp(-y f).
double leaf_value(const std::vector<double>& residuals, const std::vector<int>& idx) {
    double num = 0.0, den = 0.0;
    for (int i : idx) {
        num += residuals[static_cast<std::size_t>(i)];
        den += std::abs(residuals[static_cast<std::size_t>(i)]);
    }
    return den > 0.0 ? num / den : 0.0;
}

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = -std::numeric_limits<double>::infinity();
};

// Best variance-reduction split over one feature's sorted index list.
SplitChoice best_split_for_feature(const Matrix& features, const std::vector<double>& residuals,
                                   const std::vector<int>& sorted_idx, std::size_t feature,
                                   std::size_t min_leaf, double total_sum) {
    SplitChoice best;
    best.feature = feature;
    std::size_t n = sorted_idx.size();
    double left_sum = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        int i = sorted_idx[k];
        left_sum += residuals[static_cast<std::size_t>(i)];
        double v = features[static_cast<std::size_t>(i)][feature];
        double v_next = features[static_cast<std::size_t>(sorted_idx[k + 1])][feature];
        if (v == v_next) continue;  // split only between distinct values
        std::size_t n_left = k + 1;
        std::size_t n_right = n - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        double right_sum = total_sum - left_sum;
        double gain = left_sum * left_sum / static_cast<double>(n_left) +
                      right_sum * right_sum / static_cast<double>(n_right);
        double threshold = v + 0.5 * (v_next - v);
        if (gain > best.gain || (gain == best.gain && threshold < best.threshold)) {
            best.found = true;
            best.gain = gain;
            best.threshold = threshold;
        }
    }
    return best;
}

struct TreeBuilder {
    const Matrix& features;
    const std::vector<double>& residuals;
    const GbcConfig& config;
    std::size_t n_features;
    RegressionTree tree;

    // sorted[f] holds this node's sample indices ordered by feature f.
    int build(std::vector<std::vector<int>> sorted, std::size_t depth) {
        const std::vector<int>& samples = sorted[0];
        std::size_t n = samples.size();

        int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        bool can_split = depth < config.max_depth && n >= 2 * config.min_samples_leaf;
        SplitChoice chosen;
        if (can_split) {
            double total_sum = 0.0;
            for (int i : samples) total_sum += residuals[static_cast<std::size_t>(i)];

            std::vector<SplitChoice> per_feature(n_features);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (config.parallel && n_features > 1)
#endif
            for (long long f = 0; f < static_cast<long long>(n_features); ++f) {
                per_feature[f] = best_split_for_feature(
                    features, residuals, sorted[static_cast<std::size_t>(f)],
                    static_cast<std::size_t>(f), config.min_samples_leaf, total_sum);
            }
            // Deterministic arg-max: lowest feature index wins ties.
            double base = total_sum * total_sum / static_cast<double>(n);
            for (const auto& cand : per_feature) {
                if (!cand.found) continue;
                if (cand.gain <= base + 1e-12 * std::abs(base)) continue;  // no real gain
                if (cand.gain > chosen.gain) chosen = cand;
            }
        }

        if (!chosen.found) {
            tree.nodes[static_cast<std::size_t>(node_id)].is_leaf = true;
            tree.nodes[static_cast<std::size_t>(node_id)].leaf_value = leaf_value(residuals, samples);
            return node_id;
        }

        // Stable partition of every feature's order preserves sortedness.
        std::vector<char> goes_left(features.size(), 0);
        for (int i : samples) {
            goes_left[static_cast<std::size_t>(i)] =
                features[static_cast<std::size_t>(i)][chosen.feature] <= chosen.threshold;
        }
        std::vector<std::vector<int>> left(n_features), right(n_features);
        for (std::size_t f = 0; f < n_features; ++f) {
            for (int i : sorted[f]) {
                (goes_left[static_cast<std::size_t>(i)] ? left[f] : right[f]).push_back(i);
            }
        }
        sorted.clear();

        tree.nodes[static_cast<std::size_t>(node_id)].is_leaf = false;
        tree.nodes[static_cast<std::size_t>(node_id)].feature_index = chosen.feature;
        tree.nodes[static_cast<std::size_t>(node_id)].threshold = chosen.threshold;
        int l = build(std::move(left), depth + 1);
        int r = build(std::move(right), depth + 1);
        tree.nodes[static_cast<std::size_t>(node_id)].left = l;
        tree.nodes[static_cast<std::size_t>(node_id)].right = r;
        return node_id;
    }
};

}  // namespace

RegressionTree fit_tree(const Matrix& features, const std::vector<double>& residuals,
                        const GbcConfig& config) {
    if (features.size() != residuals.size() || features.empty()) {
        throw ArgumentError("fit_tree: features/residuals mismatch");
    }
    std::size_t n_features = features[0].size();

    std::vector<std::vector<int>> sorted(n_features);
    std::vector<int> base(features.size());
    std::iota(base.begin(), base.end(), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (config.parallel && n_features > 1)
#endif
    for (long long f = 0; f < static_cast<long long>(n_features); ++f) {
        auto idx = base;
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
            return features[static_cast<std::size_t>(a)][static_cast<std::size_t>(f)] <
                   features[static_cast<std::size_t>(b)][static_cast<std::size_t>(f)];
        });
        sorted[static_cast<std::size_t>(f)] = std::move(idx);
    }

    TreeBuilder builder{features, residuals, config, n_features, {}};
    builder.build(std::move(sorted), 0);
    return std::move(builder.tree);
}

GbcModel train(const Matrix& features, const std::vector<int>& labels01,
               const GbcConfig& config) {
    config.validate();
    if (features.size() != labels01.size() || features.empty()) {
        throw ArgumentError("gbc train: features/labels mismatch");
    }

    std::size_t n = features.size();
    std::size_t n_val = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * config.early_stop.validation_fraction));
    if (n_val == 0) throw ArgumentError("gbc train: empty validation split");
    std::size_t n_fit = n - n_val;
    if (n_fit < 2) throw InsufficientDataError("gbc train: too few fitting samples");

    std::vector<int> labels_pm(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (labels01[i] != 0 && labels01[i] != 1) {
            throw ArgumentError("gbc train: labels must be 0 or 1");
        }
        labels_pm[i] = labels01[i] == 1 ? 1 : -1;
    }

    std::vector<int> fit_labels(labels_pm.begin(), labels_pm.begin() + static_cast<long>(n_fit));
    std::vector<int> val_labels(labels_pm.begin() + static_cast<long>(n_fit), labels_pm.end());
    Matrix fit_features(features.begin(), features.begin() + static_cast<long>(n_fit));

    GbcModel model;
    model.learning_rate = config.learning_rate;
    model.f0 = fit_initial_score(fit_labels);

    std::vector<double> fit_margins(n_fit, model.f0);
    std::vector<double> val_margins(n_val, model.f0);

    double best_val = exp_loss(val_margins, val_labels) / static_cast<double>(n_val);
    std::size_t stale = 0;

    for (std::size_t stage = 0; stage < config.n_estimators; ++stage) {
        auto residuals = pseudo_residuals(fit_labels, fit_margins);
        RegressionTree tree = fit_tree(fit_features, residuals, config);

        for (std::size_t i = 0; i < n_fit; ++i) {
            fit_margins[i] += config.learning_rate * tree.predict(fit_features[i]);
        }
        for (std::size_t i = 0; i < n_val; ++i) {
            val_margins[i] += config.learning_rate * tree.predict(features[n_fit + i]);
        }
        model.trees.push_back(std::move(tree));
        model.n_stages_used = model.trees.size();
        model.train_loss_per_stage.push_back(exp_loss(fit_margins, fit_labels));

        double val = exp_loss(val_margins, val_labels) / static_cast<double>(n_val);
        if (best_val - val > config.early_stop.tol) {
            best_val = val;
            stale = 0;
        } else {
            if (val < best_val) best_val = val;
            if (++stale >= config.early_stop.patience) break;
        }
    }
    return model;
}

std::vector<double> predict_margin(const GbcModel& model, const Matrix& features) {
    std::vector<double> margins(features.size(), model.f0);
    for (std::size_t i = 0; i < features.size(); ++i) {
        for (const auto& tree : model.trees) {
            margins[i] += model.learning_rate * tree.predict(features[i]);
        }
    }
    return margins;
}

std::vector<int> predict_label(const GbcModel& model, const Matrix& features) {
    auto margins = predict_margin(model, features);
    std::vector<int> labels(margins.size());
    for (std::size_t i = 0; i < margins.size(); ++i) labels[i] = margins[i] > 0.0 ? 1 : 0;
    return labels;
}

std::vector<double> predict_proba(const GbcModel& model, const Matrix& features) {
    auto margins = predict_margin(model, features);
    std::vector<double> p(margins.size());
    for (std::size_t i = 0; i < margins.size(); ++i) {
        p[i] = 1.0 / (1.0 + std::exp(-2.0 * margins[i]));
    }
    return p;
}

std::string to_json(const GbcModel& model) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["f0"] = model.f0;
    j["learning_rate"] = model.learning_rate;
    j["n_stages_used"] = model.n_stages_used;
    j["trees"] = nlohmann::json::array();
    for (const auto& tree : model.trees) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : tree.nodes) {
            if (n.is_leaf) {
                nodes.push_back({{"leaf_value", n.leaf_value}});
            } else {
                nodes.push_back({{"feature_index", n.feature_index},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right}});
            }
        }
        j["trees"].push_back({{"nodes", std::move(nodes)}});
    }
    return j.dump();
}

GbcModel model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format_version").get<int>() != 1) {
        throw FormatError("unsupported gbc model format version");
    }
    GbcModel model;
    model.f0 = j.at("f0").get<double>();
    model.learning_rate = j.at("learning_rate").get<double>();
    model.n_stages_used = j.at("n_stages_used").get<std::size_t>();
    for (const auto& jt : j.at("trees")) {
        RegressionTree tree;
        for (const auto& jn : jt.at("nodes")) {
            TreeNode n;
            if (jn.contains("leaf_value")) {
                n.is_leaf = true;
                n.leaf_value = jn.at("leaf_value").get<double>();
            } else {
                n.is_leaf = false;
                n.feature_index = jn.at("feature_index").get<std::size_t>();
                n.threshold = jn.at("threshold").get<double>();
                n.left = jn.at("left").get<int>();
                n.right = jn.at("right").get<int>();
            }
            tree.nodes.push_back(n);
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

}  // namespace fxcast::gboost
