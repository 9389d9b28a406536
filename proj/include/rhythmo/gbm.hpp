#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "rhythmo/error.hpp"
#include "rhythmo/tree.hpp"
#include "rhythmo/types.hpp"

namespace rhythmo {

struct GbmOptions {
    int n_stages = 100;
    double learning_rate = 0.1;
    int max_depth = 3;
    std::size_t min_samples_leaf = 1;
};

struct GradientBoostingModel {
    double initial_score = 0.0; // log-odds of the class-1 prior
    std::vector<DecisionTree> trees;
    double learning_rate = 0.1;
    int n_stages = 0;
    std::size_t feature_dim = 0;
    std::vector<double> train_log_loss; // per stage, including stage 0
};

namespace detail {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double mean_log_loss(const std::vector<double>& scores, const std::vector<int>& y) {
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double z = scores[i];
        // -log p(y_i): log(1+exp(-z)) for y=1, log(1+exp(z)) for y=0
        double m = y[i] == 1 ? z : -z;
        loss += m >= 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
    }
    return loss / static_cast<double>(y.size());
}

} // namespace detail

// Stage-wise logistic-loss boosting: trees fit to residuals y - p on the
// running log-odds score, starting from the class-prior log-odds.
inline GradientBoostingModel train_gbm(const Matrix& X, const std::vector<int>& y,
                                       const GbmOptions& opt = {}) {
    if (y.size() != X.rows)
        throw data_error("DimensionMismatch", "label length does not match row count");
    std::size_t n0 = 0, n1 = 0;
    for (int label : y) (label == 1 ? n1 : n0)++;
    if (n0 == 0 || n1 == 0)
        throw data_error("SingleClassInput", "both classes must be present for training");

    GradientBoostingModel model;
    model.learning_rate = opt.learning_rate;
    model.n_stages = opt.n_stages;
    model.initial_score = std::log(static_cast<double>(n1) / static_cast<double>(n0));
    model.feature_dim = X.cols;

    SortedFeatures sorted(X);
    std::vector<double> scores(X.rows, model.initial_score);
    std::vector<double> residuals(X.rows);
    model.train_log_loss.push_back(detail::mean_log_loss(scores, y));

    for (int stage = 0; stage < opt.n_stages; ++stage) {
        for (std::size_t i = 0; i < X.rows; ++i)
            residuals[i] = static_cast<double>(y[i]) - detail::sigmoid(scores[i]);
        DecisionTree tree =
            fit_tree(X, residuals, opt.max_depth, opt.min_samples_leaf, &sorted);
        for (std::size_t i = 0; i < X.rows; ++i)
            scores[i] += opt.learning_rate * tree.predict(std::span(X.row(i), X.cols));
        model.trees.push_back(std::move(tree));
        model.train_log_loss.push_back(detail::mean_log_loss(scores, y));
    }
    return model;
}

inline double decision_gbm(const GradientBoostingModel& model, std::span<const double> x) {
    if (model.feature_dim != 0 && x.size() != model.feature_dim)
        throw data_error("DimensionMismatch", "feature length " + std::to_string(x.size()) +
                                                  " does not match model dimension " +
                                                  std::to_string(model.feature_dim));
    double score = model.initial_score;
    for (const auto& tree : model.trees) score += model.learning_rate * tree.predict(x);
    return score;
}

inline double predict_proba_gbm(const GradientBoostingModel& model, std::span<const double> x) {
    return detail::sigmoid(decision_gbm(model, x));
}

} // namespace rhythmo
