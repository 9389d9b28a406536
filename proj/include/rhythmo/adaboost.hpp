#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "rhythmo/error.hpp"
#include "rhythmo/tree.hpp"
#include "rhythmo/types.hpp"

namespace rhythmo {

struct AdaBoostMember {
    DecisionTree stump; // depth-1, leaves in {-1,+1}
    double alpha = 0.0;
};

struct AdaBoostModel {
    std::vector<AdaBoostMember> members;
    std::size_t feature_dim = 0;
};

struct AdaBoostOptions {
    int n_rounds = 10;
    // Surrogate error used when a stump is perfect, keeping alpha finite.
    double epsilon_floor = 1e-10;
};

namespace detail {

// Weighted decision stump: minimizes weighted 0-1 error over all
// (feature, midpoint threshold, polarity) candidates, including the
// degenerate all-one-side thresholds. Ties resolve to the first candidate
// scanned (features ascending, thresholds ascending, polarity +1 first).
inline DecisionTree fit_stump(const Matrix& X, const std::vector<int>& y_pm,
                              const std::vector<double>& w) {
    double total_pos = 0.0; // weight of y = +1
    for (std::size_t i = 0; i < w.size(); ++i)
        if (y_pm[i] > 0) total_pos += w[i];
    double total = std::accumulate(w.begin(), w.end(), 0.0);

    int best_feature = 0;
    double best_threshold = 0.0;
    int best_polarity = 1; // +1: predict +1 on the right side of the threshold
    // "Always -1" at threshold +inf with polarity +1 is the baseline.
    double best_err = total_pos;

    std::vector<std::pair<double, std::size_t>> col(X.rows);
    for (std::size_t f = 0; f < X.cols; ++f) {
        for (std::size_t i = 0; i < X.rows; ++i) col[i] = {X(i, f), i};
        std::stable_sort(col.begin(), col.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });

        // err for polarity +1 (x > thr -> +1) with threshold below all
        // values: everything predicted +1, error = weight of negatives.
        double err_plus = total - total_pos;
        if (err_plus < best_err - 1e-15) {
            best_err = err_plus;
            best_feature = static_cast<int>(f);
            best_threshold = col.front().first - 1.0;
            best_polarity = 1;
        }
        if (total - err_plus < best_err - 1e-15) {
            best_err = total - err_plus;
            best_feature = static_cast<int>(f);
            best_threshold = col.front().first - 1.0;
            best_polarity = -1;
        }
        for (std::size_t i = 0; i < col.size(); ++i) {
            std::size_t row = col[i].second;
            // Moving sample i to the left of the threshold flips its
            // prediction from +1 to -1 under polarity +1.
            if (y_pm[row] > 0)
                err_plus += w[row];
            else
                err_plus -= w[row];
            if (i + 1 < col.size() && col[i].first == col[i + 1].first) continue;
            double thr = i + 1 < col.size() ? 0.5 * (col[i].first + col[i + 1].first)
                                            : col[i].first + 1.0;
            if (err_plus < best_err - 1e-15) {
                best_err = err_plus;
                best_feature = static_cast<int>(f);
                best_threshold = thr;
                best_polarity = 1;
            }
            if (total - err_plus < best_err - 1e-15) {
                best_err = total - err_plus;
                best_feature = static_cast<int>(f);
                best_threshold = thr;
                best_polarity = -1;
            }
        }
    }

    DecisionTree stump;
    stump.max_depth = 1;
    stump.nodes.resize(3);
    stump.nodes[0].feature = best_feature;
    stump.nodes[0].threshold = best_threshold;
    stump.nodes[0].left = 1;
    stump.nodes[0].right = 2;
    stump.nodes[1].value = best_polarity > 0 ? -1.0 : 1.0;
    stump.nodes[2].value = best_polarity > 0 ? 1.0 : -1.0;
    return stump;
}

} // namespace detail

// Classic discrete AdaBoost over depth-1 stumps. Rounds with weighted
// error >= 0.5 stop fitting without adding the stump; a zero-error round
// adds the stump with capped alpha and stops.
inline AdaBoostModel train_adaboost(const Matrix& X, const std::vector<int>& y,
                                    const AdaBoostOptions& opt = {},
                                    std::vector<double>* weight_sums = nullptr) {
    if (y.size() != X.rows)
        throw data_error("DimensionMismatch", "label length does not match row count");
    bool has0 = false, has1 = false;
    for (int label : y) (label == 1 ? has1 : has0) = true;
    if (!has0 || !has1)
        throw data_error("SingleClassInput", "both classes must be present for training");

    std::vector<int> y_pm(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) y_pm[i] = y[i] == 1 ? 1 : -1;

    AdaBoostModel model;
    model.feature_dim = X.cols;
    std::vector<double> w(X.rows, 1.0 / static_cast<double>(X.rows));
    std::vector<int> pred(X.rows);

    for (int round = 0; round < opt.n_rounds; ++round) {
        DecisionTree stump = detail::fit_stump(X, y_pm, w);
        double eps = 0.0;
        for (std::size_t i = 0; i < X.rows; ++i) {
            pred[i] = stump.predict(std::span(X.row(i), X.cols)) > 0.0 ? 1 : -1;
            if (pred[i] != y_pm[i]) eps += w[i];
        }
        if (eps >= 0.5) break;

        bool perfect = eps <= 0.0;
        double eps_eff = perfect ? opt.epsilon_floor : eps;
        double alpha = 0.5 * std::log((1.0 - eps_eff) / eps_eff);
        model.members.push_back({std::move(stump), alpha});
        if (perfect) break;

        double sum = 0.0;
        for (std::size_t i = 0; i < X.rows; ++i) {
            w[i] *= std::exp(-alpha * y_pm[i] * pred[i]);
            sum += w[i];
        }
        for (double& wi : w) wi /= sum;
        if (weight_sums)
            weight_sums->push_back(std::accumulate(w.begin(), w.end(), 0.0));
    }
    return model;
}

inline double decision_adaboost(const AdaBoostModel& model, std::span<const double> x) {
    if (model.feature_dim != 0 && x.size() != model.feature_dim)
        throw data_error("DimensionMismatch", "feature length " + std::to_string(x.size()) +
                                                  " does not match model dimension " +
                                                  std::to_string(model.feature_dim));
    double score = 0.0;
    for (const auto& m : model.members) score += m.alpha * m.stump.predict(x);
    return score;
}

inline int predict_adaboost(const AdaBoostModel& model, std::span<const double> x) {
    return decision_adaboost(model, x) >= 0.0 ? 1 : 0;
}

} // namespace rhythmo
