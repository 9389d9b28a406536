#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "rhythmo/bfgs.hpp"
#include "rhythmo/error.hpp"
#include "rhythmo/types.hpp"

namespace rhythmo {

struct LogisticModel {
    std::vector<double> weights;
    double intercept = 0.0;
    double regularization_c = 1.0;
};

namespace detail {

// log(1 + exp(-m)) without overflow.
inline double log1p_exp_neg(double m) {
    if (m >= 0.0) return std::log1p(std::exp(-m));
    return -m + std::log1p(std::exp(m));
}

} // namespace detail

// Objective 0.5 w'w + C sum log(1 + exp(-y_i (x_i'w + c))) with y in {-1,+1};
// the intercept is unregularized. theta packs [w..., c].
inline double logistic_objective(const Matrix& X, const std::vector<int>& y_pm, double C,
                                 const std::vector<double>& theta, std::vector<double>& grad) {
    const std::size_t n = X.rows;
    const std::size_t p = X.cols;
    double obj = 0.0;
    grad.assign(p + 1, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        obj += 0.5 * theta[j] * theta[j];
        grad[j] = theta[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = X.row(i);
        double margin = theta[p];
        for (std::size_t j = 0; j < p; ++j) margin += xi[j] * theta[j];
        double ym = y_pm[i] * margin;
        obj += C * detail::log1p_exp_neg(ym);
        // d/dm log(1+exp(-ym)) = -y sigma(-ym)
        double sig = 1.0 / (1.0 + std::exp(ym));
        double coeff = -C * y_pm[i] * sig;
        for (std::size_t j = 0; j < p; ++j) grad[j] += coeff * xi[j];
        grad[p] += coeff;
    }
    return obj;
}

inline LogisticModel train_logistic(const Matrix& X, const std::vector<int>& y, double C = 1.0,
                                    const BfgsOptions& opt = {}) {
    if (X.rows < 2 || y.size() != X.rows)
        throw data_error("TooFewSamples", "logistic training needs at least 2 labeled rows");
    bool has0 = false, has1 = false;
    for (int label : y) (label == 0 ? has0 : has1) = true;
    if (!has0 || !has1)
        throw data_error("SingleClassInput", "both classes must be present for training");
    for (double v : X.data)
        if (!std::isfinite(v))
            throw data_error("NonFiniteFeature", "feature matrix contains a non-finite value");

    std::vector<int> y_pm(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) y_pm[i] = y[i] == 1 ? 1 : -1;

    auto objective = [&](const std::vector<double>& theta, std::vector<double>& grad) {
        return logistic_objective(X, y_pm, C, theta, grad);
    };
    std::vector<double> theta0(X.cols + 1, 0.0);
    BfgsResult res = minimize_bfgs(objective, std::move(theta0), opt);

    LogisticModel model;
    model.weights.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(X.cols));
    model.intercept = res.x[X.cols];
    model.regularization_c = C;
    return model;
}

inline double decision_logistic(const LogisticModel& model, std::span<const double> x) {
    if (x.size() != model.weights.size())
        throw data_error("DimensionMismatch", "feature length " + std::to_string(x.size()) +
                                                  " does not match model dimension " +
                                                  std::to_string(model.weights.size()));
    double m = model.intercept;
    for (std::size_t j = 0; j < x.size(); ++j) m += model.weights[j] * x[j];
    return m;
}

inline double predict_proba_logistic(const LogisticModel& model, std::span<const double> x) {
    return 1.0 / (1.0 + std::exp(-decision_logistic(model, x)));
}

} // namespace rhythmo
