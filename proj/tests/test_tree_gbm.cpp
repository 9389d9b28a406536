#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <span>

#include "rhythmo/gbm.hpp"
#include "rhythmo/rng.hpp"
#include "rhythmo/tree.hpp"

using namespace rhythmo;

namespace {

double tree_sse(const DecisionTree& tree, const Matrix& X, const std::vector<double>& target) {
    double sse = 0.0;
    for (std::size_t i = 0; i < X.rows; ++i) {
        double e = target[i] - tree.predict(std::span(X.row(i), X.cols));
        sse += e * e;
    }
    return sse;
}

// Exhaustive depth-1 oracle: every (feature, threshold) split with mean
// leaves, brute force.
double best_depth1_sse(const Matrix& X, const std::vector<double>& target) {
    double best = std::numeric_limits<double>::infinity();
    // no-split tree
    double mean = 0.0;
    for (double t : target) mean += t;
    mean /= static_cast<double>(target.size());
    double sse0 = 0.0;
    for (double t : target) sse0 += (t - mean) * (t - mean);
    best = sse0;

    for (std::size_t f = 0; f < X.cols; ++f) {
        for (std::size_t i = 0; i < X.rows; ++i) {
            double thr = X(i, f);
            double sl = 0.0, sr = 0.0;
            std::size_t nl = 0, nr = 0;
            for (std::size_t j = 0; j < X.rows; ++j)
                if (X(j, f) <= thr) {
                    sl += target[j];
                    nl++;
                } else {
                    sr += target[j];
                    nr++;
                }
            if (nl == 0 || nr == 0) continue;
            double ml = sl / static_cast<double>(nl), mr = sr / static_cast<double>(nr);
            double sse = 0.0;
            for (std::size_t j = 0; j < X.rows; ++j) {
                double e = target[j] - (X(j, f) <= thr ? ml : mr);
                sse += e * e;
            }
            best = std::min(best, sse);
        }
    }
    return best;
}

} // namespace

TEST_CASE("constant residuals produce a single leaf") {
    Matrix X(4, 2);
    Rng rng(1);
    for (auto& v : X.data) v = rng.normal();
    std::vector<double> target = {2.5, 2.5, 2.5, 2.5};
    DecisionTree t = fit_tree(X, target, 3);
    REQUIRE(t.nodes.size() == 1);
    CHECK(t.nodes[0].is_leaf());
    CHECK(t.nodes[0].value == Catch::Approx(2.5));
}

TEST_CASE("perfect single split is found") {
    Matrix X(4, 1);
    X(0, 0) = 0;
    X(1, 0) = 0;
    X(2, 0) = 1;
    X(3, 0) = 1;
    std::vector<double> target = {-1, -1, 1, 1};
    DecisionTree t = fit_tree(X, target, 1);
    REQUIRE(t.nodes.size() == 3);
    CHECK(t.nodes[0].feature == 0);
    CHECK(t.nodes[0].threshold == Catch::Approx(0.5));
    double left[] = {0.0};
    double right[] = {1.0};
    CHECK(t.predict(left) == Catch::Approx(-1.0));
    CHECK(t.predict(right) == Catch::Approx(1.0));
}

TEST_CASE("depth-2 tree is at least as good as every depth-1 tree") {
    Rng rng(13);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix X(50, 2);
        std::vector<double> target(50);
        for (auto& v : X.data) v = rng.normal();
        for (auto& t : target) t = rng.normal();
        DecisionTree deep = fit_tree(X, target, 2);
        CHECK(tree_sse(deep, X, target) <= best_depth1_sse(X, target) + 1e-9);
    }
}

TEST_CASE("fit_tree rejects too few samples") {
    Matrix X(3, 1);
    std::vector<double> target = {1, 2, 3};
    CHECK_THROWS_AS(fit_tree(X, target, 2, 2), Error);
}

TEST_CASE("GBM training log-loss is monotone non-increasing") {
    Rng rng(21);
    for (int instance = 0; instance < 5; ++instance) {
        Matrix X(40, 3);
        std::vector<int> y(40);
        for (auto& v : X.data) v = rng.normal();
        for (std::size_t i = 0; i < 40; ++i)
            y[i] = X(i, 0) + 0.5 * rng.normal() > 0 ? 1 : 0;
        y[0] = 0;
        y[1] = 1;
        GbmOptions opt;
        opt.n_stages = 30;
        GradientBoostingModel m = train_gbm(X, y, opt);
        REQUIRE(m.train_log_loss.size() == 31);
        for (std::size_t s = 1; s < m.train_log_loss.size(); ++s)
            CHECK(m.train_log_loss[s] <= m.train_log_loss[s - 1] + 1e-12);
    }
}

TEST_CASE("balanced classes give zero initial score") {
    Matrix X(4, 1);
    X(0, 0) = -2;
    X(1, 0) = -1;
    X(2, 0) = 1;
    X(3, 0) = 2;
    std::vector<int> y = {0, 0, 1, 1};
    GradientBoostingModel m = train_gbm(X, y);
    CHECK(m.initial_score == 0.0);
}

TEST_CASE("separable data reaches training accuracy 1.0") {
    Matrix X(10, 1);
    std::vector<int> y(10);
    for (std::size_t i = 0; i < 10; ++i) {
        X(i, 0) = static_cast<double>(i) - 4.5;
        y[i] = i >= 5 ? 1 : 0;
    }
    GbmOptions opt;
    opt.n_stages = 10;
    GradientBoostingModel m = train_gbm(X, y, opt);
    for (std::size_t i = 0; i < 10; ++i) {
        double p = predict_proba_gbm(m, std::span(X.row(i), 1));
        CHECK((p >= 0.5 ? 1 : 0) == y[i]);
        // class-1 training points sit strictly above 0.5
        if (y[i] == 1) CHECK(p > 0.5);
        if (y[i] == 0) CHECK(p < 0.5);
    }
}

TEST_CASE("GBM prediction closed forms and monotonicity") {
    GradientBoostingModel m;
    m.learning_rate = 0.1;
    m.feature_dim = 1;
    double x[] = {0.0};
    CHECK(predict_proba_gbm(m, x) == Catch::Approx(0.5));

    double before = predict_proba_gbm(m, x);
    DecisionTree leaf;
    leaf.nodes.push_back({-1, 0.0, 2.0, -1, -1});
    m.trees.push_back(leaf);
    CHECK(predict_proba_gbm(m, x) > before);

    double bad[] = {1.0, 2.0};
    CHECK_THROWS_AS(predict_proba_gbm(m, bad), Error);
}

TEST_CASE("GBM rejects single-class input") {
    Matrix X(4, 1);
    std::vector<int> y = {0, 0, 0, 0};
    CHECK_THROWS_AS(train_gbm(X, y), Error);
}
