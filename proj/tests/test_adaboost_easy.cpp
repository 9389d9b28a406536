#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <span>

#include "rhythmo/adaboost.hpp"
#include "rhythmo/easy_ensemble.hpp"
#include "rhythmo/rng.hpp"

using namespace rhythmo;

namespace {

double training_accuracy(const AdaBoostModel& m, const Matrix& X, const std::vector<int>& y) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < X.rows; ++i)
        if (predict_adaboost(m, std::span(X.row(i), X.cols)) == y[i]) correct++;
    return static_cast<double>(correct) / static_cast<double>(X.rows);
}

// Exhaustive stump accuracy oracle: every feature/threshold/polarity.
double best_single_stump_accuracy(const Matrix& X, const std::vector<int>& y) {
    double best = 0.0;
    for (std::size_t f = 0; f < X.cols; ++f) {
        std::vector<double> thresholds;
        for (std::size_t i = 0; i < X.rows; ++i) thresholds.push_back(X(i, f));
        thresholds.push_back(thresholds.front() - 1.0);
        for (double thr : thresholds) {
            for (int pol : {-1, 1}) {
                std::size_t correct = 0;
                for (std::size_t i = 0; i < X.rows; ++i) {
                    int pred = (X(i, f) > thr ? pol : -pol) > 0 ? 1 : 0;
                    if (pred == y[i]) correct++;
                }
                best = std::max(best,
                                static_cast<double>(correct) / static_cast<double>(X.rows));
            }
        }
    }
    return best;
}

} // namespace

TEST_CASE("separable 1-D data solved by a single stump round") {
    Matrix X(6, 1);
    std::vector<int> y = {0, 0, 0, 1, 1, 1};
    for (std::size_t i = 0; i < 6; ++i) X(i, 0) = static_cast<double>(i);
    AdaBoostModel m = train_adaboost(X, y);
    CHECK(m.members.size() == 1);
    CHECK(training_accuracy(m, X, y) == 1.0);
    // perfect stump alpha is capped, not infinite
    CHECK(std::isfinite(m.members[0].alpha));
    CHECK(m.members[0].alpha == Catch::Approx(0.5 * std::log((1.0 - 1e-10) / 1e-10)));
}

TEST_CASE("error 0.5 stops without adding the stump") {
    // Two identical points with opposite labels: every stump has weighted
    // error exactly 0.5.
    Matrix X(2, 1);
    X(0, 0) = 1.0;
    X(1, 0) = 1.0;
    std::vector<int> y = {0, 1};
    AdaBoostModel m = train_adaboost(X, y);
    CHECK(m.members.empty());
}

TEST_CASE("XOR data beats the best single stump") {
    // Jittered XOR clusters; perfectly symmetric XOR would leave every
    // stump at weighted error exactly 0.5 and stop boosting at round 1.
    Rng rng(19);
    Matrix X(40, 2);
    std::vector<int> y;
    for (std::size_t row = 0; row < 40; ++row) {
        double a = row % 2 == 0 ? -1.0 : 1.0;
        double b = (row / 2) % 2 == 0 ? -1.0 : 1.0;
        X(row, 0) = a + 0.4 * rng.normal();
        X(row, 1) = b + 0.4 * rng.normal();
        y.push_back(X(row, 0) * X(row, 1) > 0 ? 0 : 1);
    }
    AdaBoostOptions opt;
    opt.n_rounds = 10;
    AdaBoostModel m = train_adaboost(X, y, opt);
    CHECK(training_accuracy(m, X, y) > best_single_stump_accuracy(X, y));
}

TEST_CASE("sample weights stay normalized every round") {
    Rng rng(55);
    Matrix X(30, 2);
    std::vector<int> y(30);
    for (auto& v : X.data) v = rng.normal();
    for (std::size_t i = 0; i < 30; ++i) y[i] = rng.uniform() < 0.5 ? 0 : 1;
    y[0] = 0;
    y[1] = 1;
    AdaBoostOptions opt;
    opt.n_rounds = 10;
    std::vector<double> weight_sums;
    train_adaboost(X, y, opt, &weight_sums);
    CHECK(!weight_sums.empty());
    for (double s : weight_sums) CHECK(std::abs(s - 1.0) <= 1e-12);
}

TEST_CASE("adaboost rejects single-class input") {
    Matrix X(4, 1);
    std::vector<int> y = {1, 1, 1, 1};
    CHECK_THROWS_AS(train_adaboost(X, y), Error);
}

TEST_CASE("easy ensemble member subsets are balanced") {
    Rng rng(8);
    std::size_t n_min = 5, n_maj = 500;
    Matrix X(n_min + n_maj, 2);
    std::vector<int> y;
    for (std::size_t i = 0; i < n_min + n_maj; ++i) {
        bool minority = i < n_min;
        X(i, 0) = (minority ? 2.0 : -2.0) + 0.3 * rng.normal();
        X(i, 1) = rng.normal();
        y.push_back(minority ? 1 : 0);
    }
    EasyEnsembleModel m = train_easy_ensemble(X, y, 42);
    REQUIRE(m.members.size() == 10);
    for (const auto& member : m.members) {
        CHECK(member.training_rows.size() == 10);
        std::size_t minority_rows = 0;
        for (auto r : member.training_rows)
            if (y[r] == 1) minority_rows++;
        CHECK(minority_rows == 5);
    }
}

TEST_CASE("balanced input trains members on effectively all data") {
    Rng rng(12);
    Matrix X(20, 1);
    std::vector<int> y;
    for (std::size_t i = 0; i < 20; ++i) {
        bool pos = i < 10;
        X(i, 0) = (pos ? 1.5 : -1.5) + 0.2 * rng.normal();
        y.push_back(pos ? 1 : 0);
    }
    EasyEnsembleModel m = train_easy_ensemble(X, y, 3);
    for (const auto& member : m.members) CHECK(member.training_rows.size() == 20);
}

TEST_CASE("fixed seed reproduces member subsets") {
    Rng rng(99);
    Matrix X(60, 2);
    std::vector<int> y;
    for (std::size_t i = 0; i < 60; ++i) {
        bool pos = i < 15;
        X(i, 0) = (pos ? 1.0 : -1.0) + rng.normal();
        X(i, 1) = rng.normal();
        y.push_back(pos ? 1 : 0);
    }
    EasyEnsembleModel a = train_easy_ensemble(X, y, 7);
    EasyEnsembleModel b = train_easy_ensemble(X, y, 7);
    REQUIRE(a.members.size() == b.members.size());
    for (std::size_t i = 0; i < a.members.size(); ++i)
        CHECK(a.members[i].training_rows == b.members[i].training_rows);
    EasyEnsembleModel c = train_easy_ensemble(X, y, 8);
    bool any_differ = false;
    for (std::size_t i = 0; i < a.members.size(); ++i)
        if (a.members[i].training_rows != c.members[i].training_rows) any_differ = true;
    CHECK(any_differ);
}

TEST_CASE("easy ensemble vote fractions and tie-break") {
    EasyEnsembleModel m;
    m.feature_dim = 1;
    // Hand-built members: k voters for class 1, rest for class 0.
    auto make_member = [](int vote) {
        EasyEnsembleMember member;
        AdaBoostMember ab;
        ab.alpha = 1.0;
        ab.stump.max_depth = 1;
        ab.stump.nodes.resize(3);
        ab.stump.nodes[0] = {0, 1e9, 0.0, 1, 2};
        double v = vote == 1 ? 1.0 : -1.0;
        ab.stump.nodes[1].value = v;
        ab.stump.nodes[2].value = v;
        member.model.members.push_back(ab);
        member.model.feature_dim = 1;
        return member;
    };
    double x[] = {0.0};
    for (int i = 0; i < 10; ++i) m.members.push_back(make_member(1));
    CHECK(predict_proba_easy(m, x) == 1.0);

    m.members.clear();
    for (int i = 0; i < 5; ++i) m.members.push_back(make_member(1));
    for (int i = 0; i < 5; ++i) m.members.push_back(make_member(0));
    CHECK(predict_proba_easy(m, x) == 0.5);
    CHECK((predict_proba_easy(m, x) >= 0.5 ? 1 : 0) == 1);

    m.members.clear();
    for (int i = 0; i < 3; ++i) m.members.push_back(make_member(1));
    for (int i = 0; i < 7; ++i) m.members.push_back(make_member(0));
    CHECK(predict_proba_easy(m, x) == Catch::Approx(0.3));
    CHECK((predict_proba_easy(m, x) >= 0.5 ? 1 : 0) == 0);
}
