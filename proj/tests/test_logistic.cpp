#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rhythmo/logistic.hpp"
#include "rhythmo/rng.hpp"

using namespace rhythmo;

namespace {

Matrix random_matrix(std::size_t n, std::size_t p, Rng& rng) {
    Matrix X(n, p);
    for (auto& v : X.data) v = rng.normal();
    return X;
}

} // namespace

TEST_CASE("separable 1-D data gets the margin signs right") {
    Matrix X(4, 1);
    X(0, 0) = -1.0;
    X(1, 0) = -1.1;
    X(2, 0) = 1.0;
    X(3, 0) = 1.1;
    std::vector<int> y = {0, 0, 1, 1};
    LogisticModel m = train_logistic(X, y, 1.0);
    double xp[] = {1.0};
    double xn[] = {-1.0};
    CHECK(decision_logistic(m, xp) > 0.0);
    CHECK(decision_logistic(m, xn) < 0.0);
}

TEST_CASE("symmetric data forces a zero intercept") {
    Matrix X(6, 2);
    std::vector<int> y;
    Rng rng(9);
    for (std::size_t i = 0; i < 3; ++i) {
        double a = rng.normal(), b = rng.normal();
        X(2 * i, 0) = a;
        X(2 * i, 1) = b;
        X(2 * i + 1, 0) = -a;
        X(2 * i + 1, 1) = -b;
        y.push_back(1);
        y.push_back(0);
    }
    LogisticModel m = train_logistic(X, y, 1.0);
    CHECK(std::abs(m.intercept) < 1e-6);
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(31);
    for (int instance = 0; instance < 20; ++instance) {
        std::size_t n = 20, p = 3;
        Matrix X = random_matrix(n, p, rng);
        std::vector<int> y_pm(n);
        for (auto& v : y_pm) v = rng.uniform() < 0.5 ? -1 : 1;
        y_pm[0] = -1;
        y_pm[1] = 1;
        double C = 0.5 + rng.uniform();

        for (int point = 0; point < 5; ++point) {
            std::vector<double> theta(p + 1);
            for (auto& t : theta) t = rng.normal();
            std::vector<double> grad;
            logistic_objective(X, y_pm, C, theta, grad);

            const double h = 1e-5;
            for (std::size_t j = 0; j <= p; ++j) {
                std::vector<double> tp = theta, tm = theta, scratch;
                tp[j] += h;
                tm[j] -= h;
                double fp = logistic_objective(X, y_pm, C, tp, scratch);
                double fm = logistic_objective(X, y_pm, C, tm, scratch);
                double fd = (fp - fm) / (2.0 * h);
                double denom = std::max(1.0, std::abs(fd));
                CHECK(std::abs(grad[j] - fd) / denom < 1e-4);
            }
        }
    }
}

TEST_CASE("objective at solution is no worse than at zero") {
    Rng rng(77);
    Matrix X = random_matrix(30, 4, rng);
    std::vector<int> y(30);
    for (std::size_t i = 0; i < 30; ++i) y[i] = X(i, 0) + 0.3 * rng.normal() > 0 ? 1 : 0;
    y[0] = 0;
    y[1] = 1;
    std::vector<int> y_pm(30);
    for (std::size_t i = 0; i < 30; ++i) y_pm[i] = y[i] == 1 ? 1 : -1;

    LogisticModel m = train_logistic(X, y, 1.0);
    std::vector<double> theta(m.weights);
    theta.push_back(m.intercept);
    std::vector<double> grad;
    double at_solution = logistic_objective(X, y_pm, 1.0, theta, grad);
    std::vector<double> zeros(5, 0.0);
    double at_zero = logistic_objective(X, y_pm, 1.0, zeros, grad);
    CHECK(at_solution <= at_zero);
}

TEST_CASE("solution is locally minimal under random perturbations") {
    Rng rng(101);
    Matrix X = random_matrix(25, 3, rng);
    std::vector<int> y(25);
    for (std::size_t i = 0; i < 25; ++i) y[i] = rng.uniform() < 0.5 ? 0 : 1;
    y[0] = 0;
    y[1] = 1;
    std::vector<int> y_pm(25);
    for (std::size_t i = 0; i < 25; ++i) y_pm[i] = y[i] == 1 ? 1 : -1;

    LogisticModel m = train_logistic(X, y, 1.0);
    std::vector<double> theta(m.weights);
    theta.push_back(m.intercept);
    std::vector<double> grad;
    double base = logistic_objective(X, y_pm, 1.0, theta, grad);

    for (int d = 0; d < 5; ++d) {
        std::vector<double> dir(theta.size());
        double norm = 0.0;
        for (auto& v : dir) {
            v = rng.normal();
            norm += v * v;
        }
        norm = std::sqrt(norm);
        std::vector<double> perturbed = theta;
        for (std::size_t j = 0; j < dir.size(); ++j) perturbed[j] += 1e-3 * dir[j] / norm;
        double fp = logistic_objective(X, y_pm, 1.0, perturbed, grad);
        CHECK(fp >= base - 1e-8);
    }
}

TEST_CASE("predict_proba_logistic closed forms") {
    LogisticModel m;
    m.weights = {0.0};
    m.intercept = 0.0;
    double x[] = {3.0};
    CHECK(predict_proba_logistic(m, x) == Catch::Approx(0.5));

    m.weights = {1.0};
    double xl[] = {std::log(3.0)};
    CHECK(predict_proba_logistic(m, xl) == Catch::Approx(0.75).margin(1e-12));

    m.intercept = 100.0;
    CHECK(predict_proba_logistic(m, x) == Catch::Approx(1.0).margin(1e-12));

    double bad[] = {1.0, 2.0};
    CHECK_THROWS_AS(predict_proba_logistic(m, bad), Error);
}

TEST_CASE("training rejects degenerate inputs") {
    Matrix X(4, 1);
    std::vector<int> y = {1, 1, 1, 1};
    CHECK_THROWS_AS(train_logistic(X, y, 1.0), Error);

    std::vector<int> y2 = {0, 1, 0, 1};
    X(2, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(train_logistic(X, y2, 1.0), Error);
}
