#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace rhythmo {

struct BfgsOptions {
    double grad_tol = 1e-6;
    std::size_t max_iterations = 500;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
};

struct BfgsResult {
    std::vector<double> x;
    double value = 0.0;
    double grad_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

} // namespace detail

// Dense BFGS with a strong-Wolfe line search (bracket + zoom).
// `f` evaluates the objective and writes the gradient into `grad`.
inline BfgsResult minimize_bfgs(
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& f,
    std::vector<double> x0, const BfgsOptions& opt = {}) {
    using detail::dot;
    const std::size_t n = x0.size();

    std::vector<double> x = std::move(x0);
    std::vector<double> g(n), g_new(n);
    double fx = f(x, g);

    // Inverse Hessian approximation, started at identity.
    std::vector<double> H(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;

    std::vector<double> p(n), x_new(n), s(n), y(n), Hy(n);

    BfgsResult result;
    std::size_t it = 0;
    for (; it < opt.max_iterations; ++it) {
        double gnorm = detail::norm2(g);
        if (gnorm <= opt.grad_tol) {
            result.converged = true;
            break;
        }

        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            const double* Hi = H.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) v += Hi[j] * g[j];
            p[i] = -v;
        }
        double dg = dot(p, g);
        if (dg >= 0.0) {
            // Not a descent direction; reset to steepest descent.
            for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
            dg = dot(p, g);
        }

        // Strong-Wolfe line search (Nocedal-Wright style bracketing).
        auto phi = [&](double alpha, std::vector<double>& grad_out) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + alpha * p[i];
            return f(x_new, grad_out);
        };
        double alpha = 1.0;
        double alpha_prev = 0.0;
        double phi0 = fx, dphi0 = dg;
        double phi_prev = phi0;
        double alpha_final = 0.0;
        double phi_final = phi0;
        bool found = false;

        auto zoom = [&](double lo, double hi, double phi_lo) {
            for (int z = 0; z < 50; ++z) {
                double a = 0.5 * (lo + hi);
                double fa = phi(a, g_new);
                double dfa = dot(g_new, p);
                if (fa > phi0 + opt.wolfe_c1 * a * dphi0 || fa >= phi_lo) {
                    hi = a;
                } else {
                    if (std::abs(dfa) <= -opt.wolfe_c2 * dphi0) {
                        alpha_final = a;
                        phi_final = fa;
                        found = true;
                        return;
                    }
                    if (dfa * (hi - lo) >= 0.0) hi = lo;
                    lo = a;
                    phi_lo = fa;
                }
                if (std::abs(hi - lo) < 1e-16) break;
            }
            // Fall back to the low end of the bracket.
            alpha_final = lo;
            phi_final = phi(lo, g_new);
            found = true;
        };

        for (int ls = 0; ls < 50 && !found; ++ls) {
            double fa = phi(alpha, g_new);
            if (fa > phi0 + opt.wolfe_c1 * alpha * dphi0 || (ls > 0 && fa >= phi_prev)) {
                zoom(alpha_prev, alpha, phi_prev);
                break;
            }
            double dfa = dot(g_new, p);
            if (std::abs(dfa) <= -opt.wolfe_c2 * dphi0) {
                alpha_final = alpha;
                phi_final = fa;
                found = true;
                break;
            }
            if (dfa >= 0.0) {
                zoom(alpha, alpha_prev, fa);
                break;
            }
            alpha_prev = alpha;
            phi_prev = fa;
            alpha *= 2.0;
        }
        if (!found || alpha_final <= 0.0) {
            // Line search failed to make progress; stop here.
            break;
        }

        for (std::size_t i = 0; i < n; ++i) {
            x_new[i] = x[i] + alpha_final * p[i];
            s[i] = x_new[i] - x[i];
        }
        for (std::size_t i = 0; i < n; ++i) y[i] = g_new[i] - g[i];

        double sy = dot(s, y);
        if (sy > 1e-12) {
            double rho = 1.0 / sy;
            // H = (I - rho s y^T) H (I - rho y s^T) + rho s s^T
            for (std::size_t i = 0; i < n; ++i) {
                double v = 0.0;
                const double* Hi = H.data() + i * n;
                for (std::size_t j = 0; j < n; ++j) v += Hi[j] * y[j];
                Hy[i] = v;
            }
            double yHy = dot(y, Hy);
            for (std::size_t i = 0; i < n; ++i) {
                double* Hi = H.data() + i * n;
                for (std::size_t j = 0; j < n; ++j) {
                    Hi[j] += rho * rho * (sy + yHy) * s[i] * s[j] -
                             rho * (Hy[i] * s[j] + s[i] * Hy[j]);
                }
            }
        }

        x.swap(x_new);
        g.swap(g_new);
        fx = phi_final;
    }

    result.x = std::move(x);
    result.value = fx;
    result.grad_norm = detail::norm2(g);
    result.iterations = it;
    return result;
}

} // namespace rhythmo
