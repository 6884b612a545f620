#pragma once

// Adaptive quadrature: bisection with a nested 15-point Gauss-Legendre rule.
// Improper integrals over exponentially decaying integrands are truncated to
// [-T, T] with T = max(30, ln(10/tol)).

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace tanglelab {

struct quadrature_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <int M>
struct GaussRule {
    std::array<double, M> node;    // on [-1, 1]
    std::array<double, M> weight;
};

// Gauss-Legendre nodes by Newton iteration on P_M; machine precision.
template <int M>
inline GaussRule<M> make_gauss_rule() {
    GaussRule<M> r;
    const int half = (M + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (M + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < M; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = M * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.node[i] = -x;
        r.node[M - 1 - i] = x;
        r.weight[i] = r.weight[M - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

inline double gauss15(const std::function<double(double)>& f, double a, double b) {
    static const GaussRule<15> rule = make_gauss_rule<15>();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 15; ++i) s += rule.weight[i] * f(c + h * rule.node[i]);
    return s * h;
}

inline double quad_recurse(const std::function<double(double)>& f, double a, double b,
                           double whole, double budget, int depth, long& nodes) {
    if (--nodes < 0) throw quadrature_error("quad: subdivision budget exhausted");
    const double m = 0.5 * (a + b);
    const double left = gauss15(f, a, m);
    const double right = gauss15(f, m, b);
    const double delta = left + right - whole;
    if (std::abs(delta) <= budget || std::abs(delta) <= 1e-16 * (std::abs(left) + std::abs(right)))
        return left + right;
    if (depth >= 48)
        throw quadrature_error("quad: did not converge within the subdivision limit");
    return quad_recurse(f, a, m, left, 0.5 * budget, depth + 1, nodes) +
           quad_recurse(f, m, b, right, 0.5 * budget, depth + 1, nodes);
}

}  // namespace detail

// Absolute-error adaptive quadrature of f over [a, b]; a and b may be +-inf.
inline double quad(const std::function<double(double)>& f, double a, double b,
                   double tol = 1e-10) {
    if (!(tol > 0.0)) throw std::domain_error("quad: tol must be positive");
    const bool ia = std::isinf(a), ib = std::isinf(b);
    if (ia || ib) {
        const double T = std::max(30.0, std::log(10.0 / tol));
        if (ia && ib) return quad(f, -T, T, tol);
        if (ib) return quad(f, a, a + 2.0 * T, tol);
        return quad(f, b - 2.0 * T, b, tol);
    }
    if (a == b) return 0.0;
    const double whole = detail::gauss15(f, a, b);
    if (!std::isfinite(whole)) throw quadrature_error("quad: non-finite integrand");
    long nodes = 200000;
    return detail::quad_recurse(f, a, b, whole, tol, 0, nodes);
}

}  // namespace tanglelab
