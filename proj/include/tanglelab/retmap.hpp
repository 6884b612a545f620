#pragma once

// The reduced return-map family on the annulus S^1 x [-1, 1]:
//
//   theta_1 = theta + a - (omega/beta) ln F(theta, X)   (mod 2 pi)
//   X_1     = b F(theta, X)^{alpha/beta}
//   F       = rho + c sin(theta) + k X
//
// F <= 0 is the escape region; |X_1| > 1 leaves the chart and is reported
// distinctly from escape.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tanglelab/core_model.hpp"
#include "tanglelab/melnikov.hpp"
#include "tanglelab/roots.hpp"

namespace tanglelab {

struct ReducedMap {
    double a = 0.0;    // phase constant (unreduced; the dynamics are 2pi-periodic in it)
    double b = 0.0;    // vertical contraction amplitude, >= 0
    double c = 1.0;    // forcing amplitude, > 0
    double k = 0.0;    // shear coefficient, >= 0
    double rho = 2.0;  // offset, > 0
    double omega_over_beta = 1.0;
    double alpha_over_beta = 1.0;  // > 1 for a dissipative saddle

    static ReducedMap from_constants(const MelnikovConstants& mc) {
        ReducedMap m;
        m.a = mc.a;
        m.b = mc.b;
        m.c = mc.c;
        m.k = mc.k;
        m.rho = mc.rho;
        m.omega_over_beta = mc.omega_over_beta;
        m.alpha_over_beta = mc.alpha_over_beta;
        return m;
    }

    double a_mod() const { return mod_2pi(a); }
};

inline double F_value(const ReducedMap& m, double theta, double X) {
    return m.rho + m.c * std::sin(theta) + m.k * X;
}

struct MapOutcome {
    enum class Tag { Next, Escape, RangeExit };
    Tag tag = Tag::Next;
    double theta = 0.0;  // Next/RangeExit: image angle; Escape: preimage angle
    double X = 0.0;      // Next/RangeExit: image height
    double F = 0.0;      // F at the preimage

    bool escaped() const { return tag == Tag::Escape; }
};

inline constexpr double kEscapeClampF = 1e-300;

inline MapOutcome apply(const ReducedMap& m, double theta, double X) {
    MapOutcome out;
    out.F = F_value(m, theta, X);
    if (out.F <= kEscapeClampF) {
        out.tag = MapOutcome::Tag::Escape;
        out.theta = theta;
        out.X = X;
        return out;
    }
    out.theta = mod_2pi(theta + m.a - m.omega_over_beta * std::log(out.F));
    out.X = m.b * std::pow(out.F, m.alpha_over_beta);
    out.tag = (std::abs(out.X) > 1.0) ? MapOutcome::Tag::RangeExit : MapOutcome::Tag::Next;
    return out;
}

struct Mat2 {
    double a11, a12, a21, a22;
    double det() const { return a11 * a22 - a12 * a21; }
};

inline Mat2 jacobian(const ReducedMap& m, double theta, double X) {
    const double F = F_value(m, theta, X);
    if (F <= kEscapeClampF) throw std::domain_error("jacobian: evaluated at an escape point");
    const double dF_dtheta = m.c * std::cos(theta);
    const double dF_dX = m.k;
    const double wb = m.omega_over_beta, ab = m.alpha_over_beta;
    const double vert = ab * m.b * std::pow(F, ab - 1.0);
    return {1.0 - wb * dF_dtheta / F, -wb * dF_dX / F, vert * dF_dtheta, vert * dF_dX};
}

// Closed-form inverse; cross terms cancel so det J = (alpha/beta) b k F^{alpha/beta - 1}.
inline Mat2 jacobian_inverse(const ReducedMap& m, double theta, double X) {
    if (m.k == 0.0 || m.b == 0.0)
        throw std::domain_error("jacobian_inverse: singular (b k = 0)");
    const double F = F_value(m, theta, X);
    if (F <= kEscapeClampF)
        throw std::domain_error("jacobian_inverse: evaluated at an escape point");
    const Mat2 J = jacobian(m, theta, X);
    const double det = m.alpha_over_beta * m.b * std::pow(F, m.alpha_over_beta - 1.0) * m.k;
    return {J.a22 / det, -J.a12 / det, -J.a21 / det, J.a11 / det};
}

// Singular limit b = k = 0: the circle map f(theta) = theta + a - (w/b) ln(rho + c sin theta).
struct Outcome1d {
    bool escaped = false;
    double theta1 = 0.0;
};

inline Outcome1d apply_1d(const ReducedMap& m, double theta) {
    const double F = m.rho + m.c * std::sin(theta);
    if (F <= kEscapeClampF) return {true, theta};
    return {false, mod_2pi(theta + m.a - m.omega_over_beta * std::log(F))};
}

// Lift of the 1-D map (no reduction mod 2 pi); X shifts F by k X for the
// strip analyses.
inline double lift_1d(const ReducedMap& m, double theta, double X = 0.0) {
    return theta + m.a - m.omega_over_beta * std::log(m.rho + m.c * std::sin(theta) + m.k * X);
}

inline double lift_1d_derivative(const ReducedMap& m, double theta, double X = 0.0) {
    const double F = m.rho + m.c * std::sin(theta) + m.k * X;
    return 1.0 - m.omega_over_beta * m.c * std::cos(theta) / F;
}

// Endpoints of the escape interval of apply_1d when rho < c:
// { theta : rho + c sin theta <= 0 } = [pi + asin(rho/c), 2 pi - asin(rho/c)].
struct EscapeArc {
    double lo, hi;  // in [0, 2 pi)
};

inline EscapeArc escape_arc_1d(double rho, double c) {
    if (!(c > 0.0) || !(rho < c)) throw std::domain_error("escape_arc_1d: requires 0 < rho < c");
    const double s = std::asin(rho / c);
    return {std::numbers::pi + s, 2.0 * std::numbers::pi - s};
}

struct Branch {
    double lo = 0.0, hi = 0.0;       // theta interval (lift coordinates)
    int monotonicity = 0;            // sign of f' on the interval
    double image_lo = 0.0, image_hi = 0.0;
    int wraps = 0;                   // full 2 pi wraps the image makes
    bool clipped = false;            // interval truncated at the wrap budget
};

struct BranchPartition {
    bool partial = false;            // escape interval present (rho < c)
    double v_lo = 0.0, v_hi = 0.0;   // survival arc V (lift coordinates)
    std::vector<double> critical_points;
    std::vector<Branch> branches;
    int w_max = 20;
};

// Maximal monotone branches of apply_1d. For the partial regime the branch
// intervals adjacent to the escape arc are clipped where the image has made
// w_max full wraps.
inline BranchPartition branch_partition(const ReducedMap& m, int w_max = 20, int grid_n = 8192) {
    BranchPartition out;
    out.w_max = w_max;
    const double pi = std::numbers::pi;
    if (m.c == 0.0) {
        out.partial = false;
        out.v_lo = 0.0;
        out.v_hi = 2.0 * pi;
        Branch b;
        b.lo = 0.0;
        b.hi = 2.0 * pi;
        b.monotonicity = 1;
        b.image_lo = lift_1d(m, 0.0);
        b.image_hi = lift_1d(m, 2.0 * pi);
        b.wraps = 1;
        out.branches.push_back(b);
        return out;
    }
    out.partial = m.rho < m.c;
    if (out.partial) {
        const double s = std::asin(m.rho / m.c);
        out.v_lo = -s;           // F > 0 on (-s, pi + s)
        out.v_hi = pi + s;
    } else {
        out.v_lo = -pi / 2.0;    // full circle; start at the F-minimum for a clean interval
        out.v_hi = 3.0 * pi / 2.0;
    }

    // Clip asymptotic ends at w_max wraps past the value at the arc midpoint.
    double lo = out.v_lo, hi = out.v_hi;
    bool clipped_lo = false, clipped_hi = false;
    if (out.partial) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = lift_1d(m, mid);
        const double target = f_mid + 2.0 * pi * (w_max + 2);
        auto gl = [&](double th) { return lift_1d(m, th) - target; };
        if (gl(lo + 1e-13 * (hi - lo)) > 0.0) {
            lo = find_root(gl, lo + 1e-13 * (hi - lo), mid, 1e-13);
            clipped_lo = true;
        }
        if (gl(hi - 1e-13 * (hi - lo)) > 0.0) {
            hi = find_root(gl, mid, hi - 1e-13 * (hi - lo), 1e-13);
            clipped_hi = true;
        }
    }

    // Critical points: sign changes of f' on a fine grid, refined by Brent.
    std::vector<double> crit;
    double prev_th = lo;
    double prev_fp = lift_1d_derivative(m, prev_th);
    for (int i = 1; i <= grid_n; ++i) {
        const double th = lo + (hi - lo) * (static_cast<double>(i) / grid_n);
        const double fp = lift_1d_derivative(m, th);
        if ((prev_fp > 0.0) != (fp > 0.0))
            crit.push_back(find_root([&](double t) { return lift_1d_derivative(m, t); }, prev_th,
                                     th, 1e-13));
        prev_th = th;
        prev_fp = fp;
    }
    out.critical_points = crit;

    std::vector<double> cuts;
    cuts.push_back(lo);
    for (double c0 : crit) cuts.push_back(c0);
    cuts.push_back(hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Branch b;
        b.lo = cuts[i];
        b.hi = cuts[i + 1];
        b.image_lo = lift_1d(m, b.lo);
        b.image_hi = lift_1d(m, b.hi);
        b.monotonicity = (b.image_hi >= b.image_lo) ? 1 : -1;
        b.wraps = static_cast<int>(std::floor(std::abs(b.image_hi - b.image_lo) / (2.0 * pi)));
        b.clipped = (i == 0 && clipped_lo) || (i + 2 == cuts.size() && clipped_hi);
        out.branches.push_back(b);
    }
    return out;
}

}  // namespace tanglelab
