#pragma once

// Parameter surfaces S*, S, Q, the dc band, and the classification of
// (omega, rho, mu) into the dynamical scenarios.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tanglelab/melnikov.hpp"
#include "tanglelab/pipeline.hpp"
#include "tanglelab/roots.hpp"

namespace tanglelab {

// Minimum of F(theta, 0) over the circle; in the truncated model this is
// rho - c exactly.
inline double M_of_rho(const MelnikovConstants& mc, double rho) { return rho - mc.c; }

struct SStarResult {
    double value;        // root of M(rho) = 0
    double uncertainty;  // the derivation's O(eps + mu) band, kappa * (eps + mu)
};

inline SStarResult S_star(const MelnikovConstants& mc, double kappa = 10.0) {
    const double hi = std::max(4.0 * mc.c, mc.c + 1.0);
    const double root = find_root([&](double rho) { return M_of_rho(mc, rho); }, 0.0, hi, 1e-14);
    return {root, kappa * (mc.epsilon + mc.mu)};
}

inline double S_surface(const MelnikovConstants& mc) {
    return (1.0 + std::sqrt(mc.omega)) * S_star(mc).value;
}

struct DcBand {
    double lo, hi;
};

// (202/99, 396/101) * sqrt(C^2 + S^2) / A; the ratio is normalization-free.
inline DcBand dc_band(const MelnikovConstants& mc) {
    const double amp = std::hypot(mc.C, mc.S) / mc.A;
    return {(202.0 / 99.0) * amp, (396.0 / 101.0) * amp};
}

// rho0 must exceed 2 A^{-1} sqrt(C(0)^2 + S(0)^2). With quadrature-verified
// integrals the lambda = 0 bound degenerates (C(0) = S(0) = 0); the nominal
// value below keeps the stated lower bound evaluated with the drift scale the
// derivation assumed, 2 * (15/16) * 8 sqrt(2) pi, times the 1.05 default.
inline double rho0_nominal() {
    return 1.05 * 15.0 * std::numbers::sqrt2 * std::numbers::pi;
}

inline double rho0_lower_bound(const ConstantsPipeline& p, double quad_tol = 1e-10) {
    const auto cs = compute_CS(0.0, p.data(), quad_tol);
    const double A = compute_A(p.data(), quad_tol);
    return 2.0 * std::hypot(cs.C, cs.S) / A;
}

// Largest omega such that both Theorem-3 conditions hold on (0, omega]:
// omega <= 1e-5 M(omega, rho, mu) / c(omega) and M >= rho0 / 10. Reads the
// paper's min{...} as the upper edge of the validity component at 0+.
inline double Q_surface(const ConstantsPipeline& p, double rho, double mu,
                        double rho0 = rho0_nominal(), double omega_cap = 1000.0) {
    (void)mu;  // the truncated model's M(rho) carries no mu term
    if (!(rho > rho0)) throw std::domain_error("Q_surface: requires rho > rho0");
    auto ok = [&](double w) {
        const double c = p.c_of_omega(w);
        const double M = rho - c;
        return M >= 0.1 * rho0 && w <= 1e-5 * M / c;
    };
    double lo = 1e-8;
    if (!ok(lo)) return 0.0;
    double hi = lo;
    while (ok(hi)) {
        lo = hi;
        hi *= 1.4;
        if (hi >= omega_cap) return omega_cap;
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

enum class RegimeTag { BelowSStar, RankOneBand, InvariantCurve, Unclassified };

inline const char* to_string(RegimeTag t) {
    switch (t) {
        case RegimeTag::BelowSStar: return "below-s-star";
        case RegimeTag::RankOneBand: return "rank-one-band";
        case RegimeTag::InvariantCurve: return "invariant-curve";
        default: return "unclassified";
    }
}

struct Regime {
    RegimeTag tag = RegimeTag::Unclassified;
    bool horseshoe_omega_ok = false;  // the rank-one band's horseshoe needs omega > 100
    double s_star = 0.0, s_upper = 0.0;
    double q = std::numeric_limits<double>::quiet_NaN();
    double rho0 = 0.0;
    double margin_s_star = 0.0, margin_s = 0.0, margin_q = 0.0;
};

// Order of tests: the invariant-curve regime (omega < Q, rho > rho0) first,
// then rho against S* and S.
inline Regime classify(const ConstantsPipeline& p, double omega, double rho, double mu,
                       double rho0 = rho0_nominal()) {
    if (!(omega > 0.0 && rho > 0.0 && mu >= 0.0))
        throw std::domain_error("classify: parameters outside the declared box");
    Regime r;
    r.rho0 = rho0;
    const double c = p.c_of_omega(omega);
    r.s_star = c;
    r.s_upper = (1.0 + std::sqrt(omega)) * c;
    r.margin_s_star = rho - r.s_star;
    r.margin_s = r.s_upper - rho;
    r.horseshoe_omega_ok = omega > 100.0;
    if (rho > rho0) {
        r.q = Q_surface(p, rho, mu, rho0);
        r.margin_q = r.q - omega;
    } else {
        r.margin_q = -std::numeric_limits<double>::infinity();
    }
    if (rho > rho0 && omega < r.q)
        r.tag = RegimeTag::InvariantCurve;
    else if (rho < r.s_star)
        r.tag = RegimeTag::BelowSStar;
    else if (rho < r.s_upper)
        r.tag = RegimeTag::RankOneBand;
    else
        r.tag = RegimeTag::Unclassified;
    return r;
}

}  // namespace tanglelab
