#pragma once

// Dissipative homoclinic connection: shooting for gamma_lambda, orbit
// sampling with frame and weight data, and the Diophantine check (H).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tanglelab/core_model.hpp"
#include "tanglelab/ode.hpp"
#include "tanglelab/roots.hpp"

namespace tanglelab {

struct ShootOptions {
    double seed_offset = 1e-8;  // distance of the manifold seed from the saddle
    double ode_tol = 1e-12;
    double t_max = 200.0;
    double box = 4.0;  // working box |q|, |p| <= box
};

// Cubic coefficients of the local manifolds p = beta q + h3 q^3 (unstable)
// and p = -alpha q + h3 q^3 (stable); the quadratic terms vanish by the
// (q,p) -> (-q,-p) equivariance of the autonomous system.
inline double unstable_manifold_cubic(double lambda, double gamma, double beta) {
    return (gamma * beta - 1.0) / (4.0 * beta + lambda);
}
inline double stable_manifold_cubic(double lambda, double gamma, double alpha) {
    return (gamma * alpha + 1.0) / (4.0 * alpha - lambda);
}

namespace detail {

template <class F>
inline SectionEvent<2> flow_to_apex(F&& field, const state_t<2>& y0, int direction, double t_max,
                                    double tol, double box) {
    std::function<bool(const state_t<2>&)> escape = [box](const state_t<2>& y) {
        return std::abs(y[0]) > box || std::abs(y[1]) > box;
    };
    std::vector<SectionFn<2>> apex;
    apex.push_back({[](const state_t<2>& y) { return y[1]; }, direction});
    return integrate_to_any_section(field, y0, 0.0, t_max, apex, tol, 0.0, escape);
}

}  // namespace detail

// Signed offset between the unstable and stable manifolds on the apex
// transversal {p = 0} near q = sqrt(2). Zero iff the connection exists;
// negative when damping pulls the loop inward (lambda > 0, gamma = 0).
inline double splitting_distance(double lambda, double gamma, const ShootOptions& opt = {}) {
    if (!(lambda >= 0.0 && lambda < 0.3))
        throw std::domain_error("splitting_distance: lambda must lie in [0, 0.3)");
    const auto [alpha, beta] = eigenvalues(lambda);
    const double d0 = opt.seed_offset;
    auto field = [lambda, gamma](double, const state_t<2>& y) -> state_t<2> {
        const Vec2 d = vector_field_autonomous({y[0], y[1]}, lambda, gamma);
        return {d.x, d.y};
    };

    const double h3u = unstable_manifold_cubic(lambda, gamma, beta);
    const state_t<2> yu{d0, beta * d0 + h3u * d0 * d0 * d0};
    const double q_unstable = detail::flow_to_apex(field, yu, -1, opt.t_max, opt.ode_tol, opt.box).y[0];

    const double h3s = stable_manifold_cubic(lambda, gamma, alpha);
    const state_t<2> ys{d0, -alpha * d0 + h3s * d0 * d0 * d0};
    const double q_stable = detail::flow_to_apex(field, ys, +1, -opt.t_max, opt.ode_tol, opt.box).y[0];

    return q_unstable - q_stable;
}

// Root of splitting_distance over gamma in [-10 lambda, 10 lambda].
inline double shoot_gamma(double lambda, double tol = 1e-10, const ShootOptions& opt = {}) {
    if (!(lambda > 0.0 && lambda <= 0.1))
        throw std::domain_error("shoot_gamma: lambda must lie in (0, 0.1]");
    const double cap = 10.0 * lambda;
    const double grid[] = {-cap, -0.75 * cap, -0.5 * cap, -0.25 * cap, 0.0,
                           0.25 * cap, 0.5 * cap, 0.75 * cap, cap};
    // Strong anti-damping legs can run away before the apex crossing; such
    // grid points are skipped while scanning for a sign change.
    bool have_prev = false;
    double prev_g = 0.0, prev_s = 0.0;
    double lo_val = std::numeric_limits<double>::quiet_NaN(), hi_val = lo_val;
    for (double g : grid) {
        double s;
        try {
            s = splitting_distance(lambda, g, opt);
        } catch (const integration_error&) {
            continue;
        }
        if (std::isnan(lo_val)) lo_val = s;
        hi_val = s;
        if (s == 0.0) return g;
        if (have_prev && (prev_s > 0.0) != (s > 0.0)) {
            const double root = find_root(
                [&](double gg) { return splitting_distance(lambda, gg, opt); }, prev_g, g, tol);
            if (!(std::abs(root) < cap))
                throw std::domain_error("shoot_gamma: root outside |gamma| < 10 lambda");
            return root;
        }
        have_prev = true;
        prev_g = g;
        prev_s = s;
    }
    bracket_error err("shoot_gamma: no sign change of the splitting over |gamma| <= 10 lambda");
    err.f_lo = lo_val;
    err.f_hi = hi_val;
    throw err;
}

// Sampled homoclinic orbit in the eigen frame with tangent and weight data.
// s = 0 sits at the apex crossing {p = 0}; L+/L- are the times the orbit
// crosses the section coordinate levels x = eps (forward) and y = eps
// (backward), which is what the return-map reduction integrates between.
// The |ell| = eps/2 ball-entry times are kept alongside.
class HomoclinicData {
  public:
    double lambda = 0.0, gamma_lambda = 0.0, epsilon = 0.0;
    double alpha = 1.0, beta = 1.0;
    double L_minus = 0.0, L_plus = 0.0;
    double L_minus_ball = 0.0, L_plus_ball = 0.0;
    double s_min = 0.0, s_max = 0.0;
    double apex_mismatch = 0.0;  // shooting residual at the joint
    std::vector<double> grid;
    std::vector<Vec2> ell;      // (x, y)
    std::vector<Vec2> tangent;  // (u, v), unit
    std::vector<double> weight; // E(s_i)

    struct Point {
        double x, y, u, v, E, K;
    };

    bool closed_form() const { return closed_; }

    Point at(double s) const {
        if (closed_) return closed_point(s);
        return dense_point(std::clamp(s, s_min + 1e-9, s_max - 1e-9));
    }

  private:
    Point closed_point(double s) const {
        const Vec2 l = unperturbed_orbit(s);
        const Vec2 t = unperturbed_tangent(s);
        return {l.x, l.y, t.x, t.y, unperturbed_weight_E(s), unperturbed_weight_K(s)};
    }

    Point dense_point(double s) const {
        state_t<3> z;
        double kshift;
        if (s <= 0.0) {
            z = neg_.eval(t_apex_neg_ + s);
            kshift = K_apex_neg_;
        } else {
            z = pos_.eval(t_apex_pos_ + s);
            kshift = K_apex_pos_;
        }
        const Vec2 xy = qp_to_xy({z[0], z[1]}, alpha);
        const Vec2 dqp = vector_field_autonomous({z[0], z[1]}, lambda, gamma_lambda);
        const Vec2 dxy = qp_to_xy(dqp, alpha);
        const double n = dxy.norm();
        const double u = dxy.x / n, v = dxy.y / n;
        const double E = normal_variation_rate({z[0], z[1]}, lambda, gamma_lambda, alpha, u, v);
        return {xy.x, xy.y, u, v, E, z[2] - kshift};
    }

    bool closed_ = true;
    Trajectory<3> neg_, pos_;
    double t_apex_neg_ = 0.0, t_apex_pos_ = 0.0;
    double K_apex_neg_ = 0.0, K_apex_pos_ = 0.0;

    friend HomoclinicData sample_orbit(double, double, double, double, const ShootOptions&);
};

// Builds HomoclinicData for the given lambda and gamma_lambda (use
// gamma_lambda = 0 with lambda = 0 for the closed-form loop). `ds` is the
// uniform time step of the stored sample grid.
inline HomoclinicData sample_orbit(double lambda, double gamma_lambda, double epsilon, double ds,
                                   const ShootOptions& opt = {}) {
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::domain_error("sample_orbit: epsilon must lie in (0, 0.5)");
    if (!(ds > 0.0)) throw std::domain_error("sample_orbit: ds must be positive");
    HomoclinicData d;
    d.lambda = lambda;
    d.gamma_lambda = gamma_lambda;
    d.epsilon = epsilon;
    const auto eig = eigenvalues(lambda);
    d.alpha = eig.alpha;
    d.beta = eig.beta;

    if (lambda == 0.0) {
        if (gamma_lambda != 0.0)
            throw std::domain_error("sample_orbit: lambda = 0 requires gamma_lambda = 0");
        d.closed_ = true;
        d.s_min = -40.0;
        d.s_max = 40.0;
    } else {
        d.closed_ = false;
        const double d0 = opt.seed_offset;
        const double al = eig.alpha;
        auto field = [lambda, gamma_lambda, al](double, const state_t<3>& z) -> state_t<3> {
            const Vec2 dq = vector_field_autonomous({z[0], z[1]}, lambda, gamma_lambda);
            const Vec2 dxy = qp_to_xy(dq, al);
            const double n = dxy.norm();
            const double E = normal_variation_rate({z[0], z[1]}, lambda, gamma_lambda, al,
                                                   dxy.x / n, dxy.y / n);
            return {dq.x, dq.y, -E};
        };
        const double box = opt.box;
        std::function<bool(const state_t<3>&)> escape = [box](const state_t<3>& z) {
            return std::abs(z[0]) > box || std::abs(z[1]) > box;
        };
        std::vector<SectionFn<3>> apex_dn, apex_up;
        apex_dn.push_back({[](const state_t<3>& z) { return z[1]; }, -1});
        apex_up.push_back({[](const state_t<3>& z) { return z[1]; }, +1});

        const double h3u = unstable_manifold_cubic(lambda, gamma_lambda, eig.beta);
        const state_t<3> yu{d0, eig.beta * d0 + h3u * d0 * d0 * d0, 0.0};
        const auto evn = integrate_to_any_section(field, yu, 0.0, opt.t_max, apex_dn, opt.ode_tol,
                                                  0.0, escape, &d.neg_);
        d.t_apex_neg_ = evn.t;
        d.K_apex_neg_ = evn.y[2];
        d.s_min = -evn.t;

        const double h3s = stable_manifold_cubic(lambda, gamma_lambda, eig.alpha);
        const state_t<3> ys{d0, -eig.alpha * d0 + h3s * d0 * d0 * d0, 0.0};
        const auto evp = integrate_to_any_section(field, ys, 0.0, -opt.t_max, apex_up, opt.ode_tol,
                                                  0.0, escape, &d.pos_);
        d.t_apex_pos_ = evp.t;
        d.K_apex_pos_ = evp.y[2];
        d.s_max = -evp.t;

        d.apex_mismatch = std::abs(evn.y[0] - evp.y[0]);
        if (d.apex_mismatch > 1e-6)
            throw std::domain_error(
                "sample_orbit: manifolds do not join at the apex (gamma is not gamma_lambda)");
    }

    // Section-plane times. The y-maximum sits at s = -0.549 (lambda = 0), so
    // bracketing past +-0.56 isolates the monotone tails.
    auto xcoord = [&](double s) { return d.at(s).x; };
    auto ycoord = [&](double s) { return d.at(s).y; };
    auto radius = [&](double s) { return std::hypot(d.at(s).x, d.at(s).y); };
    const double fwd_hi = d.s_max - 1.0, bwd_hi = -d.s_min - 1.0;
    d.L_plus = find_root([&](double s) { return xcoord(s) - epsilon; }, 0.56, fwd_hi, 1e-12);
    d.L_minus = find_root([&](double s) { return ycoord(-s) - epsilon; }, 0.56, bwd_hi, 1e-12);
    d.L_plus_ball = find_root([&](double s) { return radius(s) - 0.5 * epsilon; }, 0.56, fwd_hi, 1e-12);
    d.L_minus_ball =
        find_root([&](double s) { return radius(-s) - 0.5 * epsilon; }, 0.56, bwd_hi, 1e-12);

    double S = std::min(-d.s_min, d.s_max) - 0.5;
    S = std::min(S, 25.0);
    S = std::max(S, std::max(d.L_plus, d.L_minus) + 2.0);
    const long half = static_cast<long>(std::floor(S / ds));
    d.grid.reserve(2 * half + 1);
    for (long i = -half; i <= half; ++i) {
        const double s = i * ds;
        const auto p = d.at(s);
        d.grid.push_back(s);
        d.ell.push_back({p.x, p.y});
        d.tangent.push_back({p.u, p.v});
        d.weight.push_back(p.E);
    }
    return d;
}

// Diophantine condition (H): |n alpha - m beta| > d1 (n + m)^{-d2} for all
// positive integer pairs with n + m <= n_max.
struct NonResonanceConfig {
    double d1 = 1e-3;
    double d2 = 2.0;
    long n_max = 10000;
};

struct NonResonanceReport {
    bool pass = false;
    long n = 0, m = 0;       // minimizing pair
    double value = 0.0;      // |n alpha - m beta| there
    double margin = 0.0;     // value * (n + m)^{d2}, compared against d1
};

// Since beta = 1/alpha, |n alpha - m beta| = beta |n alpha^2 - m|, so for each
// n only the two integers flanking n alpha^2 can minimize; scanning those is
// equivalent to the exhaustive search over all pairs.
inline NonResonanceReport check_nonresonance(double alpha, double beta,
                                             const NonResonanceConfig& cfg = {}) {
    if (!(alpha > 0.0 && beta > 0.0))
        throw std::domain_error("check_nonresonance: alpha, beta must be positive");
    if (!(cfg.d1 > 0.0 && cfg.d2 > 0.0 && cfg.n_max >= 100))
        throw std::domain_error("check_nonresonance: invalid config");
    NonResonanceReport best;
    best.margin = std::numeric_limits<double>::infinity();
    const double a2 = alpha / beta;
    for (long n = 1; n < cfg.n_max; ++n) {
        const double target = n * a2;
        for (long m : {static_cast<long>(std::floor(target)), static_cast<long>(std::ceil(target))}) {
            if (m < 1 || n + m > cfg.n_max) continue;
            const double value = std::abs(n * alpha - m * beta);
            const double margin = value * std::pow(static_cast<double>(n + m), cfg.d2);
            if (margin < best.margin) {
                best.margin = margin;
                best.value = value;
                best.n = n;
                best.m = m;
            }
        }
    }
    best.pass = best.margin > cfg.d1;
    return best;
}

// Golden table of verified gamma_lambda values (plain text, versioned).
struct GammaRecord {
    double lambda = 0.0, gamma_lambda = 0.0;
    double ode_tol = 0.0, root_tol = 0.0, seed_offset = 0.0;
};

inline std::vector<GammaRecord> load_gamma_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_gamma_table: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# tanglelab gamma_lambda table v1", 0) != 0)
        throw std::runtime_error("load_gamma_table: bad header in " + path);
    std::vector<GammaRecord> out;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        GammaRecord r;
        if (!(ss >> r.lambda >> r.gamma_lambda >> r.ode_tol >> r.root_tol >> r.seed_offset))
            throw std::runtime_error("load_gamma_table: bad row: " + line);
        out.push_back(r);
    }
    return out;
}

inline void save_gamma_table(const std::string& path, const std::vector<GammaRecord>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_gamma_table: cannot open " + path);
    out << "# tanglelab gamma_lambda table v1\n";
    out << "# columns: lambda gamma_lambda ode_tol root_tol seed_offset\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g\n", r.lambda, r.gamma_lambda,
                      r.ode_tol, r.root_tol, r.seed_offset);
        out << buf;
    }
}

inline std::optional<double> lookup_gamma(const std::vector<GammaRecord>& rows, double lambda) {
    for (const auto& r : rows)
        if (std::abs(r.lambda - lambda) < 1e-12) return r.gamma_lambda;
    return std::nullopt;
}

}  // namespace tanglelab
