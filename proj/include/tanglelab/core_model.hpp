#pragma once

// Model definitions for the forced Duffing-type oscillator
//
//   q'' + (lambda - gamma q^2) q' - q + q^3 = mu q^2 sin(omega t)
//
// together with the coordinate frames and the closed-form data of the
// conservative (lambda = 0) homoclinic loop.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tanglelab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce an angle to [0, 2*pi).
inline double mod_2pi(double x) {
    double m = std::fmod(x, kTwoPi);
    if (m < 0.0) m += kTwoPi;
    return m;
}

// Signed circular distance in (-pi, pi].
inline double circ_dist(double a, double b) {
    double d = mod_2pi(a - b);
    if (d > std::numbers::pi) d -= kTwoPi;
    return d;
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

struct Eigenpair {
    double alpha;  // magnitude of the contracting eigenvalue (-alpha)
    double beta;   // expanding eigenvalue
};

// Saddle eigenvalue pair of (0,0): alpha*beta = 1, alpha - beta = lambda.
inline Eigenpair eigenvalues(double lambda) {
    if (lambda < 0.0) throw std::domain_error("eigenvalues: lambda must be >= 0");
    const double s = std::sqrt(lambda * lambda + 4.0);
    return {0.5 * (s + lambda), 0.5 * (s - lambda)};
}

// Scalar parameters of the forced system. `rho` is the unfolding parameter of
// the nonlinear damping: gamma = gamma_lambda + mu * rho.
struct SystemParams {
    double lambda = 0.0;
    double gamma_lambda = 0.0;
    double rho = 0.0;
    double mu = 0.0;
    double omega = 1.0;
    double epsilon = 0.1;
    double alpha = 1.0;
    double beta = 1.0;

    static SystemParams make(double lambda, double gamma_lambda, double rho, double mu,
                             double omega, double epsilon) {
        if (mu < 0.0) throw std::domain_error("SystemParams: mu must be >= 0");
        if (omega <= 0.0) throw std::domain_error("SystemParams: omega must be > 0");
        if (epsilon <= 0.0) throw std::domain_error("SystemParams: epsilon must be > 0");
        SystemParams p;
        p.lambda = lambda;
        p.gamma_lambda = gamma_lambda;
        p.rho = rho;
        p.mu = mu;
        p.omega = omega;
        p.epsilon = epsilon;
        const auto [a, b] = eigenvalues(lambda);
        p.alpha = a;
        p.beta = b;
        return p;
    }

    // Unfolding direction: positive rho pulls the unstable branch inside the
    // stable one, which is the direction that keeps first returns to the
    // section defined (drift response +A_L * rho in the reduction).
    double gamma() const { return gamma_lambda - mu * rho; }

    // Soft check of the parameter ordering R_mu >> 1/eps >> R_rho >> R_omega.
    std::vector<std::string> scale_warnings() const {
        std::vector<std::string> w;
        if (mu > 0.0 && mu >= epsilon) w.push_back("mu should be << epsilon");
        if (epsilon >= 1.0) w.push_back("epsilon should be << 1");
        if (rho > 0.0 && rho * epsilon > 100.0) w.push_back("rho is large relative to 1/epsilon");
        return w;
    }
};

struct ExtendedState {
    double q = 0.0;
    double p = 0.0;
    double theta = 0.0;  // forcing phase, reduced to [0, 2*pi)

    static ExtendedState make(double q, double p, double theta) {
        return {q, p, mod_2pi(theta)};
    }
};

// Right-hand side of the extended system (theta' = omega); a total function.
inline ExtendedState vector_field_extended(const ExtendedState& s, const SystemParams& par) {
    const double q = s.q, p = s.p;
    return {p,
            -(par.lambda - par.gamma() * q * q) * p + q - q * q * q +
                par.mu * q * q * std::sin(s.theta),
            par.omega};
}

// Autonomous (mu = 0) planar field in (q, p).
inline Vec2 vector_field_autonomous(Vec2 qp, double lambda, double gamma) {
    const double q = qp.x, p = qp.y;
    return {p, -(lambda - gamma * q * q) * p + q - q * q * q};
}

// Energy of the conservative core q'' - q + q^3 = 0.
inline double duffing_energy(double q, double p) {
    return 0.5 * p * p - 0.5 * q * q + 0.25 * q * q * q * q;
}

enum class Frame { QP, XY };

struct PlanarState {
    Vec2 v;
    Frame frame = Frame::QP;
};

// Linear eigen-frame change: q = x + alpha*y, p = -alpha*x + y; the inverse
// carries the 1/(1+alpha^2) normalization. alpha = 1 reproduces the symmetric
// frame x = (q-p)/2, y = (q+p)/2 used for the conservative closed forms.
inline Vec2 qp_to_xy(Vec2 qp, double alpha) {
    const double k = 1.0 / (1.0 + alpha * alpha);
    return {k * (qp.x - alpha * qp.y), k * (alpha * qp.x + qp.y)};
}

inline Vec2 xy_to_qp(Vec2 xy, double alpha) {
    return {xy.x + alpha * xy.y, -alpha * xy.x + xy.y};
}

inline PlanarState convert(const PlanarState& s, Frame target, double alpha) {
    if (s.frame == target) return s;
    if (target == Frame::XY) return {qp_to_xy(s.v, alpha), Frame::XY};
    return {xy_to_qp(s.v, alpha), Frame::QP};
}

// Closed-form homoclinic loop of the conservative core in the alpha = 1 frame:
// a(t) = 2*sqrt(2) e^{3t}/(1+e^{2t})^2, b(t) = 2*sqrt(2) e^{t}/(1+e^{2t})^2.
// Rewritten in e^{-2|t|} so the evaluation never overflows.
inline Vec2 unperturbed_orbit(double t) {
    const double c = 2.0 * std::numbers::sqrt2;
    if (t > 0.0) {
        const double w = std::exp(-2.0 * t);
        const double d = (1.0 + w) * (1.0 + w);
        return {c * std::exp(-t) / d, c * std::exp(-3.0 * t) / d};
    }
    const double e = std::exp(2.0 * t);
    const double d = (1.0 + e) * (1.0 + e);
    return {c * std::exp(3.0 * t) / d, c * std::exp(t) / d};
}

// Unit tangent (u, v) of the loop; u^2 + v^2 = 1 by construction.
inline Vec2 unperturbed_tangent(double t) {
    if (t > 0.0) {
        const double w = std::exp(-2.0 * t);
        const double nu = -(1.0 - 3.0 * w);
        const double nv = w * (w - 3.0);
        const double n = std::hypot(nu, nv);
        return {nu / n, nv / n};
    }
    const double e = std::exp(2.0 * t);
    const double nu = -e * (e - 3.0);
    const double nv = 1.0 - 3.0 * e;
    const double n = std::hypot(nu, nv);
    return {nu / n, nv / n};
}

// Normal-variation weight E(t) along the unperturbed loop (odd in t) and its
// antiderivative K(t) = -int_0^t E (even in t). Rewritten in w = e^{-2|t|};
// valid for |t| <= 300 (beyond that w underflows harmlessly to the
// asymptote K = ln(8)/2 - |t|).
inline double unperturbed_weight_E(double t) {
    const double at = std::abs(t);
    const double w = std::exp(-2.0 * at);
    const double n1 = 1.0 - 3.0 * w;
    const double n2 = w * (w - 3.0);
    const double ratio = (n1 * n1 - n2 * n2) / (n1 * n1 + n2 * n2);
    const double sech_factor = 1.0 - 12.0 * w / ((1.0 + w) * (1.0 + w));
    const double e = ratio * sech_factor;
    return t >= 0.0 ? e : -e;
}

inline double unperturbed_weight_K(double t) {
    const double at = std::abs(t);
    const double w = std::exp(-2.0 * at);
    const double n1 = 1.0 - 3.0 * w;
    const double n2 = w * (w - 3.0);
    const double lp = std::log1p(w);
    return 0.5 * (std::log(8.0) + std::log(n1 * n1 + n2 * n2)) - at - 3.0 * lp;
}

// Coefficient functions of the eigen-frame equations. g, B, D are the
// structural multiples -f/alpha, -A/alpha, -C/alpha.
struct NonlinearCoeffs {
    double f, g, A, B, C, D;
};

inline NonlinearCoeffs nonlinear_coeffs(double x, double y, double alpha, double gamma_lambda) {
    const double k = alpha / (1.0 + alpha * alpha);
    const double s = x + alpha * y;
    const double w = y - alpha * x;
    const double s2 = s * s;
    const double f = k * (gamma_lambda * s2 * w + s2 * s);
    const double A = k * s2 * w;
    const double C = k * s2;
    return {f, -f / alpha, A, -A / alpha, C, -C / alpha};
}

// Partials of f and g, needed for the normal-variation weight E(s).
struct CoeffDerivs {
    double fx, fy, gx, gy;
};

inline CoeffDerivs nonlinear_coeff_derivs(double x, double y, double alpha, double gamma_lambda) {
    const double k = alpha / (1.0 + alpha * alpha);
    const double s = x + alpha * y;
    const double w = y - alpha * x;
    const double fx = k * (gamma_lambda * (2.0 * s * w - alpha * s * s) + 3.0 * s * s);
    const double fy = k * (gamma_lambda * (2.0 * alpha * s * w + s * s) + 3.0 * alpha * s * s);
    return {fx, fy, -fx / alpha, -fy / alpha};
}

// Autonomous field in the eigen frame: x' = -alpha x + f, y' = beta y + g.
inline Vec2 vector_field_xy(Vec2 xy, double alpha, double beta, double gamma_lambda) {
    const auto c = nonlinear_coeffs(xy.x, xy.y, alpha, gamma_lambda);
    return {-alpha * xy.x + c.f, beta * xy.y + c.g};
}

// Normal-variation rate along an orbit of the autonomous system:
// E = <e, J e> with e = (v, -u) the unit normal and J the eigen-frame
// Jacobian of the true field, obtained from the (q, p) Jacobian by the exact
// chart conjugation (no reliance on the coefficient-function signs).
inline double normal_variation_rate(Vec2 qp, double lambda, double gamma, double alpha,
                                    double u, double v) {
    const double q = qp.x, p = qp.y;
    // J_qp = [[0, 1], [1 - 3q^2 + 2 gamma q p, -(lambda - gamma q^2)]]
    const double j21 = 1.0 - 3.0 * q * q + 2.0 * gamma * q * p;
    const double j22 = -(lambda - gamma * q * q);
    const double k = 1.0 / (1.0 + alpha * alpha);
    // J_xy = T J_qp T^{-1}, T = k [[1, -alpha], [alpha, 1]].
    const double t11 = k * (0.0 - alpha * j21);
    const double t12 = k * (1.0 - alpha * j22);
    const double t21 = k * (alpha * 0.0 + j21);
    const double t22 = k * (alpha * 1.0 + j22);
    const double J11 = t11 * 1.0 + t12 * (-alpha);
    const double J12 = t11 * alpha + t12 * 1.0;
    const double J21 = t21 * 1.0 + t22 * (-alpha);
    const double J22 = t21 * alpha + t22 * 1.0;
    const double ex = v, ey = -u;
    return ex * (J11 * ex + J12 * ey) + ey * (J21 * ex + J22 * ey);
}

}  // namespace tanglelab
