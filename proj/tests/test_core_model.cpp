#include <catch2/catch_amalgamated.hpp>

#include "tanglelab/core_model.hpp"
#include "tanglelab/quadrature.hpp"

using namespace tanglelab;
using Catch::Approx;

TEST_CASE("eigenvalue identities") {
    // lambda = 0 degenerates to the double eigenvalue 1.
    auto e0 = eigenvalues(0.0);
    REQUIRE(e0.alpha == Approx(1.0).margin(1e-15));
    REQUIRE(e0.beta == Approx(1.0).margin(1e-15));

    auto e = eigenvalues(0.2);
    REQUIRE(e.alpha == Approx(1.1049876).margin(1e-7));
    REQUIRE(e.beta == Approx(0.9049876).margin(1e-7));

    for (double lam = 0.0; lam <= 0.1000001; lam += 0.01) {
        auto p = eigenvalues(lam);
        REQUIRE(std::abs(p.alpha * p.beta - 1.0) < 1e-14);
        REQUIRE(std::abs(p.alpha - p.beta - lam) < 1e-14);
        if (lam > 0.0) REQUIRE((p.alpha > 1.0 && 1.0 > p.beta && p.beta > 0.0));
    }
    REQUIRE_THROWS_AS(eigenvalues(-0.1), std::domain_error);
}

TEST_CASE("extended vector field") {
    auto par = SystemParams::make(0.0, 0.0, 0.0, 0.0, 2.0, 0.1);
    auto d = vector_field_extended(ExtendedState::make(0.0, 0.0, 1.0), par);
    REQUIRE(d.q == 0.0);
    REQUIRE(d.p == 0.0);
    REQUIRE(d.theta == 2.0);

    // (1, 0) is an equilibrium of the conservative planar part.
    d = vector_field_extended(ExtendedState::make(1.0, 0.0, 0.0), par);
    REQUIRE(d.q == 0.0);
    REQUIRE(d.p == Approx(0.0).margin(1e-15));

    // Direct arithmetic at (sqrt2, 0, pi/2), lambda=0.1, mu=0.01, omega=1.
    auto par2 = SystemParams::make(0.1, 0.0, 0.0, 0.01, 1.0, 0.1);
    auto d2 = vector_field_extended(
        ExtendedState::make(std::numbers::sqrt2, 0.0, std::numbers::pi / 2.0), par2);
    REQUIRE(d2.q == 0.0);
    REQUIRE(d2.p == Approx(-std::numbers::sqrt2 + 0.02).margin(1e-14));
    REQUIRE(d2.theta == 1.0);
}

TEST_CASE("autonomous vector field") {
    REQUIRE(vector_field_autonomous({0.0, 0.0}, 0.3, 0.1).norm() == 0.0);
    REQUIRE(vector_field_autonomous({1.0, 0.0}, 0.3, 0.1).norm() == 0.0);
    auto d = vector_field_autonomous({0.5, 0.2}, 0.05, 0.0);
    REQUIRE(d.x == Approx(0.2));
    REQUIRE(d.y == Approx(0.365).margin(1e-15));
}

TEST_CASE("unperturbed orbit closed form") {
    const auto l0 = unperturbed_orbit(0.0);
    REQUIRE(l0.x == Approx(std::numbers::sqrt2 / 2.0).margin(1e-14));
    REQUIRE(l0.y == Approx(std::numbers::sqrt2 / 2.0).margin(1e-14));
    // q = x + y equals sqrt(2) sech t.
    for (double t : {-3.0, -1.0, 0.0, 0.5, 2.0, 10.0}) {
        const auto l = unperturbed_orbit(t);
        REQUIRE(l.x + l.y == Approx(std::numbers::sqrt2 / std::cosh(t)).margin(1e-13));
    }
    // Decay at the tails.
    REQUIRE(unperturbed_orbit(40.0).norm() < 1e-15);
    REQUIRE(unperturbed_orbit(-40.0).norm() < 1e-15);
    REQUIRE(std::isfinite(unperturbed_orbit(500.0).norm()));
    REQUIRE(std::isfinite(unperturbed_orbit(-500.0).norm()));
}

TEST_CASE("orbit satisfies the xy field and conserves energy") {
    // Residual of the closed form in x' = -x + (1/2)(x+y)^3, y' = y - (1/2)(x+y)^3,
    // with derivatives taken by central differences.
    for (int i = 0; i <= 100; ++i) {
        const double t = -10.0 + 0.2 * i;
        const double h = 1e-6;
        const auto lp = unperturbed_orbit(t + h), lm = unperturbed_orbit(t - h);
        const auto l = unperturbed_orbit(t);
        const double cube = 0.5 * std::pow(l.x + l.y, 3.0);
        const double rx = (lp.x - lm.x) / (2.0 * h) - (-l.x + cube);
        const double ry = (lp.y - lm.y) / (2.0 * h) - (l.y - cube);
        REQUIRE(std::abs(rx) < 1e-9);
        REQUIRE(std::abs(ry) < 1e-9);
        // Energy in the QP frame vanishes identically on the loop.
        const Vec2 qp = xy_to_qp(l, 1.0);
        REQUIRE(std::abs(duffing_energy(qp.x, qp.y)) < 1e-13);
    }
}

TEST_CASE("unperturbed tangent") {
    const auto t0 = unperturbed_tangent(0.0);
    REQUIRE(t0.x == Approx(1.0 / std::numbers::sqrt2).margin(1e-14));
    REQUIRE(t0.y == Approx(-1.0 / std::numbers::sqrt2).margin(1e-14));
    for (double t : {-5.0, -0.7, 0.0, 0.3, 1.0, 6.0}) {
        const auto u = unperturbed_tangent(t);
        REQUIRE(u.norm() == Approx(1.0).margin(1e-14));
        // Must align with the normalized finite difference of the orbit.
        const double h = 1e-6;
        const auto lp = unperturbed_orbit(t + h), lm = unperturbed_orbit(t - h);
        Vec2 fd{(lp.x - lm.x) / (2.0 * h), (lp.y - lm.y) / (2.0 * h)};
        const double n = fd.norm();
        REQUIRE(std::abs(fd.x / n - u.x) < 1e-6);
        REQUIRE(std::abs(fd.y / n - u.y) < 1e-6);
    }
    // At e^{2t} = 3 the tangent is exactly vertical (u = 0, v = -1).
    const double ts = 0.5 * std::log(3.0);
    const auto us = unperturbed_tangent(ts);
    REQUIRE(us.x == Approx(0.0).margin(1e-14));
    REQUIRE(us.y == Approx(-1.0).margin(1e-14));
}

TEST_CASE("frame conversions") {
    PlanarState origin{{0.0, 0.0}, Frame::XY};
    auto qp = convert(origin, Frame::QP, 1.3);
    REQUIRE(qp.v.norm() == 0.0);

    // Round trips are identities for several alphas.
    for (double alpha : {1.0, 1.05, 1.5}) {
        PlanarState s{{0.37, -1.21}, Frame::QP};
        auto back = convert(convert(s, Frame::XY, alpha), Frame::QP, alpha);
        REQUIRE(back.v.x == Approx(s.v.x).margin(1e-12));
        REQUIRE(back.v.y == Approx(s.v.y).margin(1e-12));
    }

    // alpha = 1 frame: QP(sqrt2, 0) -> XY(sqrt2/2, sqrt2/2).
    auto xy = qp_to_xy({std::numbers::sqrt2, 0.0}, 1.0);
    REQUIRE(xy.x == Approx(std::numbers::sqrt2 / 2.0).margin(1e-14));
    REQUIRE(xy.y == Approx(std::numbers::sqrt2 / 2.0).margin(1e-14));
}

TEST_CASE("nonlinear coefficient functions") {
    auto z = nonlinear_coeffs(0.0, 0.0, 1.3, 0.4);
    REQUIRE(z.f == 0.0);
    REQUIRE(z.A == 0.0);
    REQUIRE(z.C == 0.0);

    // Structural identities g = -f/alpha, B = -A/alpha, D = -C/alpha.
    for (double x : {-0.8, 0.3, 1.0})
        for (double y : {-0.5, 0.0, 0.9}) {
            const double alpha = 1.0253124512059937, gl = 0.0625;
            auto c = nonlinear_coeffs(x, y, alpha, gl);
            REQUIRE(c.g == Approx(-c.f / alpha).margin(1e-15));
            REQUIRE(c.B == Approx(-c.A / alpha).margin(1e-15));
            REQUIRE(c.D == Approx(-c.C / alpha).margin(1e-15));
        }

    auto c = nonlinear_coeffs(1.0, 0.0, 1.0, 0.0);
    REQUIRE(c.f == Approx(0.5));
    REQUIRE(c.C == Approx(0.5));
    REQUIRE(c.A == Approx(-0.5));
}

TEST_CASE("coefficient derivatives agree with finite differences") {
    const double alpha = 1.05, gl = 0.07, h = 1e-6;
    for (double x : {-0.6, 0.2, 0.8})
        for (double y : {-0.3, 0.5}) {
            auto d = nonlinear_coeff_derivs(x, y, alpha, gl);
            auto fp = nonlinear_coeffs(x + h, y, alpha, gl), fm = nonlinear_coeffs(x - h, y, alpha, gl);
            REQUIRE(d.fx == Approx((fp.f - fm.f) / (2 * h)).margin(1e-8));
            REQUIRE(d.gx == Approx((fp.g - fm.g) / (2 * h)).margin(1e-8));
            fp = nonlinear_coeffs(x, y + h, alpha, gl);
            fm = nonlinear_coeffs(x, y - h, alpha, gl);
            REQUIRE(d.fy == Approx((fp.f - fm.f) / (2 * h)).margin(1e-8));
            REQUIRE(d.gy == Approx((fp.g - fm.g) / (2 * h)).margin(1e-8));
        }
}

TEST_CASE("closed-form weights E and K") {
    REQUIRE(unperturbed_weight_E(0.0) == 0.0);
    REQUIRE(unperturbed_weight_K(0.0) == Approx(0.0).margin(1e-15));
    // Oddness / evenness on a grid.
    for (double s = 0.1; s < 6.0; s += 0.37) {
        REQUIRE(std::abs(unperturbed_weight_E(s) + unperturbed_weight_E(-s)) < 1e-13);
        REQUIRE(std::abs(unperturbed_weight_K(s) - unperturbed_weight_K(-s)) < 1e-13);
    }
    // Spot value and the asymptote K ~ ln(8)/2 - s.
    REQUIRE(unperturbed_weight_K(1.0) == Approx(-0.684513875745).margin(1e-9));
    REQUIRE(unperturbed_weight_K(200.0) == Approx(0.5 * std::log(8.0) - 200.0).margin(1e-12));
    REQUIRE(std::isfinite(unperturbed_weight_K(300.0)));
}

TEST_CASE("mod_2pi and circ_dist") {
    REQUIRE(mod_2pi(7.0) == Approx(7.0 - kTwoPi));
    REQUIRE(mod_2pi(-1.0) == Approx(kTwoPi - 1.0));
    REQUIRE(circ_dist(0.1, kTwoPi - 0.1) == Approx(0.2).margin(1e-12));
    REQUIRE(circ_dist(kTwoPi - 0.1, 0.1) == Approx(-0.2).margin(1e-12));
}

TEST_CASE("system params") {
    auto p = SystemParams::make(0.05, 0.0625, 5.0, 1e-4, 1.0, 0.05);
    // Positive rho unfolds toward separated manifolds with defined returns.
    REQUIRE(p.gamma() == Approx(0.0625 - 5e-4));
    REQUIRE(p.alpha * p.beta == Approx(1.0).margin(1e-14));
    REQUIRE(p.scale_warnings().empty());
    auto bad = SystemParams::make(0.05, 0.0, 0.0, 0.2, 1.0, 0.05);
    REQUIRE_FALSE(bad.scale_warnings().empty());
    REQUIRE_THROWS_AS(SystemParams::make(0.1, 0.0, 0.0, 0.1, -1.0, 0.1), std::domain_error);
}
