#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tanglelab/core_model.hpp"
#include "tanglelab/ode.hpp"
#include "tanglelab/quadrature.hpp"
#include "tanglelab/roots.hpp"

using namespace tanglelab;
using Catch::Approx;

namespace {

state_t<2> harmonic(double, const state_t<2>& y) { return {y[1], -y[0]}; }

state_t<2> duffing_conservative(double, const state_t<2>& y) {
    return {y[1], y[0] - y[0] * y[0] * y[0]};
}

state_t<2> circle_flow(double, const state_t<2>& y) { return {-y[1], y[0]}; }

}  // namespace

TEST_CASE("harmonic oscillator returns after one period") {
    auto traj = integrate(harmonic, state_t<2>{1.0, 0.0}, 0.0, kTwoPi, 1e-10);
    REQUIRE(std::abs(traj.y_end()[0] - 1.0) < 1e-8);
    REQUIRE(std::abs(traj.y_end()[1]) < 1e-8);
}

TEST_CASE("conservative duffing conserves energy") {
    auto traj = integrate(duffing_conservative, state_t<2>{std::numbers::sqrt2, 0.0}, 0.0, 10.0,
                          1e-11);
    const double H0 = duffing_energy(std::numbers::sqrt2, 0.0);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double H = duffing_energy(traj.states[i][0], traj.states[i][1]);
        REQUIRE(std::abs(H - H0) < 1e-9);
    }
}

TEST_CASE("integration reproduces the homoclinic closed form") {
    // ell(-5) integrated 10 time units forward must match ell(5); the field in
    // the QP frame is the conservative duffing system.
    const Vec2 x0 = unperturbed_orbit(-5.0);
    const Vec2 qp0 = xy_to_qp(x0, 1.0);
    auto traj = integrate(duffing_conservative, state_t<2>{qp0.x, qp0.y}, 0.0, 10.0, 1e-11);
    const Vec2 qp1 = xy_to_qp(unperturbed_orbit(5.0), 1.0);
    REQUIRE(std::abs(traj.y_end()[0] - qp1.x) < 1e-6);
    REQUIRE(std::abs(traj.y_end()[1] - qp1.y) < 1e-6);
}

TEST_CASE("halving the tolerance never increases the closed-form error") {
    auto harm_err = [](double tol) {
        auto t1 = integrate(harmonic, state_t<2>{1.0, 0.0}, 0.0, kTwoPi, tol);
        return std::hypot(t1.y_end()[0] - 1.0, t1.y_end()[1]);
    };
    auto duff_err = [](double tol) {
        const Vec2 qp0 = xy_to_qp(unperturbed_orbit(-5.0), 1.0);
        auto t2 = integrate(duffing_conservative, state_t<2>{qp0.x, qp0.y}, 0.0, 10.0, tol);
        const Vec2 qp1 = xy_to_qp(unperturbed_orbit(5.0), 1.0);
        return std::hypot(t2.y_end()[0] - qp1.x, t2.y_end()[1] - qp1.y);
    };
    auto circ_err = [](double tol) {
        auto t3 = integrate(circle_flow, state_t<2>{1.0, 0.0}, 0.0, kTwoPi, tol);
        return std::hypot(t3.y_end()[0] - 1.0, t3.y_end()[1]);
    };
    for (auto* err : {+harm_err, +duff_err, +circ_err}) {
        double prev = err(1e-7);
        for (double tol = 5e-8; tol >= 1e-11; tol *= 0.5) {
            const double e = err(tol);
            REQUIRE(e <= prev * (1.0 + 1e-9));
            prev = e;
        }
    }
}

TEST_CASE("dense output stays within 10x of the step tolerance") {
    // Interpolation error within a step: restart a fine integration from the
    // step's own initial node so accumulated error does not enter.
    const double tol = 1e-9;
    auto traj = integrate(duffing_conservative, state_t<2>{std::numbers::sqrt2, 0.0}, 0.0, 8.0, tol);
    for (std::size_t i = 0; i + 1 < traj.times.size(); i += 3) {
        const double ta = traj.times[i], tb = traj.times[i + 1];
        for (double frac : {0.25, 0.5, 0.8}) {
            const double t = ta + frac * (tb - ta);
            auto a = traj.eval(t);
            auto fine = integrate(duffing_conservative, traj.states[i], ta, t, 1e-13);
            const auto& b = fine.y_end();
            const double scale = 1.0 + std::abs(b[0]) + std::abs(b[1]);
            REQUIRE(std::hypot(a[0] - b[0], a[1] - b[1]) < 10.0 * tol * scale);
        }
    }
}

TEST_CASE("integrate rejects invalid tolerances and non-finite states") {
    REQUIRE_THROWS_AS(integrate(harmonic, state_t<2>{1.0, 0.0}, 0.0, 1.0, 1e-2),
                      std::domain_error);
    auto blowup = [](double, const state_t<1>& y) -> state_t<1> {
        return {y[0] * y[0]};
    };
    // y' = y^2 from 1 blows up at t = 1.
    REQUIRE_THROWS_AS(integrate(blowup, state_t<1>{1.0}, 0.0, 2.0, 1e-10), integration_error);
}

TEST_CASE("section event: circle flow hits y=0 at pi/2") {
    // Start at (0, 1): the first crossing of {y2 = 0} ... use g = y[1] with the
    // flow (x, y) -> (-y, x): from (0,1), x(t) = -sin t, y(t) = cos t; y hits 0 at pi/2.
    auto ev = integrate_to_section(
        circle_flow, state_t<2>{0.0, 1.0}, [](const state_t<2>& y) { return y[1]; }, -1, 1e-11,
        0.0, 10.0);
    REQUIRE(std::abs(ev.t - std::numbers::pi / 2.0) < 1e-9);
    REQUIRE(ev.direction == -1);
}

TEST_CASE("section event: direction filter and no-crossing") {
    // Duffing from (sqrt2, 0): p starts at 0 and goes negative; the crossing
    // of {p = 0} in the increasing direction does not occur before t = 1.
    REQUIRE_THROWS_AS(
        integrate_to_section(
            duffing_conservative, state_t<2>{std::numbers::sqrt2, 1e-12},
            [](const state_t<2>& y) { return y[1]; }, +1, 1e-10, 0.0, 1.0),
        no_crossing_error);
}

TEST_CASE("section event: tangential crossing reported distinctly") {
    // A slow rotation grazing the section: g dips 1e-9 below zero, so the
    // crossing exists but |dg/dt| there is ~4.5e-8, under the 1e-7 threshold.
    auto slow_circle = [](double, const state_t<2>& y) -> state_t<2> {
        return {-1e-3 * y[1], 1e-3 * y[0]};
    };
    IntegrateOptions opt;
    opt.h_max = 0.02;  // the sub-zero window is ~0.09 wide
    const double phi0 = std::numbers::pi - 0.01;
    std::vector<SectionFn<2>> fns;
    fns.push_back({[](const state_t<2>& y) { return y[1] + 1.0 - 1e-9; }, 0});
    REQUIRE_THROWS_AS(
        integrate_to_any_section(slow_circle, state_t<2>{-std::sin(phi0), std::cos(phi0)}, 0.0,
                                 40.0, fns, 1e-12, 0.0, std::function<bool(const state_t<2>&)>{},
                                 static_cast<Trajectory<2>*>(nullptr), opt),
        tangential_crossing_error);
}

TEST_CASE("quad basics") {
    REQUIRE(quad([](double x) { return x * x; }, 0.0, 1.0, 1e-12) ==
            Approx(1.0 / 3.0).margin(1e-12));
    const double inf = std::numeric_limits<double>::infinity();
    REQUIRE(quad([](double x) { return std::exp(-x * x); }, -inf, inf, 1e-10) ==
            Approx(std::sqrt(std::numbers::pi)).margin(1e-10));
    // Odd integrand of the splitting computation integrates to zero; its
    // sibling with the (b - a) factor is the drift integrand (checked in the
    // melnikov tests against 16/15).
    const double z = quad(
        [](double s) {
            const double e = std::exp(2.0 * s);
            return std::exp(3.0 * s) * (1.0 - e) / std::pow(e + 1.0, 4.0);
        },
        -inf, inf, 1e-12);
    REQUIRE(std::abs(z) < 1e-10);
}

TEST_CASE("quad failure reporting") {
    REQUIRE_THROWS_AS(quad([](double x) { return x > 0 ? 1e300 * std::sin(1.0 / x) : 0.0; }, 0.0,
                           1.0, 1e-14),
                      quadrature_error);
}

TEST_CASE("find_root basics") {
    REQUIRE(find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-12) ==
            Approx(std::numbers::sqrt2).margin(1e-12));
    REQUIRE(find_root([](double x) { return std::sin(x); }, 3.0, 4.0, 1e-12) ==
            Approx(std::numbers::pi).margin(1e-12));
    REQUIRE_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12),
                      bracket_error);
}
