#include <catch2/catch_amalgamated.hpp>

#include "tanglelab/dynamics.hpp"
#include "tanglelab/interp.hpp"

using namespace tanglelab;
using Catch::Approx;

namespace {

ReducedMap rigid_rotation(double angle, double rho = 2.0) {
    ReducedMap m;
    m.a = angle + std::log(rho);  // cancels the -(w/b) ln(rho) term (wb = 1)
    m.b = 0.0;
    m.c = 0.0;
    m.k = 0.0;
    m.rho = rho;
    m.omega_over_beta = 1.0;
    m.alpha_over_beta = 1.05;
    return m;
}

ReducedMap tangle_like() {
    // Hand-tuned partial-regime map with one fold per fiber.
    ReducedMap m;
    m.a = 1.0;
    m.b = 1e-3;
    m.c = 0.137;
    m.k = 0.004;
    m.rho = 0.5 * 0.137;
    m.omega_over_beta = 5.13;
    m.alpha_over_beta = 1.0513;
    return m;
}

}  // namespace

TEST_CASE("periodic spline interpolates smooth periodic data") {
    const int n = 64;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = std::sin(kTwoPi * i / n) + 0.3 * std::cos(2.0 * kTwoPi * i / n);
    PeriodicSpline s(kTwoPi, v);
    for (double x = 0.0; x < kTwoPi; x += 0.0137) {
        const double exact = std::sin(x) + 0.3 * std::cos(2.0 * x);
        REQUIRE(s(x) == Approx(exact).margin(2e-6));
    }
    // Periodic continuation.
    REQUIRE(s(0.5 + kTwoPi) == Approx(s(0.5)).margin(1e-13));
    REQUIRE(s(-0.5) == Approx(s(kTwoPi - 0.5)).margin(1e-13));
}

TEST_CASE("rotation number: rigid rotations and the degenerate family") {
    // Rigid rotation by 2 pi / 4.
    auto lift_q = [](double th) { return th + kTwoPi * 0.25; };
    REQUIRE(rotation_number(lift_q, 1 << 14, 1e-12) == Approx(0.25).margin(1e-10));

    // Golden-angle rotation.
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    auto lift_g = [golden](double th) { return th + kTwoPi * golden; };
    REQUIRE(rotation_number(lift_g, 1 << 16, 1e-12) == Approx(golden).margin(1e-8));

    // The degenerate reduced family: c = 0 gives rotation (a - ln rho)/2pi.
    const auto m = rigid_rotation(1.234, 2.0);
    auto lift_m = [&](double th) { return lift_1d(m, th); };
    double expect = (m.a - std::log(m.rho)) / kTwoPi;
    expect -= std::floor(expect);
    REQUIRE(rotation_number(lift_m, 1 << 14, 1e-12) == Approx(expect).margin(1e-12));

    // Escape and non-monotone rejections.
    ReducedMap bad = tangle_like();
    REQUIRE_THROWS_AS(rotation_number([&](double th) { return lift_1d(bad, th); }, 1 << 12, 1e-9),
                      std::domain_error);
    auto folded = [](double th) { return th + 3.0 * std::sin(th); };
    REQUIRE_THROWS_AS(rotation_number(folded, 1 << 12, 1e-9), std::domain_error);
}

TEST_CASE("lyapunov: rotation, sink and the determinant identity") {
    // Rigid-rotation regime: lam1 = 0 up to 1e-3.
    {
        ReducedMap m = rigid_rotation(0.7);
        m.b = 1e-6;  // tiny but nonzero so the vertical direction contracts
        m.k = 1e-3;
        m.c = 1e-4;
        const auto r = lyapunov(m, 0.3, 0.0, 100000, 1000);
        REQUIRE_FALSE(r.escaped);
        REQUIRE(std::abs(r.lam1) < 1e-3);
        REQUIRE(r.lam2 < r.lam1);
        REQUIRE(std::abs(r.lam1 + r.lam2 - r.avg_log_det) < 1e-6);
    }
    // A strongly contracting sink regime has lam1 < 0.
    {
        ReducedMap m;
        m.a = 0.0;
        m.b = 0.01;
        m.c = 0.05;
        m.k = 0.05;
        m.rho = 1.0;
        m.omega_over_beta = 0.2;
        m.alpha_over_beta = 1.05;
        const auto sinks = find_sinks(m, 16, 2000);
        REQUIRE_FALSE(sinks.empty());
        const auto r = lyapunov(m, 0.3, 0.0, 50000, 2000);
        REQUIRE(r.lam1 < 0.0);
        REQUIRE(std::abs(r.lam1 + r.lam2 - r.avg_log_det) < 1e-6);
    }
    // Escape reports survival.
    {
        ReducedMap m = tangle_like();
        m.a = 2.0;
        bool saw_escape = false;
        for (int i = 0; i < 8 && !saw_escape; ++i) {
            const auto r = lyapunov(m, 0.1 + 0.7 * i, 0.0, 3000, 0);
            saw_escape = r.escaped;
        }
        REQUIRE(saw_escape);
    }
}

TEST_CASE("invariant curve: degenerate limit and a genuine curve") {
    // b = 0: the curve is X = 0 and convergence is immediate.
    {
        ReducedMap m = rigid_rotation(0.9);
        const auto r = invariant_curve(m, 256, 1e-12, 10);
        REQUIRE(r.converged);
        REQUIRE(r.iterations == 1);
        for (double g : r.g) REQUIRE(g == 0.0);
    }
    // Small forcing, small rotation bias: a genuine attracting curve with
    // cone conditions and a grid-stable rotation number.
    {
        ReducedMap m;
        m.a = 0.4;
        m.b = 1e-3;
        m.c = 0.02;
        m.k = 0.03;
        m.rho = 2.0;
        m.omega_over_beta = 0.01;
        m.alpha_over_beta = 1.05;
        const auto r = invariant_curve(m, 512, 1e-11, 100);
        REQUIRE(r.converged);
        REQUIRE(r.monotone);
        REQUIRE(r.cone_ok);
        REQUIRE(r.min_inverse_gain > 100.0);
        REQUIRE(r.worst_slope < 0.01);
        // Re-applying the map moves the converged graph by < 2 tol.
        REQUIRE(r.residuals.back() < 2e-11);
        const auto r2 = invariant_curve(m, 1024, 1e-11, 100);
        REQUIRE(std::abs(r2.rotation - r.rotation) < 1e-6);
    }
    // Folding regime: the graph transform must refuse (negative control).
    {
        ReducedMap m;
        m.a = 0.4;
        m.b = 1e-3;
        m.c = 0.9;
        m.k = 0.03;
        m.rho = 2.0;
        m.omega_over_beta = 30.0;
        m.alpha_over_beta = 1.05;
        const auto r = invariant_curve(m, 256, 1e-10, 50);
        REQUIRE_FALSE((r.converged && r.monotone && r.cone_ok));
        REQUIRE_FALSE(r.failure.empty());
    }
}

TEST_CASE("full shift certification") {
    ReducedMap m = tangle_like();
    // Not applicable without an escape region.
    {
        ReducedMap total = m;
        total.rho = 2.0 * total.c;
        const auto rep = verify_full_shift(total);
        REQUIRE_FALSE(rep.applicable);
    }
    // c = 0 is vacuous as well.
    {
        ReducedMap degen = m;
        degen.c = 0.0;
        REQUIRE_FALSE(verify_full_shift(degen).applicable);
    }
    // Scan a for a certified window and for a definite failure.
    int pass_count = 0;
    double a_pass = -1.0, a_fail = -1.0;
    for (double a = 0.0; a < kTwoPi; a += 0.05) {
        ReducedMap mm = m;
        mm.a = a;
        const auto rep = verify_full_shift(mm, 20, 128);
        if (rep.applicable && rep.pass) {
            ++pass_count;
            a_pass = a;
        } else if (rep.applicable && rep.fold_margin < 0.0) {
            a_fail = a;
        }
    }
    REQUIRE(pass_count > 0);
    REQUIRE(a_fail >= 0.0);
    // Certified window: margins positive, expansion >= 3, contraction < 1,
    // and stable under 10x finer sampling.
    {
        ReducedMap mm = m;
        mm.a = a_pass;
        const auto rep = verify_full_shift(mm, 20, 128);
        REQUIRE(rep.pass);
        REQUIRE(rep.min_expansion >= 3.0);
        REQUIRE(rep.fold_margin > 0.0);
        REQUIRE(rep.vertical_contraction < 1.0);
        const auto fine = verify_full_shift(mm, 20, 1280);
        REQUIRE(fine.pass);
        REQUIRE(fine.min_expansion == Approx(rep.min_expansion).epsilon(0.05));
    }
    // Complementary scan point: fold inside V reports a negative margin.
    {
        ReducedMap mm = m;
        mm.a = a_fail;
        const auto rep = verify_full_shift(mm, 20, 128);
        REQUIRE(rep.applicable);
        REQUIRE_FALSE(rep.pass);
        REQUIRE(rep.fold_margin < 0.0);
    }
}

TEST_CASE("find_sinks: rotation regime has none; tuned fold has one") {
    // Rigid rotation with irrational angle: no sinks.
    {
        ReducedMap m = rigid_rotation(2.39996);
        m.b = 1e-4;
        m.k = 1e-3;
        REQUIRE(find_sinks(m, 16, 1500).empty());
    }
    // Fold bottom placed on a fixed point: a strongly contracting sink.
    {
        ReducedMap m = tangle_like();
        bool found = false;
        for (double a = 0.0; a < kTwoPi && !found; a += 0.02) {
            ReducedMap mm = m;
            mm.a = a;
            const auto sinks = find_sinks(mm, 24, 3000);
            if (!sinks.empty()) {
                found = true;
                REQUIRE(sinks.front().mult_max < 1.0);
                REQUIRE(sinks.front().period >= 1);
                // Multipliers against the det identity: |m1 m2| equals
                // |det J| accumulated over the cycle.
                const auto& s = sinks.front();
                double logdet = 0.0;
                double th = s.theta, X = s.X;
                for (int i = 0; i < s.period; ++i) {
                    logdet += std::log(std::abs(jacobian(mm, th, X).det()));
                    const auto out = apply(mm, th, X);
                    th = out.theta;
                    X = out.X;
                }
                REQUIRE(std::log(s.mult_max * s.mult_min) == Approx(logdet).margin(1e-6));
            }
        }
        REQUIRE(found);
    }
}

TEST_CASE("bifurcation scan") {
    ReducedMap base = tangle_like();
    auto family = [&](double a) {
        ReducedMap m = base;
        m.a = a;
        return m;
    };
    ScanBudget budget;
    budget.lyap_iter = 4000;
    budget.sink_iter = 1500;
    budget.sink_grid = 16;
    budget.fullshift_samples = 96;
    const auto recs = bifurcation_scan(family, 0.0, kTwoPi, 101, budget, 42);
    REQUIRE(recs.size() == 101);
    // 2 pi periodicity: first and last records agree.
    REQUIRE(recs.front().outcome == recs.back().outcome);
    // The alternation: both full-shift and sink windows occur.
    int n_fs = 0, n_sink = 0;
    for (const auto& r : recs) {
        if (r.outcome == ScanOutcome::FullShift) ++n_fs;
        if (r.outcome == ScanOutcome::Sink) ++n_sink;
    }
    REQUIRE(n_fs > 0);
    REQUIRE(n_sink > 0);
    // Determinism: same seed, same records.
    const auto recs2 = bifurcation_scan(family, 0.0, kTwoPi, 101, budget, 42);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        REQUIRE(recs[i].outcome == recs2[i].outcome);
        if (std::isfinite(recs[i].lam1)) REQUIRE(recs[i].lam1 == recs2[i].lam1);
    }
    REQUIRE_THROWS_AS(bifurcation_scan(family, 0.0, 1.0, 20'000'000, budget, 1),
                      std::domain_error);
}
