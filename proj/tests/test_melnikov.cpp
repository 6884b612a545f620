#include <catch2/catch_amalgamated.hpp>

#include "tanglelab/homoclinic.hpp"
#include "tanglelab/melnikov.hpp"
#include "tanglelab/quadrature.hpp"

using namespace tanglelab;
using Catch::Approx;

namespace {

const HomoclinicData& loop0() {
    static const HomoclinicData d = sample_orbit(0.0, 0.0, 0.05, 0.05);
    return d;
}

const HomoclinicData& loop005() {
    static const HomoclinicData d = [] {
        const double g = shoot_gamma(0.05, 1e-11);
        return sample_orbit(0.05, g, 0.05, 0.05);
    }();
    return d;
}

}  // namespace

TEST_CASE("E and K closed forms") {
    REQUIRE(E_of_s(0.0) == 0.0);
    for (double s = 0.2; s < 6.0; s += 0.43) REQUIRE(std::abs(E_of_s(s) + E_of_s(-s)) < 1e-12);
    for (double s = 0.2; s < 6.0; s += 0.43) REQUIRE(std::abs(K_of_s(s) - K_of_s(-s)) < 1e-12);
    REQUIRE(K_of_s(0.0) == Approx(0.0).margin(1e-14));
    REQUIRE(K_of_s(1.0) == Approx(-0.6845138757).margin(1e-8));

    // K' = -E by central differences.
    for (double s = -5.0; s <= 5.0; s += 0.5) {
        const double h = 1e-6;
        const double kp = (K_of_s(s + h) - K_of_s(s - h)) / (2.0 * h);
        REQUIRE(kp == Approx(-E_of_s(s)).margin(2e-7));
    }
    // E(1) equals the numeric derivative of -K.
    {
        const double h = 1e-5;
        const double d = -(K_of_s(1.0 + h) - K_of_s(1.0 - h)) / (2.0 * h);
        REQUIRE(E_of_s(1.0) == Approx(d).margin(1e-8));
    }

    // quad(-int_0^s E) = K(s) on the acceptance grid.
    for (double s = -5.0; s <= 5.0; s += 1.0) {
        const double k = -quad([](double t) { return E_of_s(t); }, 0.0, s, 1e-11);
        REQUIRE(std::abs(k - K_of_s(s)) < 1e-8);
    }
}

TEST_CASE("H functions at lambda = 0") {
    const auto& d = loop0();
    // H2 = (1/2)(u+v)(a+b)^2 and H1 = (1/2)(u+v)(a+b)^2(b-a) at alpha = 1:
    // the same proportionality constant appears in both.
    for (double s : {-2.0, -0.7, 0.4, 1.3, 3.0}) {
        const auto h = H_functions(s, d);
        const Vec2 l = unperturbed_orbit(s);
        const Vec2 t = unperturbed_tangent(s);
        const double base = (t.x + t.y) * (l.x + l.y) * (l.x + l.y);
        REQUIRE(h.H2 == Approx(0.5 * base).margin(1e-10));
        REQUIRE(h.H1 == Approx(0.5 * base * (l.y - l.x)).margin(1e-10));
    }
    // u(0) = -v(0) kills H at the apex; the tails decay like |ell|^2.
    REQUIRE(std::abs(H_functions(0.0, d).H2) < 1e-12);
    REQUIRE(std::abs(H_functions(12.0, d).H1) < 1e-9);
    REQUIRE(std::abs(H_functions(-12.0, d).H2) < 1e-9);
}

TEST_CASE("drift integral A") {
    // Conservative normalization: exactly 16/15.
    REQUIRE(compute_A(loop0(), 1e-11) == Approx(16.0 / 15.0).margin(1e-6));
    // Continuity in lambda: within 25% at lambda = 0.05, and still > 1.
    const double A005 = compute_A(loop005(), 1e-10);
    REQUIRE(std::abs(A005 - 16.0 / 15.0) < 0.25 * 16.0 / 15.0);
    REQUIRE(A005 > 1.0);
}

TEST_CASE("oscillatory integrals C and S: quadrature decides the candidates") {
    // The cosine integrand is odd at lambda = 0, so C vanishes; the stated
    // lemma value is refuted and the corrected residue computation wins. For
    // S the quadrature picks the candidate carrying the extra factor pi.
    char c_choice = 0, s_choice = 0;
    for (double w : {0.5, 1.0, 2.0, 5.0}) {
        const auto chk = compute_CS_check(w, loop0(), 1e-6, 1e-11);
        REQUIRE(chk.C_match == 'R');
        REQUIRE(chk.S_match == 'R');
        if (!c_choice) c_choice = chk.C_match;
        if (!s_choice) s_choice = chk.S_match;
        REQUIRE(chk.C_match == c_choice);  // consistent choice across omega
        REQUIRE(chk.S_match == s_choice);
        REQUIRE(std::abs(chk.C_quad) < 1e-8);
        REQUIRE(chk.S_quad == Approx(std::numbers::pi * chk.S_lemma).epsilon(1e-6));
    }
    // Spot values: S(1) and the omega = 0 degeneracies.
    const auto cs1 = compute_CS(1.0, loop0(), 1e-11);
    REQUIRE(cs1.S == Approx(-1.180434945).margin(1e-7));
    const auto cs0 = compute_CS(0.0, loop0(), 1e-11);
    REQUIRE(std::abs(cs0.C) < 1e-9);
    REQUIRE(std::abs(cs0.S) < 1e-12);
}

TEST_CASE("splitting amplitude lower bound (documented deviation)") {
    // With the corrected C = 0 the paper's bound sqrt(C^2+S^2) >
    // 1/(e^{-w pi/2} + e^{w pi/2}) holds only once omega(1+omega^2) exceeds
    // 3/(2 sqrt2 pi) ~ 0.34; it genuinely fails as omega -> 0.
    for (double w = 0.4; w <= 10.0; w += 0.2) {
        const auto cs = compute_CS(w, loop0(), 1e-10);
        const double bound =
            1.0 / (std::exp(-0.5 * w * std::numbers::pi) + std::exp(0.5 * w * std::numbers::pi));
        REQUIRE(std::hypot(cs.C, cs.S) > bound);
    }
    const auto cs_small = compute_CS(0.1, loop0(), 1e-10);
    const double bound_small =
        1.0 / (std::exp(-0.05 * std::numbers::pi) + std::exp(0.05 * std::numbers::pi));
    REQUIRE(std::hypot(cs_small.C, cs_small.S) < bound_small);
}

TEST_CASE("finite-L constants at lambda = 0") {
    const auto& d = loop0();
    const auto f = finite_L_constants(d, 1.0, 1e-11);
    // P_L = 1 exactly at lambda = 0 (E odd over the symmetric interval), and
    // P_L+ sits at the ~1/eps scale.
    REQUIRE(f.P_L == Approx(1.0).margin(1e-9));
    REQUIRE(f.P_L_plus == Approx(1.0 / d.epsilon).epsilon(0.05));
    REQUIRE(f.A_L > 0.0);

    // Truncation error shrinks with eps: A_L -> A (same normalization).
    const double A = compute_A(d, 1e-11) / paper4_scale(d);
    const auto d2 = sample_orbit(0.0, 0.0, 0.01, 0.05);
    const auto f2 = finite_L_constants(d2, 1.0, 1e-11);
    REQUIRE(std::abs(f2.A_L - A) < std::abs(f.A_L - A));
    REQUIRE(std::abs(f2.A_L - A) < 40.0 * std::exp(-2.0 * d2.L_plus));
}

TEST_CASE("finite-L scalings over eps at lambda = 0.05") {
    const double g = shoot_gamma(0.05, 1e-11);
    const auto e = eigenvalues(0.05);
    const double ab = e.alpha / e.beta;
    std::vector<double> eps = {0.1, 0.05, 0.025};
    std::vector<double> logPp, logPL, logk, logeps;
    for (double ep : eps) {
        const auto d = sample_orbit(0.05, g, ep, 0.05);
        const auto f = finite_L_constants(d, 1.0, 1e-10);
        REQUIRE(f.P_L < 1.0);
        REQUIRE(f.P_L_plus > 1.0);
        logPp.push_back(std::log(f.P_L_plus));
        logPL.push_back(std::log(f.P_L));
        logk.push_back(std::log(f.P_L / (f.A_L * f.P_L_plus)));
        logeps.push_back(std::log(ep));
    }
    auto slope = [&](const std::vector<double>& y) {
        return (y.back() - y.front()) / (logeps.back() - logeps.front());
    };
    // P_L+ ~ eps^{-beta/alpha}, P_L ~ eps^{alpha/beta - beta/alpha}, k ~ eps^{alpha/beta}.
    REQUIRE(slope(logPp) == Approx(-1.0 / ab).epsilon(0.2));
    REQUIRE(slope(logPL) == Approx(ab - 1.0 / ab).epsilon(0.2));
    REQUIRE(slope(logk) == Approx(ab).epsilon(0.2));
}

TEST_CASE("map constants: structure and golden values") {
    const double g = shoot_gamma(0.05, 1e-11);
    const auto d = loop005();
    auto par = SystemParams::make(0.05, g, 5.0, 1e-4, 1.0, 0.05);
    const auto mc = map_constants(par, d, 1e-10);

    REQUIRE(mc.c > 0.0);
    REQUIRE(mc.alpha_over_beta > 1.0);

    // Exact mu-scalings: halving mu adds (omega/beta) ln 2 to a and scales b
    // by 2^{1 - alpha/beta}.
    auto par2 = SystemParams::make(0.05, g, 5.0, 0.5e-4, 1.0, 0.05);
    const auto mc2 = map_constants(par2, d, 1e-10);
    REQUIRE(mc2.a - mc.a == Approx((1.0 / mc.beta) * std::log(2.0)).margin(1e-9));
    REQUIRE(mc2.b / mc.b == Approx(std::pow(2.0, 1.0 - mc.alpha_over_beta)).margin(1e-9));

    // c is a ratio of the truncated integrals, so the reported (conservative-
    // normalization) values reproduce it.
    REQUIRE(mc.c == Approx(mc.phiL_amplitude / mc.A_L).margin(1e-12));

    // Golden values from the first verified run of this pipeline
    // (lambda = 0.05, eps = 0.05, omega = 1, mu = 1e-4), cross-validated by
    // the direct section comparison. The contraction constant b is O(10)
    // here, far from the b << 1 regime the annulus theorems need; that
    // requires exponentially small mu.
    REQUIRE(mc.c == Approx(1.10755).epsilon(2e-3));
    REQUIRE(mc.k == Approx(0.086550).epsilon(5e-3));
    REQUIRE(mc.b == Approx(7.6992).epsilon(5e-3));
    REQUIRE(mc.P_L == Approx(0.81677).epsilon(5e-3));
    REQUIRE(mc.P_L_plus == Approx(17.9107).epsilon(5e-3));

    // mu = 0 and stale data are rejected.
    REQUIRE_THROWS_AS(map_constants(SystemParams::make(0.05, g, 5.0, 0.0, 1.0, 0.05), d),
                      std::domain_error);
    REQUIRE_THROWS_AS(map_constants(SystemParams::make(0.05, g, 5.0, 1e-4, 1.0, 0.1), d),
                      std::domain_error);
}
