#pragma once

// Direct numerical return map through the Poincare sections: integrates the
// full forced system from Sigma- = {y = eps, |x| < mu} around the loop,
// through Sigma+ = {x = eps}, and back, in the linear eigen-frame chart.
// Cross-validates the analytic reduction.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tanglelab/core_model.hpp"
#include "tanglelab/melnikov.hpp"
#include "tanglelab/ode.hpp"
#include "tanglelab/retmap.hpp"
#include "tanglelab/parallel.hpp"
#include "tanglelab/rng.hpp"

namespace tanglelab {

struct SectionSpec {
    double epsilon = 0.05;
    double K1 = 10.0;           // allowed |Y|/mu on Sigma+ before flagging
    double t_outer_max = 80.0;  // budget for the global passage
    double t_inner_slack = 40.0;
    double box = 4.0;

    static SectionSpec from_params(const SystemParams& par) {
        SectionSpec s;
        s.epsilon = par.epsilon;
        return s;
    }
};

enum class ReturnTag { Returned, EscapeWrongSide, EscapeLeftWell, SectionMiss };

inline const char* to_string(ReturnTag t) {
    switch (t) {
        case ReturnTag::Returned: return "returned";
        case ReturnTag::EscapeWrongSide: return "escape-wrong-side";
        case ReturnTag::EscapeLeftWell: return "escape-left-well";
        default: return "section-miss";
    }
}

struct NumericReturn {
    ReturnTag tag = ReturnTag::SectionMiss;
    double theta1 = std::numeric_limits<double>::quiet_NaN();
    double X1 = std::numeric_limits<double>::quiet_NaN();  // scaled: x / mu
    double Y_entry = std::numeric_limits<double>::quiet_NaN();  // scaled y on Sigma+
    double t_outer = std::numeric_limits<double>::quiet_NaN();
    double t_inner = std::numeric_limits<double>::quiet_NaN();
    bool k1_exceeded = false;
    bool range_exit = false;  // |X1| > 1: outside the chart strip
};

// First return to Sigma- for a point (theta, X-scaled) on Sigma-.
inline NumericReturn numeric_return(const SystemParams& par, const SectionSpec& spec,
                                    double theta0, double X_scaled, double ode_tol = 1e-11) {
    if (!(par.mu > 0.0))
        throw std::domain_error("numeric_return: mu must be positive (section width mu)");
    const double al = par.alpha;
    const double eps = spec.epsilon;

    auto field = [&par](double, const state_t<3>& z) -> state_t<3> {
        const double q = z[0], p = z[1];
        return {p,
                -(par.lambda - par.gamma() * q * q) * p + q - q * q * q +
                    par.mu * q * q * std::sin(z[2]),
                par.omega};
    };
    auto xcoord = [al](const state_t<3>& z) {
        return (z[0] - al * z[1]) / (1.0 + al * al);
    };
    auto ycoord = [al](const state_t<3>& z) {
        return (al * z[0] + z[1]) / (1.0 + al * al);
    };
    const double box = spec.box;
    std::function<bool(const state_t<3>&)> escape_box = [box](const state_t<3>& z) {
        return std::abs(z[0]) > box || std::abs(z[1]) > box;
    };

    const Vec2 qp0 = xy_to_qp({par.mu * X_scaled, eps}, al);
    state_t<3> z0{qp0.x, qp0.y, theta0};

    NumericReturn nr;

    // Outer passage: around the loop until x falls through eps (Sigma+), with
    // a left-well guard.
    std::vector<SectionFn<3>> outer;
    outer.push_back({[&, al](const state_t<3>& z) { return xcoord(z) - eps; }, -1});
    outer.push_back({[](const state_t<3>& z) { return z[0]; }, -1});
    SectionEvent<3> ev;
    try {
        ev = integrate_to_any_section(field, z0, 0.0, spec.t_outer_max, outer, ode_tol, 0.0,
                                      escape_box);
    } catch (const no_crossing_error&) {
        nr.tag = ReturnTag::SectionMiss;
        return nr;
    } catch (const integration_error&) {
        nr.tag = ReturnTag::SectionMiss;
        return nr;
    }
    if (ev.which == 1) {
        nr.tag = ReturnTag::EscapeLeftWell;
        nr.t_outer = ev.t;
        return nr;
    }
    nr.t_outer = ev.t;
    nr.Y_entry = ycoord(ev.y) / par.mu;
    nr.k1_exceeded = std::abs(nr.Y_entry) > spec.K1;

    // Inner passage through the saddle neighborhood: exit at y = +eps
    // (return) or y = -eps (wrong side of the stable manifold).
    const double t_inner_max =
        ev.t + (std::log(eps / par.mu) + spec.t_inner_slack) / par.beta;
    std::vector<SectionFn<3>> inner;
    inner.push_back({[&, al](const state_t<3>& z) { return ycoord(z) - eps; }, +1});
    inner.push_back({[&, al](const state_t<3>& z) { return ycoord(z) + eps; }, -1});
    SectionEvent<3> ev2;
    try {
        ev2 = integrate_to_any_section(field, ev.y, ev.t, t_inner_max, inner, ode_tol, ev.t,
                                       escape_box);
    } catch (const no_crossing_error&) {
        nr.tag = ReturnTag::SectionMiss;
        return nr;
    } catch (const integration_error&) {
        nr.tag = ReturnTag::SectionMiss;
        return nr;
    }
    nr.t_inner = ev2.t - ev.t;
    if (ev2.which == 1) {
        nr.tag = ReturnTag::EscapeWrongSide;
        return nr;
    }
    nr.tag = ReturnTag::Returned;
    nr.theta1 = mod_2pi(ev2.y[2]);
    nr.X1 = xcoord(ev2.y) / par.mu;
    nr.range_exit = std::abs(nr.X1) > 1.0;
    return nr;
}

struct CompareStats {
    int n = 0;
    int n_both_returned = 0;
    int n_numeric_escape = 0;
    int n_reduced_escape = 0;
    int n_miss = 0;
    int n_sign_mismatch = 0;
    int n_k1_exceeded = 0;  // entry height beyond the derivation's K1 bound
    double escape_agreement = std::numeric_limits<double>::quiet_NaN();
    double theta_err_median = std::numeric_limits<double>::quiet_NaN();
    double theta_err_max = std::numeric_limits<double>::quiet_NaN();
    double lnX_err_median = std::numeric_limits<double>::quiet_NaN();
    double lnX_err_max = std::numeric_limits<double>::quiet_NaN();
};

struct CompareSample {
    double theta, X;
    ReturnTag tag;
    bool reduced_escape;
    double theta1_numeric, theta1_reduced;
    double X1_numeric, X1_reduced;
};

// Samples Sigma- and compares the direct numeric return against the reduced
// map built from the same constants. The reduced map's angle is shifted by
// omega L- + c0 relative to the section angle. Sample batches run on the
// worker pool; inputs are drawn up front so the result is independent of
// the thread count.
inline CompareStats compare_reduced(const SystemParams& par, const SectionSpec& spec,
                                    const MelnikovConstants& mc, int samples_n,
                                    std::uint64_t seed, double ode_tol = 1e-11,
                                    std::vector<CompareSample>* samples_out = nullptr,
                                    int threads = 0) {
    const ReducedMap m = ReducedMap::from_constants(mc);
    const double shift = par.omega * mc.L_minus + mc.c0;
    Rng rng(seed);
    std::vector<std::pair<double, double>> inputs(samples_n);
    for (auto& in : inputs) {
        in.first = rng.uniform(0.0, kTwoPi);
        in.second = rng.uniform(-1.0, 1.0);
    }
    std::vector<NumericReturn> returns(samples_n);
    parallel_for(
        static_cast<std::size_t>(samples_n),
        [&](std::size_t i) {
            returns[i] = numeric_return(par, spec, inputs[i].first, inputs[i].second, ode_tol);
        },
        threads);

    CompareStats st;
    st.n = samples_n;
    std::vector<double> theta_errs, lnx_errs;
    int agree = 0, decided = 0;
    for (int i = 0; i < samples_n; ++i) {
        const double theta = inputs[i].first;
        const double X = inputs[i].second;
        const auto& nr = returns[i];
        const auto red = apply(m, mod_2pi(theta + shift), X);
        const bool red_escape = red.escaped();
        if (samples_out)
            samples_out->push_back({theta, X, nr.tag, red_escape,
                                    nr.theta1, red_escape ? std::numeric_limits<double>::quiet_NaN()
                                                          : mod_2pi(red.theta - shift),
                                    nr.X1, red_escape ? std::numeric_limits<double>::quiet_NaN()
                                                      : red.X});
        if (nr.k1_exceeded) ++st.n_k1_exceeded;
        if (nr.tag == ReturnTag::SectionMiss) {
            ++st.n_miss;
            continue;
        }
        const bool num_escape = nr.tag != ReturnTag::Returned;
        ++decided;
        if (num_escape) ++st.n_numeric_escape;
        if (red_escape) ++st.n_reduced_escape;
        if (num_escape == red_escape) ++agree;
        if (!num_escape && !red_escape) {
            ++st.n_both_returned;
            const double pred_theta = mod_2pi(red.theta - shift);
            theta_errs.push_back(std::abs(circ_dist(nr.theta1, pred_theta)));
            if (nr.X1 * red.X < 0.0) ++st.n_sign_mismatch;
            if (nr.X1 != 0.0 && red.X > 0.0)
                lnx_errs.push_back(std::abs(std::log(std::abs(nr.X1)) - std::log(red.X)));
        }
    }
    auto median = [](std::vector<double>& v) {
        if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
        std::sort(v.begin(), v.end());
        const std::size_t k = v.size() / 2;
        return (v.size() % 2) ? v[k] : 0.5 * (v[k - 1] + v[k]);
    };
    if (decided > 0) st.escape_agreement = static_cast<double>(agree) / decided;
    if (!theta_errs.empty()) {
        st.theta_err_max = *std::max_element(theta_errs.begin(), theta_errs.end());
        st.theta_err_median = median(theta_errs);
    }
    if (!lnx_errs.empty()) {
        st.lnX_err_max = *std::max_element(lnx_errs.begin(), lnx_errs.end());
        st.lnX_err_median = median(lnx_errs);
    }
    return st;
}

}  // namespace tanglelab
