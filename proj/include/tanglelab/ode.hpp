#pragma once

// Adaptive Dormand-Prince 5(4) integration with dense output and section-event
// location on the dense interpolant.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tanglelab/roots.hpp"

namespace tanglelab {

struct integration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct no_crossing_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct tangential_crossing_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <std::size_t N>
using state_t = std::array<double, N>;

namespace detail {

// Dormand-Prince coefficients.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
// 4th-order embedded weights.
inline constexpr double dp_b4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
// Dense-output weights (Hairer's rcont5 construction).
inline constexpr double dp_d[7] = {-12715105075.0 / 11282082432.0,
                                   0.0,
                                   87487479700.0 / 32700410799.0,
                                   -10690763975.0 / 1880347072.0,
                                   701980252875.0 / 199316789632.0,
                                   -1453857185.0 / 822651844.0,
                                   69997945.0 / 29380423.0};

}  // namespace detail

template <std::size_t N>
struct Trajectory {
    struct DenseStep {
        state_t<N> r1, r2, r3, r4, r5;
    };

    std::vector<double> times;       // node times, monotone in integration direction
    std::vector<state_t<N>> states;  // states at node times
    std::vector<DenseStep> dense;    // one record per accepted step

    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
    const state_t<N>& y_end() const { return states.back(); }
    int direction() const { return times.back() >= times.front() ? 1 : -1; }

    bool contains(double t) const {
        const int d = direction();
        return d > 0 ? (t >= times.front() && t <= times.back())
                     : (t <= times.front() && t >= times.back());
    }

    static state_t<N> eval_step(const DenseStep& r, double th) {
        const double th1 = 1.0 - th;
        state_t<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = r.r1[i] + th * (r.r2[i] + th1 * (r.r3[i] + th * (r.r4[i] + th1 * r.r5[i])));
        return y;
    }

    // Dense evaluation; t must lie inside the integrated span.
    state_t<N> eval(double t) const {
        const int d = direction();
        std::size_t lo = 0, hi = times.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if ((d > 0 && times[mid] <= t) || (d < 0 && times[mid] >= t))
                lo = mid;
            else
                hi = mid;
        }
        const double h = times[lo + 1] - times[lo];
        if (h == 0.0) return dense[lo].r1;
        return eval_step(dense[lo], (t - times[lo]) / h);
    }
};

struct IntegrateOptions {
    double h_init = 0.0;  // 0 = automatic
    double h_max = 0.0;   // 0 = unlimited
    long max_steps = 20'000'000;
};

namespace detail {

// One-step Dormand-Prince engine shared by integrate() and the event loop.
template <std::size_t N, class F>
class Dopri5Stepper {
  public:
    Dopri5Stepper(F& f, const state_t<N>& y0, double t0, double t_final, double tol,
                  const IntegrateOptions& opt)
        : f_(f), t_(t0), t_final_(t_final), tol_(tol), opt_(opt) {
        y_ = y0;
        dir_ = (t_final >= t0) ? 1.0 : -1.0;
        k0_ = f_(t_, y_);
        check_finite(y_);
        check_finite(k0_);
        h_ = opt.h_init;
        if (h_ <= 0.0) {
            double ny = 0.0, nf = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                ny = std::max(ny, std::abs(y_[i]));
                nf = std::max(nf, std::abs(k0_[i]));
            }
            h_ = std::min(0.01 * (ny + 1.0) / (nf + 1e-6), span());
            h_ = std::max(h_, 1e-12);
        }
        if (opt.h_max > 0.0) h_ = std::min(h_, opt.h_max);
    }

    double t() const { return t_; }
    const state_t<N>& y() const { return y_; }
    bool done() const { return dir_ * (t_ - t_final_) >= 0.0; }

    // Advances one accepted step; returns dense data and fills step bounds.
    typename Trajectory<N>::DenseStep step(double& t_a, double& t_b) {
        for (int attempt = 0; attempt < 400; ++attempt) {
            double h = h_;
            if (opt_.h_max > 0.0) h = std::min(h, opt_.h_max);
            h = std::min(h, std::abs(t_final_ - t_));
            if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_)))
                throw integration_error("integrate: step size underflow (blow-up or stiffness)");

            const double hs = dir_ * h;
            state_t<N> k[7];
            k[0] = k0_;
            state_t<N> ytmp{};
            for (int s = 1; s < 7; ++s) {
                for (std::size_t i = 0; i < N; ++i) {
                    double acc = 0.0;
                    for (int j = 0; j < s; ++j) acc += dp_a[s][j] * k[j][i];
                    ytmp[i] = y_[i] + hs * acc;
                }
                k[s] = f_(t_ + dp_c[s] * hs, ytmp);
            }
            const state_t<N>& y1 = ytmp;  // FSAL: 7th stage argument is the 5th-order result
            double err = 0.0;
            bool ok = true;
            for (std::size_t i = 0; i < N; ++i) {
                if (!std::isfinite(y1[i])) ok = false;
                double acc4 = 0.0;
                for (int j = 0; j < 7; ++j) acc4 += dp_b4[j] * k[j][i];
                const double e = y1[i] - (y_[i] + hs * acc4);
                const double sc = tol_ + tol_ * std::max(std::abs(y_[i]), std::abs(y1[i]));
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / N);
            if (!ok || !std::isfinite(err)) {
                h_ = h * 0.25;
                continue;
            }
            if (err <= 1.0) {
                typename Trajectory<N>::DenseStep d;
                for (std::size_t i = 0; i < N; ++i) {
                    const double dy = y1[i] - y_[i];
                    double acc = 0.0;
                    for (int j = 0; j < 7; ++j) acc += dp_d[j] * k[j][i];
                    d.r1[i] = y_[i];
                    d.r2[i] = dy;
                    d.r3[i] = hs * k[0][i] - dy;
                    d.r4[i] = 2.0 * dy - hs * (k[0][i] + k[6][i]);
                    d.r5[i] = hs * acc;
                }
                t_a = t_;
                t_b = t_ + hs;
                t_ = t_b;
                y_ = y1;
                k0_ = k[6];
                h_ = h * std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
                return d;
            }
            h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
        }
        throw integration_error("integrate: repeated step rejection");
    }

  private:
    double span() const { return std::max(std::abs(t_final_ - t_), 1e-300); }
    static void check_finite(const state_t<N>& v) {
        for (double x : v)
            if (!std::isfinite(x)) throw integration_error("integrate: non-finite state");
    }

    F& f_;
    state_t<N> y_, k0_;
    double t_, t_final_, tol_, dir_, h_;
    IntegrateOptions opt_;
};

}  // namespace detail

// Integrates y' = f(t, y) from t0 to t1 with per-step mixed error control
// (atol = rtol = tol). Throws integration_error on step underflow or
// non-finite state.
template <std::size_t N, class F>
Trajectory<N> integrate(F&& f, const state_t<N>& y0, double t0, double t1, double tol,
                        const IntegrateOptions& opt = {}) {
    if (!(tol >= 1e-13 && tol <= 1e-3))
        throw std::domain_error("integrate: tol must lie in [1e-13, 1e-3]");
    Trajectory<N> traj;
    traj.times.push_back(t0);
    traj.states.push_back(y0);
    if (t1 == t0) {
        traj.times.push_back(t0);
        traj.states.push_back(y0);
        traj.dense.push_back({y0, {}, {}, {}, {}});
        return traj;
    }
    detail::Dopri5Stepper<N, F> st(f, y0, t0, t1, tol, opt);
    long steps = 0;
    while (!st.done()) {
        if (++steps > opt.max_steps) throw integration_error("integrate: max step count exceeded");
        double ta, tb;
        auto d = st.step(ta, tb);
        traj.times.push_back(tb);
        traj.states.push_back(st.y());
        traj.dense.push_back(d);
    }
    return traj;
}

template <std::size_t N>
struct SectionEvent {
    double t = 0.0;
    state_t<N> y{};
    int direction = 0;  // +1: section function increasing, -1: decreasing
    double dgdt = 0.0;
    int which = 0;  // index of the triggered section function
};

template <std::size_t N>
struct SectionFn {
    std::function<double(const state_t<N>&)> g;
    int direction = 0;  // +1, -1 or 0 = either
};

// Integrates until the first directional zero crossing of any supplied section
// function. Crossings are bracketed on four sub-samples per accepted step and
// refined on the dense interpolant to 1e-10 in time. A crossing with
// |dg/dt| < tangent_tol (absolute) is reported as tangential.
template <std::size_t N, class F>
SectionEvent<N> integrate_to_any_section(F&& f, const state_t<N>& y0, double t0, double t_max,
                                         const std::vector<SectionFn<N>>& sections, double tol,
                                         double t_arm = 0.0,
                                         const std::function<bool(const state_t<N>&)>& escape = {},
                                         Trajectory<N>* out_traj = nullptr,
                                         const IntegrateOptions& opt = {},
                                         double tangent_tol = 1e-7) {
    if (sections.empty()) throw std::domain_error("integrate_to_any_section: no sections");
    if (!(tol >= 1e-13 && tol <= 1e-3))
        throw std::domain_error("integrate_to_any_section: tol must lie in [1e-13, 1e-3]");

    detail::Dopri5Stepper<N, F> st(f, y0, t0, t_max, tol, opt);
    const std::size_t ns = sections.size();
    std::vector<double> gprev(ns);
    for (std::size_t s = 0; s < ns; ++s) gprev[s] = sections[s].g(y0);

    if (out_traj) {
        out_traj->times.assign(1, t0);
        out_traj->states.assign(1, y0);
        out_traj->dense.clear();
    }

    const double dir = (t_max >= t0) ? 1.0 : -1.0;
    long steps = 0;
    while (!st.done()) {
        if (++steps > opt.max_steps)
            throw integration_error("integrate_to_any_section: max step count exceeded");
        double ta, tb;
        auto d = st.step(ta, tb);
        const double h = tb - ta;

        for (std::size_t s = 0; s < ns; ++s) {
            double tp = ta, gp = gprev[s];
            for (int sub = 1; sub <= 4; ++sub) {
                const double tc = ta + h * (sub / 4.0);
                const double gc = sections[s].g(Trajectory<N>::eval_step(d, sub / 4.0));
                if ((gp < 0.0 && gc >= 0.0) || (gp > 0.0 && gc <= 0.0)) {
                    const int cross_dir = (gc >= gp) ? 1 : -1;
                    const bool armed = dir > 0 ? (tc > t_arm) : (tc < t_arm);
                    if (armed && (sections[s].direction == 0 || sections[s].direction == cross_dir)) {
                        auto gf = [&](double tt) {
                            return sections[s].g(Trajectory<N>::eval_step(d, (tt - ta) / h));
                        };
                        const double tstar = find_root(gf, tp, tc, 1e-10);
                        const double dt = std::max({std::abs(h) * 1e-5, 1e-9 * std::abs(tstar), 1e-12});
                        const double lo = std::clamp(tstar - dt, std::min(ta, tb), std::max(ta, tb));
                        const double hi = std::clamp(tstar + dt, std::min(ta, tb), std::max(ta, tb));
                        const double dgdt = (gf(hi) - gf(lo)) / (hi - lo);
                        if (std::abs(dgdt) < tangent_tol)
                            throw tangential_crossing_error(
                                "integrate_to_any_section: tangential crossing");
                        SectionEvent<N> ev;
                        ev.t = tstar;
                        ev.y = Trajectory<N>::eval_step(d, (tstar - ta) / h);
                        ev.direction = cross_dir;
                        ev.dgdt = dgdt;
                        ev.which = static_cast<int>(s);
                        if (out_traj) {
                            // Keep the step containing the event so dense
                            // evaluation covers the crossing time.
                            out_traj->times.push_back(tb);
                            out_traj->states.push_back(st.y());
                            out_traj->dense.push_back(d);
                        }
                        return ev;
                    }
                }
                gp = gc;
                tp = tc;
            }
            gprev[s] = gp;
        }

        if (out_traj) {
            out_traj->times.push_back(tb);
            out_traj->states.push_back(st.y());
            out_traj->dense.push_back(d);
        }
        if (escape && escape(st.y()))
            throw integration_error("integrate_to_any_section: escaped working box");
    }
    throw no_crossing_error("integrate_to_any_section: no crossing before t_max");
}

template <std::size_t N, class F, class G>
SectionEvent<N> integrate_to_section(F&& f, const state_t<N>& y0, G&& g, int direction, double tol,
                                     double t0, double t_max, double t_arm = 0.0,
                                     const std::function<bool(const state_t<N>&)>& escape = {},
                                     Trajectory<N>* out_traj = nullptr) {
    std::vector<SectionFn<N>> fns;
    fns.push_back({std::function<double(const state_t<N>&)>(g), direction});
    return integrate_to_any_section(f, y0, t0, t_max, fns, tol, t_arm, escape, out_traj);
}

}  // namespace tanglelab
