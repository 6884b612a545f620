// tanglelab command-line front end: verification suites, constants,
// classification, map iteration, scans, and CSV/JSON export.
//
// Exit codes: 0 success, 1 domain error, 2 verification failure,
// 64 unknown command, 65 bad flag value.

#include <cstdio>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tanglelab/tanglelab.hpp"

namespace tl = tanglelab;
using nlohmann::ordered_json;

namespace {

struct GlobalOpts {
    double lambda = 0.05;
    double epsilon = 0.05;
    double omega = 1.0;
    double rho = 2.0;
    double mu = 1e-4;
    std::optional<double> gamma_lambda;
    std::string golden = "data/gamma_lambda.txt";
    std::string out = "-";
    std::string format = "json";
    std::uint64_t seed = 1;
    int threads = 0;
    double tol = 1e-10;
};

struct MapOpts {
    std::string preset;
    double a = 0.0, b = 0.01, c = 1.0, k = 0.05, rho = 2.0, wb = 1.0, ab = 1.05;
    // CLI option handles, to tell explicit overrides from defaults.
    CLI::Option* o_a = nullptr;
    CLI::Option* o_b = nullptr;
    CLI::Option* o_c = nullptr;
    CLI::Option* o_k = nullptr;
    CLI::Option* o_rho = nullptr;
    CLI::Option* o_wb = nullptr;
    CLI::Option* o_ab = nullptr;
};

std::unique_ptr<tl::ConstantsPipeline> make_pipeline(const GlobalOpts& g) {
    tl::PipelineOptions opt;
    opt.golden_path = g.golden;
    opt.quad_tol = g.tol;
    auto p = std::make_unique<tl::ConstantsPipeline>(g.lambda, g.epsilon, opt);
    if (g.gamma_lambda && std::abs(*g.gamma_lambda - p->gamma_lambda()) > 1e-6)
        std::fprintf(stderr, "note: --gamma-lambda overrides the computed value\n");
    return p;
}

tl::ReducedMap resolve_map(const GlobalOpts& g, const MapOpts& m,
                           std::unique_ptr<tl::ConstantsPipeline>& pipeline_out) {
    tl::ReducedMap map;
    if (!m.preset.empty()) {
        bool found = false;
        for (const auto& p : tl::scan_presets()) {
            if (p.name == m.preset) {
                GlobalOpts pg = g;
                pg.lambda = p.lambda;
                pg.epsilon = p.epsilon;
                pipeline_out = make_pipeline(pg);
                map = tl::resolve_preset(m.preset, *pipeline_out).map;
                found = true;
                break;
            }
        }
        if (!found) throw std::domain_error("unknown preset " + m.preset);
    } else {
        map.a = m.a;
        map.b = m.b;
        map.c = m.c;
        map.k = m.k;
        map.rho = m.rho;
        map.omega_over_beta = m.wb;
        map.alpha_over_beta = m.ab;
        return map;
    }
    // Explicit --map-* flags override preset fields.
    if (m.o_a && m.o_a->count()) map.a = m.a;
    if (m.o_b && m.o_b->count()) map.b = m.b;
    if (m.o_c && m.o_c->count()) map.c = m.c;
    if (m.o_k && m.o_k->count()) map.k = m.k;
    if (m.o_rho && m.o_rho->count()) map.rho = m.rho;
    if (m.o_wb && m.o_wb->count()) map.omega_over_beta = m.wb;
    if (m.o_ab && m.o_ab->count()) map.alpha_over_beta = m.ab;
    return map;
}

void add_map_flags(CLI::App* cmd, MapOpts& m) {
    cmd->add_option("--preset", m.preset, "named preset (tangle1, dcband1, curve1)");
    m.o_a = cmd->add_option("--map-a", m.a, "phase constant a");
    m.o_b = cmd->add_option("--map-b", m.b, "contraction amplitude b");
    m.o_c = cmd->add_option("--map-c", m.c, "forcing amplitude c");
    m.o_k = cmd->add_option("--map-k", m.k, "shear coefficient k");
    m.o_rho = cmd->add_option("--map-rho", m.rho, "offset rho");
    m.o_wb = cmd->add_option("--map-wb", m.wb, "omega/beta");
    m.o_ab = cmd->add_option("--map-ab", m.ab, "alpha/beta");
}

std::string json_out(const ordered_json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- commands

int cmd_verify_integrals(const GlobalOpts& g) {
    const auto data = tl::sample_orbit(0.0, 0.0, g.epsilon, 0.05);
    bool all = true;
    std::ostringstream os;
    auto line = [&](const char* name, bool pass, const std::string& detail) {
        os << (pass ? "PASS  " : "FAIL  ") << name << "  " << detail << "\n";
        all = all && pass;
    };
    {
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double s = -5.0 + 0.1 * i;
            const double k = -tl::quad([](double t) { return tl::E_of_s(t); }, 0.0, s, g.tol);
            worst = std::max(worst, std::abs(k - tl::K_of_s(s)));
        }
        line("K-identity", worst < 1e-8, "max |K - quad(-int E)| = " + tl::fp17(worst));
    }
    {
        const double A = tl::compute_A(data, g.tol);
        line("A=16/15", std::abs(A - 16.0 / 15.0) < 1e-6, "A = " + tl::fp17(A));
    }
    {
        bool pass = true;
        std::string which;
        for (double w : {0.5, 1.0, 2.0, 5.0}) {
            const auto chk = tl::compute_CS_check(w, data, 1e-6, g.tol);
            pass = pass && chk.C_match == 'R' && chk.S_match == 'R';
            which += chk.C_match;
            which += chk.S_match;
        }
        line("C/S-closed-form", pass,
             "quadrature matches the corrected residue values (C=0, S with pi); codes=" + which);
    }
    tl::write_output(g.out, os.str());
    return all ? 0 : 2;
}

int cmd_gamma(const GlobalOpts& g, double root_tol) {
    const double gamma = tl::shoot_gamma(g.lambda, root_tol);
    ordered_json j = tl::make_json_object();
    j["lambda"] = g.lambda;
    j["gamma_lambda"] = gamma;
    j["root_tol"] = root_tol;
    j["bound_10_lambda"] = 10.0 * g.lambda;
    tl::write_output(g.out, json_out(j));
    return 0;
}

int cmd_orbit(const GlobalOpts& g, double ds) {
    tl::PipelineOptions opt;
    opt.golden_path = g.golden;
    opt.quad_tol = g.tol;
    opt.ds = ds;
    tl::ConstantsPipeline pipeline(g.lambda, g.epsilon, opt);
    const auto& d = pipeline.data();
    tl::CsvWriter csv({"s", "x", "y", "u", "v", "E"});
    for (std::size_t i = 0; i < d.grid.size(); ++i)
        csv.row({tl::fp17(d.grid[i]), tl::fp17(d.ell[i].x), tl::fp17(d.ell[i].y),
                 tl::fp17(d.tangent[i].x), tl::fp17(d.tangent[i].y), tl::fp17(d.weight[i])});
    std::ostringstream os;
    csv.write(os);
    tl::write_output(g.out, os.str());
    return 0;
}

int cmd_constants(const GlobalOpts& g) {
    auto pipeline = make_pipeline(g);
    const auto mc = pipeline->constants(g.omega, g.rho, g.mu);
    ordered_json j = tl::make_json_object();
    j["lambda"] = mc.lambda;
    j["epsilon"] = mc.epsilon;
    j["omega"] = mc.omega;
    j["mu"] = mc.mu;
    j["rho"] = mc.rho;
    j["alpha"] = mc.alpha;
    j["beta"] = mc.beta;
    j["gamma_lambda"] = mc.gamma_lambda;
    j["A"] = mc.A;
    j["C"] = mc.C;
    j["S"] = mc.S;
    j["A_L"] = mc.A_L;
    j["C_L"] = mc.C_L;
    j["S_L"] = mc.S_L;
    j["phiL_amplitude"] = mc.phiL_amplitude;
    j["c0"] = mc.c0;
    j["a"] = mc.a;
    j["a_mod"] = mc.a_mod;
    j["b"] = mc.b;
    j["c"] = mc.c;
    j["k"] = mc.k;
    j["P_L"] = mc.P_L;
    j["P_L_plus"] = mc.P_L_plus;
    j["L_minus"] = mc.L_minus;
    j["L_plus"] = mc.L_plus;
    tl::write_output(g.out, json_out(j));
    return 0;
}

int cmd_classify(const GlobalOpts& g, const std::vector<double>& grid_omega,
                 const std::vector<double>& grid_rho) {
    auto pipeline = make_pipeline(g);
    if (grid_omega.empty()) {
        const auto r = tl::classify(*pipeline, g.omega, g.rho, g.mu);
        ordered_json j = tl::make_json_object();
        j["omega"] = g.omega;
        j["rho"] = g.rho;
        j["mu"] = g.mu;
        j["tag"] = tl::to_string(r.tag);
        j["horseshoe_omega_ok"] = r.horseshoe_omega_ok;
        j["s_star"] = r.s_star;
        j["s_upper"] = r.s_upper;
        j["q"] = r.q;
        j["rho0"] = r.rho0;
        j["margin_s_star"] = r.margin_s_star;
        j["margin_s"] = r.margin_s;
        j["margin_q"] = r.margin_q;
        tl::write_output(g.out, json_out(j));
        return 0;
    }
    // Grid mode: omega and rho given as lo:hi:n, worker pool over cells.
    const auto span = [](const std::vector<double>& v, int i, int n) {
        return n > 1 ? v[0] + (v[1] - v[0]) * i / (n - 1) : v[0];
    };
    const int nw = static_cast<int>(grid_omega[2]);
    const int nr = static_cast<int>(grid_rho[2]);
    std::vector<tl::Regime> cells(static_cast<std::size_t>(nw) * nr);
    std::vector<std::pair<double, double>> pts(cells.size());
    tl::parallel_for(
        cells.size(),
        [&](std::size_t idx) {
            const int i = static_cast<int>(idx) / nr, jj = static_cast<int>(idx) % nr;
            const double w = span(grid_omega, i, nw);
            const double r = span(grid_rho, jj, nr);
            pts[idx] = {w, r};
            cells[idx] = tl::classify(*pipeline, w, r, g.mu);
        },
        g.threads);
    tl::CsvWriter csv({"omega", "rho", "tag", "s_star", "s_upper", "q", "margin_s_star",
                       "margin_s", "margin_q"});
    for (std::size_t idx = 0; idx < cells.size(); ++idx) {
        const auto& r = cells[idx];
        csv.row({tl::fp17(pts[idx].first), tl::fp17(pts[idx].second), tl::to_string(r.tag),
                 tl::fp17(r.s_star), tl::fp17(r.s_upper), tl::fp17(r.q),
                 tl::fp17(r.margin_s_star), tl::fp17(r.margin_s), tl::fp17(r.margin_q)});
    }
    std::ostringstream os;
    csv.write(os);
    tl::write_output(g.out, os.str());
    return 0;
}

int cmd_iterate(const GlobalOpts& g, const MapOpts& mo, double theta0, double x0, long n) {
    std::unique_ptr<tl::ConstantsPipeline> pipe;
    const auto m = resolve_map(g, mo, pipe);
    tl::CsvWriter csv({"i", "theta", "X", "F", "tag"});
    double th = theta0, X = x0;
    for (long i = 0; i < n; ++i) {
        const auto out = tl::apply(m, th, X);
        const char* tag = out.tag == tl::MapOutcome::Tag::Escape
                              ? "escape"
                              : (out.tag == tl::MapOutcome::Tag::RangeExit ? "range-exit" : "next");
        csv.row({std::to_string(i), tl::fp17(th), tl::fp17(X), tl::fp17(out.F), tag});
        if (out.escaped()) break;
        th = out.theta;
        X = out.X;
    }
    std::ostringstream os;
    csv.write(os);
    tl::write_output(g.out, os.str());
    return 0;
}

int cmd_scan(const GlobalOpts& g, const MapOpts& mo, const std::string& param, double from,
             double to, int steps) {
    std::unique_ptr<tl::ConstantsPipeline> pipe;
    const auto base = resolve_map(g, mo, pipe);
    std::function<tl::ReducedMap(double)> family;
    if (param == "a") {
        family = [base](double v) {
            auto m = base;
            m.a = v;
            return m;
        };
    } else if (param == "mu") {
        if (!pipe) throw std::domain_error("scan over mu requires --preset");
        auto* pipeline = pipe.get();
        const auto def = tl::resolve_preset(mo.preset, *pipeline);
        family = [pipeline, def](double v) {
            return tl::ReducedMap::from_constants(
                pipeline->constants(def.params.omega, def.params.rho, v));
        };
    } else {
        throw std::domain_error("scan: --param must be a or mu");
    }
    const auto recs = tl::bifurcation_scan(family, from, to, steps, {}, g.seed, g.threads);
    tl::CsvWriter csv({"a", "outcome", "lyap1", "lyap2", "rotation", "period", "branches"});
    for (const auto& r : recs)
        csv.row({tl::fp17(r.param), tl::to_string(r.outcome), tl::fp17(r.lam1), tl::fp17(r.lam2),
                 tl::fp17(r.rotation), std::to_string(r.period), std::to_string(r.branches)});
    std::ostringstream os;
    csv.write(os);
    tl::write_output(g.out, os.str());
    return 0;
}

int cmd_lyapunov(const GlobalOpts& g, const MapOpts& mo, double theta0, double x0, long n_iter,
                 long n_transient) {
    std::unique_ptr<tl::ConstantsPipeline> pipe;
    const auto m = resolve_map(g, mo, pipe);
    const auto r = tl::lyapunov(m, theta0, x0, n_iter, n_transient);
    ordered_json j = tl::make_json_object();
    j["lam1"] = r.lam1;
    j["lam2"] = r.lam2;
    j["avg_log_det"] = r.avg_log_det;
    j["sum_identity_residual"] =
        (r.escaped ? std::numeric_limits<double>::quiet_NaN()
                   : std::abs(r.lam1 + r.lam2 - r.avg_log_det));
    j["escaped"] = r.escaped;
    j["survival_steps"] = r.survival_steps;
    j["max_abs_X"] = r.max_abs_X;
    tl::write_output(g.out, json_out(j));
    return 0;
}

int cmd_curve(const GlobalOpts& g, const MapOpts& mo, int grid_n, double tol, int max_iter) {
    std::unique_ptr<tl::ConstantsPipeline> pipe;
    const auto m = resolve_map(g, mo, pipe);
    const auto r = tl::invariant_curve(m, grid_n, tol, max_iter);
    if (g.format == "csv") {
        tl::CsvWriter csv({"theta", "g"});
        for (std::size_t i = 0; i < r.theta.size(); ++i)
            csv.row({tl::fp17(r.theta[i]), tl::fp17(r.g[i])});
        std::ostringstream os;
        csv.write(os);
        tl::write_output(g.out, os.str());
        return r.converged ? 0 : 2;
    }
    ordered_json j = tl::make_json_object();
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["monotone"] = r.monotone;
    j["cone_ok"] = r.cone_ok;
    j["worst_slope"] = r.worst_slope;
    j["min_forward_gain"] = r.min_forward_gain;
    j["min_inverse_gain"] = r.min_inverse_gain;
    j["rotation"] = r.rotation;
    j["rotation_err"] = r.rotation_err;
    j["final_residual"] = r.residuals.empty() ? 0.0 : r.residuals.back();
    j["failure"] = r.failure;
    tl::write_output(g.out, json_out(j));
    return r.converged ? 0 : 2;
}

int cmd_shift_check(const GlobalOpts& g, const MapOpts& mo, int w_max, int samples) {
    std::unique_ptr<tl::ConstantsPipeline> pipe;
    const auto m = resolve_map(g, mo, pipe);
    const auto r = tl::verify_full_shift(m, w_max, samples);
    ordered_json j = tl::make_json_object();
    j["applicable"] = r.applicable;
    j["pass"] = r.pass;
    j["branches"] = r.branches;
    j["wraps_per_side"] = r.wraps_per_side;
    j["min_expansion"] = r.min_expansion;
    j["expansion_margin"] = r.expansion_margin;
    j["fold_margin"] = r.fold_margin;
    j["vertical_contraction"] = r.vertical_contraction;
    j["note"] = r.note;
    tl::write_output(g.out, json_out(j));
    return (r.applicable && !r.pass) ? 2 : 0;
}

int cmd_sinks(const GlobalOpts& g, const MapOpts& mo, int grid, long n_iter) {
    std::unique_ptr<tl::ConstantsPipeline> pipe;
    const auto m = resolve_map(g, mo, pipe);
    const auto sinks = tl::find_sinks(m, grid, n_iter);
    tl::CsvWriter csv({"period", "theta", "X", "mult_max", "mult_min", "basin"});
    for (const auto& s : sinks)
        csv.row({std::to_string(s.period), tl::fp17(s.theta), tl::fp17(s.X), tl::fp17(s.mult_max),
                 tl::fp17(s.mult_min), std::to_string(s.basin)});
    std::ostringstream os;
    csv.write(os);
    tl::write_output(g.out, os.str());
    return 0;
}

int cmd_section_compare(const GlobalOpts& g, int samples, const std::string& dump) {
    auto pipeline = make_pipeline(g);
    const auto mc = pipeline->constants(g.omega, g.rho, g.mu);
    const auto par = pipeline->params(g.omega, g.rho, g.mu);
    const auto spec = tl::SectionSpec::from_params(par);
    std::vector<tl::CompareSample> samples_vec;
    const auto st = tl::compare_reduced(par, spec, mc, samples, g.seed, 1e-11,
                                        dump.empty() ? nullptr : &samples_vec);
    if (!dump.empty()) {
        tl::CsvWriter csv({"theta", "X", "tag", "reduced_escape", "theta1_numeric",
                           "theta1_reduced", "X1_numeric", "X1_reduced"});
        for (const auto& s : samples_vec)
            csv.row({tl::fp17(s.theta), tl::fp17(s.X), tl::to_string(s.tag),
                     s.reduced_escape ? "1" : "0", tl::fp17(s.theta1_numeric),
                     tl::fp17(s.theta1_reduced), tl::fp17(s.X1_numeric),
                     tl::fp17(s.X1_reduced)});
        csv.write_file(dump);
    }
    ordered_json j = tl::make_json_object();
    j["n"] = st.n;
    j["n_both_returned"] = st.n_both_returned;
    j["n_numeric_escape"] = st.n_numeric_escape;
    j["n_reduced_escape"] = st.n_reduced_escape;
    j["n_miss"] = st.n_miss;
    j["n_sign_mismatch"] = st.n_sign_mismatch;
    j["n_k1_exceeded"] = st.n_k1_exceeded;
    j["escape_agreement"] = st.escape_agreement;
    j["theta_err_median"] = st.theta_err_median;
    j["theta_err_max"] = st.theta_err_max;
    j["lnX_err_median"] = st.lnX_err_median;
    j["lnX_err_max"] = st.lnX_err_max;
    tl::write_output(g.out, json_out(j));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tanglelab: forced Duffing homoclinic-tangle toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.set_config("--config", "", "read options from a key = value file");
    app.allow_config_extras(CLI::config_extras_mode::error);

    GlobalOpts g;
    app.add_option("--lambda", g.lambda, "damping coefficient");
    app.add_option("--eps", g.epsilon, "saddle neighborhood radius");
    app.add_option("--omega", g.omega, "forcing frequency");
    app.add_option("--rho", g.rho, "unfolding offset");
    app.add_option("--mu", g.mu, "forcing amplitude");
    double gamma_override = 0.0;
    auto* gopt = app.add_option("--gamma-lambda", gamma_override, "override gamma_lambda");
    app.add_option("--golden", g.golden, "gamma_lambda golden table path");
    app.add_option("--out", g.out, "output path (- for stdout)");
    app.add_option("--format", g.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", g.seed, "PRNG seed");
    app.add_option("--threads", g.threads, "worker threads (default TANGLELAB_THREADS)");
    app.add_option("--tol", g.tol, "quadrature tolerance");

    auto* c_verify = app.add_subcommand("verify-integrals", "closed-form vs quadrature checks");
    auto* c_gamma = app.add_subcommand("gamma", "shoot the homoclinic gamma_lambda");
    double root_tol = 1e-10;
    c_gamma->add_option("--root-tol", root_tol, "root tolerance");
    auto* c_orbit = app.add_subcommand("orbit", "sampled homoclinic orbit as CSV");
    double ds = 0.05;
    c_orbit->add_option("--ds", ds, "sample step");
    auto* c_const = app.add_subcommand("constants", "melnikov and reduced-map constants");
    auto* c_class = app.add_subcommand("classify", "regime classification");
    std::vector<double> grid_omega, grid_rho;
    c_class->add_option("--grid-omega", grid_omega, "lo hi n")->expected(3);
    c_class->add_option("--grid-rho", grid_rho, "lo hi n")->expected(3);

    MapOpts mo_iter, mo_scan, mo_lyap, mo_curve, mo_shift, mo_sinks;
    auto* c_iter = app.add_subcommand("iterate", "iterate the reduced map");
    add_map_flags(c_iter, mo_iter);
    double theta0 = 0.1, x0 = 0.0;
    long n_steps = 100;
    c_iter->add_option("--theta0", theta0, "initial angle");
    c_iter->add_option("--x0", x0, "initial height");
    c_iter->add_option("--n", n_steps, "iterations");

    auto* c_scan = app.add_subcommand("scan", "bifurcation scan over a or mu");
    add_map_flags(c_scan, mo_scan);
    std::string scan_param = "a";
    double scan_from = 0.0, scan_to = tl::kTwoPi;
    int scan_steps = 200;
    c_scan->add_option("--param", scan_param, "a or mu");
    c_scan->add_option("--from", scan_from, "start value");
    c_scan->add_option("--to", scan_to, "end value");
    c_scan->add_option("--steps", scan_steps, "grid points");

    auto* c_lyap = app.add_subcommand("lyapunov", "lyapunov exponents of one orbit");
    add_map_flags(c_lyap, mo_lyap);
    double ly_theta0 = 0.1, ly_x0 = 0.0;
    long ly_iter = 100000, ly_trans = 1000;
    c_lyap->add_option("--theta0", ly_theta0, "initial angle");
    c_lyap->add_option("--x0", ly_x0, "initial height");
    c_lyap->add_option("--n-iter", ly_iter, "iterations");
    c_lyap->add_option("--n-transient", ly_trans, "transient iterations");

    auto* c_curve = app.add_subcommand("curve", "attracting invariant curve (graph transform)");
    add_map_flags(c_curve, mo_curve);
    int curve_grid = 2048, curve_max_iter = 500;
    double curve_tol = 1e-10;
    c_curve->add_option("--grid-n", curve_grid, "theta grid size");
    c_curve->add_option("--curve-tol", curve_tol, "sup-residual tolerance");
    c_curve->add_option("--max-iter", curve_max_iter, "max graph-transform iterations");

    auto* c_shift = app.add_subcommand("shift-check", "full-shift certification");
    add_map_flags(c_shift, mo_shift);
    int w_max = 20, shift_samples = 512;
    c_shift->add_option("--w-max", w_max, "wrap budget per side");
    c_shift->add_option("--samples", shift_samples, "expansion samples per branch");

    auto* c_sinks = app.add_subcommand("sinks", "stable periodic orbits");
    add_map_flags(c_sinks, mo_sinks);
    int sink_grid = 64;
    long sink_iter = 4000;
    c_sinks->add_option("--grid", sink_grid, "seed grid size");
    c_sinks->add_option("--n-iter", sink_iter, "iterations per seed");

    auto* c_sec = app.add_subcommand("section-compare", "numeric return map vs reduction");
    int sec_samples = 100;
    std::string sec_dump;
    c_sec->add_option("--samples", sec_samples, "sample count");
    c_sec->add_option("--dump", sec_dump, "per-sample CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ExtrasError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 64;
    } catch (const CLI::RequiredError& e) {
        // An unmatched or missing subcommand surfaces as a requirement
        // failure; that is the unknown-command case of the exit contract.
        std::fprintf(stderr, "%s\n", e.what());
        return 64;
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 65;
    }
    if (gopt->count() > 0) g.gamma_lambda = gamma_override;

    try {
        if (c_verify->parsed()) return cmd_verify_integrals(g);
        if (c_gamma->parsed()) return cmd_gamma(g, root_tol);
        if (c_orbit->parsed()) return cmd_orbit(g, ds);
        if (c_const->parsed()) return cmd_constants(g);
        if (c_class->parsed()) {
            if (grid_omega.empty() != grid_rho.empty())
                throw std::domain_error("classify: --grid-omega and --grid-rho come together");
            return cmd_classify(g, grid_omega, grid_rho);
        }
        if (c_iter->parsed()) return cmd_iterate(g, mo_iter, theta0, x0, n_steps);
        if (c_scan->parsed()) return cmd_scan(g, mo_scan, scan_param, scan_from, scan_to, scan_steps);
        if (c_lyap->parsed()) return cmd_lyapunov(g, mo_lyap, ly_theta0, ly_x0, ly_iter, ly_trans);
        if (c_curve->parsed()) return cmd_curve(g, mo_curve, curve_grid, curve_tol, curve_max_iter);
        if (c_shift->parsed()) return cmd_shift_check(g, mo_shift, w_max, shift_samples);
        if (c_sinks->parsed()) return cmd_sinks(g, mo_sinks, sink_grid, sink_iter);
        if (c_sec->parsed()) return cmd_section_compare(g, sec_samples, sec_dump);
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 64;
}
