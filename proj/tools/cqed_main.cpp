// cqed — steady states of a single two-level emitter coupled to a
// Fabry-Perot or ring resonator, solved in both the single-mode (JC) and
// cascaded position-dependent-field descriptions.
//
// Subcommands: solve, sweep, peaks, compare, beta-waist.
// All rates are in units of gamma (gamma = 1); c = 1.
// Exit codes: 0 ok, 2 usage/config error, 3 solver error.

#include <CLI11.hpp>

#include <cmath>
#include <limits>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "cqed/cascaded_solver.hpp"
#include "cqed/common.hpp"
#include "cqed/config_file.hpp"
#include "cqed/dipole_overlap.hpp"
#include "cqed/jc_solver.hpp"
#include "cqed/kernels.hpp"
#include "cqed/params.hpp"
#include "cqed/scattering_oracle.hpp"
#include "cqed/sweep.hpp"
#include "cqed/text_format.hpp"

namespace {

using namespace cqed;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flag values are collected as strings; precedence is CLI flag > config file
// > built-in default.  Config keys equal the long flag names without "--".
struct Resolved {
    std::map<std::string, std::string> flags;
    ConfigMap config;

    bool has(const std::string& key) const {
        return flags.count(key) || config.count(key);
    }
    std::string get(const std::string& key, const std::string& def) const {
        auto f = flags.find(key);
        if (f != flags.end()) return f->second;
        auto c = config.find(key);
        if (c != config.end()) return c->second;
        return def;
    }
    double num(const std::string& key, double def) const {
        if (!has(key)) return def;
        try {
            return parse_real_or_pi(get(key, ""));
        } catch (const ConfigError& e) {
            throw UsageError("--" + key + ": " + e.what());
        }
    }
    long long integer(const std::string& key, long long def) const {
        if (!has(key)) return def;
        const std::string v = get(key, "");
        try {
            size_t used = 0;
            const long long n = std::stoll(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return n;
        } catch (const std::exception&) {
            throw UsageError("--" + key + ": expected an integer, got '" + v + "'");
        }
    }
    bool boolean(const std::string& key, bool def) const {
        if (!has(key)) return def;
        const std::string v = get(key, "");
        if (v == "true" || v == "1" || v == "yes" || v.empty()) return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw UsageError("--" + key + ": expected a boolean, got '" + v + "'");
    }
};

const std::set<std::string> kKnownKeys = {
    "model", "geometry", "engine", "beta", "t1sq", "t2sq", "r1", "r2",
    "lossless", "nu-fsr", "alpha0", "xafrac", "delta0", "deltaa", "amp-in",
    "probe", "beta-b", "var", "from", "to", "points", "ecd", "out", "field",
    "pos-tol", "w0", "numeric", "theta-points", "phi-points"};

// Registers one string-capturing option.
void opt(CLI::App* cmd, Resolved& rv, const std::string& name, const std::string& desc) {
    cmd->add_option_function<std::string>(
        "--" + name, [&rv, name](const std::string& v) { rv.flags[name] = v; }, desc);
}

void flag(CLI::App* cmd, Resolved& rv, const std::string& name, const std::string& desc) {
    cmd->add_flag_callback(
        "--" + name, [&rv, name]() { rv.flags[name] = "true"; }, desc);
}

void add_spec_options(CLI::App* cmd, Resolved& rv, std::string& config_path) {
    cmd->add_option("--config", config_path, "key=value config file (flags win)");
    opt(cmd, rv, "model", "jc | cascaded | both (default cascaded)");
    opt(cmd, rv, "geometry", "fp | ring (default fp)");
    opt(cmd, rv, "engine", "closed_form | oracle (default closed_form)");
    opt(cmd, rv, "beta", "total channeling efficiency into the resonator mode (default 0)");
    opt(cmd, rv, "t1sq", "power transmission of mirror 1 (default 1e-4)");
    opt(cmd, rv, "t2sq", "power transmission of mirror 2 (default 1e-4)");
    opt(cmd, rv, "r1", "explicit amplitude reflection of mirror 1 (lossy mirrors)");
    opt(cmd, rv, "r2", "explicit amplitude reflection of mirror 2 (lossy mirrors)");
    flag(cmd, rv, "lossless", "set r_k = sqrt(1 - t_k^2) (the default unless --r1/--r2)");
    opt(cmd, rv, "nu-fsr", "free spectral range in units of gamma (default 250)");
    opt(cmd, rv, "alpha0", "standing-wave phase at the emitter; accepts pi expressions (default pi)");
    opt(cmd, rv, "xafrac", "axial emitter position x_a/(L/2) in [0,1] (default 0.5)");
    opt(cmd, rv, "delta0", "emitter-probe detuning (default 0)");
    opt(cmd, rv, "deltaa", "cavity-probe detuning (default 0)");
    opt(cmd, rv, "amp-in", "drive amplitude phi_in (default 1)");
    opt(cmd, rv, "probe", "mirror | emitter (JC model only; default mirror)");
    opt(cmd, rv, "beta-b", "external-mode coupling for the emitter probe (default 0.01)");
}

SystemSpec build_spec(const Resolved& rv) {
    const std::string geom = rv.get("geometry", "fp");
    Geometry geometry;
    if (geom == "fp") {
        geometry = Geometry::FabryPerot;
    } else if (geom == "ring") {
        geometry = Geometry::ChiralRing;
    } else {
        throw UsageError("--geometry: expected fp|ring, got '" + geom + "'");
    }

    const double t1sq = rv.num("t1sq", 1e-4);
    const double t2sq = rv.num("t2sq", 1e-4);
    if ((rv.has("r1") || rv.has("r2")) && rv.boolean("lossless", false)) {
        throw UsageError("--lossless conflicts with explicit --r1/--r2");
    }
    MirrorSpec m1, m2;
    if (rv.has("r1") || rv.has("r2")) {
        m1.t = std::sqrt(t1sq);
        m2.t = std::sqrt(t2sq);
        m1.r = rv.num("r1", std::sqrt(1.0 - t1sq));
        m2.r = rv.num("r2", std::sqrt(1.0 - t2sq));
    } else {
        m1 = MirrorSpec::lossless_from_tsq(t1sq);
        m2 = MirrorSpec::lossless_from_tsq(t2sq);
    }

    CavitySpec cavity;
    cavity.nu_fsr = rv.num("nu-fsr", 250.0);
    cavity.alpha0 = rv.num("alpha0", kPi);
    cavity.xa_frac = rv.num("xafrac", 0.5);

    ProbeSpec probe;
    probe.delta0 = rv.num("delta0", 0.0);
    probe.delta_a = rv.num("deltaa", 0.0);
    probe.amp_in = rv.num("amp-in", 1.0);

    const double beta = rv.num("beta", 0.0);
    SystemSpec spec = geometry == Geometry::FabryPerot
                          ? SystemSpec::symmetric_fp(beta, m1, m2, cavity, probe)
                          : SystemSpec::chiral_ring(beta, m1, m2, cavity, probe);
    return spec;
}

Model model_of(const Resolved& rv, Model def = Model::Cascaded) {
    return parse_model(rv.get("model", to_string(def)));
}

Engine engine_of(const Resolved& rv) {
    return parse_engine(rv.get("engine", "closed_form"));
}

void check_engine_model(Model model, Engine engine) {
    if (engine == Engine::Oracle && model == Model::Jc) {
        throw UsageError("--engine oracle solves the cascaded scattering network; "
                         "use --model cascaded or both");
    }
}

void reject_emitter_probe(const Resolved& rv, const char* cmd) {
    if (rv.get("probe", "mirror") != "mirror") {
        throw UsageError(std::string("--probe emitter is only supported by solve "
                                     "with --model jc; ") + cmd + " drives mirror 1");
    }
}

void write_warnings(JsonWriter& w, const Warnings& warnings) {
    w.key("warnings").begin_array();
    for (const std::string& s : warnings) w.value_string(s);
    w.end_array();
}

void write_spec(JsonWriter& w, const SystemSpec& spec) {
    w.key("spec").begin_object();
    w.field("geometry", to_string(spec.geometry));
    w.field("beta", spec.emitter.beta_total());
    w.field("beta1", spec.emitter.beta1);
    w.field("beta2", spec.emitter.beta2);
    w.field("gamma", spec.emitter.gamma);
    w.field("r1", spec.mirror1.r);
    w.field("t1", spec.mirror1.t);
    w.field("r2", spec.mirror2.r);
    w.field("t2", spec.mirror2.t);
    w.field("nu_fsr", spec.cavity.nu_fsr);
    w.field("alpha0", spec.cavity.alpha0);
    w.field("xa_frac", spec.cavity.xa_frac);
    w.field("delta0", spec.probe.delta0);
    w.field("delta_a", spec.probe.delta_a);
    w.field("amp_in", spec.probe.amp_in);
    w.end_object();
}

void write_derived(JsonWriter& w, const SystemSpec& spec, Warnings& warnings) {
    const DerivedParams d = derive_params(spec);
    w.key("derived").begin_object();
    w.field("kappa1", d.kappa1);
    w.field("kappa2", d.kappa2);
    w.field("kappa0", d.kappa0);
    w.field("kappa_l", d.kappa_l);
    w.field("gamma_l", d.gamma_l);
    w.field("g", d.g);
    w.field("l_tot_sq", d.l_tot_sq);
    w.field("finesse", d.finesse);
    if (d.beta_total < 1.0) {
        w.field("cooperativity",
                d.kappa_l > 0.0 ? cooperativity(d.beta_total, d.finesse)
                                : std::numeric_limits<double>::infinity());
    } else {
        w.field_null("cooperativity");
    }
    if (d.gamma_l > 0.0) {
        const double margin = d.g * d.g / (d.gamma_l * spec.cavity.nu_fsr);
        w.field("jc_margin", margin);
        if (margin >= 1.0) {
            warnings.push_back(
                "JC validity margin Gamma/nu_fsr = " + format_double(margin) +
                " >= 1: the single-mode (JC) description is unreliable here");
        }
    } else {
        w.field_null("jc_margin");
        warnings.push_back(
            "gamma_l = 0 (beta = 1): the emitter-induced decay rate diverges and "
            "the JC description fails; cascaded results remain valid");
    }
    try {
        const EffectiveRates rates = effective_rates(d.g, d.gamma_l, d.kappa_l);
        w.field("big_gamma", rates.big_gamma);
        w.field("big_k", rates.big_k);
    } catch (const DivergenceError&) {
        w.field_null("big_gamma");
        w.field_null("big_k");
    }
    w.field("alpha", alpha_of_detuning(spec.cavity.alpha0, spec.probe.delta_a,
                                       spec.cavity.nu_fsr, spec.cavity.xa_frac));
    w.key("tilde_beta");
    const Complex tb = tilde_beta(spec.emitter.beta_total(), spec.probe.delta0,
                                  spec.emitter.gamma);
    w.begin_object().field("re", tb.real()).field("im", tb.imag()).end_object();
    w.end_object();
}

int cmd_solve(const Resolved& rv) {
    const SystemSpec spec = build_spec(rv);
    const Model model = model_of(rv);
    const Engine engine = engine_of(rv);
    check_engine_model(model, engine);
    const std::string probe = rv.get("probe", "mirror");
    if (probe != "mirror" && probe != "emitter") {
        throw UsageError("--probe: expected mirror|emitter");
    }
    if (probe == "emitter" && model != Model::Jc) {
        throw UsageError("emitter-port probing is only solved for the JC model "
                         "(--model jc)");
    }

    Warnings warnings;
    JsonWriter w;
    w.begin_object();
    w.field("command", "solve");
    w.field("model", to_string(model));
    w.field("engine", to_string(engine));
    write_spec(w, spec);
    write_derived(w, spec, warnings);

    w.key("fields").begin_object();
    std::optional<FpSteadyState> cascaded;
    if (model != Model::Jc) {
        double condition = 0.0;
        if (engine == Engine::Oracle) {
            const OracleResult res = oracle_solve(spec);
            cascaded = res.state;
            condition = res.condition;
        } else {
            cascaded = solve_steady_state(spec);
        }
        w.field_complex("phi1", cascaded->phi1);
        w.field_complex("phi2", cascaded->phi2);
        w.field_complex("phi3", cascaded->phi3);
        w.field_complex("phi4", cascaded->phi4);
        w.field_complex("phi0", cascaded->phi0);
        w.field_complex("phi_ref", cascaded->phi_ref);
        w.field_complex("phi_trans", cascaded->phi_trans);
        if (engine == Engine::Oracle) w.field("oracle_condition", condition);
    }
    if (model != Model::Cascaded) {
        const JcSteadyState jc = probe == "mirror"
                                     ? jc_mirror_probe(spec)
                                     : jc_emitter_probe(spec, rv.num("beta-b", 0.01),
                                                        &warnings);
        w.key("jc").begin_object();
        w.field_complex("phi_a", jc.phi_a);
        w.field_complex("phi_jc", jc.phi_a_local);
        w.field_complex("phi0", jc.phi0);
        w.field_complex("phi_ref", jc.phi_ref);
        w.field_complex("phi_trans", jc.phi_trans);
        w.end_object();
    }
    w.end_object();

    if (cascaded && spec.mirror1.power_loss() < 1e-12 && spec.mirror2.power_loss() < 1e-12) {
        w.field("flux_residual", flux_residual(*cascaded, spec));
    } else {
        w.field_null("flux_residual");
    }
    write_warnings(w, warnings);
    w.end_object();
    std::cout << w.str() << "\n";
    return 0;
}

int cmd_sweep(const Resolved& rv) {
    reject_emitter_probe(rv, "sweep");
    SweepRequest req;
    req.base = build_spec(rv);
    req.model = model_of(rv);
    req.engine = engine_of(rv);
    check_engine_model(req.model, req.engine);
    req.var = parse_sweep_var(rv.get("var", "deltap"));
    if (!rv.has("from") || !rv.has("to")) {
        throw UsageError("sweep requires --from and --to");
    }
    req.from = rv.num("from", 0.0);
    req.to = rv.num("to", 0.0);
    req.points = static_cast<int>(rv.integer("points", 201));
    req.emitter_cavity_detuning = rv.num("ecd", 0.0);

    const SweepResult result = run_sweep(req);
    const std::string csv = emit_csv(result);
    const std::string out_path = rv.get("out", "");
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw UsageError("cannot open output file '" + out_path + "'");
        f << csv;
    }
    return 0;
}

int cmd_peaks(const Resolved& rv) {
    reject_emitter_probe(rv, "peaks");
    const SystemSpec spec = build_spec(rv);
    const Model model = model_of(rv);
    const Engine engine = engine_of(rv);
    check_engine_model(model, engine);
    if (!rv.has("from") || !rv.has("to")) {
        throw UsageError("peaks requires --from and --to");
    }
    const double from = rv.num("from", 0.0);
    const double to = rv.num("to", 0.0);
    const int points = static_cast<int>(rv.integer("points", 801));
    const double pos_tol = rv.num("pos-tol", 1e-4);
    const std::string field = rv.get("field", "abs_phi1");

    const BatchFn f =
        make_field_evaluator(spec, model, engine, field, rv.num("ecd", 0.0));
    const PeakReport report = find_peaks(f, from, to, points, pos_tol);

    JsonWriter w;
    w.begin_object();
    w.field("command", "peaks");
    w.field("model", to_string(model));
    w.field("engine", to_string(engine));
    w.field("field", field);
    w.field("from", report.from);
    w.field("to", report.to);
    w.field_int("points", report.points);
    w.field("grid_step", report.grid_step);
    w.field("position_tolerance", report.position_tolerance);
    w.key("extrema").begin_array();
    for (const Extremum& e : report.extrema) {
        w.begin_object();
        w.field("kind", e.kind == Extremum::Kind::Max ? "max" : "min");
        w.field("position", e.position);
        w.field("height", e.height);
        w.field_int("refine_iterations", e.refine_iterations);
        w.end_object();
    }
    w.end_array();
    write_warnings(w, report.warnings);
    w.end_object();
    std::cout << w.str() << "\n";
    return 0;
}

int cmd_compare(const Resolved& rv) {
    reject_emitter_probe(rv, "compare");
    const SystemSpec spec = build_spec(rv);
    const DerivedParams d = derive_params(spec);
    const double span = d.g > 0.0 ? 3.0 * d.g : 5.0 * spec.emitter.gamma;
    const double from = rv.num("from", -span);
    const double to = rv.num("to", span);
    const int points = static_cast<int>(rv.integer("points", 201));

    const CompareReport report =
        run_compare(spec, from, to, points, rv.num("ecd", 0.0));

    JsonWriter w;
    w.begin_object();
    w.field("command", "compare");
    w.field("geometry", to_string(spec.geometry));
    w.field("from", report.from);
    w.field("to", report.to);
    w.field_int("points", report.points);
    if (report.jc_margin) {
        w.field("jc_margin", *report.jc_margin);
    } else {
        w.field_null("jc_margin");
    }
    auto write_dev = [&](const FieldDeviation& dev) {
        w.begin_object();
        w.field("field", dev.field);
        w.field("max_rel", dev.max_rel);
        w.field("mean_rel", dev.mean_rel);
        w.field("max_abs", dev.max_abs);
        w.field_bool("rel_defined", dev.rel_defined);
        w.end_object();
    };
    w.key("fields").begin_array();
    for (const FieldDeviation& dev : report.fields) write_dev(dev);
    w.end_array();
    w.key("phi0");
    write_dev(report.phi0);
    w.end_object();
    std::cout << w.str() << "\n";
    return 0;
}

int cmd_beta_waist(const Resolved& rv) {
    if (!rv.has("w0")) throw UsageError("beta-waist requires --w0 (waist in units of lambda)");
    const double w0 = rv.num("w0", 1.0);
    Warnings warnings;
    const double analytic = beta_analytic(w0, &warnings);

    JsonWriter w;
    w.begin_object();
    w.field("command", "beta-waist");
    w.field("w0_over_lambda", w0);
    w.field("beta_analytic", analytic);
    if (rv.boolean("numeric", false)) {
        OverlapConfig cfg;
        cfg.w0_over_lambda = w0;
        cfg.theta_points = static_cast<int>(rv.integer("theta-points", 128));
        cfg.phi_points = static_cast<int>(rv.integer("phi-points", 64));
        const BetaNumericResult res = beta_numeric(cfg);
        w.field("beta_numeric", res.beta);
        w.field("beta_numeric_coarse", res.beta_coarse);
        w.field("dipole_norm_error", res.dipole_norm_error);
        w.field("gauss_norm_change", res.gauss_norm_change);
        w.field_int("theta_points_used", res.theta_points_used);
        w.field_int("phi_points_used", res.phi_points_used);
    }
    write_warnings(w, warnings);
    w.end_object();
    std::cout << w.str() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady states of one emitter coupled to a Fabry-Perot or ring resonator"};
    app.require_subcommand(1);

    Resolved rv_solve, rv_sweep, rv_peaks, rv_compare, rv_waist;
    std::string cfg_solve, cfg_sweep, cfg_peaks, cfg_compare, cfg_waist;

    CLI::App* solve = app.add_subcommand("solve", "single steady-state solve, JSON on stdout");
    add_spec_options(solve, rv_solve, cfg_solve);

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep, CSV on stdout or --out");
    add_spec_options(sweep, rv_sweep, cfg_sweep);
    opt(sweep, rv_sweep, "var", "sweep variable: beta | deltap | alpha0 | xafrac");
    opt(sweep, rv_sweep, "from", "grid start (pi expressions allowed)");
    opt(sweep, rv_sweep, "to", "grid end");
    opt(sweep, rv_sweep, "points", "grid points (default 201)");
    opt(sweep, rv_sweep, "ecd", "emitter-cavity detuning delta0 - delta_a during deltap sweeps");
    opt(sweep, rv_sweep, "out", "write CSV to this path instead of stdout");

    CLI::App* peaks = app.add_subcommand("peaks", "locate spectrum extrema, JSON on stdout");
    add_spec_options(peaks, rv_peaks, cfg_peaks);
    opt(peaks, rv_peaks, "field", "column to scan, e.g. abs_phi1 (default)");
    opt(peaks, rv_peaks, "from", "scan start");
    opt(peaks, rv_peaks, "to", "scan end");
    opt(peaks, rv_peaks, "points", "scan grid points, >= 200 (default 801)");
    opt(peaks, rv_peaks, "pos-tol", "refinement position tolerance (default 1e-4)");
    opt(peaks, rv_peaks, "ecd", "emitter-cavity detuning during the scan");

    CLI::App* compare = app.add_subcommand("compare", "JC vs cascaded deviation metrics, JSON");
    add_spec_options(compare, rv_compare, cfg_compare);
    opt(compare, rv_compare, "from", "detuning grid start (default -3g)");
    opt(compare, rv_compare, "to", "detuning grid end (default +3g)");
    opt(compare, rv_compare, "points", "grid points (default 201)");
    opt(compare, rv_compare, "ecd", "emitter-cavity detuning");

    CLI::App* waist = app.add_subcommand("beta-waist", "channeling efficiency from the mode waist");
    waist->add_option("--config", cfg_waist, "key=value config file (flags win)");
    opt(waist, rv_waist, "w0", "beam waist in units of the wavelength");
    flag(waist, rv_waist, "numeric", "also run the far-field overlap quadrature");
    opt(waist, rv_waist, "theta-points", "quadrature order over theta (default 128)");
    opt(waist, rv_waist, "phi-points", "quadrature order over phi (default 64)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        auto with_config = [](Resolved& rv, const std::string& path) {
            if (!path.empty()) rv.config = parse_config(path, kKnownKeys);
        };
        if (solve->parsed()) {
            with_config(rv_solve, cfg_solve);
            return cmd_solve(rv_solve);
        }
        if (sweep->parsed()) {
            with_config(rv_sweep, cfg_sweep);
            return cmd_sweep(rv_sweep);
        }
        if (peaks->parsed()) {
            with_config(rv_peaks, cfg_peaks);
            return cmd_peaks(rv_peaks);
        }
        if (compare->parsed()) {
            with_config(rv_compare, cfg_compare);
            return cmd_compare(rv_compare);
        }
        if (waist->parsed()) {
            with_config(rv_waist, cfg_waist);
            return cmd_beta_waist(rv_waist);
        }
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SingularityError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const DivergenceError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const PreconditionError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const AccuracyError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
}
