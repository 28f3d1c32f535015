#include "cqed/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cqed/cascaded_solver.hpp"
#include "cqed/jc_solver.hpp"
#include "cqed/kernels.hpp"
#include "cqed/scattering_oracle.hpp"
#include "cqed/text_format.hpp"

namespace cqed {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double from, double to, int points) {
    if (points < 1) throw InvalidSpec("points must be >= 1");
    if (points > 1 && !(to > from)) {
        throw InvalidSpec("sweep requires to > from for a monotonic grid");
    }
    std::vector<double> xs(points);
    if (points == 1) {
        xs[0] = from;
        return xs;
    }
    const double step = (to - from) / (points - 1);
    for (int i = 0; i < points; ++i) xs[i] = from + step * i;
    xs.back() = to;  // exact endpoint
    return xs;
}

std::vector<std::string> columns_for(Model model) {
    switch (model) {
        case Model::Cascaded:
            return {"phi1", "phi2", "phi3", "phi4", "phi0", "phi_ref", "phi_trans"};
        case Model::Jc:
            return {"phi_jc", "phi0", "phi_ref", "phi_trans"};
        case Model::Both:
            return {"phi1", "phi2", "phi3", "phi4", "phi0", "phi_ref", "phi_trans", "phi_jc"};
    }
    return {};
}

bool row_fields_finite(const std::vector<Complex>& fields) {
    for (const Complex& z : fields) {
        if (!is_finite(z)) return false;
    }
    return true;
}

SystemSpec spec_at(const SweepRequest& req, double x) {
    SystemSpec spec = req.base;
    switch (req.var) {
        case SweepVar::Deltap:
            spec.probe.delta_a = x;
            spec.probe.delta0 = x + req.emitter_cavity_detuning;
            break;
        case SweepVar::Beta:
            if (req.base.geometry == Geometry::FabryPerot) {
                spec.emitter.beta1 = x / 2.0;
                spec.emitter.beta2 = x / 2.0;
            } else {
                spec.emitter.beta1 = x;
                spec.emitter.beta2 = 0.0;
            }
            break;
        case SweepVar::Alpha0:
            spec.cavity.alpha0 = x;
            break;
        case SweepVar::XaFrac:
            spec.cavity.xa_frac = x;
            break;
    }
    return spec;
}

void fill_cascaded_row(SweepRow& row, const FpSteadyState& s) {
    row.fields.insert(row.fields.end(),
                      {s.phi1, s.phi2, s.phi3, s.phi4, s.phi0, s.phi_ref, s.phi_trans});
}

void mark_error(SweepRow& row, size_t n_fields, const std::string& status) {
    row.ok = false;
    row.status = status;
    row.fields.assign(n_fields, Complex(kNan, kNan));
}

// Fast path: detuning sweeps under the closed forms go through the batched
// kernels (runtime-dispatched SIMD).
void run_deltap_closed_form(const SweepRequest& req, const std::vector<double>& xs,
                            SweepResult& out) {
    const kernels::SweepKernels& k = kernels::active_kernels();
    kernels::CascadeBatch cb;
    kernels::JcBatch jb;
    const bool want_cascaded = req.model != Model::Jc;
    const bool want_jc = req.model != Model::Cascaded;
    if (want_cascaded) k.cascaded(req.base, req.emitter_cavity_detuning, xs, cb);
    if (want_jc) k.jc(req.base, req.emitter_cavity_detuning, xs, jb);

    for (size_t i = 0; i < xs.size(); ++i) {
        SweepRow row;
        row.x = xs[i];
        if (want_cascaded) {
            row.fields.insert(row.fields.end(),
                              {cb.phi1[i], cb.phi2[i], cb.phi3[i], cb.phi4[i], cb.phi0[i],
                               cb.phi_ref[i], cb.phi_trans[i]});
        }
        if (req.model == Model::Jc) {
            row.fields.insert(row.fields.end(),
                              {jb.phi_local[i], jb.phi0[i], jb.phi_ref[i], jb.phi_trans[i]});
        } else if (req.model == Model::Both) {
            row.fields.push_back(jb.phi_local[i]);
        }
        if (!row_fields_finite(row.fields)) {
            mark_error(row, row.fields.size(), "singular");
        }
        out.rows.push_back(std::move(row));
    }
}

void run_pointwise(const SweepRequest& req, const std::vector<double>& xs,
                   SweepResult& out) {
    const size_t n_fields = columns_for(req.model).size();
    for (double x : xs) {
        SweepRow row;
        row.x = x;
        try {
            const SystemSpec spec = spec_at(req, x);
            if (req.model != Model::Jc) {
                const FpSteadyState s = req.engine == Engine::Oracle
                                            ? oracle_solve(spec).state
                                            : solve_steady_state(spec);
                fill_cascaded_row(row, s);
            }
            if (req.model != Model::Cascaded) {
                const JcSteadyState j = jc_mirror_probe(spec);
                if (req.model == Model::Jc) {
                    row.fields.insert(row.fields.end(),
                                      {j.phi_a_local, j.phi0, j.phi_ref, j.phi_trans});
                } else {
                    row.fields.push_back(j.phi_a_local);
                }
            }
            if (!row_fields_finite(row.fields)) {
                mark_error(row, n_fields, "singular");
            }
        } catch (const SingularityError&) {
            mark_error(row, n_fields, "singular");
        } catch (const InvalidSpec&) {
            mark_error(row, n_fields, "invalid");
        } catch (const PreconditionError&) {
            mark_error(row, n_fields, "invalid");
        }
        out.rows.push_back(std::move(row));
    }
}

}  // namespace

std::string to_string(Model m) {
    switch (m) {
        case Model::Jc: return "jc";
        case Model::Cascaded: return "cascaded";
        case Model::Both: return "both";
    }
    return "?";
}

std::string to_string(Engine e) {
    return e == Engine::ClosedForm ? "closed_form" : "oracle";
}

std::string to_string(SweepVar v) {
    switch (v) {
        case SweepVar::Beta: return "beta";
        case SweepVar::Deltap: return "deltap";
        case SweepVar::Alpha0: return "alpha0";
        case SweepVar::XaFrac: return "xafrac";
    }
    return "?";
}

Model parse_model(const std::string& s) {
    if (s == "jc") return Model::Jc;
    if (s == "cascaded") return Model::Cascaded;
    if (s == "both") return Model::Both;
    throw InvalidSpec("unknown model '" + s + "' (expected jc|cascaded|both)");
}

Engine parse_engine(const std::string& s) {
    if (s == "closed_form") return Engine::ClosedForm;
    if (s == "oracle") return Engine::Oracle;
    throw InvalidSpec("unknown engine '" + s + "' (expected closed_form|oracle)");
}

SweepVar parse_sweep_var(const std::string& s) {
    if (s == "beta") return SweepVar::Beta;
    if (s == "deltap") return SweepVar::Deltap;
    if (s == "alpha0") return SweepVar::Alpha0;
    if (s == "xafrac") return SweepVar::XaFrac;
    throw InvalidSpec("unknown sweep variable '" + s + "' (expected beta|deltap|alpha0|xafrac)");
}

SweepResult run_sweep(const SweepRequest& req) {
    req.base.validate();
    if (req.var == SweepVar::Beta || req.var == SweepVar::XaFrac) {
        if (req.from < 0.0 || req.to > 1.0) {
            throw InvalidSpec(to_string(req.var) + " sweep requires a grid inside [0,1]");
        }
    }
    const std::vector<double> xs = linspace(req.from, req.to, req.points);

    SweepResult out;
    out.model = req.model;
    out.engine = req.engine;
    out.columns = columns_for(req.model);
    switch (req.var) {
        case SweepVar::Beta: out.var_name = "beta"; break;
        case SweepVar::Deltap: out.var_name = "deltap_over_gamma"; break;
        case SweepVar::Alpha0: out.var_name = "alpha0_rad"; break;
        case SweepVar::XaFrac: out.var_name = "xafrac"; break;
    }
    out.rows.reserve(xs.size());

    if (req.var == SweepVar::Deltap && req.engine == Engine::ClosedForm) {
        run_deltap_closed_form(req, xs, out);
    } else {
        run_pointwise(req, xs, out);
    }
    return out;
}

std::string emit_csv(const SweepResult& result) {
    std::string out = result.var_name + ",status";
    for (const std::string& c : result.columns) {
        out += ",abs_" + c + ",re_" + c + ",im_" + c;
    }
    out += '\n';
    for (const SweepRow& row : result.rows) {
        out += format_double(row.x);
        out += ',';
        out += row.status;
        for (const Complex& z : row.fields) {
            out += ',';
            out += format_double(std::abs(z));
            out += ',';
            out += format_double(z.real());
            out += ',';
            out += format_double(z.imag());
        }
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct GridExtremum {
    Extremum::Kind kind;
    double position;
    double height;
};

// Vertex of the parabola through (x0,y0),(x1,y1),(x2,y2); falls back to x1
// when the points are collinear or the vertex escapes the bracket.
double parabola_vertex(double x0, double y0, double x1, double y1, double x2,
                       double y2) {
    const double d1 = (x1 - x0) * (y1 - y2);
    const double d2 = (x1 - x2) * (y1 - y0);
    const double denom = 2.0 * (d1 - d2);
    if (denom == 0.0) return x1;
    const double v = x1 - ((x1 - x0) * d1 - (x1 - x2) * d2) / denom;
    if (!(v >= std::min(x0, x2) && v <= std::max(x0, x2))) return x1;
    return v;
}

double log_mag(double y) { return std::log(std::max(y, 1e-300)); }

}  // namespace

PeakReport find_peaks(const BatchFn& f, double from, double to, int points,
                      double pos_tol) {
    if (points < 200) {
        throw InvalidSpec("extremum scan requires at least 200 grid points, got " +
                          std::to_string(points));
    }
    if (!(to > from)) throw InvalidSpec("extremum scan requires to > from");

    PeakReport report;
    report.from = from;
    report.to = to;
    report.points = points;
    report.grid_step = (to - from) / (points - 1);
    report.position_tolerance = pos_tol;

    const std::vector<double> xs = linspace(from, to, points);
    const std::vector<double> ys = f(xs);

    std::vector<GridExtremum> seeds;
    for (int i = 1; i + 1 < points; ++i) {
        if (!std::isfinite(ys[i])) continue;
        if (ys[i] > ys[i - 1] && ys[i] > ys[i + 1]) {
            seeds.push_back({Extremum::Kind::Max, xs[i], ys[i]});
        } else if (ys[i] < ys[i - 1] && ys[i] < ys[i + 1]) {
            seeds.push_back({Extremum::Kind::Min, xs[i], ys[i]});
        }
    }
    if (seeds.empty()) {
        report.warnings.push_back("no interior extremum found on the scan grid");
        return report;
    }

    constexpr int kRefinePoints = 11;
    constexpr int kMaxIters = 60;
    for (const GridExtremum& seed : seeds) {
        double center = seed.position;
        double half = report.grid_step;
        double height = seed.height;
        int iters = 0;
        for (; iters < kMaxIters; ++iters) {
            const double lo = std::max(from, center - half);
            const double hi = std::min(to, center + half);
            const std::vector<double> gx = linspace(lo, hi, kRefinePoints);
            const std::vector<double> gy = f(gx);
            int best = 0;
            for (int i = 1; i < kRefinePoints; ++i) {
                const bool better = seed.kind == Extremum::Kind::Max ? gy[i] > gy[best]
                                                                     : gy[i] < gy[best];
                if (better) best = i;
            }
            double next = gx[best];
            height = gy[best];
            if (best > 0 && best + 1 < kRefinePoints) {
                // log-magnitude parabola through the bracketing triple
                next = parabola_vertex(gx[best - 1], log_mag(gy[best - 1]), gx[best],
                                       log_mag(gy[best]), gx[best + 1],
                                       log_mag(gy[best + 1]));
            }
            const double moved = std::abs(next - center);
            center = next;
            half /= 4.0;
            if (moved < pos_tol && iters > 0) break;
        }
        Extremum e;
        e.kind = seed.kind;
        e.position = center;
        e.height = height;
        e.refine_iterations = iters + 1;
        report.extrema.push_back(e);
    }
    std::sort(report.extrema.begin(), report.extrema.end(),
              [](const Extremum& a, const Extremum& b) { return a.position < b.position; });
    return report;
}

BatchFn make_field_evaluator(const SystemSpec& base, Model model, Engine engine,
                             const std::string& field, double ecd) {
    SweepRequest req;
    req.base = base;
    req.model = model;
    req.engine = engine;
    req.var = SweepVar::Deltap;
    req.emitter_cavity_detuning = ecd;
    const std::vector<std::string> cols = columns_for(model);
    std::string want = field;
    if (want.rfind("abs_", 0) == 0) want = want.substr(4);
    int col = -1;
    for (size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == want) col = static_cast<int>(i);
    }
    if (col < 0) {
        throw InvalidSpec("unknown field '" + field + "' for model " + to_string(model));
    }

    return [req, col](std::span<const double> xs) {
        // Reuse the sweep machinery on the ad-hoc grid (order preserved).
        std::vector<double> out(xs.size(), kNan);
        SweepRequest r = req;
        SweepResult res;
        res.model = r.model;
        res.engine = r.engine;
        res.columns = columns_for(r.model);
        std::vector<double> grid(xs.begin(), xs.end());
        if (r.engine == Engine::ClosedForm) {
            run_deltap_closed_form(r, grid, res);
        } else {
            r.var = SweepVar::Deltap;
            run_pointwise(r, grid, res);
        }
        for (size_t i = 0; i < xs.size(); ++i) {
            if (res.rows[i].ok) out[i] = std::abs(res.rows[i].fields[col]);
        }
        return out;
    };
}

CompareReport run_compare(const SystemSpec& base, double from, double to, int points,
                          double ecd) {
    base.validate();
    CompareReport report;
    report.from = from;
    report.to = to;
    report.points = points;

    // Gamma/nu_fsr with the geometry's own g; reduces to jc_breakdown_margin
    // for the Fabry-Perot case.
    const DerivedParams d = derive_params(base);
    if (d.gamma_l > 0.0) {
        report.jc_margin = d.g * d.g / (d.gamma_l * base.cavity.nu_fsr);
    }

    SweepRequest req;
    req.base = base;
    req.model = Model::Both;
    req.engine = Engine::ClosedForm;
    req.var = SweepVar::Deltap;
    req.from = from;
    req.to = to;
    req.points = points;
    req.emitter_cavity_detuning = ecd;
    const SweepResult sw = run_sweep(req);

    // columns: phi1..4 phi0 phi_ref phi_trans phi_jc
    const int jc_col = 7;
    double jc_peak = 0.0;
    for (const SweepRow& row : sw.rows) {
        if (row.ok) jc_peak = std::max(jc_peak, std::abs(row.fields[jc_col]));
    }
    const double floor = std::max(1e-12 * jc_peak, 1e-300);

    auto deviation = [&](int col, const std::string& name, int ref_col) {
        FieldDeviation dev;
        dev.field = name;
        double sum_rel = 0.0;
        int n_rel = 0;
        for (const SweepRow& row : sw.rows) {
            if (!row.ok) continue;
            const double a = std::abs(row.fields[col]);
            const double b = std::abs(row.fields[ref_col]);
            dev.max_abs = std::max(dev.max_abs, std::abs(a - b));
            if (b > floor) {
                const double rel = std::abs(a - b) / b;
                dev.max_rel = std::max(dev.max_rel, rel);
                sum_rel += rel;
                ++n_rel;
            } else {
                dev.rel_defined = false;
            }
        }
        dev.mean_rel = n_rel > 0 ? sum_rel / n_rel : kNan;
        if (n_rel == 0) dev.max_rel = kNan;
        return dev;
    };

    const char* names[] = {"phi1", "phi2", "phi3", "phi4"};
    for (int c = 0; c < 4; ++c) {
        report.fields.push_back(deviation(c, names[c], jc_col));
    }

    // phi0 comparison needs the JC phi0 column, absent from Model::Both rows;
    // evaluate the JC model separately on the same grid.
    SweepRequest jq = req;
    jq.model = Model::Jc;
    const SweepResult jw = run_sweep(jq);
    FieldDeviation dev;
    dev.field = "phi0";
    double sum_rel = 0.0;
    int n_rel = 0;
    double phi0_peak = 0.0;
    for (const SweepRow& row : jw.rows) {
        if (row.ok) phi0_peak = std::max(phi0_peak, std::abs(row.fields[1]));
    }
    const double phi0_floor = std::max(1e-12 * phi0_peak, 1e-300);
    for (size_t i = 0; i < sw.rows.size(); ++i) {
        if (!sw.rows[i].ok || !jw.rows[i].ok) continue;
        const double a = std::abs(sw.rows[i].fields[4]);  // cascaded phi0
        const double b = std::abs(jw.rows[i].fields[1]);  // jc phi0
        dev.max_abs = std::max(dev.max_abs, std::abs(a - b));
        if (b > phi0_floor) {
            const double rel = std::abs(a - b) / b;
            dev.max_rel = std::max(dev.max_rel, rel);
            sum_rel += rel;
            ++n_rel;
        } else {
            dev.rel_defined = false;
        }
    }
    dev.mean_rel = n_rel > 0 ? sum_rel / n_rel : kNan;
    if (n_rel == 0) dev.max_rel = kNan;
    report.phi0 = dev;
    return report;
}

}  // namespace cqed
