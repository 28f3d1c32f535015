#pragma once

// Parameter sweeps, spectrum extremum finding and model-comparison metrics —
// the library side of the CLI subcommands, exposed here so the test suites
// drive the exact code paths the binary uses.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqed/common.hpp"
#include "cqed/params.hpp"

namespace cqed {

enum class Model { Jc, Cascaded, Both };
enum class Engine { ClosedForm, Oracle };
enum class SweepVar { Beta, Deltap, Alpha0, XaFrac };

std::string to_string(Model m);
std::string to_string(Engine e);
std::string to_string(SweepVar v);
Model parse_model(const std::string& s);
Engine parse_engine(const std::string& s);
SweepVar parse_sweep_var(const std::string& s);

struct SweepRequest {
    SystemSpec base;
    Model model = Model::Cascaded;
    Engine engine = Engine::ClosedForm;
    SweepVar var = SweepVar::Deltap;
    double from = -10.0;
    double to = 10.0;
    int points = 201;
    // delta0 - delta_a held fixed during a deltap sweep (0 = mutually
    // resonant emitter and cavity, the configuration of all the spectra).
    double emitter_cavity_detuning = 0.0;
};

struct SweepRow {
    double x = 0.0;
    bool ok = true;
    std::string status = "ok";
    std::vector<Complex> fields;  // parallel to SweepResult::columns
};

struct SweepResult {
    std::string var_name;
    std::vector<std::string> columns;
    std::vector<SweepRow> rows;
    Model model = Model::Cascaded;
    Engine engine = Engine::ClosedForm;
};

// Deterministic: fixed grid order, fixed column order, errors become
// flagged rows rather than aborting.
SweepResult run_sweep(const SweepRequest& req);

// CSV with a header row; all floats through format_double.
std::string emit_csv(const SweepResult& result);

// ---------------------------------------------------------------------------
// Extremum finding

struct Extremum {
    enum class Kind { Max, Min };
    Kind kind;
    double position = 0.0;
    double height = 0.0;
    int refine_iterations = 0;
};

struct PeakReport {
    double from = 0.0, to = 0.0;
    int points = 0;
    double grid_step = 0.0;
    double position_tolerance = 0.0;
    std::vector<Extremum> extrema;
    std::vector<std::string> warnings;
};

// f evaluates |field| on a batch of positions.  Local extrema found on the
// initial grid are refined by parabolic interpolation on the log-magnitude
// plus iterative re-gridding until the position moves by less than pos_tol.
using BatchFn = std::function<std::vector<double>(std::span<const double>)>;

PeakReport find_peaks(const BatchFn& f, double from, double to, int points,
                      double pos_tol = 1e-4);

// Batch evaluator of |column| for a spec under a given model/engine, in the
// deltap sweep sense; `field` is a column name such as "abs_phi1".
BatchFn make_field_evaluator(const SystemSpec& base, Model model, Engine engine,
                             const std::string& field,
                             double emitter_cavity_detuning = 0.0);

// ---------------------------------------------------------------------------
// Model comparison

struct FieldDeviation {
    std::string field;
    double max_rel = 0.0;
    double mean_rel = 0.0;
    double max_abs = 0.0;
    bool rel_defined = true;  // false where the JC amplitude is identically ~0
};

struct CompareReport {
    double from = 0.0, to = 0.0;
    int points = 0;
    std::optional<double> jc_margin;  // absent when it diverges (beta = 1)
    std::vector<FieldDeviation> fields;  // |phi_i| vs |phi_jc|
    FieldDeviation phi0;                 // cascaded vs JC emitter excitation
};

CompareReport run_compare(const SystemSpec& base, double from, double to, int points,
                          double emitter_cavity_detuning = 0.0);

}  // namespace cqed
