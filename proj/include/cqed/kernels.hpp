#pragma once

// Batched evaluation of the steady-state amplitudes over a detuning grid —
// the inner loop behind sweep/peaks/compare.  The scalar backend delegates
// point-by-point to the closed-form solvers and is the reference; the SIMD
// backends (std::experimental::simd, compiled per ISA) reimplement the same
// algebra over lanes and are equivalence-tested against it.  The widest
// backend the CPU supports is selected once at runtime.
//
// Grid semantics: the swept variable x is the common spectral detuning,
// delta_a = x and delta0 = x + emitter_cavity_detuning.  Points where the
// steady state is singular come back as NaN; callers flag them per row.

#include <cstddef>
#include <span>
#include <vector>

#include "cqed/common.hpp"
#include "cqed/params.hpp"

namespace cqed::kernels {

struct CascadeBatch {
    std::vector<Complex> phi1, phi2, phi3, phi4, phi0, phi_ref, phi_trans;
    void resize(std::size_t n);
    std::size_t size() const { return phi1.size(); }
};

struct JcBatch {
    std::vector<Complex> phi_local, phi0, phi_ref, phi_trans;
    void resize(std::size_t n);
    std::size_t size() const { return phi_local.size(); }
};

using CascadedSweepFn = void (*)(const SystemSpec& base, double emitter_cavity_detuning,
                                 std::span<const double> x, CascadeBatch& out);
using JcSweepFn = void (*)(const SystemSpec& base, double emitter_cavity_detuning,
                           std::span<const double> x, JcBatch& out);

struct SweepKernels {
    const char* name;
    CascadedSweepFn cascaded;
    JcSweepFn jc;
};

// Reference backend (delegates to the closed-form solvers).
const SweepKernels& scalar_kernels();

// All backends compiled into this binary, scalar first.
std::span<const SweepKernels* const> available_kernels();

// Widest backend supported by the running CPU.
const SweepKernels& active_kernels();

}  // namespace cqed::kernels
