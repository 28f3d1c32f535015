#pragma once

// Closed-form steady states of the cascaded (position-dependent field) model:
// the circulating resonator field interacts with the emitter once per pass,
// so a Fabry-Perot cavity carries four distinct region amplitudes
// phi1..phi4 (mirror1->emitter, emitter->mirror2, mirror2->emitter,
// emitter->mirror1) instead of one global mode amplitude.

#include <array>

#include "cqed/common.hpp"
#include "cqed/params.hpp"

namespace cqed {

struct FpSteadyState {
    Complex phi1, phi2, phi3, phi4;  // circulating-region amplitudes
    Complex phi0;                    // emitter excitation
    Complex phi_ref, phi_trans;
    Complex denom_N;  // diagnostic: common denominator (or system determinant)
};

// Full Fabry-Perot solution for symmetric coupling beta1 = beta2 = beta/2.
// With tb = tilde_beta, a = alpha_of_detuning, z = exp(-i delta_a/nu_fsr):
//   phi1 = -i t1 (e^{ia} r2 tb - 1)/N           phi2 = -i t1 (tb - 1)/N
//   phi3 =  i t1 r2 (tb - 1)/N                  phi4 =  i t1 (r2(2tb-1) - e^{-ia} tb)/N
//   phi0 = -t1 sqrt(z) sqrt(tb/(gamma + i d0)) (e^{ia/2} r2 - e^{-ia/2})/N
//   N    = 1 - z e^{-ia} r1 tb - e^{ia} r2 tb + z r1 r2 (2tb - 1)
//   phi_ref = i r1 + z t1 phi4,  phi_trans = sqrt(z) t2 phi2
// (all scaled by phi_in; the z factors on phi_ref/phi_trans are the
// mirror1->mirror1 and mirror1->mirror2 propagation phases, required for
// |phi_ref|^2 + |phi_trans|^2 + 2 gamma_l |phi0|^2 = |phi_in|^2 off resonance;
// at delta_a = 0 they are unity).
FpSteadyState fp_steady_state(const SystemSpec& spec);

// On-resonance, high-finesse simplification (delta0 = delta_a = 0,
// r1 r2 >= 0.999, beta sin^2(alpha0/2) > t1, t2):
//   (phi1..phi4) = phi_in (-i t1 / (4 b s^2)) {(b e^{ia0}-1), (b-1), (1-b), (b(e^{-ia0}-2)+1)}
//   phi0/phi_in  = -i t1 / (2 s) sqrt(1/(b gamma)),  s = sin(alpha0/2)
// Throws PreconditionError naming any violated inequality.
FpSteadyState fp_resonance_simplified(const SystemSpec& spec);

// Chiral ring (beta2 = 0):
//   phi1 = -i t1 / N,  phi2 = -i t1 (1-2tb)/N,  phi3 = phi4 = -i t1 r2 (1-2tb)/N
//   phi0 = -t1 sqrt(z) sqrt(2tb/(gamma + i d0)) e^{-ia/2}/N
//   N    = 1 + z r1 r2 (2tb - 1)
FpSteadyState ring_steady_state(const SystemSpec& spec);

// Dispatch on spec.geometry.
FpSteadyState solve_steady_state(const SystemSpec& spec);

// Displacement of the two vacuum-Rabi maxima relative to +-g when the
// emitter sits off the intensity extremum (sin(alpha0) != 0) and away from
// the cavity center.  Magnitude (beta gamma / 2) |sin(alpha0)| |2 xa_frac - 1|.
// The two printed sign conventions disagree; shift_axis is the sign measured
// by the peak finder on the detuning axis, shift_probe_space its negative.
struct RabiShift {
    double magnitude;
    double shift_axis;         // displacement of both peaks along the detuning axis
    double shift_probe_space;  // same shift quoted in probe-frequency space
    std::array<double, 2> peak_positions;  // {-g, +g} + shift_axis
};

RabiShift rabi_shift(const SystemSpec& spec, Warnings* warnings = nullptr);

// |phi_in|^2 - |phi_ref|^2 - |phi_trans|^2 - 2 gamma_l |phi0|^2.
// Only defined for lossless mirrors (r^2 + t^2 = 1); vanishes identically
// there.  Throws PreconditionError for lossy mirrors.
double flux_residual(const FpSteadyState& state, const SystemSpec& spec);

}  // namespace cqed
