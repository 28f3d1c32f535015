#pragma once

// Closed-form steady states of the driven Jaynes-Cummings model in the weak
// driving (single excitation) limit.
//
// Two algebraically equivalent routes are provided for the mirror probe:
//   * jc_mirror_probe       — raw (g, kappa) parametrization,
//   * jc_mirror_probe_beta  — beta/t parametrization,
// which must agree to ~1e-12 relative; the test suite enforces this.

#include "cqed/common.hpp"
#include "cqed/params.hpp"

namespace cqed {

struct JcSteadyState {
    Complex phi_a;        // global cavity amplitude (photon-number normalized)
    Complex phi_a_local;  // phi_a * sqrt(nu_fsr): per-length amplitude,
                          // directly comparable with the cascaded phi_i
    Complex phi0;         // emitter excitation amplitude
    Complex phi_ref;
    Complex phi_trans;
};

// Drive through mirror 1 with amplitude phi_in.  All outputs scale linearly
// with phi_in.  Steady state:
//   phi_a  = -i sqrt(2 kappa1) (gamma_l + i delta0) / D
//   phi0   = -  sqrt(2 kappa1) g / D
//   D      = g^2 + (gamma_l + i delta0)(kappa_l + i delta_a)
//   phi_ref   = phi_in - i sqrt(2 kappa1) phi_a
//   phi_trans = - i sqrt(2 kappa2) phi_a
// Throws SingularityError when |D| is numerically zero (lossless system
// probed exactly at an eigenfrequency).
JcSteadyState jc_mirror_probe(const SystemSpec& spec);

// Same steady state expressed through tilde_beta and the mirror
// transmissions; returns phi_a_local directly:
//   FP:   phi = -i t1 (1 - tb) / N,  N = (1-tb)(l_tot^2/2 + i da/nu) + 4 tb sin^2(a0/2)
//   ring: same with 4 tb sin^2(a0/2) -> 2 tb
JcSteadyState jc_mirror_probe_beta(const SystemSpec& spec);

// Drive the emitter via a weakly coupled external mode (beta_b <= 0.1;
// a warning is emitted above 0.01).  spec.probe.amp_in is the drive amplitude.
JcSteadyState jc_emitter_probe(const SystemSpec& spec, double beta_b,
                               Warnings* warnings = nullptr);

}  // namespace cqed
