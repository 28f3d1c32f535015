#pragma once

// Physical parameters and the algebraic relations between them.
//
// Unit conventions used throughout:
//   * c = 1 (group velocity), so the roundtrip length is L = 1/nu_fsr and is
//     never stored.
//   * All rates (gamma, kappa, nu_fsr, detunings) share one rate unit; the CLI
//     fixes gamma = 1 and expresses everything in units of gamma.
//   * Absolute optical frequencies are never represented.  Only the

//     detunings delta0 = omega_0 - omega_p and delta_a = omega_a - omega_p
//     enter any formula; the emitter-cavity detuning is delta0 - delta_a.

#include <string>

#include "cqed/common.hpp"

namespace cqed {

// Amplitude reflection/transmission of one mirror (or ring coupler).
// r^2 + t^2 < 1 encodes loss on reflection; r, t are real and non-negative.
struct MirrorSpec {
    double r = 0.0;
    double t = 1.0;

    // Lossless mirror with power transmission t^2 = tsq.
    static MirrorSpec lossless_from_tsq(double tsq);

    // Per-bounce power loss 1 - r^2 - t^2 (>= 0 for a valid mirror).
    double power_loss() const { return 1.0 - r * r - t * t; }

    void validate() const;
};

// Two-level emitter: total free-space dipole decay rate gamma and the
// channeling efficiencies beta1/beta2 into the forward/backward circulating
// mode.  The residual decay into the environment is gamma_l = (1-b1-b2)*gamma.
struct EmitterSpec {
    double gamma = 1.0;
    double beta1 = 0.0;
    double beta2 = 0.0;

    double beta_total() const { return beta1 + beta2; }
    double gamma_l() const { return (1.0 - beta1 - beta2) * gamma; }

    void validate() const;
};

// Resonator geometry: free spectral range, emitter position along the axis
// as xa_frac = x_a/(L/2) in [0,1] (0 = mirror 1, 1 = mirror 2), and the
// standing-wave phase alpha0 at the emitter (0 = node, pi = anti-node).
struct CavitySpec {
    double nu_fsr = 250.0;
    double xa_frac = 0.5;
    double alpha0 = kPi;

    void validate() const;
};

struct ProbeSpec {
    double delta0 = 0.0;   // omega_0 - omega_p
    double delta_a = 0.0;  // omega_a - omega_p
    double amp_in = 1.0;   // drive amplitude phi_in (must be nonzero)

    void validate() const;
};

enum class Geometry { FabryPerot, ChiralRing };

std::string to_string(Geometry g);

struct SystemSpec {
    MirrorSpec mirror1;
    MirrorSpec mirror2;
    EmitterSpec emitter;
    CavitySpec cavity;
    ProbeSpec probe;
    Geometry geometry = Geometry::FabryPerot;

    void validate() const;

    // Symmetric Fabry-Perot coupling: beta1 = beta2 = beta/2.
    static SystemSpec symmetric_fp(double beta, MirrorSpec m1, MirrorSpec m2,
                                   CavitySpec cavity, ProbeSpec probe = {});
    // Fully chiral ring: beta1 = beta, beta2 = 0.
    static SystemSpec chiral_ring(double beta, MirrorSpec m1, MirrorSpec m2,
                                  CavitySpec cavity, ProbeSpec probe = {});

    // Probe through mirror 2 instead: swap mirrors, xa_frac -> 1 - xa_frac.
    SystemSpec swapped_mirrors() const;
};

// kappa = t^2 * nu_fsr / 2, the field decay rate of one mirror channel.
// The same relation maps a roundtrip power loss l0^2 to kappa_0.
double kappa_from_transmission(double t, double nu_fsr);

// Inverse of the above: t = sqrt(2 kappa / nu_fsr).
double transmission_from_kappa(double kappa, double nu_fsr);

// Emitter-resonator coupling strength.
//   Fabry-Perot: g = 2|sin(alpha0/2)| sqrt(beta gamma nu_fsr)
//   chiral ring: g = sqrt(2 beta gamma nu_fsr), independent of alpha0
double coupling_g(double beta, double gamma, double nu_fsr, double alpha0,
                  Geometry geometry);

struct EffectiveRates {
    double big_gamma;  // emitter-induced cavity decay, g^2/gamma_l
    double big_k;      // cavity-induced emitter decay, g^2/kappa_l
};

// Throws DivergenceError when gamma_l or kappa_l vanishes (with g > 0):
// the effective rate diverges and the single-mode description fails.
EffectiveRates effective_rates(double g, double gamma_l, double kappa_l);

// Gamma/nu_fsr = 4 beta sin^2(alpha0/2) / (1 - beta).  Values >= 1 mean the
// assumption of one global cavity field fails; at alpha0 = pi the boundary
// sits exactly at beta = 1/5.
double jc_breakdown_margin(double beta, double alpha0);

// C = 2 beta/(1-beta) * F/pi.
double cooperativity(double beta, double finesse);

// F = pi nu_fsr / kappa_l.
double finesse_from(double kappa_l, double nu_fsr);

// Detuning-dressed channeling efficiency: beta / (1 + i delta0/gamma).
Complex tilde_beta(double beta, double delta0, double gamma);

// Standing-wave phase at the emitter as a function of cavity-probe detuning:
// alpha = alpha0 - (delta_a/nu_fsr) (1 - 2 x_a/L), with x_a/L = xa_frac/2.
double alpha_of_detuning(double alpha0, double delta_a, double nu_fsr,
                         double xa_frac);

// Everything the solvers and the CLI derive from a SystemSpec.
struct DerivedParams {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double kappa0 = 0.0;  // from the mirrors' power-loss deficits
    double kappa_l = 0.0;
    double gamma_l = 0.0;
    double g = 0.0;
    double beta_total = 0.0;
    double l_tot_sq = 0.0;  // l0^2 + t1^2 + t2^2 (total roundtrip power loss)
    double finesse = 0.0;
};

DerivedParams derive_params(const SystemSpec& spec);

}  // namespace cqed
