#include "cqed/params.hpp"

#include <cmath>
#include <limits>

namespace cqed {

namespace {
constexpr double kUnitSlack = 1e-12;  // rounding slack on unit-range checks
}

MirrorSpec MirrorSpec::lossless_from_tsq(double tsq) {
    if (tsq < 0.0 || tsq > 1.0) {
        throw InvalidSpec("mirror power transmission t^2 must be in [0,1], got " +
                          std::to_string(tsq));
    }
    MirrorSpec m;
    m.t = std::sqrt(tsq);
    m.r = std::sqrt(1.0 - tsq);
    return m;
}

void MirrorSpec::validate() const {
    if (!(r >= 0.0 && r <= 1.0) || !(t >= 0.0 && t <= 1.0)) {
        throw InvalidSpec("mirror coefficients must satisfy 0 <= r,t <= 1 (r=" +
                          std::to_string(r) + ", t=" + std::to_string(t) + ")");
    }
    if (r * r + t * t > 1.0 + kUnitSlack) {
        throw InvalidSpec("mirror violates r^2 + t^2 <= 1 (r=" + std::to_string(r) +
                          ", t=" + std::to_string(t) + ")");
    }
}

void EmitterSpec::validate() const {
    if (!(gamma > 0.0)) throw InvalidSpec("emitter gamma must be positive");
    if (beta1 < 0.0 || beta2 < 0.0) throw InvalidSpec("beta1/beta2 must be non-negative");
    if (beta1 + beta2 > 1.0 + kUnitSlack) {
        throw InvalidSpec("beta1 + beta2 must not exceed 1, got " +
                          std::to_string(beta1 + beta2));
    }
}

void CavitySpec::validate() const {
    if (!(nu_fsr > 0.0)) throw InvalidSpec("nu_fsr must be positive");
    if (!(xa_frac >= 0.0 && xa_frac <= 1.0)) {
        throw InvalidSpec("xa_frac must be in [0,1], got " + std::to_string(xa_frac));
    }
    if (!std::isfinite(alpha0)) throw InvalidSpec("alpha0 must be finite");
}

void ProbeSpec::validate() const {
    if (!std::isfinite(delta0) || !std::isfinite(delta_a)) {
        throw InvalidSpec("detunings must be finite");
    }
    if (amp_in == 0.0 || !std::isfinite(amp_in)) {
        throw InvalidSpec("probe amplitude amp_in must be finite and nonzero");
    }
}

std::string to_string(Geometry g) {
    return g == Geometry::FabryPerot ? "fp" : "ring";
}

void SystemSpec::validate() const {
    mirror1.validate();
    mirror2.validate();
    emitter.validate();
    cavity.validate();
    probe.validate();
    if (geometry == Geometry::ChiralRing && emitter.beta2 != 0.0) {
        throw InvalidSpec("chiral ring geometry requires beta2 = 0");
    }
}

SystemSpec SystemSpec::symmetric_fp(double beta, MirrorSpec m1, MirrorSpec m2,
                                    CavitySpec cavity, ProbeSpec probe) {
    SystemSpec s;
    s.mirror1 = m1;
    s.mirror2 = m2;
    s.emitter.beta1 = beta / 2.0;
    s.emitter.beta2 = beta / 2.0;
    s.cavity = cavity;
    s.probe = probe;
    s.geometry = Geometry::FabryPerot;
    s.validate();
    return s;
}

SystemSpec SystemSpec::chiral_ring(double beta, MirrorSpec m1, MirrorSpec m2,
                                   CavitySpec cavity, ProbeSpec probe) {
    SystemSpec s;
    s.mirror1 = m1;
    s.mirror2 = m2;
    s.emitter.beta1 = beta;
    s.emitter.beta2 = 0.0;
    s.cavity = cavity;
    s.probe = probe;
    s.geometry = Geometry::ChiralRing;
    s.validate();
    return s;
}

SystemSpec SystemSpec::swapped_mirrors() const {
    SystemSpec s = *this;
    s.mirror1 = mirror2;
    s.mirror2 = mirror1;
    s.cavity.xa_frac = 1.0 - cavity.xa_frac;
    return s;
}

double kappa_from_transmission(double t, double nu_fsr) {
    if (t < 0.0 || t > 1.0) {
        throw InvalidSpec("transmission must be in [0,1], got " + std::to_string(t));
    }
    if (!(nu_fsr > 0.0)) throw InvalidSpec("nu_fsr must be positive");
    return t * t * nu_fsr / 2.0;
}

double transmission_from_kappa(double kappa, double nu_fsr) {
    if (kappa < 0.0) throw InvalidSpec("kappa must be non-negative");
    if (!(nu_fsr > 0.0)) throw InvalidSpec("nu_fsr must be positive");
    return std::sqrt(2.0 * kappa / nu_fsr);
}

double coupling_g(double beta, double gamma, double nu_fsr, double alpha0,
                  Geometry geometry) {
    if (beta < 0.0 || beta > 1.0 + kUnitSlack) {
        throw InvalidSpec("beta must be in [0,1], got " + std::to_string(beta));
    }
    if (!(gamma > 0.0) || !(nu_fsr > 0.0)) {
        throw InvalidSpec("gamma and nu_fsr must be positive");
    }
    if (geometry == Geometry::ChiralRing) {
        return std::sqrt(2.0 * beta * gamma * nu_fsr);
    }
    return 2.0 * std::abs(std::sin(alpha0 / 2.0)) * std::sqrt(beta * gamma * nu_fsr);
}

EffectiveRates effective_rates(double g, double gamma_l, double kappa_l) {
    if (gamma_l < 0.0 || kappa_l < 0.0) {
        throw InvalidSpec("loss rates must be non-negative");
    }
    const double gsq = g * g;
    if (gsq == 0.0) return {0.0, 0.0};
    if (gamma_l == 0.0) {
        throw DivergenceError(
            "Gamma = g^2/gamma_l diverges: no free-space decay channel remains "
            "(gamma_l = 0), so the cavity field changes faster than one roundtrip "
            "and a single global cavity mode no longer describes the system");
    }
    if (kappa_l == 0.0) {
        throw DivergenceError(
            "K = g^2/kappa_l diverges: the resonator has no loss channel "
            "(kappa_l = 0), so the cavity-induced emitter decay rate is unbounded "
            "and a single global cavity mode no longer describes the system");
    }
    return {gsq / gamma_l, gsq / kappa_l};
}

double jc_breakdown_margin(double beta, double alpha0) {
    if (beta < 0.0 || beta >= 1.0) {
        if (beta == 1.0 || (beta > 1.0 && beta <= 1.0 + kUnitSlack)) {
            throw DivergenceError(
                "breakdown margin Gamma/nu_fsr diverges at beta = 1: the emitter "
                "has no free-space decay left (gamma_l = 0)");
        }
        throw InvalidSpec("beta must be in [0,1), got " + std::to_string(beta));
    }
    const double s = std::sin(alpha0 / 2.0);
    return 4.0 * beta * s * s / (1.0 - beta);
}

double cooperativity(double beta, double finesse) {
    if (beta < 0.0 || beta >= 1.0) {
        throw InvalidSpec("cooperativity requires 0 <= beta < 1, got " +
                          std::to_string(beta));
    }
    if (!(finesse > 0.0)) throw InvalidSpec("finesse must be positive");
    return 2.0 * beta / (1.0 - beta) * finesse / kPi;
}

double finesse_from(double kappa_l, double nu_fsr) {
    if (!(kappa_l > 0.0) || !(nu_fsr > 0.0)) {
        throw InvalidSpec("finesse requires kappa_l > 0 and nu_fsr > 0");
    }
    return kPi * nu_fsr / kappa_l;
}

Complex tilde_beta(double beta, double delta0, double gamma) {
    if (!(gamma > 0.0)) throw InvalidSpec("gamma must be positive");
    return beta / Complex(1.0, delta0 / gamma);
}

double alpha_of_detuning(double alpha0, double delta_a, double nu_fsr,
                         double xa_frac) {
    if (!(xa_frac >= 0.0 && xa_frac <= 1.0)) {
        throw InvalidSpec("xa_frac must be in [0,1], got " + std::to_string(xa_frac));
    }
    if (!(nu_fsr > 0.0)) throw InvalidSpec("nu_fsr must be positive");
    // x_a/L = xa_frac/2, so 1 - 2 x_a/L = 1 - xa_frac.
    return alpha0 - delta_a / nu_fsr * (1.0 - xa_frac);
}

DerivedParams derive_params(const SystemSpec& spec) {
    spec.validate();
    DerivedParams d;
    const double nu = spec.cavity.nu_fsr;
    d.kappa1 = kappa_from_transmission(spec.mirror1.t, nu);
    d.kappa2 = kappa_from_transmission(spec.mirror2.t, nu);
    const double l0_sq =
        std::max(0.0, spec.mirror1.power_loss()) + std::max(0.0, spec.mirror2.power_loss());
    d.kappa0 = l0_sq * nu / 2.0;
    d.kappa_l = d.kappa0 + d.kappa1 + d.kappa2;
    d.gamma_l = spec.emitter.gamma_l();
    d.beta_total = spec.emitter.beta_total();
    d.g = coupling_g(d.beta_total, spec.emitter.gamma, nu, spec.cavity.alpha0,
                     spec.geometry);
    d.l_tot_sq = l0_sq + spec.mirror1.t * spec.mirror1.t + spec.mirror2.t * spec.mirror2.t;
    d.finesse = d.kappa_l > 0.0 ? kPi * nu / d.kappa_l
                                : std::numeric_limits<double>::infinity();
    return d;
}

}  // namespace cqed
