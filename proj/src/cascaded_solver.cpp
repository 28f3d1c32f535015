#include "cqed/cascaded_solver.hpp"

#include <cmath>
#include <string>

namespace cqed {

namespace {

using Cld = std::complex<long double>;

constexpr double kSingularFloor = 1e-30;
constexpr double kHighFinesse = 0.999;  // r1 r2 threshold for the simplified forms

// Extended precision throughout: N cancels to O(t^2) on resonance and the
// acceptance tolerances (1e-10 relative vs the oracle, 1e-12 flux residual)
// need the extra mantissa bits there.
Complex to_d(Cld z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

Cld polar1(long double phase) {  // e^{i phase}
    return {std::cos(phase), std::sin(phase)};
}

void check_finite(const FpSteadyState& s) {
    if (!is_finite(s.phi1) || !is_finite(s.phi2) || !is_finite(s.phi3) ||
        !is_finite(s.phi4) || !is_finite(s.phi0) || !is_finite(s.phi_ref) ||
        !is_finite(s.phi_trans)) {
        throw SingularityError("cascaded steady state is not finite");
    }
}

}  // namespace

FpSteadyState fp_steady_state(const SystemSpec& spec) {
    spec.validate();
    if (spec.geometry != Geometry::FabryPerot) {
        throw PreconditionError("fp_steady_state requires FabryPerot geometry");
    }
    if (std::abs(spec.emitter.beta1 - spec.emitter.beta2) > 1e-12) {
        throw PreconditionError(
            "closed-form Fabry-Perot solution requires symmetric coupling "
            "beta1 = beta2 (use the scattering network for asymmetric coupling)");
    }

    const long double gamma = spec.emitter.gamma;
    const long double beta = spec.emitter.beta_total();
    const long double d0 = spec.probe.delta0;
    const long double da = spec.probe.delta_a;
    const long double nu = spec.cavity.nu_fsr;
    const long double r1 = spec.mirror1.r, t1 = spec.mirror1.t;
    const long double r2 = spec.mirror2.r, t2 = spec.mirror2.t;
    const long double amp = spec.probe.amp_in;
    const Cld i(0.0L, 1.0L);

    const Cld tb = beta / Cld(1.0L, d0 / gamma);
    const long double alpha = static_cast<long double>(spec.cavity.alpha0) -
                              da / nu * (1.0L - static_cast<long double>(spec.cavity.xa_frac));

    const Cld eia = polar1(alpha);
    const Cld emia = std::conj(eia);
    const Cld z = polar1(-da / nu);        // roundtrip phase e^{ikL}
    const Cld zh = polar1(-da / (2.0L * nu));  // half-roundtrip phase

    const Cld N = 1.0L - z * emia * r1 * tb - eia * r2 * tb + z * r1 * r2 * (2.0L * tb - 1.0L);
    if (std::abs(N) < kSingularFloor) {
        throw SingularityError("cascaded denominator N vanishes (lossless system "
                               "probed exactly at an eigenfrequency)");
    }

    FpSteadyState s;
    const Cld phi1 = -i * t1 * (eia * r2 * tb - 1.0L) / N * amp;
    const Cld phi2 = -i * t1 * (tb - 1.0L) / N * amp;
    const Cld phi3 = i * t1 * r2 * (tb - 1.0L) / N * amp;
    const Cld phi4 = i * t1 * (r2 * (2.0L * tb - 1.0L) - emia * tb) / N * amp;
    // principal sqrt; tb/(gamma + i d0) never crosses the negative real axis
    const Cld root = std::sqrt(tb / Cld(gamma, d0));
    const Cld phi0 =
        -t1 * zh * root * (polar1(alpha / 2.0L) * r2 - polar1(-alpha / 2.0L)) / N * amp;

    s.phi1 = to_d(phi1);
    s.phi2 = to_d(phi2);
    s.phi3 = to_d(phi3);
    s.phi4 = to_d(phi4);
    s.phi0 = to_d(phi0);
    s.phi_ref = to_d(i * r1 * amp + z * t1 * phi4);
    s.phi_trans = to_d(zh * t2 * phi2);
    s.denom_N = to_d(N);
    check_finite(s);
    return s;
}

FpSteadyState fp_resonance_simplified(const SystemSpec& spec) {
    spec.validate();
    if (spec.geometry != Geometry::FabryPerot) {
        throw PreconditionError("fp_resonance_simplified requires FabryPerot geometry");
    }
    if (spec.probe.delta0 != 0.0 || spec.probe.delta_a != 0.0) {
        throw PreconditionError("fp_resonance_simplified requires delta0 = delta_a = 0");
    }
    const double r1 = spec.mirror1.r, t1 = spec.mirror1.t;
    const double r2 = spec.mirror2.r, t2 = spec.mirror2.t;
    if (r1 * r2 < kHighFinesse) {
        throw PreconditionError("fp_resonance_simplified requires high finesse: r1*r2 >= " +
                                std::to_string(kHighFinesse) + ", got " +
                                std::to_string(r1 * r2));
    }
    const double beta = spec.emitter.beta_total();
    const double a0 = spec.cavity.alpha0;
    const double s_half = std::sin(a0 / 2.0);
    if (s_half == 0.0) {
        throw PreconditionError("fp_resonance_simplified requires sin(alpha0/2) != 0 "
                                "(emitter at a node decouples)");
    }
    const double coupling = beta * s_half * s_half;
    if (!(coupling > t1 && coupling > t2)) {
        throw PreconditionError(
            "fp_resonance_simplified requires beta*sin^2(alpha0/2) > t1, t2; got beta*sin^2 = " +
            std::to_string(coupling) + " vs t1 = " + std::to_string(t1) +
            ", t2 = " + std::to_string(t2));
    }

    const long double amp = spec.probe.amp_in;
    const long double b = beta;
    const Cld i(0.0L, 1.0L);
    const Cld eia0 = polar1(a0);
    const Cld pref = -i * static_cast<long double>(t1) /
                     (4.0L * b * static_cast<long double>(s_half) * s_half) * amp;

    FpSteadyState s;
    const Cld phi2 = pref * (b - 1.0L);
    const Cld phi4 = pref * (b * (std::conj(eia0) - 2.0L) + 1.0L);
    s.phi1 = to_d(pref * (b * eia0 - 1.0L));
    s.phi2 = to_d(phi2);
    s.phi3 = to_d(pref * (1.0L - b));
    s.phi4 = to_d(phi4);
    s.phi0 = to_d(-i * static_cast<long double>(t1) / (2.0L * s_half) /
                  std::sqrt(b * static_cast<long double>(spec.emitter.gamma)) * amp);
    s.phi_ref = to_d(Cld(0.0L, r1) * amp + static_cast<long double>(t1) * phi4);
    s.phi_trans = to_d(static_cast<long double>(t2) * phi2);
    s.denom_N = Complex(4.0 * beta * s_half * s_half, 0.0);
    check_finite(s);
    return s;
}

FpSteadyState ring_steady_state(const SystemSpec& spec) {
    spec.validate();
    if (spec.geometry != Geometry::ChiralRing) {
        throw PreconditionError("ring_steady_state requires ChiralRing geometry");
    }

    const long double gamma = spec.emitter.gamma;
    const long double beta = spec.emitter.beta1;
    const long double d0 = spec.probe.delta0;
    const long double da = spec.probe.delta_a;
    const long double nu = spec.cavity.nu_fsr;
    const long double r1 = spec.mirror1.r, t1 = spec.mirror1.t;
    const long double r2 = spec.mirror2.r, t2 = spec.mirror2.t;
    const long double amp = spec.probe.amp_in;
    const Cld i(0.0L, 1.0L);

    const Cld tb = beta / Cld(1.0L, d0 / gamma);
    const long double alpha = static_cast<long double>(spec.cavity.alpha0) -
                              da / nu * (1.0L - static_cast<long double>(spec.cavity.xa_frac));
    const Cld z = polar1(-da / nu);
    const Cld zh = polar1(-da / (2.0L * nu));

    // Roundtrip factor z r1 r2 t_at with the single-pass emitter transmission
    // t_at = 1 - 2 tb.
    const Cld N = 1.0L + z * r1 * r2 * (2.0L * tb - 1.0L);
    if (std::abs(N) < kSingularFloor) {
        throw SingularityError("ring denominator N vanishes");
    }

    FpSteadyState s;
    const Cld phi1 = -i * t1 / N * amp;
    const Cld phi2 = -i * t1 * (1.0L - 2.0L * tb) / N * amp;
    const Cld phi34 = -i * t1 * r2 * (1.0L - 2.0L * tb) / N * amp;
    const Cld root = std::sqrt(2.0L * tb / Cld(gamma, d0));
    const Cld phi0 = -t1 * zh * root * polar1(-alpha / 2.0L) / N * amp;

    s.phi1 = to_d(phi1);
    s.phi2 = to_d(phi2);
    s.phi3 = to_d(phi34);
    s.phi4 = s.phi3;  // single backward stretch: phi3 = phi4 exactly
    s.phi0 = to_d(phi0);
    s.phi_ref = to_d(i * r1 * amp + z * t1 * phi34);
    s.phi_trans = to_d(zh * t2 * phi2);
    s.denom_N = to_d(N);
    check_finite(s);
    return s;
}

FpSteadyState solve_steady_state(const SystemSpec& spec) {
    return spec.geometry == Geometry::FabryPerot ? fp_steady_state(spec)
                                                 : ring_steady_state(spec);
}

RabiShift rabi_shift(const SystemSpec& spec, Warnings* warnings) {
    spec.validate();
    const DerivedParams d = derive_params(spec);
    const double gamma = spec.emitter.gamma;
    if (d.g < 5.0 * gamma) {
        warn(warnings, "rabi_shift assumes strong coupling; g = " + std::to_string(d.g) +
                           " < 5 gamma");
    }
    if (spec.cavity.nu_fsr < 10.0 * gamma) {
        warn(warnings, "rabi_shift assumes nu_fsr >> gamma; nu_fsr = " +
                           std::to_string(spec.cavity.nu_fsr));
    }
    if (spec.probe.delta0 != spec.probe.delta_a) {
        warn(warnings, "rabi_shift assumes emitter-cavity resonance (delta0 = delta_a)");
    }
    const double beta = spec.emitter.beta_total();
    const double sin_a0 = std::sin(spec.cavity.alpha0);
    const double pos = 2.0 * spec.cavity.xa_frac - 1.0;  // = 4 x_a/L - 1
    // Both Rabi maxima are displaced by (beta gamma / 2) sin(alpha0)
    // (4 x_a/L - 1) along the detuning axis; the peak finder on the full
    // solution confirms this sign.  The opposite-sign convention (shift of
    // the maxima quoted against the scan direction) is exposed alongside.
    const double shift = beta * gamma / 2.0 * sin_a0 * pos;

    RabiShift r;
    r.magnitude = std::abs(shift);
    r.shift_axis = shift;
    r.shift_probe_space = -shift;
    r.peak_positions = {-d.g + shift, d.g + shift};
    return r;
}

double flux_residual(const FpSteadyState& state, const SystemSpec& spec) {
    spec.validate();
    const double loss1 = spec.mirror1.power_loss();
    const double loss2 = spec.mirror2.power_loss();
    if (std::abs(loss1) > 1e-12 || std::abs(loss2) > 1e-12) {
        throw PreconditionError(
            "flux_residual is only defined for lossless mirrors (r^2 + t^2 = 1); "
            "mirror power losses are " + std::to_string(loss1) + " and " +
            std::to_string(loss2));
    }
    const double gamma_l = spec.emitter.gamma_l();
    const double in2 = spec.probe.amp_in * spec.probe.amp_in;
    return in2 - std::norm(state.phi_ref) - std::norm(state.phi_trans) -
           2.0 * gamma_l * std::norm(state.phi0);
}

}  // namespace cqed
