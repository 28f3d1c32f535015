#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cqed/cascaded_solver.hpp"
#include "cqed/jc_solver.hpp"
#include "cqed/scattering_oracle.hpp"
#include "cqed/sweep.hpp"
#include "test_support.hpp"

using namespace cqed;

namespace {

SystemSpec fig_spec(double beta, double tsq = 1e-4, double nu = 250.0,
                    double alpha0 = kPi, double xa = 0.5) {
    CavitySpec cav;
    cav.nu_fsr = nu;
    cav.alpha0 = alpha0;
    cav.xa_frac = xa;
    return SystemSpec::symmetric_fp(beta, MirrorSpec::lossless_from_tsq(tsq),
                                    MirrorSpec::lossless_from_tsq(tsq), cav);
}

SystemSpec ring_spec(double beta, double tsq = 1e-4, double nu = 250.0) {
    CavitySpec cav;
    cav.nu_fsr = nu;
    return SystemSpec::chiral_ring(beta, MirrorSpec::lossless_from_tsq(tsq),
                                   MirrorSpec::lossless_from_tsq(tsq), cav);
}

}  // namespace

TEST_CASE("critical coupling at beta = 1/3: phi4 vanishes, reflection is bare r1") {
    const SystemSpec spec = fig_spec(1.0 / 3.0);
    const FpSteadyState s = fp_steady_state(spec);
    // phi4 = i t1 (1 - r2)/(3 N): suppressed by the residual 1 - r2
    CHECK(std::abs(s.phi4) < 1e-6);
    CHECK(std::abs(s.phi_ref) == doctest::Approx(spec.mirror1.r).epsilon(1e-8));
    // emitter + far mirror scatter everything: nothing transmitted either
    CHECK(std::abs(s.phi_trans) < 1e-2 * std::abs(s.phi1));
}

TEST_CASE("empty cavity reproduces the Airy buildup") {
    SystemSpec spec = fig_spec(0.0);
    SUBCASE("on resonance") {}
    SUBCASE("off resonance") {
        spec.probe.delta0 = spec.probe.delta_a = 2.4;
    }
    const FpSteadyState s = fp_steady_state(spec);
    const double r1 = spec.mirror1.r, r2 = spec.mirror2.r, t1 = spec.mirror1.t;
    const Complex loop =
        1.0 - std::polar(1.0, -spec.probe.delta_a / 250.0) * r1 * r2;
    CHECK(std::abs(s.phi1) == doctest::Approx(t1 / std::abs(loop)).epsilon(1e-10));
    CHECK(std::abs(s.phi2) == doctest::Approx(t1 / std::abs(loop)).epsilon(1e-10));
    CHECK(std::abs(s.phi3) == doctest::Approx(t1 * r2 / std::abs(loop)).epsilon(1e-10));
    CHECK(std::abs(s.phi4) == doctest::Approx(t1 * r2 / std::abs(loop)).epsilon(1e-10));
    CHECK(std::abs(s.phi0) == 0.0);
}

TEST_CASE("beta = 1: emitter acts as a perfect mirror, fields reach t1/2") {
    const SystemSpec spec = fig_spec(1.0);
    const FpSteadyState s = fp_steady_state(spec);
    const double t1 = spec.mirror1.t, r1 = spec.mirror1.r, r2 = spec.mirror2.r;
    // N = (1 + r1)(1 + r2) exactly at resonance, anti-node, beta = 1
    CHECK(std::abs(s.denom_N - Complex((1.0 + r1) * (1.0 + r2), 0.0)) < 1e-12);
    CHECK(std::abs(s.phi1) == doctest::Approx(t1 / (1.0 + r1)).epsilon(1e-12));
    CHECK(std::abs(s.phi4) == doctest::Approx(t1 / (1.0 + r1)).epsilon(1e-12));
    CHECK(std::abs(s.phi1) == doctest::Approx(t1 / 2.0).epsilon(1e-4));
    CHECK(std::abs(s.phi2) == 0.0);
    CHECK(std::abs(s.phi3) == 0.0);
}

TEST_CASE("simplified on-resonance forms") {
    SUBCASE("beta = 1/3 at the anti-node: (i t1, i t1/2, -i t1/2, 0)") {
        const SystemSpec spec = fig_spec(1.0 / 3.0);
        const FpSteadyState s = fp_resonance_simplified(spec);
        const double t1 = spec.mirror1.t;
        CHECK(std::abs(s.phi1 - Complex(0.0, t1)) < 1e-15);
        CHECK(std::abs(s.phi2 - Complex(0.0, t1 / 2.0)) < 1e-15);
        CHECK(std::abs(s.phi3 - Complex(0.0, -t1 / 2.0)) < 1e-15);
        CHECK(std::abs(s.phi4) < 1e-15);
        // phi0 = -i t1/(2 sin(a0/2)) sqrt(1/(beta gamma))
        const double expected0 = t1 / 2.0 * std::sqrt(3.0);
        CHECK(std::abs(s.phi0) == doctest::Approx(expected0).epsilon(1e-12));
    }

    SUBCASE("beta = 1 at half intensity (alpha0 = pi/2)") {
        const SystemSpec spec = fig_spec(1.0, 1e-4, 250.0, kPi / 2.0);
        const FpSteadyState s = fp_resonance_simplified(spec);
        const double t1 = spec.mirror1.t;
        CHECK(std::abs(s.phi1) == doctest::Approx(t1 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(std::abs(s.phi4) == doctest::Approx(t1 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(std::abs(s.phi2) < 1e-15);
        CHECK(std::abs(s.phi3) < 1e-15);
    }

    SUBCASE("agrees with the full solution in the high-finesse limit") {
        for (double beta : {0.2, 0.5, 0.9}) {
            for (double alpha0 : {kPi, 2.0 * kPi / 3.0}) {
                const SystemSpec spec = fig_spec(beta, 1e-6, 250.0, alpha0);
                const FpSteadyState full = fp_steady_state(spec);
                const FpSteadyState simp = fp_resonance_simplified(spec);
                const Complex fs[] = {full.phi1, full.phi2, full.phi3, full.phi4};
                const Complex ss[] = {simp.phi1, simp.phi2, simp.phi3, simp.phi4};
                for (int i = 0; i < 4; ++i) {
                    CHECK(std::abs(std::abs(fs[i]) - std::abs(ss[i])) <=
                          1e-4 * std::abs(full.phi1) + 1e-12);
                }
            }
        }
    }

    SUBCASE("preconditions are rejected by name") {
        // weak coupling: beta sin^2 < t
        SystemSpec weak = fig_spec(1e-5);
        CHECK_THROWS_WITH_AS(fp_resonance_simplified(weak),
                             doctest::Contains("beta*sin^2"), PreconditionError);
        // node
        SystemSpec node = fig_spec(0.5, 1e-4, 250.0, 0.0);
        CHECK_THROWS_AS(fp_resonance_simplified(node), PreconditionError);
        // low finesse
        SystemSpec low = fig_spec(0.5, 0.5);
        CHECK_THROWS_WITH_AS(fp_resonance_simplified(low),
                             doctest::Contains("high finesse"), PreconditionError);
        // off resonance
        SystemSpec det = fig_spec(0.5);
        det.probe.delta0 = 0.1;
        CHECK_THROWS_AS(fp_resonance_simplified(det), PreconditionError);
    }
}

TEST_CASE("ring steady states") {
    SUBCASE("perfect absorption at beta = 1/2") {
        const FpSteadyState s = ring_steady_state(ring_spec(0.5));
        CHECK(std::abs(s.phi2) == 0.0);
        CHECK(std::abs(s.phi3) == 0.0);
        CHECK(std::abs(s.phi4) == 0.0);
        // N = 1 exactly: the input builds up only to t1 in the first region
        CHECK(std::abs(s.phi1) == doctest::Approx(0.01).epsilon(1e-10));
        CHECK(s.phi3 == s.phi4);
    }

    SUBCASE("empty ring Airy buildup") {
        const SystemSpec spec = ring_spec(0.0);
        const FpSteadyState s = ring_steady_state(spec);
        const double t1 = spec.mirror1.t;
        const double denom = 1.0 - spec.mirror1.r * spec.mirror2.r;
        CHECK(std::abs(s.phi1) == doctest::Approx(t1 / denom).epsilon(1e-10));
        CHECK(std::abs(s.phi2) == doctest::Approx(t1 / denom).epsilon(1e-10));
    }

    SUBCASE("beta = 1: half field with a pi phase flip of the transmission") {
        const SystemSpec spec = ring_spec(1.0);
        const FpSteadyState s = ring_steady_state(spec);
        const double t1 = spec.mirror1.t;
        const double expected = t1 / (1.0 + spec.mirror1.r * spec.mirror2.r);
        CHECK(std::abs(s.phi2) == doctest::Approx(expected).epsilon(1e-10));
        CHECK(std::abs(s.phi2) == doctest::Approx(t1 / 2.0).epsilon(1e-4));
        const FpSteadyState empty = ring_steady_state(ring_spec(0.0));
        const double phase_flip =
            std::abs(std::remainder(std::arg(s.phi2) - std::arg(empty.phi2), 2.0 * kPi));
        CHECK(phase_flip == doctest::Approx(kPi).epsilon(1e-9));
    }

    SUBCASE("phi3 == phi4 exactly for every ring solve") {
        testing::SpecSampler sampler(99);
        for (int i = 0; i < 50; ++i) {
            SystemSpec spec = sampler.spec(false);
            if (spec.geometry != Geometry::ChiralRing) continue;
            const FpSteadyState s = ring_steady_state(spec);
            CHECK(s.phi3 == s.phi4);
        }
    }
}

TEST_CASE("rabi shift predictor") {
    auto shifted = [](double alpha0, double xa) {
        CavitySpec cav;
        cav.nu_fsr = 50.0;
        cav.alpha0 = alpha0;
        cav.xa_frac = xa;
        return SystemSpec::symmetric_fp(1.0, MirrorSpec::lossless_from_tsq(1e-4),
                                        MirrorSpec::lossless_from_tsq(1e-4), cav);
    };
    CHECK(rabi_shift(shifted(kPi / 2.0, 0.5)).magnitude == doctest::Approx(0.0));
    CHECK(rabi_shift(shifted(kPi, 0.0)).magnitude == doctest::Approx(0.0).epsilon(1e-12));
    const RabiShift r = rabi_shift(shifted(kPi / 2.0, 0.0));
    CHECK(r.magnitude == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.shift_axis == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(r.shift_probe_space == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.peak_positions[1] == doctest::Approx(10.0 - 0.5).epsilon(1e-10));

    Warnings w;
    CavitySpec weak_cav;
    weak_cav.nu_fsr = 2.0;
    const SystemSpec weak = SystemSpec::symmetric_fp(
        0.2, MirrorSpec::lossless_from_tsq(1e-4), MirrorSpec::lossless_from_tsq(1e-4), weak_cav);
    rabi_shift(weak, &w);
    CHECK(w.size() >= 1);  // g < 5 gamma
}

TEST_CASE("flux residual") {
    SUBCASE("lossy mirrors are rejected") {
        SystemSpec lossy = fig_spec(0.3);
        lossy.mirror1.r = std::sqrt(1.0 - 1e-4 - 1e-5);
        const FpSteadyState s = fp_steady_state(lossy);
        CHECK_THROWS_AS(flux_residual(s, lossy), PreconditionError);
    }

    SUBCASE("lossless empty cavity conserves flux at any detuning") {
        // "lossless" is quantized by the double r = sqrt(1 - t^2); the
        // ~1e-17 unitarity defect is amplified by the resonant buildup
        // (~2/t^2), which sets the 1e-12 bound rather than machine epsilon
        for (double delta : {0.0, 1.0, -4.2, 100.0}) {
            SystemSpec spec = fig_spec(0.0);
            spec.probe.delta0 = spec.probe.delta_a = delta;
            const FpSteadyState s = fp_steady_state(spec);
            CHECK(std::abs(flux_residual(s, spec)) < 1e-12);
        }
    }

    SUBCASE("beta = 1 leaves no scattering channel") {
        SystemSpec spec = fig_spec(1.0);
        spec.probe.delta0 = spec.probe.delta_a = 0.8;
        const FpSteadyState s = fp_steady_state(spec);
        CHECK(std::abs(std::norm(s.phi_ref) + std::norm(s.phi_trans) - 1.0) < 1e-13);
    }

    SUBCASE("free-space chiral emitter at beta1 = 1/2 absorbs everything") {
        // r = 0, t = 1 "mirrors" turn the resonator into a single pass
        MirrorSpec open;
        open.r = 0.0;
        open.t = 1.0;
        CavitySpec cav;
        cav.nu_fsr = 250.0;
        SystemSpec spec;
        spec.mirror1 = open;
        spec.mirror2 = open;
        spec.emitter.beta1 = 0.5;
        spec.emitter.beta2 = 0.0;
        spec.cavity = cav;
        const OracleResult o = oracle_solve(spec);
        CHECK(std::abs(o.state.phi_trans) < 1e-14);       // t_at = 0
        const double scattered = 2.0 * spec.emitter.gamma_l() * std::norm(o.state.phi0);
        CHECK(scattered == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(flux_residual(o.state, spec)) < 1e-12);
    }
}

TEST_CASE("closed forms match the scattering oracle over random systems") {
    testing::SpecSampler sampler(2024);
    for (int i = 0; i < 200; ++i) {
        const SystemSpec spec = sampler.spec(false);
        const FpSteadyState cf = solve_steady_state(spec);
        const FpSteadyState orc = oracle_solve(spec).state;
        const Complex a[] = {cf.phi0, cf.phi1, cf.phi2, cf.phi3, cf.phi4, cf.phi_ref, cf.phi_trans};
        const Complex b[] = {orc.phi0, orc.phi1, orc.phi2, orc.phi3, orc.phi4, orc.phi_ref, orc.phi_trans};
        for (int k = 0; k < 7; ++k) {
            const double diff = std::abs(std::abs(a[k]) - std::abs(b[k]));
            CHECK(diff <= 1e-10 * std::abs(a[k]) + 1e-12);
        }
    }
}

TEST_CASE("flux conservation over random lossless systems") {
    testing::SpecSampler sampler(515151);
    for (int i = 0; i < 200; ++i) {
        const SystemSpec spec = sampler.spec(true);
        CHECK(std::abs(flux_residual(solve_steady_state(spec), spec)) <= 1e-12);
        CHECK(std::abs(flux_residual(oracle_solve(spec).state, spec)) <= 1e-12);
    }
}

TEST_CASE("small-beta limit approaches the single-mode model") {
    double prev_worst = 1.0;
    for (double beta : {1e-3, 1e-4}) {
        const SystemSpec base = fig_spec(beta);
        const double g = derive_params(base).g;
        double worst = 0.0;
        for (int i = 0; i < 201; ++i) {
            const double x = -3.0 * g + 6.0 * g * i / 200.0;
            SystemSpec s = base;
            s.probe.delta0 = s.probe.delta_a = x;
            const FpSteadyState cf = fp_steady_state(s);
            const double ref = std::abs(jc_mirror_probe(s).phi_a_local);
            for (const Complex& v : {cf.phi1, cf.phi2, cf.phi3, cf.phi4}) {
                worst = std::max(worst, std::abs(std::abs(v) - ref) / ref);
            }
        }
        CHECK(worst <= 0.05);
        CHECK(worst < prev_worst);  // strictly smaller at smaller beta
        prev_worst = worst;
    }
}

TEST_CASE("emitter excitation agrees between the two models on resonance") {
    // high finesse pushed to t^2 = 1e-8 so the finite-finesse O(t^2/beta)
    // correction sits well below the 1e-6 bar
    for (double beta : {0.1, 1.0 / 3.0, 0.7, 1.0}) {
        const SystemSpec spec = fig_spec(beta, 1e-8);
        const double simplified = std::abs(fp_resonance_simplified(spec).phi0);
        const double jc = std::abs(jc_mirror_probe_beta(spec).phi0);
        CHECK(std::abs(simplified - jc) <= 1e-6 * jc);
    }
}

TEST_CASE("large detunings: both models converge to the same fields") {
    const SystemSpec base = fig_spec(0.5);
    for (double delta : {50.0, -50.0, 120.0}) {
        SystemSpec s = base;
        s.probe.delta0 = s.probe.delta_a = delta;
        const FpSteadyState cf = fp_steady_state(s);
        const double ref = std::abs(jc_mirror_probe(s).phi_a_local);
        for (const Complex& v : {cf.phi1, cf.phi2, cf.phi3, cf.phi4}) {
            CHECK(std::abs(std::abs(v) - ref) <= 0.01 * ref);
        }
    }
}

TEST_CASE("minimum of phi1 sits at +beta gamma for alpha0 = +pi/2") {
    for (double xa : {0.0, 0.5, 1.0}) {
        CavitySpec cav;
        cav.nu_fsr = 50.0;
        cav.alpha0 = kPi / 2.0;
        cav.xa_frac = xa;
        const SystemSpec spec = SystemSpec::symmetric_fp(
            1.0, MirrorSpec::lossless_from_tsq(1e-4), MirrorSpec::lossless_from_tsq(1e-4), cav);
        const BatchFn f =
            make_field_evaluator(spec, Model::Cascaded, Engine::ClosedForm, "abs_phi1");
        const PeakReport report = find_peaks(f, -4.0, 4.0, 801);
        REQUIRE(!report.extrema.empty());
        double min_pos = 0.0, min_height = 1e300;
        for (const Extremum& e : report.extrema) {
            if (e.kind == Extremum::Kind::Min && e.height < min_height) {
                min_height = e.height;
                min_pos = e.position;
            }
        }
        CHECK(min_pos == doctest::Approx(1.0).epsilon(0.05));
    }

    // sign flips at the other half-intensity point
    CavitySpec cav;
    cav.nu_fsr = 50.0;
    cav.alpha0 = -kPi / 2.0;
    cav.xa_frac = 0.0;
    const SystemSpec spec = SystemSpec::symmetric_fp(
        1.0, MirrorSpec::lossless_from_tsq(1e-4), MirrorSpec::lossless_from_tsq(1e-4), cav);
    const BatchFn f =
        make_field_evaluator(spec, Model::Cascaded, Engine::ClosedForm, "abs_phi1");
    const PeakReport report = find_peaks(f, -4.0, 4.0, 801);
    double min_pos = 0.0, min_height = 1e300;
    for (const Extremum& e : report.extrema) {
        if (e.kind == Extremum::Kind::Min && e.height < min_height) {
            min_height = e.height;
            min_pos = e.position;
        }
    }
    CHECK(min_pos == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("probing through the other mirror flips the Rabi-peak shift") {
    CavitySpec cav;
    cav.nu_fsr = 50.0;
    cav.alpha0 = kPi / 2.0;
    cav.xa_frac = 0.0;
    const SystemSpec spec = SystemSpec::symmetric_fp(
        1.0, MirrorSpec::lossless_from_tsq(1e-4), MirrorSpec::lossless_from_tsq(1e-4), cav);
    const double g = derive_params(spec).g;

    auto mean_shift = [&](const SystemSpec& s) {
        const BatchFn f =
            make_field_evaluator(s, Model::Cascaded, Engine::ClosedForm, "abs_phi1");
        const PeakReport report = find_peaks(f, -1.5 * g, 1.5 * g, 2001);
        double lo = 0.0, hi = 0.0;
        for (const Extremum& e : report.extrema) {
            if (e.kind != Extremum::Kind::Max) continue;
            if (e.position < 0) lo = e.position;
            else hi = e.position;
        }
        REQUIRE(lo != 0.0);
        REQUIRE(hi != 0.0);
        return (lo + hi) / 2.0;
    };

    const double forward = mean_shift(spec);
    const double swapped = mean_shift(spec.swapped_mirrors());
    CHECK(forward == doctest::Approx(-0.5).epsilon(0.15));
    CHECK(swapped == doctest::Approx(0.5).epsilon(0.15));
    CHECK(forward * swapped < 0.0);
}
