#include <limits>

#include "cqed/cascaded_solver.hpp"
#include "cqed/jc_solver.hpp"
#include "cqed/kernels.hpp"

namespace cqed::kernels {

void CascadeBatch::resize(std::size_t n) {
    phi1.resize(n);
    phi2.resize(n);
    phi3.resize(n);
    phi4.resize(n);
    phi0.resize(n);
    phi_ref.resize(n);
    phi_trans.resize(n);
}

void JcBatch::resize(std::size_t n) {
    phi_local.resize(n);
    phi0.resize(n);
    phi_ref.resize(n);
    phi_trans.resize(n);
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Reference backend: one closed-form solve per grid point.  Singular points
// become NaN rows instead of aborting the batch.
void scalar_cascaded(const SystemSpec& base, double ecd, std::span<const double> xs,
                     CascadeBatch& out) {
    out.resize(xs.size());
    SystemSpec spec = base;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        spec.probe.delta_a = xs[i];
        spec.probe.delta0 = xs[i] + ecd;
        try {
            const FpSteadyState s = solve_steady_state(spec);
            out.phi1[i] = s.phi1;
            out.phi2[i] = s.phi2;
            out.phi3[i] = s.phi3;
            out.phi4[i] = s.phi4;
            out.phi0[i] = s.phi0;
            out.phi_ref[i] = s.phi_ref;
            out.phi_trans[i] = s.phi_trans;
        } catch (const SingularityError&) {
            const Complex bad(kNan, kNan);
            out.phi1[i] = out.phi2[i] = out.phi3[i] = out.phi4[i] = bad;
            out.phi0[i] = out.phi_ref[i] = out.phi_trans[i] = bad;
        }
    }
}

void scalar_jc(const SystemSpec& base, double ecd, std::span<const double> xs,
               JcBatch& out) {
    out.resize(xs.size());
    SystemSpec spec = base;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        spec.probe.delta_a = xs[i];
        spec.probe.delta0 = xs[i] + ecd;
        try {
            const JcSteadyState s = jc_mirror_probe(spec);
            out.phi_local[i] = s.phi_a_local;
            out.phi0[i] = s.phi0;
            out.phi_ref[i] = s.phi_ref;
            out.phi_trans[i] = s.phi_trans;
        } catch (const SingularityError&) {
            const Complex bad(kNan, kNan);
            out.phi_local[i] = out.phi0[i] = out.phi_ref[i] = out.phi_trans[i] = bad;
        }
    }
}

}  // namespace

const SweepKernels& scalar_kernels() {
    static const SweepKernels k{"scalar", &scalar_cascaded, &scalar_jc};
    return k;
}

}  // namespace cqed::kernels
