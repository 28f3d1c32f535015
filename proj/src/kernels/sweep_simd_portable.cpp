// Baseline-ISA SIMD backend: native_simd width of the default target flags
// (SSE2 on x86-64, NEON on aarch64).

#include "detuning_kernel_impl.hpp"

namespace cqed::kernels {

namespace {

using V = detail::stdx::native_simd<double>;

void portable_cascaded(const SystemSpec& base, double ecd,
                       std::span<const double> xs, CascadeBatch& out) {
    detail::cascaded_sweep<V>(base, ecd, xs, out);
}

void portable_jc(const SystemSpec& base, double ecd, std::span<const double> xs,
                 JcBatch& out) {
    detail::jc_sweep<V>(base, ecd, xs, out);
}

}  // namespace

const SweepKernels& simd_portable_kernels() {
    static const SweepKernels k{"simd", &portable_cascaded, &portable_jc};
    return k;
}

}  // namespace cqed::kernels
