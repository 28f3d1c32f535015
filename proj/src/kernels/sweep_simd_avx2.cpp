// AVX2+FMA backend; this translation unit is compiled with -mavx2 -mfma and
// must only be entered after the dispatcher has confirmed CPU support.

#include "detuning_kernel_impl.hpp"

namespace cqed::kernels {

namespace {

using V = detail::stdx::native_simd<double>;
static_assert(V::size() >= 4, "AVX2 TU expected to vectorize 4 doubles");

void avx2_cascaded(const SystemSpec& base, double ecd, std::span<const double> xs,
                   CascadeBatch& out) {
    detail::cascaded_sweep<V>(base, ecd, xs, out);
}

void avx2_jc(const SystemSpec& base, double ecd, std::span<const double> xs,
             JcBatch& out) {
    detail::jc_sweep<V>(base, ecd, xs, out);
}

}  // namespace

const SweepKernels& simd_avx2_kernels() {
    static const SweepKernels k{"simd-avx2", &avx2_cascaded, &avx2_jc};
    return k;
}

}  // namespace cqed::kernels
