#include <vector>

#include "cqed/kernels.hpp"

namespace cqed::kernels {

const SweepKernels& simd_portable_kernels();
#if CQED_HAVE_AVX2_TU
const SweepKernels& simd_avx2_kernels();
#endif

namespace {

#if CQED_HAVE_AVX2_TU
bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
#endif

std::vector<const SweepKernels*> build_registry() {
    std::vector<const SweepKernels*> all;
    all.push_back(&scalar_kernels());
    all.push_back(&simd_portable_kernels());
#if CQED_HAVE_AVX2_TU
    if (cpu_has_avx2()) all.push_back(&simd_avx2_kernels());
#endif
    return all;
}

}  // namespace

std::span<const SweepKernels* const> available_kernels() {
    static const std::vector<const SweepKernels*> registry = build_registry();
    return {registry.data(), registry.size()};
}

const SweepKernels& active_kernels() {
    const auto all = available_kernels();
    return *all.back();  // registry is ordered narrowest to widest
}

}  // namespace cqed::kernels
