#include <cstdlib>
#include <string>

#include "bmhd/simd/kernels.hpp"

namespace bmhd::simd {

#ifndef BMHD_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& kernels() {
  static const KernelTable* active = [] {
    const char* env = std::getenv("BMHD_SIMD");
    const bool force_scalar = env && std::string(env) == "scalar";
    if (!force_scalar && cpu_has_avx2() && avx2_kernels()) return avx2_kernels();
    return &scalar_kernels();
  }();
  return *active;
}

}  // namespace bmhd::simd
