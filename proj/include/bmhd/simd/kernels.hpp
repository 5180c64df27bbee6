#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace bmhd::simd {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Hot loops shared by the spectral, Besov and semigroup code. Every entry has
/// a scalar reference and an AVX2+FMA variant with identical semantics.
struct KernelTable {
  Isa isa;
  /// x[i] *= s[i]
  void (*scale_real)(cplx* x, const double* s, std::size_t n);
  /// out[i] = x[i] * s[i]
  void (*mul_real)(cplx* out, const cplx* x, const double* s, std::size_t n);
  /// out[i] = a[i] * b[i]
  void (*mul_complex)(cplx* out, const cplx* a, const cplx* b, std::size_t n);
  /// y[i] += alpha * x[i]
  void (*axpy)(cplx* y, cplx alpha, const cplx* x, std::size_t n);
  /// sum_i |x[i]|^2
  double (*sum_norm2)(const cplx* x, std::size_t n);
  /// sum_i w[i] |x[i]|^2
  double (*weighted_norm2)(const cplx* x, const double* w, std::size_t n);
  /// sum_i |x[i]|^p; integer p in {1,2,3,4} is vectorized, other p use pow
  double (*sum_abs_pow)(const double* x, std::size_t n, double p);
  /// max_i |x[i]|
  double (*max_abs)(const double* x, std::size_t n);
  /// Per-mode m x m complex matvec in structure-of-arrays layout:
  /// out[r][j] = sum_c mats[(r*m + c)*n + j] * in[c][j] for j < n.
  /// in and out must not alias.
  void (*batched_matvec)(const cplx* mats, std::size_t m, const cplx* const* in,
                         cplx* const* out, std::size_t n);
};

const KernelTable& scalar_kernels();
/// Null when the binary was built without AVX2 support.
const KernelTable* avx2_kernels();
bool cpu_has_avx2();

/// Active table: AVX2 when supported unless BMHD_SIMD=scalar.
const KernelTable& kernels();

}  // namespace bmhd::simd
