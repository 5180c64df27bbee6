// AVX2 + FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; callers reach it through the dispatch table.
#include <immintrin.h>

#include <cmath>

#include "bmhd/simd/kernels.hpp"

namespace bmhd::simd {
namespace {

// (ar, ai) * (br, bi) for two packed complex doubles
inline __m256d cmul_pd(__m256d a, __m256d b) {
  const __m256d br = _mm256_movedup_pd(b);         // br br
  const __m256d bi = _mm256_permute_pd(b, 0xF);    // bi bi
  const __m256d as = _mm256_permute_pd(a, 0x5);    // ai ar
  return _mm256_fmaddsub_pd(a, br, _mm256_mul_pd(as, bi));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }
inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }

void scale_real(cplx* x, const double* s, std::size_t n) {
  std::size_t i = 0;
  double* xd = dp(x);
  for (; i + 2 <= n; i += 2) {
    // s0 s0 s1 s1
    const __m128d sv = _mm_loadu_pd(s + i);
    const __m256d ss = _mm256_permute4x64_pd(_mm256_castpd128_pd256(sv), 0x50);
    _mm256_storeu_pd(xd + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(xd + 2 * i), ss));
  }
  for (; i < n; ++i) x[i] *= s[i];
}

void mul_real(cplx* out, const cplx* x, const double* s, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m128d sv = _mm_loadu_pd(s + i);
    const __m256d ss = _mm256_permute4x64_pd(_mm256_castpd128_pd256(sv), 0x50);
    _mm256_storeu_pd(dp(out) + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(dp(x) + 2 * i), ss));
  }
  for (; i < n; ++i) out[i] = x[i] * s[i];
}

inline cplx cmul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

void mul_complex(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(dp(a) + 2 * i);
    const __m256d bv = _mm256_loadu_pd(dp(b) + 2 * i);
    _mm256_storeu_pd(dp(out) + 2 * i, cmul_pd(av, bv));
  }
  for (; i < n; ++i) out[i] = cmul(a[i], b[i]);
}

void axpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
  const __m256d al = _mm256_setr_pd(alpha.real(), alpha.imag(), alpha.real(), alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(dp(x) + 2 * i);
    const __m256d yv = _mm256_loadu_pd(dp(y) + 2 * i);
    _mm256_storeu_pd(dp(y) + 2 * i, _mm256_add_pd(yv, cmul_pd(al, xv)));
  }
  for (; i < n; ++i) y[i] += cmul(alpha, x[i]);
}

double sum_norm2(const cplx* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  const double* xd = dp(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d v1 = _mm256_loadu_pd(xd + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

double weighted_norm2(const cplx* x, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const double* xd = dp(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m128d wv = _mm_loadu_pd(w + i);
    const __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wv), 0x50);
    const __m256d v = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), ww, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

double sum_abs_pow(const double* x, std::size_t n, double p) {
  const int ip = static_cast<int>(p);
  if (static_cast<double>(ip) != p || ip < 1 || ip > 4) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(x[i]), p);
    return s;
  }
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d a = _mm256_andnot_pd(signmask, v);
    switch (ip) {
      case 1: acc = _mm256_add_pd(acc, a); break;
      case 2: acc = _mm256_fmadd_pd(v, v, acc); break;
      case 3: acc = _mm256_fmadd_pd(_mm256_mul_pd(a, v), v, acc); break;
      default: {
        const __m256d q = _mm256_mul_pd(v, v);
        acc = _mm256_fmadd_pd(q, q, acc);
      }
    }
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double a = std::abs(x[i]);
    switch (ip) {
      case 1: s += a; break;
      case 2: s += x[i] * x[i]; break;
      case 3: s += a * x[i] * x[i]; break;
      default: s += (x[i] * x[i]) * (x[i] * x[i]);
    }
  }
  return s;
}

double max_abs(const double* x, std::size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_andnot_pd(signmask, _mm256_loadu_pd(x + i)));
  alignas(32) double buf[4];
  _mm256_store_pd(buf, m);
  double r = std::fmax(std::fmax(buf[0], buf[1]), std::fmax(buf[2], buf[3]));
  for (; i < n; ++i) r = std::fmax(r, std::abs(x[i]));
  return r;
}

void batched_matvec(const cplx* mats, std::size_t m, const cplx* const* in,
                    cplx* const* out, std::size_t n) {
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    for (std::size_t r = 0; r < m; ++r) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t c = 0; c < m; ++c) {
        const __m256d a = _mm256_loadu_pd(dp(mats + (r * m + c) * n + j));
        const __m256d v = _mm256_loadu_pd(dp(in[c] + j));
        acc = _mm256_add_pd(acc, cmul_pd(a, v));
      }
      _mm256_storeu_pd(dp(out[r] + j), acc);
    }
  }
  for (; j < n; ++j) {
    for (std::size_t r = 0; r < m; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < m; ++c) acc += cmul(mats[(r * m + c) * n + j], in[c][j]);
      out[r][j] = acc;
    }
  }
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable t{Isa::Avx2,    scale_real,  mul_real,       mul_complex,
                             axpy,         sum_norm2,   weighted_norm2, sum_abs_pow,
                             max_abs,      batched_matvec};
  return &t;
}

}  // namespace bmhd::simd
