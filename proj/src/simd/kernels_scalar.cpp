#include <algorithm>
#include <cmath>

#include "bmhd/simd/kernels.hpp"

namespace bmhd::simd {
namespace {

void scale_real(cplx* x, const double* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s[i];
}

void mul_real(cplx* out, const cplx* x, const double* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * s[i];
}

inline cplx cmul(cplx a, cplx b) {
  // explicit form so the result matches the vector kernel (no NaN recovery)
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

void mul_complex(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = cmul(a[i], b[i]);
}

void axpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += cmul(alpha, x[i]);
}

double sum_norm2(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

double weighted_norm2(const cplx* x, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

double sum_abs_pow(const double* x, std::size_t n, double p) {
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) s += std::abs(x[i]);
  } else if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  } else if (p == 3.0) {
    for (std::size_t i = 0; i < n; ++i) s += std::abs(x[i]) * x[i] * x[i];
  } else if (p == 4.0) {
    for (std::size_t i = 0; i < n; ++i) s += (x[i] * x[i]) * (x[i] * x[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(x[i]), p);
  }
  return s;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

void batched_matvec(const cplx* mats, std::size_t m, const cplx* const* in,
                    cplx* const* out, std::size_t n) {
  for (std::size_t r = 0; r < m; ++r) {
    cplx* o = out[r];
    for (std::size_t j = 0; j < n; ++j) o[j] = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      const cplx* a = mats + (r * m + c) * n;
      const cplx* v = in[c];
      for (std::size_t j = 0; j < n; ++j) o[j] += cmul(a[j], v[j]);
    }
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable t{Isa::Scalar,  scale_real,  mul_real,       mul_complex,
                             axpy,         sum_norm2,   weighted_norm2, sum_abs_pow,
                             max_abs,      batched_matvec};
  return t;
}

}  // namespace bmhd::simd
