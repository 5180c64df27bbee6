#include <doctest.h>

#include <cmath>
#include <vector>

#include "bmhd/common/rng.hpp"
#include "bmhd/simd/kernels.hpp"

using namespace bmhd;
using simd::cplx;

namespace {

std::vector<cplx> random_complex(std::size_t n, std::uint64_t key) {
  Rng r(key);
  std::vector<cplx> v(n);
  for (auto& z : v) z = {r.normal(), r.normal()};
  return v;
}

std::vector<double> random_real(std::size_t n, std::uint64_t key) {
  Rng r(key);
  std::vector<double> v(n);
  for (auto& x : v) x = r.normal();
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Element-wise kernels must agree to the last bit or one FMA rounding.
void check_close(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 4e-16 * (1.0 + std::abs(b[i])));
}

}  // namespace

TEST_CASE("AVX2 kernels match the scalar reference") {
  const simd::KernelTable& ref = simd::scalar_kernels();
  const simd::KernelTable* vec = simd::avx2_kernels();
  if (!vec || !simd::cpu_has_avx2()) {
    MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
    return;
  }
  CHECK(vec->isa == simd::Isa::Avx2);
  // Odd lengths exercise the remainder loops.
  for (std::size_t n : {1u, 2u, 3u, 7u, 64u, 1001u}) {
    const auto x = random_complex(n, 1 + n), y = random_complex(n, 2 + n);
    const auto s = random_real(n, 3 + n);

    auto a1 = x, a2 = x;
    ref.scale_real(a1.data(), s.data(), n);
    vec->scale_real(a2.data(), s.data(), n);
    check_close(a2, a1);

    std::vector<cplx> m1(n), m2(n);
    ref.mul_real(m1.data(), x.data(), s.data(), n);
    vec->mul_real(m2.data(), x.data(), s.data(), n);
    check_close(m2, m1);

    ref.mul_complex(m1.data(), x.data(), y.data(), n);
    vec->mul_complex(m2.data(), x.data(), y.data(), n);
    check_close(m2, m1);

    auto y1 = y, y2 = y;
    ref.axpy(y1.data(), cplx(0.3, -1.7), x.data(), n);
    vec->axpy(y2.data(), cplx(0.3, -1.7), x.data(), n);
    check_close(y2, y1);

    // Reductions reorder sums, so agreement is to a few ulps per term.
    CHECK(rel(vec->sum_norm2(x.data(), n), ref.sum_norm2(x.data(), n)) < 1e-13);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::abs(s[i]);
    CHECK(rel(vec->weighted_norm2(x.data(), w.data(), n), ref.weighted_norm2(x.data(), w.data(), n)) < 1e-13);
    for (double p : {1.0, 2.0, 3.0, 4.0, 2.5})
      CHECK(rel(vec->sum_abs_pow(s.data(), n, p), ref.sum_abs_pow(s.data(), n, p)) < 1e-13);
    CHECK(vec->max_abs(s.data(), n) == ref.max_abs(s.data(), n));

    for (std::size_t m : {3u, 5u, 7u}) {
      const auto mats = random_complex(m * m * n, 4 + n + m);
      std::vector<std::vector<cplx>> in(m), o1(m, std::vector<cplx>(n)), o2(m, std::vector<cplx>(n));
      std::vector<const cplx*> inp(m);
      std::vector<cplx*> p1(m), p2(m);
      for (std::size_t c = 0; c < m; ++c) {
        in[c] = random_complex(n, 100 + c);
        inp[c] = in[c].data();
        p1[c] = o1[c].data();
        p2[c] = o2[c].data();
      }
      ref.batched_matvec(mats.data(), m, inp.data(), p1.data(), n);
      vec->batched_matvec(mats.data(), m, inp.data(), p2.data(), n);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(o2[r][j] - o1[r][j]) <= 1e-14 * (1.0 + std::abs(o1[r][j])));
    }
  }
}

TEST_CASE("scalar kernels against direct formulas") {
  const simd::KernelTable& k = simd::scalar_kernels();
  const std::vector<double> x{3.0, -4.0, 0.5};
  CHECK(k.sum_abs_pow(x.data(), 3, 2.0) == doctest::Approx(25.25));
  CHECK(k.sum_abs_pow(x.data(), 3, 1.0) == doctest::Approx(7.5));
  CHECK(k.max_abs(x.data(), 3) == 4.0);
  const std::vector<cplx> z{{3.0, 4.0}, {0.0, -1.0}};
  CHECK(k.sum_norm2(z.data(), 2) == doctest::Approx(26.0));
  // 2 x 2 matvec on one mode: [[1, i], [2, 0]] (1, 1) = (1 + i, 2).
  const std::vector<cplx> mats{{1.0, 0.0}, {0.0, 1.0}, {2.0, 0.0}, {0.0, 0.0}};
  const cplx a{1.0, 0.0}, b{1.0, 0.0};
  const cplx* in[] = {&a, &b};
  cplx o0, o1;
  cplx* out[] = {&o0, &o1};
  k.batched_matvec(mats.data(), 2, in, out, 1);
  CHECK(o0 == cplx(1.0, 1.0));
  CHECK(o1 == cplx(2.0, 0.0));
}

TEST_CASE("dispatch picks a valid table") {
  const simd::KernelTable& k = simd::kernels();
  CHECK((k.isa == simd::Isa::Scalar || k.isa == simd::Isa::Avx2));
  if (k.isa == simd::Isa::Avx2) CHECK(simd::cpu_has_avx2());
}
