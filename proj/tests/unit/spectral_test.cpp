#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "bmhd/common/error.hpp"
#include "bmhd/common/parallel.hpp"
#include "bmhd/common/quadrature.hpp"
#include "bmhd/common/rng.hpp"
#include "bmhd/harness/random_field.hpp"
#include "bmhd/spectral/operators.hpp"
#include "bmhd/spectral/snapshot.hpp"

using namespace bmhd;

namespace {

double max_abs_diff(const PhysicalField& a, const PhysicalField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

SpectralField random_spectral(const Grid& g, std::uint64_t sample, double xi_max) {
  harness::RandomFieldSpec spec;
  spec.seed = 11;
  spec.xi_max = xi_max;
  return harness::random_field(g, spec, sample);
}

}  // namespace

TEST_CASE("grid validation and wavenumbers") {
  CHECK_THROWS_AS(Grid::make(4, 16, 1.0), Error);
  CHECK_THROWS_AS(Grid::make(2, 15, 1.0), Error);
  CHECK_THROWS_AS(Grid::make(2, 16, -1.0), Error);
  const Grid g = Grid::make(2, 8, 2.0 * M_PI);
  CHECK(g.size() == 64);
  CHECK(g.wavenumber(3) == 3);
  CHECK(g.wavenumber(4) == -4);
  CHECK(g.wavenumber(7) == -1);
  CHECK(g.dk() == doctest::Approx(1.0));
}

TEST_CASE("rng is a pure function of key and counter") {
  Rng a(5), b(5), c(6);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CHECK(Rng(5).split(1).uniform() == Rng(5).split(1).uniform());
  Rng u(9);
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = u.normal();
    mean += z;
    var += z * z;
  }
  CHECK(std::abs(mean / n) < 0.03);
  CHECK(std::abs(var / n - 1.0) < 0.05);
}

TEST_CASE("parallel_for fills every slot once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) fail(ErrorKind::Numeric, "boom");
                  }),
                  Error);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  // An n-point rule is exact to degree 2n - 1.
  CHECK(integrate_gl([](double x) { return std::pow(x, 9); }, 0.0, 2.0, 5) == doctest::Approx(102.4).epsilon(1e-14));
  CHECK(integrate_gl([](double x) { return std::exp(x); }, 0.0, 1.0, 12) == doctest::Approx(M_E - 1.0).epsilon(1e-14));
}

TEST_CASE("transform normalization and round trip") {
  const Grid g = Grid::make(2, 16, 2.0 * M_PI);
  const PhysicalField f = physical(g, [](const Vec3& x) { return 3.0 + std::cos(2.0 * x[0]) - 0.5 * std::sin(x[1]); });
  const SpectralField c = transform(f);
  const Geometry& geo = geometry(g);
  CHECK(std::abs(c[geo.flat({0, 0, 0})] - cplx(3.0)) < 1e-14);
  CHECK(std::abs(c[geo.flat({2, 0, 0})] - cplx(0.5)) < 1e-14);
  CHECK(std::abs(c[geo.flat({0, 1, 0})] - cplx(0.0, 0.25)) < 1e-14);
  CHECK(max_abs_diff(inverse_transform(c), f) < 1e-13);

  const Grid g3 = Grid::make(3, 8, 4.0);
  const PhysicalField h = physical(g3, [](const Vec3& x) { return std::sin(M_PI * x[0] / 2.0) * std::cos(M_PI * x[2]); });
  CHECK(max_abs_diff(inverse_transform(transform(h)), h) < 1e-13);
}

TEST_CASE("batched transforms agree with single transforms") {
  const Grid g = Grid::make(2, 16, 2.0 * M_PI);
  const PhysicalField a = physical(g, [](const Vec3& x) { return std::cos(x[0] + 2.0 * x[1]); });
  const PhysicalField b = physical(g, [](const Vec3& x) { return std::sin(3.0 * x[0]); });
  const PhysicalField c = physical(g, [](const Vec3& x) { return x[0] * 0.0 + 1.0; });
  const auto many = transform_many({&a, &b, &c});
  const SpectralField ta = transform(a), tb = transform(b), tc = transform(c);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(many[0][i] - ta[i]) < 1e-14);
    CHECK(std::abs(many[1][i] - tb[i]) < 1e-14);
    CHECK(std::abs(many[2][i] - tc[i]) < 1e-14);
  }
  const auto back = inverse_transform_many({&ta, &tb});
  CHECK(max_abs_diff(back[0], a) < 1e-13);
  CHECK(max_abs_diff(back[1], b) < 1e-13);
}

TEST_CASE("derivatives and Laplacian match closed forms") {
  const double L = 3.0;
  const Grid g = Grid::make(2, 32, L);
  const double k = 2.0 * M_PI / L;
  const SpectralField f = transform(physical(g, [&](const Vec3& x) { return std::sin(2.0 * k * x[0]) * std::cos(k * x[1]); }));
  const PhysicalField dx = inverse_transform(derivative(f, 0));
  const PhysicalField lap = inverse_transform(laplacian(f));
  const PhysicalField dx_exact =
      physical(g, [&](const Vec3& x) { return 2.0 * k * std::cos(2.0 * k * x[0]) * std::cos(k * x[1]); });
  const PhysicalField lap_exact =
      physical(g, [&](const Vec3& x) { return -5.0 * k * k * std::sin(2.0 * k * x[0]) * std::cos(k * x[1]); });
  CHECK(max_abs_diff(dx, dx_exact) < 1e-12);
  CHECK(max_abs_diff(lap, lap_exact) < 1e-11);
  // (-Delta)^{-1} inverts -Delta away from the mean.
  const SpectralField back = inverse_neg_laplacian(laplacian(f));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(back[i] + f[i]) < 1e-14);
  // Lambda^2 = -Delta.
  const SpectralField l2 = lambda_power(f, 2.0);
  const SpectralField nl = laplacian(f);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(l2[i] + nl[i]) < 1e-11);
}

TEST_CASE("Leray projection") {
  for (int d : {2, 3}) {
    const Grid g = d == 2 ? Grid::make(2, 32, 2.0 * M_PI) : Grid::make(3, 16, 2.0 * M_PI);
    VectorField v;
    for (int i = 0; i < d; ++i) v.push_back(random_spectral(g, i, 6.0));
    const VectorField pv = leray_project(v);
    CHECK(divergence_defect(pv) < 1e-14);
    const VectorField ppv = leray_project(pv);
    for (int i = 0; i < d; ++i)
      for (std::size_t m = 0; m < g.size(); ++m) CHECK(std::abs(ppv[i][m] - pv[i][m]) < 1e-15);
    // Gradients are annihilated.
    const VectorField pg = leray_project(gradient(v[0]));
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
      for (std::size_t m = 0; m < g.size(); ++m) worst = std::max(worst, std::abs(pg[i][m]));
    CHECK(worst < 1e-14);
  }
}

TEST_CASE("dealiasing, resampling and Hermitian symmetry") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI);
  SpectralField f = random_spectral(g, 3, 15.0);
  CHECK(hermitian_defect(f) < 1e-15);
  CHECK_FALSE(is_dealiased(f, 2.0 / 3.0));
  dealias(f, 2.0 / 3.0);
  CHECK(is_dealiased(f, 2.0 / 3.0));
  const SpectralField up = resample(f, 64);
  const SpectralField down = resample(up, 32);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(down[i] - f[i]) < 1e-16);
  // Zero padding leaves the function unchanged. The grid sum of |f|^4 is exact
  // once N exceeds 4 |k|_max (about 43 here), so N = 64 and N = 128 agree.
  CHECK(l2_parseval(up) == doctest::Approx(l2_parseval(f)).epsilon(1e-13));
  CHECK(lp_norm(up, 4.0) == doctest::Approx(lp_norm(resample(f, 128), 4.0)).epsilon(1e-12));
}

TEST_CASE("norms: Parseval and closed-form L^p") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI);
  const SpectralField f = transform(physical(g, [](const Vec3& x) { return std::cos(x[0]); }));
  // int cos^2 = 2 pi^2, int cos^4 = 3 pi^2 / 2 over the 2-torus.
  CHECK(l2_parseval(f) == doctest::Approx(std::sqrt(2.0) * M_PI).epsilon(1e-13));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(2.0) * M_PI).epsilon(1e-13));
  CHECK(lp_norm(f, 4.0) == doctest::Approx(std::pow(1.5 * M_PI * M_PI, 0.25)).epsilon(1e-13));
  CHECK(lp_norm(f, INFINITY) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("snapshot round trip is lossless") {
  const Grid g = Grid::make(3, 8, 5.0);
  StateVector s(g);
  for (int c = 0; c < s.components(); ++c) s.f[c] = random_spectral(g, 20 + c, 4.0);
  const auto path = (std::filesystem::temp_directory_path() / "bmhd_unit_state.bmhd").string();
  save_state(path, s);
  const StateVector t = load_state(path);
  REQUIRE(t.grid == g);
  for (int c = 0; c < s.components(); ++c)
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(t.f[c][i] == s.f[c][i]);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_state(path), Error);
}

TEST_CASE("inverse transform rejects non-Hermitian spectra") {
  const Grid g = Grid::make(2, 8, 2.0 * M_PI);
  SpectralField f(g);
  f[geometry(g).flat({1, 0, 0})] = cplx(1.0, 0.0);
  CHECK_THROWS_AS(inverse_transform(f), Error);
}
