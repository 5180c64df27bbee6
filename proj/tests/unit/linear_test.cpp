#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bmhd/common/error.hpp"
#include "bmhd/common/rng.hpp"
#include "bmhd/harness/random_field.hpp"
#include "bmhd/linear/lyapunov.hpp"
#include "bmhd/linear/semigroup.hpp"
#include "bmhd/linear/spectrum.hpp"
#include "bmhd/spectral/operators.hpp"

using namespace bmhd;

namespace {

CCol random_col(int m, Rng& r) {
  CCol c(m);
  for (int i = 0; i < m; ++i) c(i) = {r.normal(), r.normal()};
  return c;
}

// Velocity and field parts are made div-free along xi for the H block.
CCol random_state(const Vec3& xi, int d, Rng& r) {
  CCol u = random_col(1 + 2 * d, r);
  double r2 = 0.0;
  std::complex<double> dot = 0.0;
  for (int j = 0; j < d; ++j) {
    r2 += xi[j] * xi[j];
    dot += xi[j] * u(1 + d + j);
  }
  for (int j = 0; j < d; ++j) u(1 + d + j) -= dot * xi[j] / r2;
  return u;
}

}  // namespace

TEST_CASE("expm against closed forms") {
  // Rotation generator.
  CMat a = CMat::Zero(2, 2);
  a(0, 1) = -2.5;
  a(1, 0) = 2.5;
  const CMat e = expm(a);
  CHECK(std::abs(e(0, 0) - std::cos(2.5)) < 1e-15);
  CHECK(std::abs(e(0, 1) + std::sin(2.5)) < 1e-15);
  // Nilpotent: exp(N) = I + N + N^2/2.
  CMat n = CMat::Zero(3, 3);
  n(0, 1) = 7.0;
  n(1, 2) = -3.0;
  const CMat en = expm(n);
  CHECK(std::abs(en(0, 2) - (-10.5)) < 1e-13);
  CHECK(std::abs(en(0, 1) - 7.0) < 1e-13);
  // Large diagonal forces scaling and squaring.
  CMat dgl = CMat::Zero(2, 2);
  dgl(0, 0) = -40.0;
  dgl(1, 1) = {3.0, 1.0};
  const CMat ed = expm(dgl);
  CHECK(std::abs(ed(0, 0) - std::exp(-40.0)) < 1e-28);
  CHECK(std::abs(ed(1, 1) - std::exp(std::complex<double>(3.0, 1.0))) < 1e-12);
}

TEST_CASE("mode matrix: symbol structure") {
  const LinearParams p = LinearParams::make(3, 0.5, {0.0, 0.0, 1.0});
  CHECK(p.lambda_inf == 0.0);
  CHECK(p.sigma() == 0.25);
  CHECK_THROWS_AS(LinearParams::make(3, 0.5, {0.0, 0.0, 2.0}), Error);
  CHECK_THROWS_AS(LinearParams::make(2, 0.5, {0.0, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(LinearParams::make(3, -1.0, {0.0, 0.0, 1.0}), Error);
  const Vec3 xi{0.3, -0.2, 0.7};
  const ModeMatrix m = mode_matrix(xi, p);
  CHECK(m.m.rows() == 7);
  // Linearized mass equation: a' = -i xi.u.
  CHECK(m.m(0, 0) == std::complex<double>(0.0));
  CHECK(std::abs(m.m(0, 1) - std::complex<double>(0.0, -0.3)) < 1e-16);
  // Energy dissipates: the Hermitian part is negative semidefinite.
  const CMat herm = 0.5 * (m.m + m.m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(herm);
  CHECK(es.eigenvalues().maxCoeff() <= 1e-14);
}

TEST_CASE("propagation: semigroup law and energy decay") {
  const LinearParams p = LinearParams::make(2, 0.7, {0.6, 0.8, 0.0});
  Rng r(4);
  const Vec3 xi{1.1, -0.4, 0.0};
  const ModeMatrix m = mode_matrix(xi, p);
  const CCol u0 = random_col(5, r);
  const CCol a = propagate_mode(m, 0.7, propagate_mode(m, 0.5, u0));
  const CCol b = propagate_mode(m, 1.2, u0);
  CHECK((a - b).norm() < 1e-13 * b.norm());
  CHECK(propagate_mode(m, 1.2, u0).norm() <= u0.norm());
  CHECK((propagate_mode(m, 0.0, u0) - u0).norm() == 0.0);
}

TEST_CASE("grid propagator matches per-mode propagation") {
  const Grid g = Grid::make(2, 16, 2.0 * M_PI * 2.0);
  const LinearParams p = LinearParams::make(2, 0.5, {1.0, 0.0, 0.0});
  StateVector s(g);
  harness::RandomFieldSpec spec;
  spec.seed = 21;
  spec.xi_max = 3.0;
  for (int c = 0; c < s.components(); ++c) s.f[c] = harness::random_field(g, spec, 0, c);
  const StateVector out = semigroup_apply(s, 0.8, p);
  const Geometry& geo = geometry(g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); i += 5) {
    const Vec3 xi{geo.xi[0][i], geo.xi[1][i], 0.0};
    if (geo.nyquist[i]) continue;
    CCol u0(5);
    for (int c = 0; c < 5; ++c) u0(c) = s.f[c][i];
    const CCol u = propagate_mode(mode_matrix(xi, p), 0.8, u0);
    for (int c = 0; c < 5; ++c) worst = std::max(worst, std::abs(u(c) - out.f[c][i]));
  }
  CHECK(worst < 1e-14);
  // The propagator keeps real fields real.
  CHECK(hermitian_defect(out.a()) < 1e-14);
}

TEST_CASE("(A, V, W, M) decomposition: energy and induced system") {
  for (int d : {2, 3}) {
    Rng r(30 + d);
    const LinearParams p = LinearParams::make(d, 0.4, d == 2 ? Vec3{0.0, 1.0, 0.0} : Vec3{0.6, 0.0, 0.8});
    for (int n = 0; n < 20; ++n) {
      const Vec3 xi{r.normal(), r.normal(), d == 3 ? r.normal() : 0.0};
      const CCol u = random_state(xi, d, r);
      const ModeDecomposition x = decompose(u, xi, d);
      // Half-Frobenius weighting gives |(A,V,W,M)|^2 = |a|^2 + |u|^2 + |H|^2 for div-free H.
      CHECK(x.norm2() == doctest::Approx(u.squaredNorm()).epsilon(1e-13));
      CHECK((reconstruct(x, xi) - u).norm() < 1e-13 * u.norm());
      // d/dt of the decomposition equals the induced matrix on the coordinates.
      const CCol lhs = decompose(mode_matrix(xi, p).m * u, xi, d).coords();
      const CCol rhs = induced_matrix(xi, p) * x.coords();
      CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
    }
  }
}

TEST_CASE("Lyapunov functional is equivalent to the energy at low frequency") {
  // sigma <= 1/2 makes L^2 comparable to |x|^2 for |xi| <= 1 with constants 1/2 and 2.
  Rng r(8);
  for (int n = 0; n < 200; ++n) {
    ModeDecomposition x;
    x.dim = 3;
    x.A = {r.normal(), r.normal()};
    x.V = {r.normal(), r.normal()};
    const double rho = r.uniform();
    const double l = lyapunov(x, rho, 0.25);
    CHECK(l >= 0.5 * x.norm2());
    CHECK(l <= 2.0 * x.norm2());
  }
  CHECK_THROWS_AS(lyapunov(ModeDecomposition{}, 1.0, -0.1), Error);
}

TEST_CASE("dissipation check on a single flow") {
  const LinearParams p = LinearParams::make(3, 0.5, {0.0, 0.0, 1.0});
  Rng r(12);
  const Vec3 xi{0.2, 0.1, -0.3};
  std::vector<double> t;
  for (int j = 0; j < 50; ++j) t.push_back(0.5 * j);
  const DissipationReport rep = lyapunov_dissipation_check(xi, random_col(7, r), t, p, 1.0);
  CHECK(rep.passed);
  CHECK(rep.monotone);
  CHECK(rep.worst_margin <= 0.0);
  CHECK(rep.worst_identity < 1e-12);
  CHECK(rep.worst_fd < 1e-9);
  CHECK_THROWS_AS(lyapunov_dissipation_check({2.0, 0.0, 0.0}, random_col(7, r), t, p, 1.0), Error);
}

TEST_CASE("eigen sweep: sample layout and dissipativity") {
  const auto s2 = sweep_samples(2, 8, 5, 1e-2, 1e2);
  CHECK(s2.size() == 40);
  const auto s3 = sweep_samples(3, 16, 4, 1e-2, 1e2);
  for (const auto& [dir, xi] : s3) {
    const double n = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    CHECK(n >= 1e-2 * (1.0 - 1e-12));
    CHECK(n <= 1e2 * (1.0 + 1e-12));
  }
  const SweepResult r = eigen_sweep(s3, LinearParams::make(3, 0.5, {0.0, 0.0, 1.0}));
  CHECK(r.c > 0.0);
  CHECK(r.c == doctest::Approx(-r.max_margin));
  std::ostringstream os;
  write_sweep_csv(os, r);
  CHECK(os.str().find("xi_norm,direction") != std::string::npos);
}

TEST_CASE("decoupled heat mode when I = 0") {
  const LinearParams p = LinearParams::make(2, 0.5, {0.0, 0.0, 0.0}, true);
  const Vec3 xi{0.6, 0.8, 0.0};
  const SweepResult r = eigen_sweep({{0, xi}}, p);
  // Eigenvalues of the H block are -|xi|^2 (twice).
  int found = 0;
  for (const auto& ev : r.rows.front().eigenvalues) found += std::abs(ev - std::complex<double>(-1.0)) < 1e-12;
  CHECK(found == 2);
}

TEST_CASE("block decay fit recovers 2^{2k} scaling") {
  const Grid g = Grid::make(2, 64, 2.0 * M_PI * 16.0);
  const LinearParams p = LinearParams::make(2, 0.5, {1.0, 0.0, 0.0});
  harness::RandomFieldSpec spec;
  spec.seed = 5;
  spec.law = harness::SpectrumLaw::Block;
  spec.support_blocks = std::make_pair(-3, -1);
  StateVector s(g);
  for (int c = 0; c < s.components(); ++c) s.f[c] = harness::random_field(g, spec, 0, c);
  s.set_magnetic(leray_project(s.magnetic()));
  std::vector<double> scaled;
  for (int k = -3; k <= -1; ++k) {
    std::vector<double> t;
    for (int j = 0; j < 12; ++j) t.push_back(4.0 * std::pow(4.0, -k) * j / 11.0);
    const BlockFit f = block_decay_fit(s, k, t, p);
    CHECK(f.c > 0.0);
    CHECK(f.c_scaled == doctest::Approx(f.c / std::pow(4.0, k)));
    scaled.push_back(f.c_scaled);
  }
  CHECK(*std::max_element(scaled.begin(), scaled.end()) / *std::min_element(scaled.begin(), scaled.end()) < 4.0);
  CHECK_THROWS_AS(block_decay_fit(s, 3, {0.0, 1.0}, p), Error);
}

TEST_CASE("radial data: Fourier profile matches its definition") {
  RadialData d{[](double r) { return std::exp(-r); }, [](double) { return 2.0; }, [](double) { return 0.0; },
               [](double) { return 0.0; }};
  const Vec3 I{0.0, 0.0, 1.0};
  const CCol c = d.at({0.0, 3.0, 4.0}, 3, I);
  CHECK(std::abs(c(0) - std::exp(-5.0)) < 1e-15);
  // u^ = -i (xi/|xi|) v.
  CHECK(std::abs(c(2) - std::complex<double>(0.0, -2.0 * 0.6)) < 1e-15);
  CHECK(std::abs(c(3) - std::complex<double>(0.0, -2.0 * 0.8)) < 1e-15);
}

TEST_CASE("series names") {
  CHECK(series_name_low(0.0) == "low_B^0_2,1");
  CHECK(series_name_low(0.5) == "low_B^0.5_2,1");
}
