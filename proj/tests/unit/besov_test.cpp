#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bmhd/besov/norms.hpp"
#include "bmhd/common/error.hpp"
#include "bmhd/common/quadrature.hpp"
#include "bmhd/harness/random_field.hpp"
#include "bmhd/spectral/operators.hpp"

using namespace bmhd;

TEST_CASE("chi and phi: support, symmetry and partition of unity") {
  CHECK(DyadicLadder::chi(0.0) == 1.0);
  CHECK(DyadicLadder::chi(0.75) == 1.0);
  CHECK(DyadicLadder::chi(4.0 / 3.0) == 0.0);
  // The smooth step is antisymmetric about the midpoint of [3/4, 4/3].
  CHECK(DyadicLadder::chi(25.0 / 24.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (double r : {0.8, 0.9, 1.0, 1.1, 1.3}) CHECK(DyadicLadder::chi(r) + DyadicLadder::chi(2.0 + 1.0 / 12.0 - r) == doctest::Approx(1.0).epsilon(1e-14));
  // Golden value: 1 / (1 + exp(7/4 - 7/3)) at r = 1.
  CHECK(DyadicLadder::chi(1.0) == doctest::Approx(1.0 / (1.0 + std::exp(-7.0 / 12.0))).epsilon(1e-15));
  CHECK(DyadicLadder::phi(0.7) == 0.0);
  CHECK(DyadicLadder::phi(8.0 / 3.0) == 0.0);
  CHECK(DyadicLadder::phi(1.5) == doctest::Approx(1.0).epsilon(1e-15));
  for (double r : {1e-3, 0.37, 1.0, 2.9, 123.4}) {
    double sum = 0.0;
    for (int k = -20; k <= 20; ++k) sum += DyadicLadder::phi(std::ldexp(r, -k));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("ladder for a grid covers every nonzero mode") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI * 4.0);
  const DyadicLadder l = DyadicLadder::for_grid(g);
  const Geometry& geo = geometry(g);
  for (std::size_t i = 1; i < g.size(); i += 7) {
    double sum = 0.0;
    for (int k = l.k_min; k <= l.k_max; ++k) sum += block_weights(g, k)[i];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(geo.kmag[0] == 0.0);
  std::ostringstream os;
  write_ladder_csv(os, 5, 4.0);
  CHECK(os.str().rfind("xi,chi,phi\n", 0) == 0);
}

TEST_CASE("Besov norms of a single mode match the closed form") {
  // cos(x) on the 2-torus lives in blocks k = -1 (weight chi(1)) and k = 0 (1 - chi(1)).
  const Grid g = Grid::make(2, 32, 2.0 * M_PI);
  const SpectralField f = transform(physical(g, [](const Vec3& x) { return std::cos(x[0]); }));
  const DyadicLadder l = DyadicLadder::for_grid(g);
  const double c1 = DyadicLadder::chi(1.0);
  const double l2 = std::sqrt(2.0) * M_PI, l4 = std::pow(1.5 * M_PI * M_PI, 0.25);
  CHECK(besov_norm(f, BesovIndex::make(0.0, 2.0, 1.0), l) == doctest::Approx(l2).epsilon(1e-13));
  CHECK(besov_norm(f, BesovIndex::make(1.0, 2.0, 1.0), l) == doctest::Approx(l2 * (0.5 * c1 + 1.0 - c1)).epsilon(1e-13));
  CHECK(besov_norm(f, BesovIndex::make(0.0, 4.0, 1.0), l) == doctest::Approx(l4).epsilon(1e-13));
  CHECK(besov_norm(f, BesovIndex::make(0.0, 2.0, INFINITY), l) == doctest::Approx(l2 * std::max(c1, 1.0 - c1)).epsilon(1e-13));
  const double r2 = std::sqrt(c1 * c1 + (1.0 - c1) * (1.0 - c1));
  CHECK(besov_norm(f, BesovIndex::make(0.0, 2.0, 2.0), l) == doctest::Approx(l2 * r2).epsilon(1e-13));
}

TEST_CASE("low and high parts split at k0 with overlap") {
  const Grid g = Grid::make(2, 64, 2.0 * M_PI);
  harness::RandomFieldSpec spec;
  spec.seed = 2;
  spec.xi_max = 20.0;
  const SpectralField f = harness::random_field(g, spec, 0);
  DyadicLadder l = DyadicLadder::for_grid(g, 2, 1);
  const BesovIndex idx = BesovIndex::make(0.5, 2.0, 1.0);
  const BlockNorms b = block_norms(f, 2.0, l);
  double low = 0.0, high = 0.0, full = 0.0;
  for (int k = l.k_min; k <= l.k_max; ++k) {
    const double t = std::pow(2.0, 0.5 * k) * b.at(k);
    full += t;
    if (k <= 2) low += t;
    if (k >= 1) high += t;
  }
  CHECK(hybrid_norm(f, idx, l, Part::Low) == doctest::Approx(low).epsilon(1e-14));
  CHECK(hybrid_norm(f, idx, l, Part::High) == doctest::Approx(high).epsilon(1e-14));
  CHECK(besov_norm(f, idx, l) == doctest::Approx(full).epsilon(1e-14));
  CHECK(hybrid_norm(f, idx, l, "low") == hybrid_norm(f, idx, l, Part::Low));
  CHECK_THROWS_AS(hybrid_norm(f, idx, l, "middle"), Error);
  CHECK_THROWS_AS(hybrid_norm(f, BesovIndex::make(0.5, 2.0, 2.0), l, Part::Low), Error);
}

TEST_CASE("block L^2 norms agree with the L^p path at p = 2") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  harness::RandomFieldSpec spec;
  spec.seed = 8;
  const SpectralField f = harness::random_field(g, spec, 1);
  const DyadicLadder l = DyadicLadder::for_grid(g);
  const BlockNorms b = block_norms(f, 2.0, l);
  for (int k = l.k_min; k <= l.k_max; ++k) {
    const SpectralField blk = dyadic_block(f, k, l);
    CHECK(b.at(k) == doctest::Approx(lp_norm(inverse_transform(blk), 2.0)).epsilon(1e-12));
  }
  CHECK_FALSE(b.zero_mode_dropped);
}

TEST_CASE("time norms") {
  const std::vector<double> t{0.0, 0.25, 0.5, 0.75, 1.0};
  CHECK(time_norm(t, {0.0, 0.25, 0.5, 0.75, 1.0}, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(time_norm(t, {2.0, 2.0, 2.0, 2.0, 2.0}, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(time_norm(t, {1.0, 3.0, 2.0, 0.0, 1.0}, INFINITY) == 3.0);

  // theta = r = 1: time integral and block sum commute, so both norms agree;
  // theta = inf: sup inside the sum dominates the sup outside.
  BlockHistory h;
  DyadicLadder l;
  l.k_min = -1;
  l.k_max = 2;
  for (int j = 0; j < 5; ++j) {
    h.times.push_back(0.25 * j);
    BlockNorms b;
    b.k_min = -1;
    b.v = {std::exp(-0.25 * j), 1.0 + 0.1 * j, 0.5 * std::cos(j), 0.7};
    for (auto& x : b.v) x = std::abs(x);
    h.blocks.push_back(b);
  }
  CHECK(chemin_lerner_norm(h, 1.0, 0.3, 1.0, Part::Full, l) ==
        doctest::Approx(lebesgue_besov_norm(h, 1.0, 0.3, 1.0, Part::Full, l)).epsilon(1e-14));
  CHECK(chemin_lerner_norm(h, INFINITY, 0.3, 1.0, Part::Full, l) >=
        lebesgue_besov_norm(h, INFINITY, 0.3, 1.0, Part::Full, l));
}

TEST_CASE("sphere constants") {
  CHECK(sphere_constant(2) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-15));
  CHECK(sphere_constant(3) == doctest::Approx(4.0 * M_PI / std::pow(2.0 * M_PI, 3)).epsilon(1e-15));
}

TEST_CASE("radial quadrature reproduces a Gaussian L^2 norm") {
  // f^(rho) = e^{-rho^2} in d = 3: ||f||^2 = c_3 int rho^2 e^{-2 rho^2} = c_3 sqrt(pi) / (4 2^{3/2}).
  // With s = 0, summing squared blocks against sum phi_k = 1 needs p = r = 2 and
  // phi_k^2, so compare sum_k ||Delta_k f||^2 with the quadrature of (sum phi_k^2)|f|^2.
  const DyadicLadder l = DyadicLadder::for_radii(1e-4, 20.0);
  std::vector<std::function<cplx(double)>> prof{[](double r) { return cplx(std::exp(-r * r)); }};
  const BlockNorms b = radial_quadrature_blocks(prof, 3, l, 96);
  double sum2 = 0.0;
  for (double v : b.v) sum2 += v * v;
  const double oracle = sphere_constant(3) * integrate_gl(
                                                 [&](double r) {
                                                   double w = 0.0;
                                                   for (int k = l.k_min; k <= l.k_max; ++k) w += std::pow(l.weight(k, r), 2);
                                                   return w * r * r * std::exp(-2.0 * r * r);
                                                 },
                                                 0.0, 8.0, 400);
  CHECK(sum2 == doctest::Approx(oracle).epsilon(1e-8));
  const double plain = sphere_constant(3) * std::sqrt(M_PI) / (4.0 * std::pow(2.0, 1.5));
  CHECK(sum2 < plain);
}
