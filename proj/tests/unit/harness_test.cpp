#include <doctest.h>

#include <cmath>

#include "bmhd/common/error.hpp"
#include "bmhd/harness/harness.hpp"
#include "bmhd/spectral/operators.hpp"

using namespace bmhd;
using namespace bmhd::harness;

namespace {

SpectralField cos_x(const Grid& g) {
  return transform(physical(g, [](const Vec3& x) { return std::cos(x[0]); }));
}

}  // namespace

TEST_CASE("Bernstein quotient of a single mode") {
  // cos(x) has |xi| = 1 and |D^k f| in {|cos|, |sin|, |cos|}, so every quotient is 1 at lambda = 1.
  const Grid g = Grid::make(2, 32, 2.0 * M_PI);
  const SpectralField f = cos_x(g);
  for (int k : {0, 1, 2}) CHECK(bernstein_ratio(f, 2.0, 2.0, k, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
  // L^2 -> L^inf on the 2-torus: sup|cos| / (lambda ||cos||_2) = 1 / (sqrt(2) pi).
  CHECK(bernstein_ratio(f, 2.0, INFINITY, 0, 1.0) == doctest::Approx(1.0 / (std::sqrt(2.0) * M_PI)).epsilon(1e-13));
  CHECK_THROWS_AS(bernstein_ratio(f, 4.0, 2.0, 0, 1.0), Error);
  CHECK(std::isfinite(bernstein_quotient(f, 4.0, 2.0, 0, 1.0)));
}

TEST_CASE("heat quotient against the closed form for one mode") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI);
  const SpectralField u0 = cos_x(g), f(g);
  const double c1 = DyadicLadder::chi(1.0);
  HeatSetup s;
  s.T = 2.0;
  s.rho1 = INFINITY;
  // The sup in time sits at t = 0, where the data norm is reproduced.
  CHECK(heat_ratio(u0, f, s).ratio == doctest::Approx(1.0).epsilon(1e-13));
  // rho1 = 1: int_0^T e^{-t} = 1 - e^{-T} per block, weighted by 2^{2k} on blocks -1 (c1) and 0 (1 - c1).
  s.rho1 = 1.0;
  const HeatRatio h = heat_ratio(u0, f, s);
  CHECK(h.forcing == 0.0);
  CHECK(h.ratio == doctest::Approx(-std::expm1(-2.0) * (1.0 - c1 + 0.25 * c1)).epsilon(1e-12));
  s.rho2 = 2.0;
  CHECK_THROWS_AS(heat_ratio(u0, f, s), Error);
}

TEST_CASE("time convolution integrals") {
  ConvolutionParams c;
  c.s1 = 0.0;
  c.s2 = 2.0;
  c.theta = 0.0;
  CHECK_NOTHROW(c.validate());
  for (double t : {0.1, 1.0, 7.5, 300.0}) CHECK(convolution_integral(t, c) == doctest::Approx(std::atan(t)).epsilon(1e-11));
  CHECK(convolution_sup(c, 1.0, 1e6, 25) == doctest::Approx(M_PI / 2.0).epsilon(1e-5));
  // theta = 1/2: int_0^inf tau^{-1/2} <tau>^{-3/2} dtau = B(1/4, 1/2) / 2, and the tail past t is O(1/t).
  c.theta = 0.5;
  CHECK(convolution_integral(1e8, c) == doctest::Approx(0.5 * std::beta(0.25, 0.5)).epsilon(1e-7));
  c.s2 = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = ConvolutionParams{};
  c.s1 = 3.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("product exponents") {
  // 1/q = 1/4 + 1/4 - (1/2)/2 = 1/4.
  CHECK(product_exponent(0.5, 0.25, 4.0, 4.0, 2) == doctest::Approx(4.0));
  CHECK(product_exponent(1.0, 0.5, 2.0, 2.0, 2) == doctest::Approx(2.0));
  CHECK_THROWS_AS(product_exponent(0.25, 0.5, 4.0, 4.0, 2), Error);  // sigma1 < sigma2
  CHECK_THROWS_AS(product_exponent(-0.5, 0.25, 4.0, 4.0, 2), Error);
  CHECK_THROWS_AS(product_exponent(0.5, 0.25, 1.5, 1.5, 2), Error);  // 1/p1 + 1/p2 > 1
  // 1/q = 1/2 + 1/2 - (1/2)/2 = 3/4.
  CHECK(negative_product_exponent(0.5, 2.0, 2.0, 2) == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS(negative_product_exponent(1.5, 2.0, 2.0, 2), Error);
  CHECK_THROWS_AS(check_commutator_sigma(5.0, 2.0, 2.0, 2), Error);
  CHECK_NOTHROW(check_commutator_sigma(0.5, 2.0, 2.0, 2));
  CHECK_THROWS_AS(check_embedding_chain(4.0, 2.0, 1.0, 1.0), Error);
  CHECK_NOTHROW(check_embedding_chain(2.0, 4.0, 1.0, 2.0));
}

TEST_CASE("random fields") {
  RandomFieldSpec spec;
  spec.seed = 11;
  spec.amplitude = 0.3;
  for (SpectrumLaw law : {SpectrumLaw::Block, SpectrumLaw::PowerLaw, SpectrumLaw::Gaussian}) {
    spec.law = law;
    const Grid g = Grid::make(2, 32, 2.0 * M_PI);
    const SpectralField f = random_field(g, spec, 3, 1);
    CHECK(f.c[0] == cplx(0.0));
    CHECK(hermitian_defect(f) == 0.0);
    CHECK(lp_norm(f, INFINITY) == doctest::Approx(0.3).epsilon(1e-13));
    const Geometry& geo = geometry(g);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (geo.nyquist[i] || geo.kmag[i] > spec.xi_max) CHECK(f.c[i] == cplx(0.0));
  }
  CHECK(to_string(parse_spectrum_law("gaussian")) == "gaussian");
  CHECK_THROWS_AS(parse_spectrum_law("flat"), Error);

  // Raw coefficients are keyed by wavevector, so a finer grid holds the same field.
  spec.law = SpectrumLaw::PowerLaw;
  spec.amplitude = 0.0;
  const Grid coarse = Grid::make(2, 32, 2.0 * M_PI * 2.0), fine = Grid::make(2, 64, 2.0 * M_PI * 2.0);
  const SpectralField a = random_field(coarse, spec, 5), b = random_field(fine, spec, 5);
  const Geometry &gc = geometry(coarse), &gf = geometry(fine);
  for (std::size_t i = 0; i < coarse.size(); ++i)
    if (!gc.nyquist[i]) CHECK(a.c[i] == b.c[gf.flat(gc.k[i])]);
  CHECK(support_size(coarse, spec) == support_size(fine, spec));

  const Perturbation step{77, 0.1};
  const SpectralField moved = random_field(coarse, spec, 5, 0, std::span<const Perturbation>(&step, 1));
  SpectralField diff = moved;
  diff -= a;
  CHECK(coeff_l2(diff) > 0.0);
  spec.xi_max = -1.0;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("composition of a linear law is a fixed multiple") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI);
  RandomFieldSpec spec;
  spec.seed = 4;
  spec.xi_max = 6.0;
  spec.amplitude = 0.4;
  const SpectralField f = random_field(g, spec, 0);
  const FluidLaws laws = FluidLaws::make(0.5, 1.4, 0.2, -0.2);
  CHECK(composition_ratio(laws, Law::MuTilde, f, BesovIndex::make(0.5, 2.0, 1.0)) == doctest::Approx(0.2).epsilon(1e-12));
  SpectralField big = f;
  big *= 2.0;
  CHECK_THROWS_AS(composition_ratio(laws, Law::Pi1, big, BesovIndex::make(0.5, 2.0, 1.0)), Error);
}

TEST_CASE("commutator vanishes for a constant transport field") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI);
  RandomFieldSpec spec;
  spec.seed = 9;
  spec.xi_max = 9.0;
  const SpectralField a = random_field(g, spec, 0);
  VectorField v{SpectralField(g), SpectralField(g)};
  v[0].c[0] = 0.7;
  v[1].c[0] = -1.3;
  for (int k = -1; k <= 3; ++k)
    for (int l = 0; l < 2; ++l) CHECK(coeff_l2(commutator(v, a, k, l)) < 1e-12 * coeff_l2(a));
}

TEST_CASE("nonlinear Bernstein: grid and zero-set quadratures agree at p = 4") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI);
  RandomFieldSpec spec;
  spec.seed = 21;
  spec.law = SpectrumLaw::Block;
  spec.support_blocks = std::make_pair(0, 0);
  spec.amplitude = 1.0;
  const SpectralField f = random_field(g, spec, 0);
  const NonlinearBernstein grid = nonlinear_bernstein(f, 4.0, 1.0, 4);
  const NonlinearBernstein exact = nonlinear_bernstein_exact(f, 4.0, 1.0);
  CHECK(grid.lp == doctest::Approx(exact.lp).epsilon(1e-9));
  CHECK(grid.middle == doctest::Approx(exact.middle).epsilon(1e-9));
  CHECK(grid.right == doctest::Approx(exact.right).epsilon(1e-9));
  // Integration by parts: middle and right are the same integral.
  CHECK(exact.identity_residual < 1e-9);
  CHECK(exact.c > 0.0);
  CHECK_THROWS_AS(nonlinear_bernstein(cos_x(g), 4.0, 4.0, 2), Error);  // |xi| = 1 is outside [3, 32/3]
}

TEST_CASE("sampled checks are deterministic") {
  HarnessOptions o;
  o.seed = 5;
  o.n_samples = 12;
  o.ascent_candidates = 2;
  o.ascent_steps = 10;
  CHECK_NOTHROW(o.validate());
  SampledCheck c;
  c.id = "sup_over_l2";
  c.anchor = "||f||_inf <~ ||f||_2";
  c.description = "unit-test check";
  c.base = Grid::make(2, 16, 2.0 * M_PI);
  c.refined = Grid::make(2, 32, 2.0 * M_PI);
  c.eval = [](const Draw& d, bool) {
    RandomFieldSpec spec;
    spec.xi_max = 5.0;
    spec.amplitude = 0.0;
    const SpectralField f = d.field(spec, 0);
    return SampleValue{false, lp_norm(f, INFINITY) / lp_norm(f, 2.0), 0.0};
  };
  SuiteReport a{"unit", o.seed, o.n_samples, {run_sampled(c, o)}};
  SuiteReport b{"unit", o.seed, o.n_samples, {run_sampled(c, o)}};
  CHECK(to_json(a) == to_json(b));
  const CheckResult& r = a.checks[0];
  CHECK(r.n_samples == 12);
  CHECK(r.n_more == 12 * o.sample_growth);
  CHECK(r.worst > 0.0);
  CHECK(r.finite);

  o.n_samples = 0;
  CHECK_THROWS_AS(o.validate(), Error);
  o = HarnessOptions{};
  o.refinement_limit = 1.0;
  CHECK_THROWS_AS(o.validate(), Error);
  CHECK_THROWS_AS(run_suite("nonsense", HarnessOptions{}), Error);
}
