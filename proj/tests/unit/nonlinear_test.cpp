#include <doctest.h>

#include <cmath>

#include "bmhd/common/error.hpp"
#include "bmhd/harness/random_field.hpp"
#include "bmhd/nonlinear/solver.hpp"
#include "bmhd/spectral/operators.hpp"

using namespace bmhd;

namespace {

StateVector small_state(const Grid& g, double amp, std::uint64_t sample) {
  harness::RandomFieldSpec spec;
  spec.seed = 17;
  spec.law = harness::SpectrumLaw::Gaussian;
  spec.center = 2.0;
  spec.width = 1.0;
  spec.xi_max = 5.0;
  spec.amplitude = amp;
  StateVector s(g);
  for (int c = 0; c < s.components(); ++c) s.f[c] = harness::random_field(g, spec, sample, c);
  s.set_magnetic(leray_project(s.magnetic()));
  return s;
}

double max_diff(const StateVector& a, const StateVector& b) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (std::size_t i = 0; i < a.grid.size(); ++i) m = std::max(m, std::abs(a.f[c][i] - b.f[c][i]));
  return m;
}

}  // namespace

TEST_CASE("fluid laws") {
  const FluidLaws l = FluidLaws::make(0.5, 1.4, 0.2, -0.2);
  CHECK(l.lambda_inf() == 0.0);
  CHECK(l.pi1(0.5) == doctest::Approx(1.0 / 3.0));
  CHECK(l.pi2(0.0) == 0.0);
  CHECK(l.pi2(1.0) == doctest::Approx(std::pow(2.0, -0.6) - 1.0));
  CHECK(law_value(l, Law::MuTilde, 0.1) == doctest::Approx(0.02));
  CHECK(parse_law("pi1") == Law::Pi1);
  CHECK(to_string(parse_law("lambda_tilde")) == "lambda_tilde");
  CHECK_THROWS_AS(parse_law("pi3"), Error);
  CHECK_THROWS_AS(FluidLaws::make(0.5, 0.0, 0.2, -0.2), Error);
}

TEST_CASE("composition matches pointwise evaluation") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI);
  const FluidLaws l = FluidLaws::make(0.5, 1.4, 0.2, -0.2);
  const SpectralField a = small_state(g, 0.3, 0).a();
  const PhysicalField ap = inverse_transform(a);
  PhysicalField fp(g);
  for (std::size_t i = 0; i < g.size(); ++i) fp[i] = ap[i] / (1.0 + ap[i]);
  SpectralField expect = transform(fp);
  dealias(expect, 2.0 / 3.0);
  const SpectralField got = composition_apply(l, Law::Pi1, a);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(got[i] - expect[i]) < 1e-15);
}

TEST_CASE("nonlinear terms: split parts sum to g and vanish at rest") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI * 2.0);
  const LinearParams p = LinearParams::make(2, 0.5, {1.0, 0.0, 0.0});
  const FluidLaws l = FluidLaws::make(0.5, 1.4, 0.2, -0.2);
  const StateVector s = small_state(g, 0.05, 1);
  const NonlinearTerms n = nonlinear_terms(s, l, p, 2.0 / 3.0, true);
  REQUIRE(n.has_parts);
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < 2; ++i)
    for (std::size_t m = 0; m < g.size(); ++m) {
      cplx sum = 0.0;
      for (const auto& part : n.g_parts) sum += part[i][m];
      worst = std::max(worst, std::abs(sum - n.g[i][m]));
      scale = std::max(scale, std::abs(n.g[i][m]));
    }
  CHECK(scale > 0.0);
  CHECK(worst <= 1e-13 * scale);
  CHECK(n.min_density > 0.9);
  const NonlinearTerms z = nonlinear_terms(StateVector(g), l, p);
  CHECK(coeff_l2(z.f) == 0.0);
  // The terms are at least quadratic: halving the state quarters them (up to cubic corrections).
  StateVector half = s;
  half *= 0.5;
  const NonlinearTerms nh = nonlinear_terms(half, l, p);
  const double ratio = coeff_l2(nh.f) / coeff_l2(n.f);
  CHECK(ratio == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("linear runs reproduce the semigroup") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI * 2.0);
  const LinearParams p = LinearParams::make(2, 0.5, {1.0, 0.0, 0.0});
  const FluidLaws l = FluidLaws::make(0.5, 1.4, 0.2, -0.2);
  StateVector s = small_state(g, 1e-2, 2);
  for (auto& f : s.f) dealias(f, 2.0 / 3.0);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.5;
  cfg.nonlinear = false;
  cfg.snapshot_stride = 10;
  const RunResult r = simulate(s, p, l, cfg);
  CHECK(r.steps == 50);
  CHECK(r.traj.states.size() == 6);
  CHECK(max_diff(r.final_state, semigroup_apply(s, 0.5, p)) < 1e-14);
  CHECK(r.duhamel_residual < 1e-14);
}

TEST_CASE("small-data nonlinear run keeps the invariants") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI * 4.0);
  const LinearParams p = LinearParams::make(2, 0.5, {1.0, 0.0, 0.0});
  const FluidLaws l = FluidLaws::make(0.5, 1.4, 0.2, -0.2);
  StateVector s = small_state(g, 1e-3, 3);
  for (auto& f : s.f) dealias(f, 2.0 / 3.0);
  SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 1.0;
  cfg.snapshot_stride = 5;
  int calls = 0;
  const RunResult r = simulate(s, p, l, cfg, [&](double, const StateVector&) { ++calls; });
  CHECK(calls == static_cast<int>(r.traj.states.size()));
  CHECK(r.final_state.finite());
  CHECK(r.duhamel_residual < 1e-8);
  CHECK(r.max_div_drift < 1e-12);
  CHECK(divergence_defect(r.final_state.magnetic()) < 1e-14);
  CHECK(r.min_density > 0.99);
  // The stored trajectory reproduces the residual with the offline quadrature.
  CHECK(duhamel_residual(r.traj, p, l) < 1e-4);
}

TEST_CASE("high-frequency residuals converge at second order") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI * 4.0);
  const LinearParams p = LinearParams::make(2, 0.5, {1.0, 0.0, 0.0});
  const FluidLaws l = FluidLaws::make(0.5, 1.4, 0.2, -0.2);
  StateVector s = small_state(g, 1e-3, 4);
  for (auto& f : s.f) dealias(f, 2.0 / 3.0);
  SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 1.0;
  cfg.snapshot_stride = 5;
  const RunResult r = simulate(s, p, l, cfg);
  const int n = static_cast<int>(r.traj.states.size());
  const ResidualReport r1 = high_freq_residuals(r.traj, p, l, 1, 2.0 / 3.0, true, 2, n - 3);
  const ResidualReport r2 = high_freq_residuals(r.traj, p, l, 2, 2.0 / 3.0, true, 2, n - 3);
  CHECK(r2.a_equation / r1.a_equation == doctest::Approx(4.0).epsilon(0.3));
  CHECK(r2.pu_equation / r1.pu_equation == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("effective velocity") {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  const StateVector s = small_state(g, 1.0, 5);
  const VectorField w = effective_velocity(s);
  // w is a gradient: its curl vanishes, and div w = a - div u up to the mean.
  const SpectralField dw = divergence(w);
  const SpectralField du = divergence(s.velocity());
  double worst = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) worst = std::max(worst, std::abs(-dw[i] - (s.a()[i] - du[i])));
  CHECK(worst < 1e-13);
  const VectorField pw = leray_project(w);
  for (const auto& c : pw) CHECK(coeff_l2(c) < 1e-14);
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  c.dt = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SolverConfig{};
  c.snapshot_stride = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}
