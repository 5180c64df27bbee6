#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bmhd/common/error.hpp"
#include "bmhd/decay/functionals.hpp"
#include "bmhd/harness/random_field.hpp"
#include "bmhd/linear/semigroup.hpp"
#include "bmhd/linear/spectrum.hpp"
#include "bmhd/spectral/operators.hpp"

using namespace bmhd;

namespace {

DecayTrace power_law_trace(double exponent, double amp = 3.0) {
  DecayTrace tr;
  for (int i = 0; i < 20; ++i) tr.times.push_back(std::pow(10.0, 1.0 + 3.0 * i / 19.0));
  std::vector<double> v;
  for (double t : tr.times) v.push_back(amp * std::pow(japanese(t), exponent));
  tr.add("low_B^0_2,1", v);
  return tr;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Input;
}

}  // namespace

TEST_CASE("admissible exponents") {
  CHECK_NOTHROW(check_admissible(2.0, 2));
  CHECK_NOTHROW(check_admissible(3.5, 2));
  CHECK_NOTHROW(check_admissible(6.0 - 2.0, 3));
  CHECK_THROWS_AS(check_admissible(4.0, 2), Error);
  CHECK_THROWS_AS(check_admissible(1.5, 3), Error);
  CHECK_THROWS_AS(check_admissible(4.5, 3), Error);
}

TEST_CASE("predicted exponents") {
  // s0 = 2d/p - d/2: d = 3, p = 2 gives s0 = 3/2 and the classical -3/4 at s = 0.
  CHECK(predicted_rate(2.0, 3, 0.0) == doctest::Approx(-0.75));
  CHECK(predicted_rate(2.0, 3, 1.0) == doctest::Approx(-1.25));
  CHECK(predicted_rate(3.0, 3, 0.5) == doctest::Approx(-(0.5 + 0.5) / 2.0));
  CHECK_THROWS_AS(predicted_rate(2.0, 3, 2.0), Error);                        // s > d/p
  CHECK_THROWS_AS(predicted_rate(2.0, 3, -1.5), Error);                       // s <= -s0
  CHECK_THROWS_AS(predicted_rate(2.0, 3, 1.0, Quantity::VelocityMagnetic), Error);  // s > d/p - 1
  // L^r rates for p = 2: -(d/2)(1 - 1/r) - l/2.
  CHECK(predicted_rate_lr(2.0, 3, 2.0, 0.0) == doctest::Approx(-0.75));
  CHECK(predicted_rate_lr(2.0, 3, INFINITY, -1.0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(predicted_rate_lr(2.0, 3, INFINITY, 0.0), Error);
}

TEST_CASE("rate fit recovers an exact power law") {
  const DecayTrace tr = power_law_trace(-0.75);
  FitOptions fo;
  fo.auto_trim = false;
  const RateFit f = fit_rate(tr, "low_B^0_2,1", 10.0, 1e4, fo);
  CHECK(f.exponent == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.samples == 20);
  CHECK(kind_of([&] { fit_rate(tr, "low_B^0_2,1", 1e5, 1e6, fo); }) == ErrorKind::Window);
  CHECK(kind_of([&] { fit_rate(tr, "missing", 10.0, 1e4, fo); }) == ErrorKind::Input);
}

TEST_CASE("torus horizon") {
  DecayTrace tr = power_law_trace(-1.0);
  CHECK(std::isinf(torus_horizon(tr)));
  tr.torus_length = 2.0 * M_PI * 10.0;
  CHECK(torus_horizon(tr) == doctest::Approx(25.0));
}

TEST_CASE("trace CSV round trip, including commas in series names") {
  DecayTrace tr = power_law_trace(-0.5);
  tr.add("low_B^-s0_2,inf", std::vector<double>(tr.times.size(), 1.0));
  tr.add("plain", std::vector<double>(tr.times.size(), 2.5));
  tr.meta["source"] = "unit test";
  tr.dim = 2;
  tr.torus_length = 7.5;
  std::ostringstream os;
  write_trace_csv(os, tr);
  const DecayTrace back = read_trace_csv(os.str());
  CHECK(back.dim == 2);
  CHECK(back.torus_length == 7.5);
  CHECK(back.meta.at("source") == "unit test");
  REQUIRE(back.series.size() == 3);
  CHECK(back.series[1].first == "low_B^-s0_2,inf");
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    CHECK(back.times[i] == tr.times[i]);
    CHECK(back.get("low_B^0_2,1")[i] == tr.get("low_B^0_2,1")[i]);
  }
}

TEST_CASE("trace CSV errors name the line") {
  auto message = [](const std::string& text) {
    try {
      read_trace_csv(text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("# dim=2\nt,japanese_t,x\n1,1.4,2\n2,2.2\n").find("line 4") != std::string::npos);
  CHECK(message("# dim=2\nt,japanese_t,x\n1,1.4,abc\n").find("line 3") != std::string::npos);
  CHECK(message("# dim=2\nx,y\n").find("line 2") != std::string::npos);
  CHECK(message("t,japanese_t,\"open\n").find("line 1") != std::string::npos);
  CHECK(message("").find("no header") != std::string::npos);
  CHECK(message("# dim=two\nt,x\n").find("line 1") != std::string::npos);
}

TEST_CASE("trace rejects non-finite values") {
  DecayTrace tr;
  tr.times = {1.0, 2.0};
  CHECK_THROWS_AS(tr.add("x", {1.0, NAN}), Error);
  CHECK_THROWS_AS(tr.add("x", {1.0}), Error);
}

TEST_CASE("functionals on a stored history") {
  const Grid g = Grid::make(2, 32, 2.0 * M_PI * 4.0);
  const DyadicLadder ladder = DyadicLadder::for_grid(g, 0);
  harness::RandomFieldSpec spec;
  spec.seed = 40;
  spec.xi_max = 4.0;
  spec.amplitude = 1e-3;
  StateVector s(g);
  for (int c = 0; c < s.components(); ++c) s.f[c] = harness::random_field(g, spec, 0, c);
  s.set_magnetic(leray_project(s.magnetic()));
  const LinearParams p = LinearParams::make(2, 0.5, {1.0, 0.0, 0.0});

  NormHistory h = make_history(2.0, 2, ladder);
  for (int j = 0; j <= 10; ++j) h.append(0.1 * j, semigroup_apply(s, 0.1 * j, p));
  CHECK(h.size() == 11);
  const FunctionalReport e = e_p_functional(h);
  CHECK(e.terms.size() == 6);
  double sum = 0.0;
  for (const auto& t : e.terms) {
    CHECK(std::isfinite(t.value));
    CHECK(t.value >= 0.0);
    CHECK_FALSE(t.anchor.empty());
    sum += t.value;
  }
  CHECK(e.total == doctest::Approx(sum));
  // The L~inf low term at t = 0 alone equals the initial B^{d/2-1}_{2,1} low norm.
  const FunctionalReport e0 = e_p_functional(h, 1);
  const double low0 = hybrid_norm(s.a(), BesovIndex::make(0.0, 2.0, 1.0), ladder, Part::Low) +
                      hybrid_norm(s.velocity(), BesovIndex::make(0.0, 2.0, 1.0), ladder, Part::Low) +
                      hybrid_norm(s.magnetic(), BesovIndex::make(0.0, 2.0, 1.0), ladder, Part::Low);
  CHECK(e0.terms[0].value == doctest::Approx(low0).epsilon(1e-12));

  const auto run = d_p_running(h);
  for (std::size_t i = 1; i < run.size(); ++i) CHECK(run[i] >= run[i - 1]);
  const auto erun = e_p_running(h);
  CHECK(erun.back() == doctest::Approx(e.total).epsilon(1e-12));

  // On this box the data is not small at the default threshold; the first term is the low norm above.
  const SmallnessReport sm = smallness_report(s, 2.0, ladder);
  CHECK(sm.terms[0].value == doctest::Approx(low0).epsilon(1e-12));
  CHECK(sm.e_small == (sm.e_p0 <= sm.e_threshold));
  CHECK(smallness_report(s, 2.0, ladder, 2.0 * sm.e_p0).e_small);
  StateVector bad = s;
  bad.H(0) = s.a();
  CHECK_THROWS_AS(smallness_report(bad, 2.0, ladder), Error);
}
