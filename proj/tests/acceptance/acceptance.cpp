// End-to-end acceptance gates. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Tolerances and runtime budgets are fixed here,
// not read from the library defaults.
//
//   bmhd_acceptance [criterion ...]   (default: 1..10)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "bmhd/cli/manifest.hpp"
#include "bmhd/common/rng.hpp"
#include "bmhd/decay/functionals.hpp"
#include "bmhd/harness/harness.hpp"
#include "bmhd/harness/random_field.hpp"
#include "bmhd/linear/lyapunov.hpp"
#include "bmhd/linear/spectrum.hpp"
#include "bmhd/nonlinear/solver.hpp"
#include "bmhd/spectral/operators.hpp"

#ifndef BMHD_CLI_PATH
#error "BMHD_CLI_PATH must point at the bmhd executable"
#endif

using namespace bmhd;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double v, const char* f = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Vec3 unit(Vec3 v, int d) {
  if (d == 2) v[2] = 0.0;
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  for (auto& x : v) x /= n;
  return v;
}

Vec3 normal3(Rng& r) { return {r.normal(), r.normal(), r.normal()}; }

// ---- 1, 2: low-frequency decay rates on the quadrature path --------------------

Outcome decay_rates(const std::vector<double>& s_values) {
  const LinearParams lp = LinearParams::make(3, 0.5, {0.0, 0.0, 1.0});
  // Gaussian profiles are flat at the origin.
  auto bump = [](double amp) { return [amp](double r) { return amp * std::exp(-r * r); }; };
  RadialData u0{bump(1.0), bump(0.7), bump(0.5), bump(0.3)};
  std::vector<double> times;
  for (int i = 0; i < 16; ++i) times.push_back(1e2 * std::pow(1e2, i / 15.0));
  const DecayTrace tr = linear_decay_curve(u0, s_values, 2.0, times, lp, 4);
  Outcome o{true, ""};
  for (double s : s_values) {
    FitOptions fo;
    fo.auto_trim = false;
    const RateFit f = fit_rate(tr, series_name_low(s), 1e2, 1e4, fo);
    const double expected = -(1.5 + s) / 2.0;
    const double rel = std::abs(f.exponent / expected - 1.0);
    o.passed = o.passed && rel <= 0.05;
    o.detail += "s=" + num(s) + ": " + num(f.exponent, "%.4f") + " vs " + num(expected, "%.4f") + " (rel " +
                num(rel, "%.2e") + "); ";
  }
  return o;
}

// ---- 3: block rates scale like 2^{2k} -------------------------------------------

Outcome block_scaling() {
  const int k0 = -1;
  const Grid g = Grid::make(2, 256, 2.0 * M_PI * 64.0);  // lattice spacing 2^-6
  const LinearParams lp = LinearParams::make(2, 0.5, {1.0, 0.0, 0.0});
  double lo = INFINITY, hi = 0.0;
  for (int set = 0; set < 20; ++set) {
    harness::RandomFieldSpec spec;
    spec.seed = 3;
    spec.law = harness::SpectrumLaw::Block;
    spec.support_blocks = std::make_pair(k0 - 6, k0);
    StateVector s(g);
    for (int c = 0; c < s.components(); ++c) s.f[c] = harness::random_field(g, spec, set, c);
    s.set_magnetic(leray_project(s.magnetic()));
    for (int k = k0 - 6; k <= k0; ++k) {
      // Parabolic scaling of the window keeps the fit comparable across k.
      std::vector<double> tg;
      for (int j = 0; j < 16; ++j) tg.push_back(4.0 * std::pow(4.0, -k) * j / 15.0);
      const BlockFit f = block_decay_fit(s, k, tg, lp);
      if (!(f.c_scaled > 0.0) || !std::isfinite(f.c_scaled)) return {false, "nonpositive rate at k=" + std::to_string(k)};
      lo = std::min(lo, f.c_scaled);
      hi = std::max(hi, f.c_scaled);
    }
  }
  return {hi / lo <= 4.0, "c(k)/2^{2k} in [" + num(lo, "%.4f") + ", " + num(hi, "%.4f") + "], width x" +
                              num(hi / lo, "%.3f") + " (limit x4), 20 data sets, k in [-7, -1]"};
}

// ---- 4: Lyapunov identities and dissipation --------------------------------------

Outcome lyapunov_ledger() {
  const double rho0 = std::pow(2.0, 4 + 1) * 8.0 / 3.0;  // 2^{k0+1} 8/3 with k0 = 4
  double worst_identity = 0.0, worst_margin = -INFINITY;
  int nonmonotone = 0;
  for (int n = 0; n < 1000; ++n) {
    Rng r(Rng::hash({4, static_cast<std::uint64_t>(n)}));
    const int d = n % 2 == 0 ? 2 : 3;
    const LinearParams lp = LinearParams::make(d, r.uniform(0.1, 2.0), unit(normal3(r), d));
    const double rad = rho0 * std::pow(r.uniform(), 3.0);  // dense near the origin
    Vec3 xi = unit(normal3(r), d);
    for (auto& x : xi) x *= std::max(rad, 1e-3);
    CCol u0(1 + 2 * d);
    for (int c = 0; c < u0.size(); ++c) u0(c) = {r.normal(), r.normal()};
    const double rr = std::max(rad, 1e-3);
    std::vector<double> tg;
    for (int j = 0; j < 100; ++j) tg.push_back(10.0 / std::min(rr * rr, 1.0) * j / 99.0);
    const DissipationReport rep = lyapunov_dissipation_check(xi, u0, tg, lp, rho0);
    worst_identity = std::max(worst_identity, rep.worst_identity);
    worst_margin = std::max(worst_margin, rep.worst_margin);
    nonmonotone += !rep.monotone;
  }
  return {worst_identity <= 1e-9 && worst_margin <= 0.0 && nonmonotone == 0,
          "worst identity residual " + num(worst_identity, "%.2e") + " (limit 1e-9), worst (dL^2 + D)/scale " +
              num(worst_margin, "%.3e") + " (limit 0), non-monotone flows " + std::to_string(nonmonotone) +
              ", 1000 samples, rho0 " + num(rho0)};
}

// ---- 5: dissipativity sweep ------------------------------------------------------

Outcome dissipativity() {
  std::string detail;
  bool ok = true;
  for (int d : {2, 3}) {
    const LinearParams lp = LinearParams::make(d, 0.5, d == 2 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 0.0, 1.0});
    const SweepResult r = eigen_sweep(sweep_samples(d, 64, 60, 1e-3, 1e3), lp);
    ok = ok && r.rows.size() == 64u * 60u && std::isfinite(r.c) && r.c > 0.0;
    detail += "d=" + std::to_string(d) + ": c = " + num(r.c) + " over " + std::to_string(r.rows.size()) + " samples; ";
  }
  return {ok, detail};
}

// ---- 6: heat decoupling at I = 0 ---------------------------------------------------

Outcome heat_decoupling() {
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    Rng r(Rng::hash({6, static_cast<std::uint64_t>(n)}));
    const int d = n % 2 == 0 ? 2 : 3;
    const LinearParams lp = LinearParams::make(d, r.uniform(0.1, 2.0), {0.0, 0.0, 0.0}, true);
    Vec3 xi = unit(normal3(r), d);
    const double rho = std::pow(10.0, r.uniform(-2.0, 1.0));
    for (auto& x : xi) x *= rho;
    const double t = r.uniform(0.0, 5.0);
    CCol u0(1 + 2 * d);
    for (int c = 0; c < u0.size(); ++c) u0(c) = {r.normal(), r.normal()};
    const CCol u = propagate_mode(mode_matrix(xi, lp), t, u0);
    const double decay = std::exp(-rho * rho * t);
    double err = 0.0, ref = 0.0;
    for (int i = 0; i < d; ++i) {
      err = std::max(err, std::abs(u(1 + d + i) - decay * u0(1 + d + i)));
      ref = std::max(ref, std::abs(u0(1 + d + i)));
    }
    worst = std::max(worst, err / ref);
  }
  return {worst <= 1e-12, "max |H(t) - e^{-|xi|^2 t} H0| / |H0| = " + num(worst, "%.2e") + " (limit 1e-12), 1000 modes"};
}

// ---- 7: effective-velocity identity ------------------------------------------------

Outcome effective_velocity_identity() {
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const int d = n % 2 == 0 ? 2 : 3;
    const Grid g = d == 2 ? Grid::make(2, 32, 2.0 * M_PI) : Grid::make(3, 16, 2.0 * M_PI);
    harness::RandomFieldSpec spec;
    spec.seed = 7;
    spec.xi_max = d == 2 ? 14.0 : 7.0;
    StateVector s(g);
    for (int c = 0; c < s.components(); ++c) s.f[c] = harness::random_field(g, spec, n, c);
    const VectorField w = effective_velocity(s);
    const VectorField grad_inv_a = gradient(inverse_neg_laplacian(s.a()));
    const VectorField pu = leray_project(s.velocity());
    double err = 0.0, ref = 0.0;
    for (int i = 0; i < d; ++i)
      for (std::size_t m = 0; m < g.size(); ++m) {
        const cplx rhs = w[i][m] - grad_inv_a[i][m] + pu[i][m];
        err = std::max(err, std::abs(s.u(i)[m] - rhs));
        ref = std::max(ref, std::abs(s.u(i)[m]));
      }
    worst = std::max(worst, err / ref);
  }
  return {worst <= 1e-12, "max |u - (w - grad(-Delta)^{-1} a + Pu)| / max|u| = " + num(worst, "%.2e") +
                              " (limit 1e-12), 100 states"};
}

// ---- CLI helpers -------------------------------------------------------------------

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" BMHD_CLI_PATH "\" " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(cli::read_file(p)); }

// ---- 8: nonlinear consistency --------------------------------------------------------

Outcome nonlinear_consistency(const fs::path& work) {
  const fs::path out = work / "c8";
  fs::remove_all(out);
  const auto t0 = Clock::now();
  // dim 2, N 128, amplitude 1e-3, t in [0, 10], dt 1e-3 are the command defaults;
  // they are spelled out so a change of defaults cannot move the gate.
  const int rc = run_cli("duhamel-check -o \"" + out.string() +
                         "\" --set dim=2 --set n=128 --set amplitude=1e-3 --set t_end=10.0 --set dt=1e-3");
  const double secs = seconds_since(t0);
  if (!fs::exists(out / "run.json")) return {false, "no run.json (exit " + std::to_string(rc) + ")"};
  const auto j = read_json(out / "run.json");
  const double duhamel = j["duhamel_residual"]["value"];
  const double drift = j["max_div_drift"]["value"];
  const double ep = j["e_p_ratio"]["value"];
  bool ok = duhamel < 1e-5 && drift < 1e-10 && ep < 10.0 && secs < 600.0;
  std::string ratios;
  for (const char* eq : {"a_equation", "w_equation", "pu_equation"}) {
    const double ratio = j["residual_convergence"][eq]["ratio"];
    ok = ok && std::abs(ratio / 4.0 - 1.0) <= 0.30;
    ratios += std::string(eq) + " " + num(ratio, "%.4f") + " ";
  }
  return {ok, "Duhamel " + num(duhamel, "%.2e") + " (< 1e-5), div drift " + num(drift, "%.2e") +
                  "/step (< 1e-10), E_p ratio " + num(ep, "%.4f") + " (< 10), stride ratios " + ratios +
                  "(4 +- 30%), exit " + std::to_string(rc)};
}

// ---- 9: harness suites -------------------------------------------------------------

Outcome harness_suites() {
  int probes = 0, failed_probes = 0;
  std::string bad;
  for (std::uint64_t seed : {1ull, 42ull}) {
    harness::HarnessOptions o;
    o.seed = seed;
    o.n_samples = 1000;
    o.sample_growth = 4;
    o.refinement_limit = 2.0;
    o.sample_limit = 0.10;
    for (const auto& name : harness::suite_names()) {
      const harness::SuiteReport r = harness::run_suite(name, o);
      for (const auto& c : r.checks) {
        if (c.expected_failure) {
          ++probes;
          failed_probes += c.status == harness::CheckStatus::ExpectedFail;
        }
        const bool ok = c.finite && (c.expected_failure ? c.status == harness::CheckStatus::ExpectedFail
                                                        : c.status == harness::CheckStatus::Pass &&
                                                              c.growth_refinement < 2.0 && c.growth_samples < 0.10);
        if (!ok && bad.size() < 400)
          bad += " [seed " + std::to_string(seed) + "] " + c.id + " " + harness::to_string(c.status) + " (gR " +
                 num(c.growth_refinement, "%.3f") + ", gS " + num(c.growth_samples, "%.3f") + ")";
      }
    }
  }
  // Two probes (a > b Bernstein, s2 = 1 convolution) per seed.
  const bool ok = bad.empty() && probes == 4 && failed_probes == 4;
  return {ok, std::to_string(harness::suite_names().size()) + " suites at seeds {1, 42}; probes failing as designed " +
                  std::to_string(failed_probes) + "/" + std::to_string(probes) + (bad.empty() ? "" : ";" + bad)};
}

// ---- 10: hash reproducibility ----------------------------------------------------------

Outcome determinism(const fs::path& work) {
  struct Case {
    std::string name, args;
  };
  const std::vector<Case> cases = {
      {"linear-decay", "linear-decay --set 's=[0, 1]' --set n_t=8"},
      {"symbol-sweep", "symbol-sweep --set n_dir=16 --set n_mag=20"},
      {"harness", "harness --suite heat --suite convolution --samples 100 --set ascent_steps=50 --seed 1"},
      {"simulate", "simulate --set n=32 --set t_end=0.2 --set snapshot_stride=20 --set length_over_2pi=8"},
      {"duhamel-check", "duhamel-check --set n=32 --set t_end=0.2 --set snapshot_stride=20 --set length_over_2pi=8"},
  };
  const fs::path root = work / "c10";
  fs::remove_all(root);
  std::string detail;
  bool ok = true;
  // Second run uses a different thread cap: results must not depend on it.
  auto twice = [&](const std::string& name, const std::function<int(const fs::path&, const std::string&)>& once) {
    const fs::path dir = root / name;
    const int rc1 = once(dir, "BMHD_THREADS=1");
    const std::string m1 = fs::exists(dir / "manifest.json") ? cli::read_file(dir / "manifest.json") : "";
    fs::remove_all(dir);
    const int rc2 = once(dir, "BMHD_THREADS=3");
    const std::string m2 = fs::exists(dir / "manifest.json") ? cli::read_file(dir / "manifest.json") : "";
    const bool same = !m1.empty() && m1 == m2 && rc1 == 0 && rc2 == 0 && cli::verify_manifest(dir).empty();
    ok = ok && same;
    detail += name + (same ? " ok; " : " DIFFERS (exit " + std::to_string(rc1) + "/" + std::to_string(rc2) + "); ");
  };
  for (const auto& c : cases)
    twice(c.name, [&](const fs::path& dir, const std::string& env) {
      return run_cli(c.args + " -o \"" + dir.string() + "\"", env);
    });
  // decay-report reads the simulate output, which is identical in both runs.
  twice("decay-report", [&](const fs::path& dir, const std::string& env) {
    return run_cli("decay-report --input \"" + (root / "simulate").string() + "\" -o \"" + dir.string() + "\"", env);
  });
  // plot has no manifest; compare the SVG bytes.
  const fs::path trace = root / "linear-decay" / "trace.csv";
  std::string svg[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path p = root / ("plot" + std::to_string(i) + ".svg");
    const int rc = run_cli("plot \"" + trace.string() + "\" -o \"" + p.string() + "\"");
    svg[i] = rc == 0 && fs::exists(p) ? cli::read_file(p) : "";
  }
  const bool plot_same = !svg[0].empty() && svg[0] == svg[1];
  ok = ok && plot_same;
  detail += std::string("plot ") + (plot_same ? "ok" : "DIFFERS");
  return {ok, detail};
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = fs::current_path() / "acceptance_work";
  fs::create_directories(work);
  const std::vector<Criterion> all = {
      {1, "classical decay t^{-3/4} (d=3, p=2, s=0)", 60.0, [] { return decay_rates({0.0}); }},
      {2, "rate family -(3/2+s)/2, s in {1/2, 1, 2}", 180.0, [] { return decay_rates({0.5, 1.0, 2.0}); }},
      {3, "block rates c(k)/2^{2k} in a band of width <= 4", 120.0, block_scaling},
      {4, "Lyapunov identities and nonpositive dissipation", 60.0, lyapunov_ledger},
      {5, "dissipativity sweep 64 x 60, c > 0", 60.0, dissipativity},
      {6, "heat decoupling at I = 0", 60.0, heat_decoupling},
      {7, "u = w - grad(-Delta)^{-1} a + Pu", 60.0, effective_velocity_identity},
      {8, "nonlinear consistency, 2D N=128, t in [0, 10]", 600.0, [&] { return nonlinear_consistency(work); }},
      {9, "harness suites at seeds {1, 42}", 900.0, harness_suites},
      {10, "CLI runs are hash-reproducible", 600.0, [&] { return determinism(work); }},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    while (o.detail.size() >= 2 && o.detail.compare(o.detail.size() - 2, 2, "; ") == 0) o.detail.resize(o.detail.size() - 2);
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.passed && in_time;
    failures += !pass;
    std::printf("%s criterion %d: %s | %s | %.1f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
