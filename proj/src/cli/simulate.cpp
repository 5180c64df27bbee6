#include <cmath>
#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "bmhd/cli/commands.hpp"
#include "bmhd/common/rng.hpp"
#include "bmhd/nonlinear/solver.hpp"
#include "bmhd/spectral/operators.hpp"
#include "bmhd/spectral/snapshot.hpp"

namespace bmhd::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t enc(int k) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(k)); }

const char* kDuhamelAnchor = "U(t) = G(t)U0 + int_0^t G(t-tau) N(U(tau)) dtau";
const char* kEpAnchor = "E_p(t) <= C E_{p,0}";

struct SimSetup {
  Grid grid;
  LinearParams lp;
  FluidLaws laws;
  SolverConfig cfg;
  StateVector u0;
  DyadicLadder ladder;
  double p = 2.0;
  double duhamel_tol = 1e-5;
  double drift_tol = 1e-10;
  double ep_ratio_limit = 10.0;
  double density_floor = 0.1;
};

const std::initializer_list<std::string_view> kSimKeys = {
    "dim",   "n",     "length_over_2pi", "mu_inf",          "field",       "gamma",         "mu_slope",
    "lambda_slope", "amplitude", "width", "k_max", "dt", "t_end", "snapshot_stride", "dealias", "nonlinear",
    "p",     "k0",    "duhamel_tol",     "drift_tol",       "ep_ratio_limit", "density_floor", "ratio_tol"};

SimSetup read_setup(const ExperimentConfig& c, const Params& P) {
  SimSetup s;
  const int dim = static_cast<int>(P.integer("dim", 2));
  s.grid = Grid::make(dim, static_cast<int>(P.integer("n", 128)), 2.0 * M_PI * P.number("length_over_2pi", 64.0));
  s.lp = LinearParams::make(dim, P.number("mu_inf", 0.5), P.vec3("field", {1.0, 0.0, 0.0}));
  s.laws = FluidLaws::make(s.lp.mu_inf, P.number("gamma", 1.4), P.number("mu_slope", 0.2), P.number("lambda_slope", -0.2));
  s.cfg.dt = P.number("dt", 1e-3);
  s.cfg.t_end = P.number("t_end", 10.0);
  s.cfg.snapshot_stride = static_cast<int>(P.integer("snapshot_stride", 100));
  s.cfg.dealias = P.number("dealias", 2.0 / 3.0);
  s.cfg.nonlinear = P.boolean("nonlinear", true);
  s.cfg.validate();
  s.p = P.number("p", 2.0);
  s.ladder = DyadicLadder::for_grid(s.grid, static_cast<int>(P.integer("k0", 0)));
  s.duhamel_tol = P.number("duhamel_tol", 1e-5);
  s.drift_tol = P.number("drift_tol", 1e-10);
  s.ep_ratio_limit = P.number("ep_ratio_limit", 10.0);
  s.density_floor = P.number("density_floor", 0.1);
  const double amp = P.number("amplitude", 1e-3), width = P.number("width", 0.15);
  const int k_max = static_cast<int>(P.integer("k_max", 20));
  require(amp > 0.0 && width > 0.0 && k_max >= 1, ErrorKind::Config,
          "params.amplitude/width/k_max: need positive amplitude and width, k_max >= 1");
  s.u0 = small_data(s.grid, c.seed, amp, width, k_max);
  return s;
}

struct SimOutput {
  RunResult run;
  NormHistory hist;
  std::vector<double> e_p, d_p;
};

SimOutput simulate_recorded(const SimSetup& s, OutputDir& out, RunContext& ctx) {
  SimOutput o;
  o.hist = make_history(s.p, s.grid.dim, s.ladder);
  std::vector<double> l2[3];
  save_state((out.root() / "initial_state.bmhd").string(), s.u0);
  out.write("initial_state.bmhd", read_file(out.root() / "initial_state.bmhd"));
  ctx.say("simulate: " + s.grid.describe() + ", dt " + fmt(s.cfg.dt) + ", t_end " + fmt(s.cfg.t_end));
  o.run = simulate(s.u0, s.lp, s.laws, s.cfg, [&](double t, const StateVector& u) {
    require(u.finite(), ErrorKind::BlowUp, "non-finite state at t = " + fmt(t));
    ctx.last_state = u;
    o.hist.append(t, u);
    l2[0].push_back(l2_parseval(u.a()));
    l2[1].push_back(l2_parseval(u.velocity()));
    l2[2].push_back(l2_parseval(u.magnetic()));
  });
  ctx.last_state = o.run.final_state;
  o.e_p = e_p_running(o.hist);
  o.d_p = d_p_running(o.hist);

  DecayTrace tr;
  tr.times = o.hist.times;
  tr.dim = s.grid.dim;
  tr.p = s.p;
  tr.torus_length = s.grid.length;
  tr.meta["source"] = "simulate";
  tr.meta["k0"] = std::to_string(s.ladder.k0);
  tr.add("E_p", o.e_p);
  tr.add("D_p", o.d_p);
  tr.add("L2_a", l2[0]);
  tr.add("L2_u", l2[1]);
  tr.add("L2_H", l2[2]);
  std::ostringstream csv;
  write_trace_csv(csv, tr);
  out.write("trace.csv", csv.str());
  out.write("history.csv", history_csv(o.hist));
  save_state((out.root() / "final_state.bmhd").string(), o.run.final_state);
  out.write("final_state.bmhd", read_file(out.root() / "final_state.bmhd"));
  return o;
}

nlohmann::ordered_json run_json(const ExperimentConfig& c, const SimSetup& s, const SimOutput& o, RunContext& ctx) {
  const RunResult& r = o.run;
  double ratio = 0.0;
  for (double e : o.e_p) ratio = std::max(ratio, e / o.e_p.front());
  const bool finite = r.final_state.finite() && std::isfinite(r.duhamel_residual) && std::isfinite(ratio);
  ctx.gate("finite", finite, finite ? "state and diagnostics finite" : "non-finite output");
  ctx.gate("duhamel residual", r.duhamel_residual < s.duhamel_tol,
           fmt(r.duhamel_residual) + " < " + fmt(s.duhamel_tol));
  ctx.gate("div H drift", r.max_div_drift < s.drift_tol, fmt(r.max_div_drift) + " per step < " + fmt(s.drift_tol));
  ctx.gate("E_p bound", ratio < s.ep_ratio_limit, "max E_p(t)/E_p(0) = " + fmt(ratio) + " < " + fmt(s.ep_ratio_limit));
  ctx.gate("density", r.min_density > s.density_floor, "min(1 + a) = " + fmt(r.min_density));

  const SmallnessReport sm = smallness_report(s.u0, s.p, s.ladder);
  nlohmann::ordered_json j;
  j["kind"] = c.kind;
  j["grid"] = s.grid.describe();
  j["laws"] = s.laws.describe();
  j["dt"] = s.cfg.dt;
  j["t_end"] = s.cfg.t_end;
  j["steps"] = r.steps;
  j["snapshots"] = o.hist.size();
  j["duhamel_residual"] = {{"value", r.duhamel_residual}, {"limit", s.duhamel_tol}, {"anchor", kDuhamelAnchor}};
  j["max_div_drift"] = {{"value", r.max_div_drift}, {"limit", s.drift_tol}, {"anchor", "div H = 0"}};
  j["e_p_ratio"] = {{"value", ratio}, {"limit", s.ep_ratio_limit}, {"anchor", kEpAnchor}};
  j["max_cfl"] = r.max_cfl;
  j["max_aliasing_fraction"] = r.max_aliasing;
  j["aliasing_flag"] = r.aliasing_flag;
  j["min_density"] = r.min_density;
  nlohmann::ordered_json small;
  small["e_p0"] = sm.e_p0;
  small["d_p0"] = sm.d_p0;
  small["e_small"] = sm.e_small;
  small["d_small"] = sm.d_small;
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& t : sm.terms) terms.push_back({{"name", t.name}, {"anchor", t.anchor}, {"value", t.value}});
  small["terms"] = terms;
  j["initial_smallness"] = small;
  return j;
}

nlohmann::ordered_json functional_json(const FunctionalReport& r) {
  nlohmann::ordered_json j;
  j["total"] = r.total;
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& t : r.terms) terms.push_back({{"name", t.name}, {"anchor", t.anchor}, {"value", t.value}});
  j["terms"] = terms;
  return j;
}

}  // namespace

StateVector small_data(const Grid& g, std::uint64_t seed, double amplitude, double width, int k_max) {
  const Geometry& geo = geometry(g);
  StateVector s(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t j = geo.conj[i];
    if (j <= i || geo.nyquist[i]) continue;
    const auto& k = geo.k[i];
    if (std::abs(k[0]) > k_max || std::abs(k[1]) > k_max || std::abs(k[2]) > k_max) continue;
    const double env = std::exp(-geo.kmag2[i] / (2.0 * width * width));
    for (int c = 0; c < s.components(); ++c) {
      Rng r(Rng::hash({seed, static_cast<std::uint64_t>(c), enc(k[0]), enc(k[1]), enc(k[2])}));
      s.f[c].c[i] = env * cplx(r.normal(), r.normal());
      s.f[c].c[j] = std::conj(s.f[c].c[i]);
    }
  }
  s.set_magnetic(leray_project(s.magnetic()));
  double m = 0.0;
  for (const auto& f : s.f) m = std::max(m, lp_norm(f, INFINITY));
  require(m > 0.0, ErrorKind::Config, "small data: no modes selected (check width and k_max)");
  s *= amplitude / m;
  return s;
}

std::string history_csv(const NormHistory& h) {
  std::ostringstream os;
  os << "# p=" << full(h.p) << "\n# dim=" << h.dim << "\n# k_min=" << h.ladder.k_min << "\n# k_max=" << h.ladder.k_max
     << "\n# k0=" << h.ladder.k0 << "\n# overlap=" << h.ladder.overlap << "\n";
  os << "t,key,k_min,zero_mode_dropped,blocks...\n";
  for (std::size_t i = 0; i < h.size(); ++i)
    for (const auto& [key, series] : h.blocks) {
      const BlockNorms& b = series[i];
      os << full(h.times[i]) << ',' << key << ',' << b.k_min << ',' << (b.zero_mode_dropped ? 1 : 0);
      for (double v : b.v) os << ',' << full(v);
      os << '\n';
    }
  return os.str();
}

NormHistory read_history_csv(const std::string& text) {
  NormHistory h;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool header = false;
  auto bad = [&](const std::string& what) { fail(ErrorKind::Parse, "history line " + std::to_string(lineno) + ": " + what); };
  auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      bad("'" + s + "' is not a number");
    }
    if (pos != s.size()) bad("'" + s + "' is not a number");
    return v;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2), val = line.substr(eq + 1);
      const double v = number(val);
      if (key == "p") h.p = v;
      else if (key == "dim") h.dim = static_cast<int>(v);
      else if (key == "k_min") h.ladder.k_min = static_cast<int>(v);
      else if (key == "k_max") h.ladder.k_max = static_cast<int>(v);
      else if (key == "k0") h.ladder.k0 = static_cast<int>(v);
      else if (key == "overlap") h.ladder.overlap = static_cast<int>(v);
      continue;
    }
    if (!header) {
      if (line.rfind("t,key,", 0) != 0) bad("expected the header 't,key,k_min,...'");
      header = true;
      continue;
    }
    std::vector<std::string> cols;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        cols.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    cols.push_back(cur);
    if (cols.size() < 5) bad("expected t, key, k_min, zero_mode_dropped and at least one block");
    const double t = number(cols[0]);
    if (h.times.empty() || h.times.back() != t) {
      if (!h.times.empty() && t < h.times.back()) bad("times must be nondecreasing");
      h.times.push_back(t);
    }
    BlockNorms b;
    b.k_min = static_cast<int>(number(cols[2]));
    b.zero_mode_dropped = number(cols[3]) != 0.0;
    for (std::size_t i = 4; i < cols.size(); ++i) b.v.push_back(number(cols[i]));
    auto& series = h.blocks[cols[1]];
    if (series.size() + 1 != h.times.size()) bad("key '" + cols[1] + "' repeated or missing at t = " + cols[0]);
    series.push_back(std::move(b));
  }
  require(header && !h.times.empty(), ErrorKind::Parse, "history: no data rows");
  for (const auto& [key, series] : h.blocks)
    require(series.size() == h.times.size(), ErrorKind::Parse, "history: key '" + key + "' has missing times");
  return h;
}

void run_simulate(const ExperimentConfig& c, OutputDir& out, RunContext& ctx) {
  const Params P(c.params);
  P.allow_only(kSimKeys, c.kind);
  const SimSetup s = read_setup(c, P);
  const SimOutput o = simulate_recorded(s, out, ctx);
  out.write("run.json", run_json(c, s, o, ctx).dump(2) + "\n");
}

void run_duhamel_check(const ExperimentConfig& c, OutputDir& out, RunContext& ctx) {
  const Params P(c.params);
  P.allow_only(kSimKeys, c.kind);
  const SimSetup s = read_setup(c, P);
  const double ratio_tol = P.number("ratio_tol", 0.30);
  const long steps = std::lround(s.cfg.t_end / s.cfg.dt);
  require(steps / s.cfg.snapshot_stride >= 4, ErrorKind::Config,
          "duhamel-check needs at least 5 stored snapshots (t_end / (dt snapshot_stride) >= 4)");
  const SimOutput o = simulate_recorded(s, out, ctx);
  nlohmann::ordered_json j = run_json(c, s, o, ctx);

  const int n = static_cast<int>(o.run.traj.states.size());
  require(n >= 5, ErrorKind::Precondition, "duhamel-check stored only " + std::to_string(n) + " snapshots");
  // Same centers for both strides so the ratio compares like with like.
  const ResidualReport r1 = high_freq_residuals(o.run.traj, s.lp, s.laws, 1, s.cfg.dealias, s.cfg.nonlinear, 2, n - 3);
  const ResidualReport r2 = high_freq_residuals(o.run.traj, s.lp, s.laws, 2, s.cfg.dealias, s.cfg.nonlinear, 2, n - 3);
  nlohmann::ordered_json res;
  res["anchor"] = "centered differences are second order: residual(2h) / residual(h) = 4";
  res["spacing"] = r1.spacing;
  res["centers"] = r1.centers.size();
  res["expected_ratio"] = 4.0;
  res["ratio_tolerance"] = ratio_tol;
  auto eq = [&](const char* name, double a, double b) {
    const double ratio = b / a;
    const bool ok = std::isfinite(ratio) && std::abs(ratio / 4.0 - 1.0) <= ratio_tol;
    res[name] = {{"stride_1", a}, {"stride_2", b}, {"ratio", ratio}, {"passed", ok}};
    ctx.gate(std::string("residual ratio ") + name, ok, fmt(b) + " / " + fmt(a) + " = " + fmt(ratio));
  };
  eq("a_equation", r1.a_equation, r2.a_equation);
  eq("w_equation", r1.w_equation, r2.w_equation);
  eq("pu_equation", r1.pu_equation, r2.pu_equation);
  j["residual_convergence"] = res;
  out.write("run.json", j.dump(2) + "\n");
}

void run_decay_report(const ExperimentConfig& c, OutputDir& out, RunContext& ctx) {
  const Params P(c.params);
  P.allow_only({"input", "dp_epsilon", "s_points", "epsilon_zero"}, c.kind);
  const std::string input = P.string("input", "");
  require(!input.empty(), ErrorKind::Config, "params.input: path to a simulate or duhamel-check output directory");
  const std::filesystem::path dir(input);
  for (const char* f : {"manifest.json", "history.csv"})
    require(std::filesystem::exists(dir / f), ErrorKind::Config, "params.input: '" + (dir / f).string() + "' does not exist");
  const Manifest m = read_manifest(dir / "manifest.json");
  require(m.kind == "simulate" || m.kind == "duhamel-check", ErrorKind::Config,
          "params.input: manifest kind '" + m.kind + "' is not simulate or duhamel-check");
  const auto changed = verify_manifest(dir);
  require(changed.empty(), ErrorKind::Input, "params.input: '" + (changed.empty() ? "" : changed.front()) + "' does not match its manifest hash");

  const NormHistory h = read_history_csv(read_file(dir / "history.csv"));
  DpOptions dp;
  dp.epsilon = P.number("dp_epsilon", dp.epsilon);
  dp.s_points = static_cast<int>(P.integer("s_points", dp.s_points));
  dp.epsilon_zero = P.boolean("epsilon_zero", false);
  const FunctionalReport e = e_p_functional(h);
  const FunctionalReport d = d_p_functional(h, dp);

  nlohmann::ordered_json j;
  j["kind"] = c.kind;
  j["input_manifest_sha256"] = sha256_hex(read_file(dir / "manifest.json"));
  j["input_seed"] = m.seed;
  j["snapshots"] = h.size();
  j["t_final"] = h.times.back();
  j["p"] = h.p;
  j["E_p"] = functional_json(e);
  j["D_p"] = functional_json(d);
  bool finite = std::isfinite(e.total) && std::isfinite(d.total);
  for (const auto* r : {&e, &d})
    for (const auto& t : r->terms) finite = finite && std::isfinite(t.value);
  if (std::filesystem::exists(dir / "initial_state.bmhd")) {
    const SmallnessReport sm = smallness_report(load_state((dir / "initial_state.bmhd").string()), h.p, h.ladder);
    j["E_p0"] = sm.e_p0;
    j["D_p0"] = sm.d_p0;
    j["E_p_over_E_p0"] = e.total / sm.e_p0;
  }
  j["all_summands_finite"] = finite;
  out.write("report.json", j.dump(2) + "\n");
  ctx.say("decay-report: E_p = " + fmt(e.total) + ", D_p = " + fmt(d.total));
  require(finite, ErrorKind::Numeric, "E_p or D_p has a non-finite summand");
}

}  // namespace bmhd::cli
