#include "bmhd/decay/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "bmhd/common/error.hpp"
#include "bmhd/spectral/operators.hpp"

namespace bmhd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}
}  // namespace

void check_admissible(double p, int d) {
  require(d >= 2, ErrorKind::Dimension, "admissibility needs d >= 2");
  require(p >= 2.0, ErrorKind::Precondition, "p is not admissible: 2 <= p violated (p = " + num(p) + ")");
  const double cap = d == 2 ? 4.0 : std::min(4.0, 2.0 * d / (d - 2.0));
  require(p <= cap, ErrorKind::Precondition,
          "p is not admissible: p <= min(4, 2d/(d-2)) violated (p = " + num(p) + ", d = " + std::to_string(d) + ")");
  require(!(d == 2 && p == 4.0), ErrorKind::Precondition, "p is not admissible: p != 4 if d = 2 violated");
}

// ---- rate fitting -----------------------------------------------------------

double torus_horizon(const DecayTrace& trace) {
  if (!std::isfinite(trace.torus_length)) return kInf;
  const double m = trace.torus_length / (2.0 * std::numbers::pi);
  return m * m / 4.0;
}

RateFit fit_rate(const DecayTrace& trace, const std::string& series, double t_lo, double t_hi, const FitOptions& opts) {
  require(t_lo < t_hi, ErrorKind::Window, "fit window needs t_lo < t_hi");
  const std::vector<double>& v = trace.get(series);
  RateFit fit;
  const double horizon = torus_horizon(trace);
  if (t_hi > horizon) {
    require(opts.auto_trim, ErrorKind::Window,
            "fit window ends at t = " + num(t_hi) + ", beyond the torus horizon (L/2pi)^2/4 = " + num(horizon));
    t_hi = horizon;
    fit.trimmed = true;
    require(t_lo < t_hi, ErrorKind::Window, "fit window lies entirely beyond the torus horizon " + num(horizon));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  double lo = kInf, hi = -kInf;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < t_lo || t > t_hi) continue;
    require(v[i] > 0.0, ErrorKind::Domain, "series '" + series + "' has a nonpositive value at t = " + num(t));
    const double x = std::log(japanese(t)), y = std::log(v[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y, syy += y * y;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
    ++n;
  }
  require(n >= opts.min_samples, ErrorKind::Window,
          "fit window holds " + std::to_string(n) + " samples, at least " + std::to_string(opts.min_samples) + " needed");
  const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  require(vx > 0.0, ErrorKind::Window, "fit window has no spread in <t>");
  fit.exponent = cxy / vx;
  fit.intercept = (sy - fit.exponent * sx) / n;
  fit.r_squared = vy > 0.0 ? std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0) : 1.0;
  fit.t_lo = lo;
  fit.t_hi = hi;
  fit.samples = n;
  require(fit.r_squared >= opts.min_r_squared, ErrorKind::PoorFit,
          "log-log fit of '" + series + "' has r^2 = " + num(fit.r_squared) + " < " + num(opts.min_r_squared));
  return fit;
}

// ---- predicted exponents -------------------------------------------------------

double predicted_rate(double p, int d, double s, Quantity q) {
  check_admissible(p, d);
  const double s0 = 2.0 * d / p - 0.5 * d;
  require(s > -s0, ErrorKind::Precondition, "rate law needs -s0 < s (s0 = " + num(s0) + ")");
  const double top = q == Quantity::Density ? d / p : d / p - 1.0;
  require(s <= top + 1e-15, ErrorKind::Precondition,
          std::string("rate law needs s <= ") + (q == Quantity::Density ? "d/p" : "d/p - 1") + " = " + num(top));
  return -(s0 + s) / 2.0;
}

double predicted_rate_lr(double p, int d, double r, double l) {
  check_admissible(p, d);
  require(p == 2.0, ErrorKind::Precondition, "the L^r rate law is stated for p = 2");
  require(r >= 2.0, ErrorKind::Precondition, "the L^r rate law needs 2 <= r <= inf");
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  const double shift = l + d * (0.5 - inv_r);
  require(shift > -0.5 * d, ErrorKind::Precondition, "the L^r rate law needs -d/2 < l + d(1/2 - 1/r)");
  require(shift <= 0.5 * d - 1.0 + 1e-15, ErrorKind::Precondition, "the L^r rate law needs l + d(1/2 - 1/r) <= d/2 - 1");
  return -0.5 * d * (1.0 - inv_r) - 0.5 * l;
}

// ---- norm histories -----------------------------------------------------------

NormHistory make_history(double p, int dim, const DyadicLadder& ladder) {
  check_admissible(p, dim);
  NormHistory h;
  h.p = p;
  h.dim = dim;
  h.ladder = ladder;
  return h;
}

void NormHistory::append(double t, const StateVector& s) {
  require(s.dim() == dim, ErrorKind::Dimension, "history dimension differs from state");
  require(times.empty() || t > times.back(), ErrorKind::Input, "history times must increase");
  times.push_back(t);
  const VectorField u = s.velocity(), H = s.magnetic();
  blocks["a|2"].push_back(block_norms(s.a(), 2.0, ladder));
  blocks["u|2"].push_back(block_norms(u, 2.0, ladder));
  blocks["H|2"].push_back(block_norms(H, 2.0, ladder));
  blocks["a|p"].push_back(block_norms(s.a(), p, ladder));
  blocks["u|p"].push_back(block_norms(u, p, ladder));
  blocks["H|p"].push_back(block_norms(H, p, ladder));
  blocks["grad_a|p"].push_back(block_norms(gradient(s.a()), p, ladder));
  VectorField gu, gh;
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) {
      gu.push_back(derivative(s.u(i), k));
      gh.push_back(derivative(s.H(i), k));
    }
  blocks["grad_u|p"].push_back(block_norms(gu, p, ladder));
  blocks["grad_H|p"].push_back(block_norms(gh, p, ladder));
}

BlockHistory NormHistory::history(const std::string& key, std::size_t upto) const {
  const auto it = blocks.find(key);
  require(it != blocks.end(), ErrorKind::Input, "history has no entry '" + key + "'");
  const std::size_t n = std::min(upto, times.size());
  BlockHistory b;
  b.times.assign(times.begin(), times.begin() + n);
  b.blocks.assign(it->second.begin(), it->second.begin() + n);
  return b;
}

namespace {

// time-weighted copy: b_k(t) * weight(t)
BlockHistory weighted(BlockHistory h, const std::function<double(double)>& w) {
  for (std::size_t i = 0; i < h.times.size(); ++i) {
    const double f = w(h.times[i]);
    for (auto& x : h.blocks[i].v) x *= f;
  }
  return h;
}

double cl(const NormHistory& h, const std::string& key, std::size_t upto, double theta, double s, Part part) {
  return chemin_lerner_norm(h.history(key, upto), theta, s, 1.0, part, h.ladder);
}

}  // namespace

FunctionalReport e_p_functional(const NormHistory& h, std::size_t upto) {
  require(h.size() > 0, ErrorKind::Input, "E_p needs a nonempty trajectory");
  check_admissible(h.p, h.dim);
  const double d = h.dim, p = h.p;
  FunctionalReport r;
  auto tuple = [&](std::initializer_list<const char*> keys, double theta, double s, Part part) {
    double acc = 0.0;
    for (const char* k : keys) acc += cl(h, k, upto, theta, s, part);
    return acc;
  };
  r.terms.push_back({"low_Linf_B^{d/2-1}_{2,1}(a,u,H)", "||(a,u,H)||^l_{L~inf(B^{d/2-1}_{2,1})}",
                     tuple({"a|2", "u|2", "H|2"}, kInf, d / 2 - 1, Part::Low)});
  r.terms.push_back({"low_L1_B^{d/2+1}_{2,1}(a,u,H)", "||(a,u,H)||^l_{L1(B^{d/2+1}_{2,1})}",
                     tuple({"a|2", "u|2", "H|2"}, 1.0, d / 2 + 1, Part::Low)});
  r.terms.push_back({"high_Linf_B^{d/p}_{p,1}(a)", "||a||^h_{L~inf(B^{d/p}_{p,1})}", tuple({"a|p"}, kInf, d / p, Part::High)});
  r.terms.push_back({"high_L1_B^{d/p}_{p,1}(a)", "||a||^h_{L1(B^{d/p}_{p,1})}", tuple({"a|p"}, 1.0, d / p, Part::High)});
  r.terms.push_back({"high_Linf_B^{d/p-1}_{p,1}(u,H)", "||(u,H)||^h_{L~inf(B^{d/p-1}_{p,1})}",
                     tuple({"u|p", "H|p"}, kInf, d / p - 1, Part::High)});
  r.terms.push_back({"high_L1_B^{d/p+1}_{p,1}(u,H)", "||(u,H)||^h_{L1(B^{d/p+1}_{p,1})}",
                     tuple({"u|p", "H|p"}, 1.0, d / p + 1, Part::High)});
  for (const auto& t : r.terms) r.total += t.value;
  return r;
}

FunctionalReport d_p_functional(const NormHistory& h, const DpOptions& opts, std::size_t upto) {
  require(h.size() > 0, ErrorKind::Input, "D_p needs a nonempty trajectory");
  check_admissible(h.p, h.dim);
  require(opts.s_points >= 17, ErrorKind::Precondition, "the s-supremum needs at least 17 grid points");
  const double d = h.dim, p = h.p;
  const double s0 = 2.0 * d / p - d / 2.0;
  const double eps = opts.epsilon_zero ? 0.0 : opts.epsilon;
  if (!opts.epsilon_zero)
    require(eps > 0.0 && eps < 0.5, ErrorKind::Precondition, "epsilon must lie in (0, 1/2)");
  const double alpha = d / p + 0.5 - eps;
  const double s_lo = opts.epsilon_zero ? -s0 : eps - s0, s_hi = d / 2 + 1;

  FunctionalReport r;
  // first term: sup over s of the low L^inf_t(B^s_{2,1}) norm weighted by <t>^{(s0+s)/2}
  double best = 0.0, best_s = s_lo;
  for (int i = 0; i < opts.s_points; ++i) {
    const double s = s_lo + (s_hi - s_lo) * i / (opts.s_points - 1);
    const auto w = [&](double t) { return std::pow(japanese(t), 0.5 * (s0 + s)); };
    double v = 0.0;
    for (const char* key : {"a|2", "u|2", "H|2"}) {
      const BlockHistory bh = weighted(h.history(key, upto), w);
      v += opts.epsilon_zero ? chemin_lerner_norm(bh, kInf, s, 1.0, Part::Low, h.ladder)
                             : lebesgue_besov_norm(bh, kInf, s, 1.0, Part::Low, h.ladder);
    }
    if (v > best) best = v, best_s = s;
  }
  r.terms.push_back({"sup_s <t>^{(s0+s)/2} low_B^s_{2,1}(a,u,H) [s*=" + num(best_s) + "]",
                     "sup_{s in [eps-s0, d/2+1]} ||<tau>^{(s0+s)/2}(a,u,H)||^l_{L^inf_t(B^s_{2,1})}", best});
  double v2 = 0.0;
  for (const char* key : {"grad_a|p", "u|p", "H|p"})
    v2 += chemin_lerner_norm(weighted(h.history(key, upto), [&](double t) { return std::pow(japanese(t), alpha); }), kInf,
                             d / p - 1, 1.0, Part::High, h.ladder);
  r.terms.push_back({"<t>^alpha high_B^{d/p-1}_{p,1}(grad a,u,H) [alpha=" + num(alpha) + "]",
                     "||<tau>^alpha (grad a,u,H)||^h_{L~inf_t(B^{d/p-1}_{p,1})}, alpha = d/p + 1/2 - eps", v2});
  double v3 = 0.0;
  for (const char* key : {"grad_u|p", "grad_H|p"})
    v3 += chemin_lerner_norm(weighted(h.history(key, upto), [](double t) { return t; }), kInf, d / p, 1.0, Part::High,
                             h.ladder);
  r.terms.push_back({"t high_B^{d/p}_{p,1}(grad u, grad H)", "||tau grad(u,H)||^h_{L~inf_t(B^{d/p}_{p,1})}", v3});
  for (const auto& t : r.terms) r.total += t.value;
  return r;
}

std::vector<double> d_p_running(const NormHistory& h, const DpOptions& opts) {
  std::vector<double> out;
  for (std::size_t n = 1; n <= h.size(); ++n) out.push_back(d_p_functional(h, opts, n).total);
  return out;
}

std::vector<double> e_p_running(const NormHistory& h) {
  std::vector<double> out;
  for (std::size_t n = 1; n <= h.size(); ++n) out.push_back(e_p_functional(h, n).total);
  return out;
}

SmallnessReport smallness_report(const StateVector& s0, double p, const DyadicLadder& ladder, double e_thr,
                                 double d_thr) {
  const int d = s0.dim();
  check_admissible(p, d);
  const double defect = divergence_defect(s0.magnetic());
  require(defect <= 1e-10, ErrorKind::Precondition, "initial magnetic field is not divergence free (defect " + num(defect) + ")");
  const VectorField u = s0.velocity(), H = s0.magnetic();
  const double sd = 2.0 * d / p - d / 2.0;
  SmallnessReport r;
  auto low2 = [&](double s, double rr) {
    return assemble(block_norms(s0.a(), 2.0, ladder), s, rr, Part::Low, ladder) +
           assemble(block_norms(u, 2.0, ladder), s, rr, Part::Low, ladder) +
           assemble(block_norms(H, 2.0, ladder), s, rr, Part::Low, ladder);
  };
  const double t1 = low2(d / 2.0 - 1.0, 1.0);
  const double t2 = assemble(block_norms(s0.a(), p, ladder), d / p, 1.0, Part::High, ladder);
  const double t3 = assemble(block_norms(u, p, ladder), d / p - 1, 1.0, Part::High, ladder) +
                    assemble(block_norms(H, p, ladder), d / p - 1, 1.0, Part::High, ladder);
  r.terms.push_back({"low_B^{d/2-1}_{2,1}(a0,u0,H0)", "||(a0,u0,H0)||^l_{B^{d/2-1}_{2,1}}", t1});
  r.terms.push_back({"high_B^{d/p}_{p,1}(a0)", "||a0||^h_{B^{d/p}_{p,1}}", t2});
  r.terms.push_back({"high_B^{d/p-1}_{p,1}(u0,H0)", "||(u0,H0)||^h_{B^{d/p-1}_{p,1}}", t3});
  r.e_p0 = t1 + t2 + t3;
  r.d_p0 = low2(-sd, kInf);
  r.terms.push_back({"D_p0", "||(a0,u0,H0)||^l_{B^{-s0}_{2,inf}}, s0 = 2d/p - d/2", r.d_p0});
  r.e_threshold = e_thr;
  r.d_threshold = d_thr;
  r.e_small = r.e_p0 <= e_thr;
  r.d_small = r.d_p0 <= d_thr;
  return r;
}

}  // namespace bmhd
