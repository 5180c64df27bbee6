#include "bmhd/besov/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bmhd/common/error.hpp"
#include "bmhd/common/quadrature.hpp"
#include "bmhd/simd/kernels.hpp"
#include "bmhd/spectral/operators.hpp"

namespace bmhd {

BesovIndex BesovIndex::make(double s, double p, double r) {
  require(std::isfinite(s), ErrorKind::Domain, "Besov regularity must be finite");
  require(p >= 1.0 && r >= 1.0, ErrorKind::Domain, "Besov indices need p, r >= 1");
  return BesovIndex{s, p, r};
}

Part parse_part(const std::string& tag) {
  if (tag == "full") return Part::Full;
  if (tag == "low") return Part::Low;
  if (tag == "high") return Part::High;
  fail(ErrorKind::Input, "unknown part tag '" + tag + "' (expected low, high or full)");
}

std::string to_string(Part part) {
  switch (part) {
    case Part::Low: return "low";
    case Part::High: return "high";
    default: return "full";
  }
}

double BlockNorms::at(int k) const {
  if (k < k_min || k > k_max()) return 0.0;
  return v[static_cast<std::size_t>(k - k_min)];
}

SpectralField dyadic_block(const SpectralField& f, int k, const DyadicLadder&) {
  SpectralField out(f.grid);
  simd::kernels().mul_real(out.c.data(), f.c.data(), block_weights(f.grid, k).data(), f.size());
  return out;
}

namespace {

double block_l2(const std::vector<const SpectralField*>& comps, int k) {
  const Grid& g = comps.front()->grid;
  const RVec& w = block_weights(g, k);
  RVec w2(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) w2[i] = w[i] * w[i];
  double s = 0.0;
  for (auto* c : comps) s += simd::kernels().weighted_norm2(c->c.data(), w2.data(), c->size());
  return std::sqrt(s * g.volume());
}

BlockNorms blocks_of(const std::vector<const SpectralField*>& comps, double p, const DyadicLadder& ladder) {
  require(!comps.empty(), ErrorKind::Dimension, "block norms of an empty field");
  require(p >= 1.0, ErrorKind::Domain, "block norms need p >= 1");
  const Grid& g = comps.front()->grid;
  for (auto* c : comps) require(c->grid == g, ErrorKind::Dimension, "block norms: grid mismatch");
  BlockNorms out;
  out.k_min = ladder.k_min;
  out.v.assign(static_cast<std::size_t>(ladder.count()), 0.0);
  for (auto* c : comps)
    if (c->c[0] != cplx(0.0)) out.zero_mode_dropped = true;
  for (int k = ladder.k_min; k <= ladder.k_max; ++k) {
    const double l2 = block_l2(comps, k);
    double val = l2;
    if (p != 2.0 && l2 > 0.0) {
      std::vector<SpectralField> blocks;
      blocks.reserve(comps.size());
      for (auto* c : comps) blocks.push_back(dyadic_block(*c, k, ladder));
      std::vector<const SpectralField*> ptrs;
      for (auto& b : blocks) ptrs.push_back(&b);
      val = lp_norm(inverse_transform_many(ptrs), p);
    }
    out.v[static_cast<std::size_t>(k - ladder.k_min)] = val;
  }
  return out;
}

}  // namespace

BlockNorms block_norms(const SpectralField& f, double p, const DyadicLadder& ladder) {
  return blocks_of({&f}, p, ladder);
}

BlockNorms block_norms(const VectorField& v, double p, const DyadicLadder& ladder) {
  std::vector<const SpectralField*> ptrs;
  for (const auto& c : v) ptrs.push_back(&c);
  return blocks_of(ptrs, p, ladder);
}

std::pair<int, int> part_range(Part part, const DyadicLadder& ladder, int k_lo, int k_hi) {
  switch (part) {
    case Part::Low: return {k_lo, std::min(k_hi, ladder.k0)};
    case Part::High: return {std::max(k_lo, ladder.high_start()), k_hi};
    default: return {k_lo, k_hi};
  }
}

double assemble(const BlockNorms& b, double s, double r, Part part, const DyadicLadder& ladder) {
  require(r >= 1.0, ErrorKind::Domain, "summation index r must be >= 1");
  const auto [lo, hi] = part_range(part, ladder, b.k_min, b.k_max());
  double acc = 0.0;
  for (int k = lo; k <= hi; ++k) {
    const double term = std::exp2(k * s) * b.at(k);
    if (std::isinf(r)) acc = std::max(acc, term);
    else acc += std::pow(term, r);
  }
  return std::isinf(r) ? acc : std::pow(acc, 1.0 / r);
}

double besov_norm(const SpectralField& f, const BesovIndex& idx, const DyadicLadder& ladder) {
  return assemble(block_norms(f, idx.p, ladder), idx.s, idx.r, Part::Full, ladder);
}

double besov_norm(const VectorField& v, const BesovIndex& idx, const DyadicLadder& ladder) {
  return assemble(block_norms(v, idx.p, ladder), idx.s, idx.r, Part::Full, ladder);
}

namespace {
void check_hybrid_r(double r) {
  require(r == 1.0 || std::isinf(r), ErrorKind::Precondition, "hybrid norms use r = 1 or r = inf");
}
}  // namespace

double hybrid_norm(const SpectralField& f, const BesovIndex& idx, const DyadicLadder& ladder, Part part) {
  check_hybrid_r(idx.r);
  return assemble(block_norms(f, idx.p, ladder), idx.s, idx.r, part, ladder);
}

double hybrid_norm(const VectorField& v, const BesovIndex& idx, const DyadicLadder& ladder, Part part) {
  check_hybrid_r(idx.r);
  return assemble(block_norms(v, idx.p, ladder), idx.s, idx.r, part, ladder);
}

double hybrid_norm(const SpectralField& f, const BesovIndex& idx, const DyadicLadder& ladder,
                   const std::string& part) {
  return hybrid_norm(f, idx, ladder, parse_part(part));
}

double time_norm(const std::vector<double>& t, const std::vector<double>& g, double theta) {
  require(t.size() == g.size() && !t.empty(), ErrorKind::Input, "time norm: sample count mismatch");
  require(theta >= 1.0, ErrorKind::Domain, "time exponent theta must be >= 1");
  if (std::isinf(theta)) return *std::max_element(g.begin(), g.end());
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    acc += 0.5 * (t[i] - t[i - 1]) * (std::pow(g[i], theta) + std::pow(g[i - 1], theta));
  return std::pow(acc, 1.0 / theta);
}

namespace {
void check_history(const BlockHistory& h) {
  require(!h.times.empty() && h.times.size() == h.blocks.size(), ErrorKind::Input,
          "block history needs one block sequence per time");
  for (std::size_t i = 1; i < h.times.size(); ++i)
    require(h.times[i] > h.times[i - 1], ErrorKind::Input, "trajectory times must be strictly increasing");
}
}  // namespace

double chemin_lerner_norm(const BlockHistory& h, double theta, double s, double r, Part part,
                          const DyadicLadder& ladder) {
  check_history(h);
  require(theta >= 1.0, ErrorKind::Domain, "time exponent theta must be >= 1");
  int k_lo = h.blocks.front().k_min, k_hi = h.blocks.front().k_max();
  for (const auto& b : h.blocks) {
    k_lo = std::min(k_lo, b.k_min);
    k_hi = std::max(k_hi, b.k_max());
  }
  BlockNorms per;
  per.k_min = k_lo;
  per.v.assign(static_cast<std::size_t>(k_hi - k_lo + 1), 0.0);
  std::vector<double> g(h.times.size());
  for (int k = k_lo; k <= k_hi; ++k) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = h.blocks[i].at(k);
    per.v[static_cast<std::size_t>(k - k_lo)] = time_norm(h.times, g, theta);
  }
  return assemble(per, s, r, part, ladder);
}

double chemin_lerner_norm(const std::vector<std::pair<double, SpectralField>>& traj, double theta,
                          const BesovIndex& idx, const DyadicLadder& ladder, Part part) {
  BlockHistory h;
  for (const auto& [t, f] : traj) {
    h.times.push_back(t);
    h.blocks.push_back(block_norms(f, idx.p, ladder));
  }
  return chemin_lerner_norm(h, theta, idx.s, idx.r, part, ladder);
}

double lebesgue_besov_norm(const BlockHistory& h, double theta, double s, double r, Part part,
                           const DyadicLadder& ladder) {
  check_history(h);
  std::vector<double> g(h.times.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = assemble(h.blocks[i], s, r, part, ladder);
  return time_norm(h.times, g, theta);
}

double sphere_constant(int d) {
  const double pi = std::numbers::pi;
  require(d >= 1 && d <= 3, ErrorKind::Dimension, "sphere constant defined for d <= 3");
  const double area = d == 1 ? 2.0 : d == 2 ? 2.0 * pi : 4.0 * pi;
  return area / std::pow(2.0 * pi, d);
}

RadialSamples radial_nodes(int j_lo, int j_hi, const std::function<int(int)>& nodes_for_octave) {
  RadialSamples s;
  for (int j = j_lo; j <= j_hi; ++j) {
    const int n = std::max(2, nodes_for_octave(j));
    const GaussRule& g = gauss_legendre(n);
    const double a = std::ldexp(1.0, j), b = std::ldexp(1.0, j + 1);
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
      s.rho.push_back(c + h * g.nodes[i]);
      s.weight.push_back(h * g.weights[i]);
    }
  }
  s.density.assign(s.rho.size(), 0.0);
  return s;
}

RadialSamples radial_nodes(int j_lo, int j_hi, int nodes_per_octave) {
  return radial_nodes(j_lo, j_hi, [nodes_per_octave](int) { return nodes_per_octave; });
}

BlockNorms radial_block_norms(const RadialSamples& s, int d, const DyadicLadder& ladder) {
  require(s.rho.size() == s.weight.size() && s.rho.size() == s.density.size(), ErrorKind::Input,
          "radial samples are inconsistent");
  BlockNorms out;
  out.k_min = ladder.k_min;
  out.v.assign(static_cast<std::size_t>(ladder.count()), 0.0);
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    const double e = s.density[i];
    require(std::isfinite(e), ErrorKind::Domain, "radial profile is not finite at rho=" + std::to_string(s.rho[i]));
    if (e == 0.0) continue;
    const double rho = s.rho[i];
    const double base = s.weight[i] * e * std::pow(rho, d - 1);
    const int top = static_cast<int>(std::floor(std::log2(rho)));
    for (int k = top - 2; k <= top + 1; ++k) {
      if (k < ladder.k_min || k > ladder.k_max) continue;
      const double w = DyadicLadder::phi(std::ldexp(rho, -k));
      if (w > 0.0) out.v[static_cast<std::size_t>(k - ladder.k_min)] += w * w * base;
    }
  }
  const double cd = sphere_constant(d);
  for (auto& x : out.v) x = std::sqrt(cd * x);
  return out;
}

BlockNorms radial_quadrature_blocks(const std::vector<std::function<cplx(double)>>& profile, int d,
                                    const DyadicLadder& ladder, int nodes_per_octave) {
  require(nodes_per_octave >= 64, ErrorKind::Precondition, "radial quadrature uses at least 64 nodes per octave");
  RadialSamples s = radial_nodes(ladder.k_min - 1, ladder.k_max + 1, nodes_per_octave);
  for (std::size_t i = 0; i < s.rho.size(); ++i) {
    double e = 0.0;
    for (const auto& p : profile) {
      const cplx v = p(s.rho[i]);
      require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::Domain,
              "radial profile is not finite at rho=" + std::to_string(s.rho[i]));
      e += std::norm(v);
    }
    s.density[i] = e;
  }
  return radial_block_norms(s, d, ladder);
}

double radial_quadrature_norm(const std::vector<std::function<cplx(double)>>& profile, int d,
                              const BesovIndex& idx, const DyadicLadder& ladder, Part part,
                              int nodes_per_octave) {
  require(idx.p == 2.0, ErrorKind::Precondition, "radial quadrature evaluates L^2 blocks only (p = 2)");
  return assemble(radial_quadrature_blocks(profile, d, ladder, nodes_per_octave), idx.s, idx.r, part, ladder);
}

}  // namespace bmhd
