#include "bmhd/linear/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "bmhd/common/error.hpp"
#include "bmhd/common/parallel.hpp"
#include "bmhd/common/quadrature.hpp"
#include "bmhd/linear/semigroup.hpp"

namespace bmhd {

std::vector<std::pair<int, Vec3>> sweep_samples(int dim, int n_dir, int n_mag, double lo, double hi) {
  require(dim == 2 || dim == 3, ErrorKind::Dimension, "sweep needs d in {2, 3}");
  require(n_dir >= 1 && n_mag >= 2, ErrorKind::Domain, "sweep needs at least one direction and two magnitudes");
  require(lo > 0.0 && hi > lo, ErrorKind::Domain, "sweep magnitudes must satisfy 0 < lo < hi");
  std::vector<Vec3> dirs;
  const double pi = std::numbers::pi;
  for (int i = 0; i < n_dir; ++i) {
    if (dim == 2) {
      const double th = 2.0 * pi * (i + 0.5) / n_dir;
      dirs.push_back({std::cos(th), std::sin(th), 0.0});
    } else {
      // Fibonacci sphere
      const double z = 1.0 - 2.0 * (i + 0.5) / n_dir;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ph = pi * (3.0 - std::sqrt(5.0)) * i;
      dirs.push_back({r * std::cos(ph), r * std::sin(ph), z});
    }
  }
  std::vector<std::pair<int, Vec3>> out;
  for (int m = 0; m < n_mag; ++m) {
    const double mag = lo * std::pow(hi / lo, static_cast<double>(m) / (n_mag - 1));
    for (int i = 0; i < n_dir; ++i) out.push_back({i, {mag * dirs[i][0], mag * dirs[i][1], mag * dirs[i][2]}});
  }
  return out;
}

SweepResult eigen_sweep(const std::vector<std::pair<int, Vec3>>& samples, const LinearParams& params) {
  SweepResult res;
  res.rows.resize(samples.size());
  parallel_for(samples.size(), [&](std::size_t n) {
    const Vec3& xi = samples[n].second;
    double r2 = 0.0;
    for (int j = 0; j < params.dim; ++j) r2 += xi[j] * xi[j];
    require(r2 > 0.0, ErrorKind::Domain, "eigen sweep excludes xi = 0");
    const CMat m = mode_matrix(xi, params).m;
    Eigen::ComplexEigenSolver<CMat> es(m, false);
    if (es.info() != Eigen::Success) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "eigen solver did not converge at xi=(%.6g, %.6g, %.6g)", xi[0], xi[1], xi[2]);
      fail(ErrorKind::Numeric, buf);
    }
    SweepRow& row = res.rows[n];
    row.xi_norm = std::sqrt(r2);
    row.direction = samples[n].first;
    row.eta = r2 / (1.0 + r2);
    double mx = -1e300;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      row.eigenvalues.push_back(es.eigenvalues()(i));
      mx = std::max(mx, es.eigenvalues()(i).real());
    }
    std::sort(row.eigenvalues.begin(), row.eigenvalues.end(), [](const std::complex<double>& a, const std::complex<double>& b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    row.margin = mx / row.eta;
  });
  for (const auto& r : res.rows) res.max_margin = std::max(res.max_margin, r.margin);
  res.c = -res.max_margin;
  return res;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  std::size_t m = 0;
  for (const auto& row : r.rows) m = std::max(m, row.eigenvalues.size());
  os << "xi_norm,direction";
  for (std::size_t i = 0; i < m; ++i) os << ",re_lambda_" << i << ",im_lambda_" << i;
  os << ",eta,margin\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (const auto& row : r.rows) {
    put(row.xi_norm);
    os << ',' << row.direction;
    for (std::size_t i = 0; i < m; ++i) {
      os << ',';
      put(i < row.eigenvalues.size() ? row.eigenvalues[i].real() : 0.0);
      os << ',';
      put(i < row.eigenvalues.size() ? row.eigenvalues[i].imag() : 0.0);
    }
    os << ',';
    put(row.eta);
    os << ',';
    put(row.margin);
    os << '\n';
  }
}

// ---- block decay ----------------------------------------------------------

BlockFit block_decay_fit(const StateVector& state0, int k, const std::vector<double>& t_grid,
                         const LinearParams& params) {
  require(t_grid.size() >= 2, ErrorKind::Input, "block decay fit needs at least two times");
  const Grid& g = state0.grid;
  require(params.dim == g.dim, ErrorKind::Dimension, "parameter dimension differs from grid");
  const Geometry& geo = geometry(g);
  const RVec& w = block_weights(g, k);
  const int m = state0.components();
  double total = 0.0;
  for (const auto& f : state0.f)
    for (const auto& c : f.c) total += std::norm(c);
  std::vector<std::size_t> modes;
  double energy = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (w[i] == 0.0) continue;
    double e = 0.0;
    for (int c = 0; c < m; ++c) e += std::norm(state0.f[c].c[i]);
    if (e == 0.0) continue;
    modes.push_back(i);
    energy += w[i] * w[i] * e;
  }
  require(total > 0.0 && energy > 1e-14 * total, ErrorKind::InsufficientSignal,
          "block " + std::to_string(k) + " carries no energy");

  std::vector<double> e_t(t_grid.size(), 0.0);
  std::vector<std::vector<double>> per_mode(modes.size(), std::vector<double>(t_grid.size()));
  parallel_for(modes.size(), [&](std::size_t n) {
    const std::size_t i = modes[n];
    const CMat mm = grid_mode_matrix(geo, i, params);
    CCol u0(m);
    for (int c = 0; c < m; ++c) u0(c) = w[i] * state0.f[c].c[i];
    for (std::size_t j = 0; j < t_grid.size(); ++j)
      per_mode[n][j] = t_grid[j] == 0.0 ? u0.squaredNorm() : (expm(t_grid[j] * mm) * u0).squaredNorm();
  });
  for (const auto& pm : per_mode)
    for (std::size_t j = 0; j < t_grid.size(); ++j) e_t[j] += pm[j];

  BlockFit fit;
  fit.k = k;
  const double vol = g.volume();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(t_grid.size());
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double v = std::sqrt(vol * e_t[j]);
    require(v > 0.0 && std::isfinite(v), ErrorKind::InsufficientSignal, "block norm vanished inside the window");
    fit.norms.push_back(v);
    const double x = t_grid[j], y = std::log(v);
    sx += x, sy += y, sxx += x * x, sxy += x * y, syy += y * y;
  }
  const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  require(vx > 0.0, ErrorKind::Input, "block decay fit needs distinct times");
  const double slope = cxy / vx;
  fit.c = -slope;
  fit.c_scaled = fit.c / std::ldexp(1.0, 2 * k);
  fit.r_squared = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return fit;
}

// ---- whole-space decay curve ------------------------------------------------

CCol RadialData::at(const Vec3& xi, int dim, const Vec3& I) const {
  double r2 = 0.0, ixi = 0.0;
  for (int j = 0; j < dim; ++j) {
    r2 += xi[j] * xi[j];
    ixi += xi[j] * I[j];
  }
  const double rho = std::sqrt(r2);
  CCol u = CCol::Zero(1 + 2 * dim);
  if (rho == 0.0) return u;
  const std::complex<double> i(0.0, 1.0);
  const double av = a ? a(rho) : 0.0, vv = v ? v(rho) : 0.0, wv = w ? w(rho) : 0.0, hv = h ? h(rho) : 0.0;
  u(0) = av;
  for (int j = 0; j < dim; ++j) {
    const double hat = xi[j] / rho;
    const double pI = I[j] - hat * ixi / rho;
    u(1 + j) = -i * hat * vv + pI * wv;
    u(1 + dim + j) = pI * hv;
  }
  return u;
}

std::string series_name_low(double s) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "low_B^%g_2,1", s);
  return buf;
}

namespace {

int node_count(int minimum, double per_radian, double phase) {
  const double n = 32.0 + per_radian * phase;
  return std::clamp(static_cast<int>(std::ceil(n)), minimum, 4096);
}

Vec3 perpendicular(const Vec3& I, int dim) {
  if (dim == 2) return {-I[1], I[0], 0.0};
  // any unit vector orthogonal to I
  Vec3 e = std::abs(I[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const double dot = e[0] * I[0] + e[1] * I[1] + e[2] * I[2];
  for (int j = 0; j < 3; ++j) e[j] -= dot * I[j];
  const double n = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
  for (int j = 0; j < 3; ++j) e[j] /= n;
  return e;
}

// Angular mean of |G(t)U0|^2 at radius rho: nodes as (cos, sin, weight).
double angular_energy(const RadialData& u0, double rho, double t, const LinearParams& p, const Vec3& axis,
                      const Vec3& e, const std::vector<std::array<double, 3>>& nodes) {
  double acc = 0.0;
  for (const auto& nd : nodes) {
    Vec3 xi{0.0, 0.0, 0.0};
    for (int j = 0; j < p.dim; ++j) xi[j] = rho * (nd[0] * axis[j] + nd[1] * e[j]);
    const CCol v0 = u0.at(xi, p.dim, p.I);
    if (v0.squaredNorm() == 0.0) continue;
    const CCol v = t == 0.0 ? v0 : CCol(expm(t * mode_matrix(xi, p).m) * v0);
    acc += nd[2] * v.squaredNorm();
  }
  return acc;
}

std::vector<std::array<double, 3>> angular_nodes(int dim, int n) {
  std::vector<std::array<double, 3>> out;
  if (dim == 2) {
    const double pi = std::numbers::pi;
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * pi * (i + 0.5) / n;
      out.push_back({std::cos(th), std::sin(th), 1.0 / n});
    }
  } else {
    const GaussRule& g = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
      const double mu = g.nodes[i];
      out.push_back({mu, std::sqrt(std::max(0.0, 1.0 - mu * mu)), 0.5 * g.weights[i]});
    }
  }
  return out;
}

}  // namespace

BlockNorms radial_semigroup_blocks(const RadialData& u0, double t, const LinearParams& p, const DyadicLadder& ladder,
                                   const DecayCurveOptions& opts) {
  require(t >= 0.0, ErrorKind::Domain, "propagation time must be nonnegative");
  // axisymmetric about I; any axis works when I = 0
  const bool field = p.field_norm() > 0.0;
  const Vec3 axis = field ? p.I : (p.dim == 2 ? Vec3{1, 0, 0} : Vec3{0, 0, 1});
  const Vec3 e = perpendicular(axis, p.dim);
  const double speed = std::sqrt(1.0 + p.field_norm() * p.field_norm());
  const auto probe_nodes = angular_nodes(p.dim, p.dim == 2 ? 8 : 6);
  RadialSamples all;
  double max_seen = 0.0;
  for (int j = ladder.k_min - 1; j <= ladder.k_max + 1; ++j) {
    const double lo = std::ldexp(1.0, j), hi = 2.0 * lo;
    // coarse probe at the octave's lower edge, where damping is weakest
    const double probe = angular_energy(u0, lo, t, p, axis, e, probe_nodes);
    if (max_seen > 0.0 && probe < opts.negligible * max_seen) continue;
    const int nr = node_count(opts.radial_min_nodes, opts.nodes_per_radian, 2.0 * speed * (hi - lo) * t);
    const int na = node_count(opts.angular_min_nodes, opts.nodes_per_radian, speed * hi * t);
    const auto ang = angular_nodes(p.dim, na);
    RadialSamples oct = radial_nodes(j, j, nr);
    parallel_for(oct.rho.size(), [&](std::size_t i) { oct.density[i] = angular_energy(u0, oct.rho[i], t, p, axis, e, ang); });
    for (std::size_t i = 0; i < oct.rho.size(); ++i) {
      require(std::isfinite(oct.density[i]), ErrorKind::Numeric, "propagated radial density is not finite");
      max_seen = std::max(max_seen, oct.density[i]);
      all.rho.push_back(oct.rho[i]);
      all.weight.push_back(oct.weight[i]);
      all.density.push_back(oct.density[i]);
    }
  }
  return radial_block_norms(all, p.dim, ladder);
}

DecayTrace linear_decay_curve(const RadialData& u0, const std::vector<double>& s_values, double p_target,
                              const std::vector<double>& t_grid, const LinearParams& params, int k0,
                              const DecayCurveOptions& opts) {
  const int d = params.dim;
  const double s0 = 2.0 * d / p_target - 0.5 * d;
  for (double s : s_values)
    require(s + s0 > 0.0, ErrorKind::Precondition, "decay curve needs s + s0 > 0");
  require(!t_grid.empty(), ErrorKind::Input, "decay curve needs sample times");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    require(t_grid[i] > t_grid[i - 1], ErrorKind::Input, "sample times must increase");
  DyadicLadder ladder;
  ladder.k_min = opts.k_floor;
  ladder.k_max = k0;
  ladder.k0 = k0;
  ladder.overlap = 1;

  DecayTrace tr;
  tr.dim = d;
  tr.p = p_target;
  tr.times = t_grid;
  std::vector<std::vector<double>> vals(s_values.size(), std::vector<double>(t_grid.size()));
  std::vector<double> sup(t_grid.size());
  for (std::size_t n = 0; n < t_grid.size(); ++n) {
    const BlockNorms b = radial_semigroup_blocks(u0, t_grid[n], params, ladder, opts);
    for (std::size_t i = 0; i < s_values.size(); ++i) vals[i][n] = assemble(b, s_values[i], 1.0, Part::Low, ladder);
    sup[n] = assemble(b, -s0, std::numeric_limits<double>::infinity(), Part::Low, ladder);
  }
  for (std::size_t i = 0; i < s_values.size(); ++i) tr.add(series_name_low(s_values[i]), vals[i]);
  tr.add("low_B^-s0_2,inf", sup);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", s0);
  tr.meta["s0"] = buf;
  tr.meta["k0"] = std::to_string(k0);
  tr.meta["k_floor"] = std::to_string(opts.k_floor);
  std::snprintf(buf, sizeof buf, "%g", params.mu_inf);
  tr.meta["mu_inf"] = buf;
  tr.meta["source"] = "radial quadrature";
  return tr;
}

}  // namespace bmhd
