#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <sstream>

#include "bmhd/common/error.hpp"
#include "bmhd/common/quadrature.hpp"
#include "bmhd/harness/harness.hpp"
#include "bmhd/harness/line_quadrature.hpp"
#include "bmhd/spectral/operators.hpp"

namespace bmhd::harness {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Components of D^k f: f, its gradient, or its Hessian.
std::vector<SpectralField> derivatives(const SpectralField& f, int k) {
  require(k >= 0 && k <= 2, ErrorKind::Domain, "Bernstein: derivative order must be 0, 1 or 2");
  if (k == 0) return {f};
  VectorField g = gradient(f);
  if (k == 1) return g;
  std::vector<SpectralField> h;
  for (const auto& gi : g)
    for (int j = 0; j < f.grid.dim; ++j) h.push_back(derivative(gi, j));
  return h;
}

double lp_of(const std::vector<SpectralField>& comps, double p) {
  std::vector<const SpectralField*> ptr;
  for (const auto& c : comps) ptr.push_back(&c);
  return lp_norm(inverse_transform_many(ptr), p);
}

PhysicalField pointwise_product(const PhysicalField& a, const PhysicalField& b) {
  PhysicalField out(a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

// ---- Bernstein ---------------------------------------------------------------

double bernstein_quotient(const SpectralField& f, double a, double b, int k, double lambda) {
  require(a >= 1.0 && b >= 1.0, ErrorKind::Domain, "Bernstein: Lebesgue exponents must be >= 1");
  require(lambda > 0.0, ErrorKind::Domain, "Bernstein: lambda must be positive");
  const int d = f.grid.dim;
  const double lhs = lp_of(derivatives(f, k), b);
  const double rhs = std::pow(lambda, k + d * (inv(a) - inv(b))) * lp_norm(f, a);
  return lhs / rhs;
}

double bernstein_ratio(const SpectralField& f, double a, double b, int k, double lambda) {
  require(a <= b, ErrorKind::Precondition,
          "Bernstein: (a, b) = (" + num(a) + ", " + num(b) + ") needs a <= b");
  return bernstein_quotient(f, a, b, k, lambda);
}

// ---- products ----------------------------------------------------------------

double product_exponent(double sigma1, double sigma2, double p1, double p2, int d) {
  require(sigma1 + sigma2 > 0.0, ErrorKind::Config, "product law: needs sigma1 + sigma2 > 0");
  require(sigma1 <= d / p1, ErrorKind::Config, "product law: needs sigma1 <= d/p1");
  require(sigma2 <= d / p2, ErrorKind::Config, "product law: needs sigma2 <= d/p2");
  require(sigma1 >= sigma2, ErrorKind::Config, "product law: needs sigma1 >= sigma2");
  require(inv(p1) + inv(p2) <= 1.0, ErrorKind::Config, "product law: needs 1/p1 + 1/p2 <= 1");
  const double iq = inv(p1) + inv(p2) - sigma1 / d;
  require(iq >= 0.0 && iq <= 1.0, ErrorKind::Config, "product law: q must lie in [1, inf]");
  return iq == 0.0 ? INFINITY : 1.0 / iq;
}

double negative_product_exponent(double sigma, double p1, double p2, int d) {
  require(sigma > 0.0, ErrorKind::Config, "negative product law: needs sigma > 0");
  require(d * inv(p1) + d * inv(p2) - d <= sigma, ErrorKind::Config,
          "negative product law: needs d/p1 + d/p2 - d <= sigma");
  require(sigma <= std::min(d * inv(p1), d * inv(p2)), ErrorKind::Config,
          "negative product law: needs sigma <= min(d/p1, d/p2)");
  const double iq = inv(p1) + inv(p2) - sigma / d;
  require(iq >= 0.0 && iq <= 1.0, ErrorKind::Config, "negative product law: q must lie in [1, inf]");
  return iq == 0.0 ? INFINITY : 1.0 / iq;
}

SpectralField multiply(const SpectralField& f, const SpectralField& g) {
  require(f.grid == g.grid, ErrorKind::Dimension, "multiply: grid mismatch");
  auto x = inverse_transform_many({&f, &g});
  return transform(pointwise_product(x[0], x[1]));
}

SpectralField low_pass(const SpectralField& f, int k) {
  return radial_multiplier(f, [k](double r) { return DyadicLadder::chi(std::ldexp(r, -k)); });
}

double low_high_product_ratio(const SpectralField& f, const SpectralField& g, double p, double sigma, int k0, int n0,
                              bool high_on_f) {
  const int d = f.grid.dim;
  require(p >= 2.0 && p <= 4.0, ErrorKind::Config, "low/high product law: needs 2 <= p <= 4");
  require(sigma > 0.0, ErrorKind::Config, "low/high product law: needs sigma > 0");
  require(n0 >= 0, ErrorKind::Config, "low/high product law: N0 must be a nonnegative integer");
  const double s0 = 2.0 * d / p - 0.5 * d;
  const double pstar = p == 2.0 ? INFINITY : 1.0 / (0.5 - 1.0 / p);
  const DyadicLadder ladder = DyadicLadder::for_grid(f.grid, k0);
  SpectralField F = f, G = g;
  if (high_on_f) F -= low_pass(f, k0);
  else G -= low_pass(g, k0);
  const double lhs = hybrid_norm(multiply(F, G), BesovIndex::make(-s0, 2.0, INFINITY), ladder, Part::Low);
  const double rhs = (besov_norm(F, BesovIndex::make(sigma, p, 1.0), ladder) + lp_norm(low_pass(F, k0 + n0), pstar)) *
                     besov_norm(G, BesovIndex::make(-sigma, p, INFINITY), ladder);
  return lhs / rhs;
}

// ---- composition -------------------------------------------------------------

double composition_ratio(const FluidLaws& laws, Law law, const SpectralField& f, const BesovIndex& idx) {
  const double sup = lp_norm(f, INFINITY);
  require(sup <= 0.5 * (1.0 + 1e-12), ErrorKind::Config,
          "composition: ||f||_inf = " + num(sup) + " exceeds the 1/2 cap");
  const DyadicLadder ladder = DyadicLadder::for_grid(f.grid);
  const SpectralField Ff = composition_apply(laws, law, f, 1.0);
  return besov_norm(Ff, idx, ladder) / besov_norm(f, idx, ladder);
}

// ---- nonlinear Bernstein -----------------------------------------------------

namespace {

void check_annulus(const SpectralField& f, double lambda) {
  require(lambda > 0.0, ErrorKind::Domain, "nonlinear Bernstein: lambda must be positive");
  const Geometry& geo = geometry(f.grid);
  const double lo = 0.75 * lambda * (1.0 - 1e-12), hi = (8.0 / 3.0) * lambda * (1.0 + 1e-12);
  double big = 0.0;
  for (const auto& c : f.c) big = std::max(big, std::abs(c));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f.c[i]) <= 1e-14 * big) continue;
    require(geo.kmag[i] >= lo && geo.kmag[i] <= hi, ErrorKind::Precondition,
            "nonlinear Bernstein: mode |xi| = " + num(geo.kmag[i]) + " outside the annulus [3/4, 8/3] lambda");
  }
  require(hermitian_defect(f) <= 1e-12, ErrorKind::Precondition, "nonlinear Bernstein: field must be real");
}

NonlinearBernstein finish(double middle, double right, double lp, double p, double lambda) {
  NonlinearBernstein r;
  r.middle = middle;
  r.right = right;
  r.lp = lp;
  r.c = middle / (lambda * lambda * (p - 1.0) / p * lp);
  r.identity_residual = std::abs(middle - right) / std::max(std::abs(middle), 1e-300);
  return r;
}

}  // namespace

NonlinearBernstein nonlinear_bernstein(const SpectralField& f, double p, double lambda, int upsample) {
  require(p >= 2.0 && std::isfinite(p), ErrorKind::Domain, "nonlinear Bernstein: p must be finite and >= 2");
  require(upsample >= 1, ErrorKind::Domain, "nonlinear Bernstein: upsample must be >= 1");
  check_annulus(f, lambda);
  const SpectralField F = upsample == 1 ? f : resample(f, f.grid.n * upsample);
  VectorField g = gradient(F);
  const SpectralField lap = laplacian(F);
  std::vector<const SpectralField*> ptr{&F, &lap};
  for (const auto& c : g) ptr.push_back(&c);
  const auto x = inverse_transform_many(ptr);
  double middle = 0.0, right = 0.0, lp = 0.0;
  for (std::size_t i = 0; i < x[0].size(); ++i) {
    const double v = x[0][i], a = std::abs(v);
    double g2 = 0.0;
    for (std::size_t j = 2; j < x.size(); ++j) g2 += x[j][i] * x[j][i];
    const double w = p == 2.0 ? 1.0 : std::pow(a, p - 2.0);
    middle += (p - 1.0) * g2 * w;
    right -= x[1][i] * w * v;
    lp += w * a * a;
  }
  const double dv = F.grid.cell_volume();
  return finish(middle * dv, right * dv, lp * dv, p, lambda);
}

NonlinearBernstein nonlinear_bernstein_exact(const SpectralField& f, double p, double lambda, double tolerance) {
  require(p >= 2.0 && std::isfinite(p), ErrorKind::Domain, "nonlinear Bernstein: p must be finite and >= 2");
  check_annulus(f, lambda);
  LineQuadratureOptions o;
  o.tolerance = tolerance;
  const auto r = zero_set_integrals(f, 3, [p](const PointData& q, double* out) {
    const double a = std::abs(q.f);
    const double w = p == 2.0 ? 1.0 : std::pow(a, p - 2.0);
    out[0] = (p - 1.0) * q.grad2 * w;
    out[1] = -q.lap * w * q.f;
    out[2] = w * a * a;
  }, o);
  require(r.converged, ErrorKind::Numeric, "nonlinear Bernstein: zero-set quadrature did not converge");
  return finish(r.values[0], r.values[1], r.values[2], p, lambda);
}

// ---- commutator --------------------------------------------------------------

void check_commutator_sigma(double sigma, double p, double p1, int d) {
  const double pprime = p == 1.0 ? INFINITY : (std::isinf(p) ? 1.0 : p / (p - 1.0));
  const double lo = -std::min(d * inv(p1), d * inv(pprime));
  const double hi = 1.0 + std::min(d * inv(p), d * inv(p1));
  require(sigma > lo, ErrorKind::Config, "commutator: needs sigma > -min(d/p1, d/p') = " + num(lo));
  require(sigma <= hi, ErrorKind::Config, "commutator: needs sigma <= 1 + min(d/p, d/p1) = " + num(hi));
}

namespace {

// v.grad h evaluated pointwise, with v already in physical space.
SpectralField advect(const std::vector<PhysicalField>& v, const SpectralField& h) {
  const VectorField g = gradient(h);
  std::vector<const SpectralField*> ptr;
  for (const auto& c : g) ptr.push_back(&c);
  const auto x = inverse_transform_many(ptr);
  PhysicalField out(h.grid);
  for (std::size_t j = 0; j < v.size(); ++j)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[j][i] * x[j][i];
  return transform(out);
}

std::vector<PhysicalField> to_physical(const VectorField& v) {
  std::vector<const SpectralField*> ptr;
  for (const auto& c : v) ptr.push_back(&c);
  return inverse_transform_many(ptr);
}

}  // namespace

SpectralField commutator(const VectorField& v, const SpectralField& a, int k, int l) {
  require(static_cast<int>(v.size()) == a.grid.dim, ErrorKind::Dimension, "commutator: v needs d components");
  require(l >= 0 && l < a.grid.dim, ErrorKind::Domain, "commutator: derivative index out of range");
  const DyadicLadder ladder = DyadicLadder::for_grid(a.grid);
  const auto vx = to_physical(v);
  SpectralField out = advect(vx, derivative(dyadic_block(a, k, ladder), l));
  out -= derivative(dyadic_block(advect(vx, a), k, ladder), l);
  return out;
}

double commutator_ratio(const VectorField& v, const SpectralField& a, double p, double p1, double sigma) {
  const int d = a.grid.dim;
  check_commutator_sigma(sigma, p, p1, d);
  const DyadicLadder ladder = DyadicLadder::for_grid(a.grid);
  const auto vx = to_physical(v);
  const SpectralField va = advect(vx, a);
  double lhs = 0.0;
  for (int k = ladder.k_min; k <= ladder.k_max; ++k) {
    const SpectralField ak = dyadic_block(a, k, ladder);
    const SpectralField vak = dyadic_block(va, k, ladder);
    for (int l = 0; l < d; ++l) {
      SpectralField c = advect(vx, derivative(ak, l));
      c -= derivative(vak, l);
      lhs = std::max(lhs, std::exp2(k * (sigma - 1.0)) * lp_norm(c, p));
    }
  }
  VectorField gv;
  for (const auto& vi : v)
    for (int j = 0; j < d; ++j) gv.push_back(derivative(vi, j));
  const double rhs = besov_norm(gv, BesovIndex::make(d / p1, p1, 1.0), ladder) *
                     besov_norm(gradient(a), BesovIndex::make(sigma - 1.0, p, 1.0), ladder);
  return lhs / rhs;
}

// ---- heat regularity ----------------------------------------------------------

HeatRatio heat_ratio(const SpectralField& u0, const SpectralField& f, const HeatSetup& s) {
  require(u0.grid == f.grid, ErrorKind::Dimension, "heat: grid mismatch");
  require(s.mu > 0.0 && s.T > 0.0, ErrorKind::Config, "heat: mu and T must be positive");
  require(s.rho2 >= 1.0 && s.rho2 <= s.rho1, ErrorKind::Config, "heat: needs 1 <= rho2 <= rho1");
  require(s.time_panels >= 1, ErrorKind::Config, "heat: time_panels must be >= 1");
  const Grid& g = u0.grid;
  const Geometry& geo = geometry(g);
  const DyadicLadder ladder = DyadicLadder::for_grid(g);

  // Composite 8-point rule on [0, T]; the sup also sees both endpoints.
  const GaussRule& gl = gauss_legendre(8);
  std::vector<double> t{0.0}, w{0.0};
  for (int pnl = 0; pnl < s.time_panels; ++pnl) {
    const double a = s.T * pnl / s.time_panels, b = s.T * (pnl + 1) / s.time_panels;
    for (int q = 0; q < 8; ++q) {
      t.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q]);
      w.push_back(0.5 * (b - a) * gl.weights[q]);
    }
  }
  t.push_back(s.T);
  w.push_back(0.0);
  const std::size_t nt = t.size();

  // Block energies per time: E[k][j] = L^d sum phi_k^2 |u^(t_j)|^2.
  const int nk = ladder.count();
  std::vector<std::vector<double>> E(nk, std::vector<double>(nt, 0.0));
  std::vector<double> u2(nt);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (geo.kmag[i] == 0.0 || (u0.c[i] == cplx(0.0) && f.c[i] == cplx(0.0))) continue;
    const double lam = s.mu * geo.kmag2[i];
    for (std::size_t j = 0; j < nt; ++j) {
      const double e = std::exp(-lam * t[j]);
      u2[j] = std::norm(e * u0.c[i] + (-std::expm1(-lam * t[j]) / lam) * f.c[i]);
    }
    for (int k = ladder.k_min; k <= ladder.k_max; ++k) {
      const double ph = block_weights(g, k)[i];
      if (ph == 0.0) continue;
      for (std::size_t j = 0; j < nt; ++j) E[k - ladder.k_min][j] += ph * ph * u2[j];
    }
  }
  BlockNorms time_blocks;
  time_blocks.k_min = ladder.k_min;
  time_blocks.v.assign(nk, 0.0);
  for (int kk = 0; kk < nk; ++kk) {
    double acc = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      const double n = std::sqrt(E[kk][j] * g.volume());
      if (std::isinf(s.rho1)) acc = std::max(acc, n);
      else acc += w[j] * std::pow(n, s.rho1);
    }
    time_blocks.v[kk] = std::isinf(s.rho1) ? acc : std::pow(acc, 1.0 / s.rho1);
  }
  HeatRatio r;
  r.lhs = std::pow(s.mu, inv(s.rho1)) * assemble(time_blocks, s.sigma + 2.0 * inv(s.rho1), s.r, Part::Full, ladder);
  r.data = besov_norm(u0, BesovIndex::make(s.sigma, 2.0, s.r), ladder);
  r.forcing = std::pow(s.mu, inv(s.rho2) - 1.0) * std::pow(s.T, inv(s.rho2)) *
              besov_norm(f, BesovIndex::make(s.sigma - 2.0 + 2.0 * inv(s.rho2), 2.0, s.r), ladder);
  r.ratio = r.lhs / (r.data + r.forcing);
  return r;
}

// ---- time convolution ---------------------------------------------------------

void ConvolutionParams::validate() const {
  require(s1 >= 0.0, ErrorKind::Config, "convolution: needs s1 >= 0");
  require(s1 <= s2, ErrorKind::Config, "convolution: needs s1 <= s2");
  require(s2 > 1.0, ErrorKind::Config, "convolution: needs s2 > 1");
  require(theta >= 0.0 && theta < 1.0, ErrorKind::Config, "convolution: needs 0 <= theta < 1");
}

namespace {

double jp(double x) { return std::sqrt(1.0 + x * x); }

// Gauss-Legendre over [a, b] split into panels growing geometrically from a.
template <class F>
double geometric_panels(F&& f, double a, double b) {
  double s = 0.0;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(b, std::max(2.0 * lo, lo + 1.0));
    s += integrate_gl(f, lo, hi, 20);
    lo = hi;
  }
  return s;
}

}  // namespace

double convolution_integral(double t, const ConvolutionParams& c, double tolerance) {
  if (t <= 0.0) return 0.0;
  const double half = 0.5 * t;
  const double a1 = std::min(1.0, half);
  auto near_zero = [&](double tau) {
    return std::pow(jp(t - tau), -c.s1) * std::pow(tau, -c.theta) * std::pow(jp(tau), c.theta - c.s2);
  };
  // sigma = t - tau on the second half keeps the kernel's peak at an endpoint
  auto near_t = [&](double sg) {
    const double tau = t - sg;
    return std::pow(jp(sg), -c.s1) * std::pow(tau, -c.theta) * std::pow(jp(tau), c.theta - c.s2);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  double s = c.theta == 0.0 ? integrate_gl(near_zero, 0.0, a1, 20) : ts.integrate(near_zero, 0.0, a1, tolerance);
  s += geometric_panels(near_zero, a1, half);
  s += integrate_gl(near_t, 0.0, a1, 20);
  s += geometric_panels(near_t, a1, half);
  return s;
}

double convolution_sup(const ConvolutionParams& c, double t_lo, double t_hi, int n_t, double tolerance) {
  require(t_lo > 0.0 && t_hi > t_lo && n_t >= 2, ErrorKind::Config, "convolution: bad t grid");
  double best = 0.0;
  for (int i = 0; i < n_t; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (n_t - 1));
    best = std::max(best, std::pow(jp(t), c.s1) * convolution_integral(t, c, tolerance));
  }
  return best;
}

// ---- embeddings --------------------------------------------------------------

void check_embedding_chain(double p1, double p2, double r1, double r2) {
  require(p1 >= 1.0 && r1 >= 1.0, ErrorKind::Config, "embedding: indices must be >= 1");
  require(p1 <= p2, ErrorKind::Config, "embedding: needs p1 <= p2");
  require(r1 <= r2, ErrorKind::Config, "embedding: needs r1 <= r2");
}

}  // namespace bmhd::harness
