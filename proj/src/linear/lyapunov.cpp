#include "bmhd/linear/lyapunov.hpp"

#include <cmath>
#include <limits>

#include "bmhd/common/error.hpp"

namespace bmhd {

using cd = std::complex<double>;

namespace {

const cd kI(0.0, 1.0);

double xi_norm(const Vec3& xi, int d) {
  double r2 = 0.0;
  for (int j = 0; j < d; ++j) r2 += xi[j] * xi[j];
  return std::sqrt(r2);
}

template <class F>
void for_pairs(int d, F&& f) {
  int n = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) f(i, j, n++);
}

double half_norm2(const CMat3& m, int d) {
  double s = 0.0;
  for_pairs(d, [&](int i, int j, int) { s += std::norm(m(i, j)); });
  return s;
}

cd half_inner(const CMat3& a, const CMat3& b, int d) {
  cd s = 0.0;
  for_pairs(d, [&](int i, int j, int) { s += a(i, j) * std::conj(b(i, j)); });
  return s;
}

// I.(i xi M) for curl-form M: sum_{i<j} i (xi_i I_j - xi_j I_i) M_ij
cd field_coupling(const CMat3& m, const Vec3& xi, const Vec3& I, int d) {
  cd s = 0.0;
  for_pairs(d, [&](int i, int j, int) { s += kI * (xi[i] * I[j] - xi[j] * I[i]) * m(i, j); });
  return s;
}

}  // namespace

int skew_pairs(int dim) { return dim * (dim - 1) / 2; }

double ModeDecomposition::norm2() const {
  return std::norm(A) + std::norm(V) + half_norm2(W, dim) + half_norm2(M, dim);
}

CCol ModeDecomposition::coords() const {
  const int np = skew_pairs(dim);
  CCol c(2 + 2 * np);
  c(0) = A;
  c(1) = V;
  for_pairs(dim, [&](int i, int j, int n) {
    c(2 + n) = W(i, j);
    c(2 + np + n) = M(i, j);
  });
  return c;
}

ModeDecomposition ModeDecomposition::from_coords(const CCol& c, int dim) {
  const int np = skew_pairs(dim);
  require(c.size() == 2 + 2 * np, ErrorKind::Dimension, "decomposition coordinates have the wrong length");
  ModeDecomposition x;
  x.dim = dim;
  x.A = c(0);
  x.V = c(1);
  for_pairs(dim, [&](int i, int j, int n) {
    x.W(i, j) = c(2 + n);
    x.W(j, i) = -c(2 + n);
    x.M(i, j) = c(2 + np + n);
    x.M(j, i) = -c(2 + np + n);
  });
  return x;
}

ModeDecomposition decompose(const CCol& u, const Vec3& xi, int dim) {
  require(u.size() == 1 + 2 * dim, ErrorKind::Dimension, "mode state has the wrong length");
  const double rho = xi_norm(xi, dim);
  require(rho > 0.0, ErrorKind::Domain, "decomposition undefined at xi = 0");
  ModeDecomposition x;
  x.dim = dim;
  x.A = u(0);
  cd div = 0.0;
  for (int j = 0; j < dim; ++j) div += xi[j] * u(1 + j);
  x.V = kI * div / rho;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      x.W(i, j) = kI * (xi[j] * u(1 + i) - xi[i] * u(1 + j)) / rho;
      x.M(i, j) = kI * (xi[j] * u(1 + dim + i) - xi[i] * u(1 + dim + j)) / rho;
    }
  return x;
}

CCol reconstruct(const ModeDecomposition& x, const Vec3& xi) {
  const int d = x.dim;
  const double rho = xi_norm(xi, d);
  require(rho > 0.0, ErrorKind::Domain, "reconstruction undefined at xi = 0");
  CCol u = CCol::Zero(1 + 2 * d);
  u(0) = x.A;
  for (int j = 0; j < d; ++j) {
    cd uj = -kI * xi[j] * x.V / rho, hj = 0.0;
    for (int i = 0; i < d; ++i) {
      uj += kI * xi[i] * x.W(i, j) / rho;
      hj += kI * xi[i] * x.M(i, j) / rho;
    }
    u(1 + j) = uj;
    u(1 + d + j) = hj;
  }
  return u;
}

CMat induced_matrix(const Vec3& xi, const LinearParams& p) {
  const int d = p.dim;
  const int np = skew_pairs(d);
  const double rho = xi_norm(xi, d);
  require(rho > 0.0, ErrorKind::Domain, "induced system undefined at xi = 0");
  double Ixi = 0.0;
  for (int j = 0; j < d; ++j) Ixi += p.I[j] * xi[j];
  CMat k = CMat::Zero(2 + 2 * np, 2 + 2 * np);
  k(0, 1) = -rho;
  k(1, 1) = -rho * rho;
  k(1, 0) = rho;
  for_pairs(d, [&](int i, int j, int n) {
    const int w = 2 + n, m = 2 + np + n;
    const double gamma = xi[j] * p.I[i] - xi[i] * p.I[j];
    k(1, m) = kI * (xi[i] * p.I[j] - xi[j] * p.I[i]);
    k(w, w) = -p.mu_inf * rho * rho;
    k(w, m) = kI * Ixi;
    k(m, m) = -rho * rho;
    k(m, 1) = -kI * gamma;
    k(m, w) = kI * Ixi;
  });
  return k;
}

double lyapunov(const ModeDecomposition& x, double rho, double sigma) {
  require(sigma >= 0.0, ErrorKind::Domain, "sigma must be nonnegative");
  return x.norm2() + sigma * (rho * rho * std::norm(x.A) - 2.0 * rho * std::real(x.A * std::conj(x.V)));
}

DissipationReport lyapunov_dissipation_check(const Vec3& xi, const CCol& u0, const std::vector<double>& t_grid,
                                             const LinearParams& p, double rho0) {
  const int d = p.dim;
  const double rho = xi_norm(xi, d);
  require(rho > 0.0, ErrorKind::Domain, "dissipation check needs xi != 0");
  require(rho <= rho0, ErrorKind::Precondition, "dissipation check needs |xi| <= rho0");
  DissipationReport rep;
  rep.xi = xi;
  rep.sigma = p.sigma();
  const ModeMatrix mm = mode_matrix(xi, p);
  const double mub = p.mu_bar();
  double Ixi = 0.0;
  for (int j = 0; j < d; ++j) Ixi += p.I[j] * xi[j];
  double prev_l = std::numeric_limits<double>::infinity();

  auto abs_a2 = [&](double t) { return std::norm((expm(t * mm.m) * u0)(0)); };

  for (double t : t_grid) {
    const CCol u = propagate_mode(mm, t, u0);
    const CCol du = mm.m * u;
    const ModeDecomposition x = decompose(u, xi, d);
    const ModeDecomposition dx = decompose(du, xi, d);
    DissipationSample s;
    s.t = t;
    const double scale = std::max((1.0 + rho * rho) * x.norm2(), 1e-300);
    const cd Z = field_coupling(x.M, xi, p.I, d);
    const double aa = std::norm(x.A), vv = std::norm(x.V), ww = half_norm2(x.W, d), mmn = half_norm2(x.M, d);
    const double reAV = std::real(x.A * std::conj(x.V));

    const double dA = std::real(dx.A * std::conj(x.A));
    const double dV = std::real(dx.V * std::conj(x.V));
    const double dW = std::real(half_inner(dx.W, x.W, d));
    const double dM = std::real(half_inner(dx.M, x.M, d));
    // (d/2) [rho^2 |A|^2 - 2 rho Re(A conj V)]
    const double dcross = rho * rho * dA - rho * std::real(dx.A * std::conj(x.V) + x.A * std::conj(dx.V));

    cd gv = 0.0;
    for_pairs(d, [&](int i, int j, int) {
      gv += kI * (xi[j] * p.I[i] - xi[i] * p.I[j]) * x.V * std::conj(x.M(i, j));
    });
    s.identity[0] = (dA + rho * reAV) / scale;
    s.identity[1] = (dV + rho * rho * vv - rho * reAV - std::real(Z * std::conj(x.V))) / scale;
    s.identity[2] = (dW + p.mu_inf * rho * rho * ww - std::real(kI * Ixi * half_inner(x.M, x.W, d))) / scale;
    s.identity[3] = (dM + rho * rho * mmn + std::real(gv) - std::real(kI * Ixi * half_inner(x.W, x.M, d))) / scale;
    s.identity[4] = (dcross + rho * rho * aa - rho * rho * vv + rho * std::real(Z * std::conj(x.A))) / scale;

    s.lyapunov = lyapunov(x, rho, rep.sigma);
    s.dlyapunov = 2.0 * (dA + dV + dW + dM) + 2.0 * rep.sigma * dcross;
    s.dissipation = mub * rho * rho * (0.5 * aa + vv + 2.0 * ww + 1.5 * mmn);
    s.margin = (s.dlyapunov + s.dissipation) / scale;

    // Five-point central stencil; |A|^2 is analytic in t, so t - 2h < 0 is fine.
    const double h = 1e-3 / std::max(1.0, rho * rho);
    const double fd = (abs_a2(t - 2.0 * h) - 8.0 * abs_a2(t - h) + 8.0 * abs_a2(t + h) - abs_a2(t + 2.0 * h)) / (12.0 * h);
    s.fd_residual = std::abs(fd - 2.0 * dA) / scale;

    for (double v : s.identity) rep.worst_identity = std::max(rep.worst_identity, std::abs(v));
    rep.worst_fd = std::max(rep.worst_fd, s.fd_residual);
    if (s.margin > rep.worst_margin) {
      rep.worst_margin = s.margin;
      rep.worst_t = t;
    }
    const double l = std::sqrt(std::max(s.lyapunov, 0.0));
    if (l > prev_l * (1.0 + 1e-12) + 1e-300) rep.monotone = false;
    prev_l = l;
    rep.samples.push_back(s);
  }
  rep.passed = rep.worst_margin <= rep.tolerance && rep.worst_identity <= rep.identity_tolerance &&
               rep.worst_fd <= rep.fd_tolerance && rep.monotone;
  if (t_grid.empty()) rep.worst_margin = 0.0;
  return rep;
}

}  // namespace bmhd
