#include "bmhd/linear/mode.hpp"

#include <cmath>

#include "bmhd/common/error.hpp"

namespace bmhd {

using cd = std::complex<double>;

LinearParams LinearParams::make(int dim, double mu_inf, const Vec3& I, bool allow_zero_field) {
  require(dim == 2 || dim == 3, ErrorKind::Dimension, "linear parameters need d in {2, 3}");
  require(std::isfinite(mu_inf) && mu_inf > 0.0, ErrorKind::Domain, "mu_inf must be positive");
  LinearParams p;
  p.dim = dim;
  p.mu_inf = mu_inf;
  p.lambda_inf = 1.0 - 2.0 * mu_inf;
  p.I = I;
  for (int j = dim; j < 3; ++j)
    require(I[j] == 0.0, ErrorKind::Dimension, "background field has components beyond d");
  const double n = p.field_norm();
  if (!(allow_zero_field && n == 0.0))
    require(std::abs(n - 1.0) <= 1e-14, ErrorKind::Domain, "background field I must be a unit vector");
  return p;
}

double LinearParams::field_norm() const { return std::sqrt(I[0] * I[0] + I[1] * I[1] + I[2] * I[2]); }

ModeMatrix mode_matrix(const Vec3& xi, const LinearParams& p) {
  const int d = p.dim;
  for (int j = 0; j < d; ++j) require(std::isfinite(xi[j]), ErrorKind::Domain, "wavevector must be finite");
  const int m = 1 + 2 * d;
  ModeMatrix out;
  out.xi = xi;
  out.dim = d;
  out.m = CMat::Zero(m, m);
  double r2 = 0.0, Ixi = 0.0;
  for (int j = 0; j < d; ++j) {
    r2 += xi[j] * xi[j];
    Ixi += p.I[j] * xi[j];
  }
  const cd i(0.0, 1.0);
  const double lm = p.lambda_inf + p.mu_inf;
  for (int a = 0; a < d; ++a) {
    out.m(0, 1 + a) = -i * xi[a];
    out.m(1 + a, 0) = -i * xi[a];
    for (int b = 0; b < d; ++b) {
      const double delta = a == b ? 1.0 : 0.0;
      out.m(1 + a, 1 + b) = -p.mu_inf * r2 * delta - lm * xi[a] * xi[b];
      out.m(1 + a, 1 + d + b) = -i * xi[a] * p.I[b] + i * Ixi * delta;
      out.m(1 + d + a, 1 + b) = -i * p.I[a] * xi[b] + i * Ixi * delta;
      out.m(1 + d + a, 1 + d + b) = -r2 * delta;
    }
  }
  return out;
}

namespace {

double norm1(const CMat& a) {
  double best = 0.0;
  for (int c = 0; c < a.cols(); ++c) best = std::max(best, a.col(c).cwiseAbs().sum());
  return best;
}

CMat pade_ratio(const CMat& U, const CMat& V) {
  return (V - U).partialPivLu().solve(V + U);
}

CMat pade_low(const CMat& A, const double* b, int m) {
  const int n = static_cast<int>(A.rows());
  const CMat I = CMat::Identity(n, n);
  const CMat A2 = A * A;
  CMat Uo = b[1] * I, Ve = b[0] * I;
  CMat P = I;
  for (int k = 2; k <= m; k += 2) {
    P = P * A2;
    Ve += b[k] * P;
    Uo += b[k + 1] * P;
  }
  return pade_ratio(A * Uo, Ve);
}

}  // namespace

CMat expm(const CMat& A) {
  static const double b3[] = {120, 60, 12, 1};
  static const double b5[] = {30240, 15120, 3360, 420, 30, 1};
  static const double b7[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
  static const double b9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                              2162160.,     110880.,     3960.,       90.,        1.};
  static const double b13[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                               1187353796428800.,  129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,       1323241920.,
                               40840800.,          960960.,            16380.,
                               182.,               1.};
  const int n = static_cast<int>(A.rows());
  require(A.cols() == n, ErrorKind::Dimension, "expm needs a square matrix");
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      require(std::isfinite(A(r, c).real()) && std::isfinite(A(r, c).imag()), ErrorKind::Numeric,
              "expm of a non-finite matrix");
  const double nrm = norm1(A);
  if (nrm <= 1.495585217958292e-2) return pade_low(A, b3, 3);
  if (nrm <= 2.539398330063230e-1) return pade_low(A, b5, 5);
  if (nrm <= 9.504178996162932e-1) return pade_low(A, b7, 7);
  if (nrm <= 2.097847961257068e0) return pade_low(A, b9, 9);
  constexpr double theta13 = 5.371920351148152;
  int s = 0;
  if (nrm > theta13) s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
  const CMat As = A * std::ldexp(1.0, -s);
  const CMat I = CMat::Identity(n, n);
  const CMat A2 = As * As, A4 = A2 * A2, A6 = A4 * A2;
  const CMat U = As * (A6 * (b13[13] * A6 + b13[11] * A4 + b13[9] * A2) + b13[7] * A6 + b13[5] * A4 +
                       b13[3] * A2 + b13[1] * I);
  const CMat V = A6 * (b13[12] * A6 + b13[10] * A4 + b13[8] * A2) + b13[6] * A6 + b13[4] * A4 +
                 b13[2] * A2 + b13[0] * I;
  CMat R = pade_ratio(U, V);
  for (int k = 0; k < s; ++k) R = R * R;
  return R;
}

CCol propagate_mode(const ModeMatrix& m, double t, const CCol& u0) {
  require(t >= 0.0, ErrorKind::Domain, "propagation time must be nonnegative");
  require(u0.size() == m.m.rows(), ErrorKind::Dimension, "mode state has the wrong length");
  if (t == 0.0) return u0;
  return expm(t * m.m) * u0;
}

}  // namespace bmhd
