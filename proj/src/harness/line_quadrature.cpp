#include "bmhd/harness/line_quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>

#include "bmhd/common/error.hpp"
#include "bmhd/common/quadrature.hpp"

namespace bmhd::harness {

namespace {

struct Mode {
  int kx, ky;
  cplx c;
};

// Cosine and sine coefficients (m = 0..K) of f, f_x, f_y and Delta f on a line.
struct LineCoeffs {
  int K;
  std::vector<double> c[4], s[4];

  explicit LineCoeffs(int k) : K(k) {
    for (int i = 0; i < 4; ++i) {
      c[i].assign(K + 1, 0.0);
      s[i].assign(K + 1, 0.0);
    }
  }
  // Re(a e^{i m th}) = Re(a) cos(m th) - Im(a) sin(m th)
  void add(int m, cplx a, int which) {
    const int am = std::abs(m);
    c[which][am] += a.real();
    s[which][am] += m >= 0 ? -a.imag() : a.imag();
  }
  PointData eval(double th, std::vector<double>& cs, std::vector<double>& sn) const {
    const double c1 = std::cos(th), s1 = std::sin(th);
    cs[0] = 1.0;
    sn[0] = 0.0;
    for (int m = 1; m <= K; ++m) {
      cs[m] = cs[m - 1] * c1 - sn[m - 1] * s1;
      sn[m] = sn[m - 1] * c1 + cs[m - 1] * s1;
    }
    double v[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
      for (int m = 0; m <= K; ++m) v[i] += c[i][m] * cs[m] + s[i][m] * sn[m];
    return {v[0], v[1] * v[1] + v[2] * v[2], v[3]};
  }
  double value(double th, double* deriv) const {
    double f = 0.0, fp = 0.0;
    for (int m = 0; m <= K; ++m) {
      const double cm = std::cos(m * th), sm = std::sin(m * th);
      f += c[0][m] * cm + s[0][m] * sm;
      fp += m * (s[0][m] * cm - c[0][m] * sm);
    }
    *deriv = fp;
    return f;
  }
};

class LineSampler {
 public:
  explicit LineSampler(const SpectralField& f) : dk_(f.grid.dk()) {
    const Geometry& geo = geometry(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.c[i] == cplx(0.0)) continue;
      require(!geo.nyquist[i], ErrorKind::Precondition, "zero-set quadrature: field has Nyquist content");
      modes_.push_back({geo.k[i][0], geo.k[i][1], f.c[i]});
      kx_ = std::max(kx_, std::abs(geo.k[i][0]));
      ky_ = std::max(ky_, std::abs(geo.k[i][1]));
    }
    cs_.resize(kx_ + 1);
    sn_.resize(kx_ + 1);
  }

  int kx() const { return kx_; }

  /// Integrals along the x-line at height y.
  void line(double y, int n_out, const std::function<void(const PointData&, double*)>& fn, double* out) {
    std::fill(out, out + n_out, 0.0);
    if (modes_.empty()) return;
    const int K = kx_;
    std::vector<cplx> A(2 * K + 1, 0.0);
    std::vector<cplx> ey(2 * ky_ + 1);
    for (int m = -ky_; m <= ky_; ++m) ey[m + ky_] = std::polar(1.0, dk_ * m * y);
    LineCoeffs cf(K);
    for (const auto& m : modes_) {
      const cplx e = ey[m.ky + ky_] * m.c;
      A[m.kx + K] += e;
      cf.add(m.kx, e, 0);
      cf.add(m.kx, cplx(0.0, m.kx) * e, 1);  // d/d theta; rescaled to d/dx below
      cf.add(m.kx, cplx(0.0, dk_ * m.ky) * e, 2);
      cf.add(m.kx, -(dk_ * dk_) * double(m.kx * m.kx + m.ky * m.ky) * e, 3);
    }
    for (int m = 0; m <= K; ++m) {
      cf.c[1][m] *= dk_;
      cf.s[1][m] *= dk_;
    }
    const std::vector<double> roots = find_roots(A, K, cf);
    const double hmax = 2.0 * M_PI / (2.0 * K + 2.0);
    std::vector<double> tmp(n_out);
    const GaussRule& g = gauss_legendre(16);
    auto piece = [&](double a, double b) {
      const double h = 0.5 * (b - a), c = 0.5 * (a + b);
      for (int q = 0; q < 16; ++q) {
        fn(cf.eval(c + h * g.nodes[q], cs_, sn_), tmp.data());
        for (int o = 0; o < n_out; ++o) out[o] += g.weights[q] * h * tmp[o];
      }
    };
    auto segment = [&](double a, double b) {
      const int n = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
      for (int i = 0; i < n; ++i) piece(a + (b - a) * i / n, a + (b - a) * (i + 1) / n);
    };
    if (roots.empty()) {
      segment(0.0, 2.0 * M_PI);
    } else {
      for (std::size_t i = 0; i + 1 < roots.size(); ++i) segment(roots[i], roots[i + 1]);
      segment(roots.back(), roots.front() + 2.0 * M_PI);
    }
    for (int o = 0; o < n_out; ++o) out[o] /= dk_;  // d theta = dk dx
  }

 private:
  // Zeros in [0, 2 pi) of sum_m A_m e^{i m th}: roots of z^K F on the unit circle.
  static std::vector<double> find_roots(const std::vector<cplx>& A, int K, const LineCoeffs& cf) {
    double big = 0.0;
    for (const auto& a : A) big = std::max(big, std::abs(a));
    std::vector<double> roots;
    if (big == 0.0) return roots;
    int lo = 0, hi = 2 * K;
    while (lo < hi && std::abs(A[lo]) <= 1e-14 * big) ++lo;
    while (hi > lo && std::abs(A[hi]) <= 1e-14 * big) --hi;
    const int D = hi - lo;
    if (D == 0) return roots;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(D, D);
    for (int i = 1; i < D; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < D; ++i) C(i, D - 1) = -A[lo + i] / A[hi];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    require(es.info() == Eigen::Success, ErrorKind::Numeric, "zero-set quadrature: root finding failed");
    for (int i = 0; i < D; ++i) {
      const cplx z = es.eigenvalues()[i];
      if (std::abs(std::abs(z) - 1.0) > 1e-5) continue;
      double th = std::arg(z);
      for (int it = 0; it < 4; ++it) {
        double fp;
        const double fv = cf.value(th, &fp);
        if (std::abs(fp) < 1e-300) break;
        const double nt = th - fv / fp;
        if (std::abs(nt - th) > 1e-3) break;
        th = nt;
      }
      th = std::fmod(th, 2.0 * M_PI);
      if (th < 0) th += 2.0 * M_PI;
      roots.push_back(th);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots)
      if (out.empty() || r - out.back() > 1e-12) out.push_back(r);
    if (out.size() > 1 && out.front() + 2.0 * M_PI - out.back() <= 1e-12) out.pop_back();
    return out;
  }

  double dk_;
  int kx_ = 0, ky_ = 0;
  std::vector<Mode> modes_;
  std::vector<double> cs_, sn_;
};

struct Panel {
  double a, b, err;
  std::vector<double> val;
  bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace

LineQuadratureResult zero_set_integrals(const SpectralField& f, int n_out,
                                        const std::function<void(const PointData&, double*)>& integrand,
                                        const LineQuadratureOptions& opts) {
  require(f.grid.dim == 2, ErrorKind::Dimension, "zero-set quadrature is implemented for d = 2");
  require(n_out >= 1, ErrorKind::Input, "zero-set quadrature needs at least one output");
  LineSampler ls(f);
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G7 = boost::math::quadrature::gauss<double, 7>;
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G7::weights();

  std::vector<double> buf(n_out), gauss(n_out);
  auto panel = [&](double a, double b) {
    Panel p{a, b, 0.0, std::vector<double>(n_out, 0.0)};
    std::fill(gauss.begin(), gauss.end(), 0.0);
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (std::size_t i = 0; i < xk.size(); ++i) {
      for (int side = 0; side < (i == 0 ? 1 : 2); ++side) {
        ls.line(c + (side == 0 ? h : -h) * xk[i], n_out, integrand, buf.data());
        for (int o = 0; o < n_out; ++o) {
          p.val[o] += wk[i] * h * buf[o];
          if (i % 2 == 0) gauss[o] += wg[i / 2] * h * buf[o];  // even Kronrod nodes are the Gauss nodes
        }
      }
    }
    for (int o = 0; o < n_out; ++o) p.err = std::max(p.err, std::abs(p.val[o] - gauss[o]));
    return p;
  };

  const double L = f.grid.length;
  std::priority_queue<Panel> heap;
  std::vector<double> sum(n_out, 0.0);
  double err_sum = 0.0;
  const int init = 2 * std::max(1, ls.kx()) + 2;
  for (int i = 0; i < init; ++i) {
    Panel p = panel(L * i / init, L * (i + 1) / init);
    for (int o = 0; o < n_out; ++o) sum[o] += p.val[o];
    err_sum += p.err;
    heap.push(std::move(p));
  }
  LineQuadratureResult res;
  int panels = init;
  while (true) {
    double scale = 0.0;
    for (double v : sum) scale = std::max(scale, std::abs(v));
    if (err_sum <= opts.tolerance * scale) {
      res.converged = true;
      break;
    }
    if (panels >= opts.max_panels) break;
    Panel top = heap.top();
    heap.pop();
    const double mid = 0.5 * (top.a + top.b);
    Panel l = panel(top.a, mid), r = panel(mid, top.b);
    for (int o = 0; o < n_out; ++o) sum[o] += l.val[o] + r.val[o] - top.val[o];
    err_sum += l.err + r.err - top.err;
    heap.push(std::move(l));
    heap.push(std::move(r));
    ++panels;
  }
  // Final values summed afresh so running-sum round-off does not accumulate.
  res.values.assign(n_out, 0.0);
  double e = 0.0;
  while (!heap.empty()) {
    for (int o = 0; o < n_out; ++o) res.values[o] += heap.top().val[o];
    e += heap.top().err;
    heap.pop();
  }
  double scale = 0.0;
  for (double v : res.values) scale = std::max(scale, std::abs(v));
  res.error_estimate = scale > 0.0 ? e / scale : 0.0;
  res.panels = panels;
  return res;
}

}  // namespace bmhd::harness
