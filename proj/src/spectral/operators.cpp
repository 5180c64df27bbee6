#include "bmhd/spectral/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bmhd/common/error.hpp"
#include "bmhd/simd/kernels.hpp"

namespace bmhd {

namespace {

void check_grid(const Grid& a, const Grid& b) {
  require(a == b, ErrorKind::Dimension, "grid mismatch: " + a.describe() + " vs " + b.describe());
}

std::string mode_name(const Geometry& geo, std::size_t idx) {
  std::ostringstream os;
  os << "k=(";
  for (int j = 0; j < geo.grid.dim; ++j) os << (j ? "," : "") << geo.k[idx][j];
  os << ")";
  return os.str();
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

cplx eval_symbol(const Geometry& geo, std::size_t idx, const Symbol& symbol) {
  const int d = geo.grid.dim;
  Vec3 xi{0.0, 0.0, 0.0};
  for (int j = 0; j < d; ++j) xi[j] = geo.xi[j][idx];
  const std::uint8_t nyq = geo.nyquist[idx];
  if (!nyq) return symbol(xi);
  // average over the sign aliases of the Nyquist components
  cplx acc = 0.0;
  int count = 0;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    if ((mask & ~static_cast<unsigned>(nyq)) != 0) continue;
    Vec3 x = xi;
    for (int j = 0; j < d; ++j)
      if (mask & (1u << j)) x[j] = -x[j];
    acc += symbol(x);
    ++count;
  }
  return acc / static_cast<double>(count);
}

}  // namespace

SpectralField fourier_multiplier(const SpectralField& f, const Symbol& symbol) {
  const Geometry& geo = geometry(f.grid);
  SpectralField out(f.grid);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const cplx m = eval_symbol(geo, idx, symbol);
    if (!finite(m)) {
      if (geo.kmag2[idx] == 0.0) {
        out.c[idx] = 0.0;
        continue;
      }
      fail(ErrorKind::Domain, "symbol is not finite at grid mode " + mode_name(geo, idx));
    }
    out.c[idx] = m * f.c[idx];
  }
  return out;
}

SpectralField radial_multiplier(const SpectralField& f, const std::function<double(double)>& m) {
  const Geometry& geo = geometry(f.grid);
  RVec s(f.size());
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const double v = m(geo.kmag[idx]);
    if (!std::isfinite(v)) {
      if (geo.kmag2[idx] == 0.0) {
        s[idx] = 0.0;
        continue;
      }
      fail(ErrorKind::Domain, "radial symbol is not finite at grid mode " + mode_name(geo, idx));
    }
    s[idx] = v;
  }
  SpectralField out(f.grid);
  simd::kernels().mul_real(out.c.data(), f.c.data(), s.data(), f.size());
  return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
  require(axis >= 0 && axis < f.grid.dim, ErrorKind::Dimension, "derivative axis out of range");
  const Geometry& geo = geometry(f.grid);
  SpectralField out(f.grid);
  const RVec& x = geo.xi_eff[axis];
  for (std::size_t i = 0; i < f.size(); ++i) out.c[i] = cplx(-x[i] * f.c[i].imag(), x[i] * f.c[i].real());
  return out;
}

VectorField gradient(const SpectralField& f) {
  VectorField out;
  for (int j = 0; j < f.grid.dim; ++j) out.push_back(derivative(f, j));
  return out;
}

SpectralField divergence(const VectorField& v) {
  require(!v.empty(), ErrorKind::Dimension, "divergence of an empty vector field");
  const Grid g = v.front().grid;
  require(static_cast<int>(v.size()) == g.dim, ErrorKind::Dimension, "divergence needs d components");
  const Geometry& geo = geometry(g);
  SpectralField out(g);
  for (int j = 0; j < g.dim; ++j) {
    check_grid(g, v[j].grid);
    const RVec& x = geo.xi_eff[j];
    for (std::size_t i = 0; i < out.size(); ++i)
      out.c[i] += cplx(-x[i] * v[j].c[i].imag(), x[i] * v[j].c[i].real());
  }
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  const Geometry& geo = geometry(f.grid);
  RVec s(f.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = -geo.kmag2[i];
  SpectralField out(f.grid);
  simd::kernels().mul_real(out.c.data(), f.c.data(), s.data(), f.size());
  return out;
}

SpectralField inverse_neg_laplacian(const SpectralField& f) {
  const Geometry& geo = geometry(f.grid);
  RVec s(f.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = geo.kmag2[i] > 0.0 ? 1.0 / geo.kmag2[i] : 0.0;
  SpectralField out(f.grid);
  simd::kernels().mul_real(out.c.data(), f.c.data(), s.data(), f.size());
  return out;
}

SpectralField lambda_power(const SpectralField& f, double s) {
  if (s == 0.0) return f;
  return radial_multiplier(f, [s](double r) { return r > 0.0 ? std::pow(r, s) : (s > 0.0 ? 0.0 : NAN); });
}

VectorField leray_project(const VectorField& v) {
  require(!v.empty(), ErrorKind::Dimension, "leray_project of an empty vector field");
  const Grid g = v.front().grid;
  const int d = g.dim;
  require(static_cast<int>(v.size()) == d, ErrorKind::Dimension, "leray_project needs d components");
  for (const auto& c : v) check_grid(g, c.grid);
  const Geometry& geo = geometry(g);
  VectorField out = v;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double m2 = 0.0;
    for (int j = 0; j < d; ++j) m2 += geo.xi_eff[j][i] * geo.xi_eff[j][i];
    if (m2 == 0.0) continue;
    cplx dot = 0.0;
    for (int j = 0; j < d; ++j) dot += geo.xi_eff[j][i] * v[j].c[i];
    dot /= m2;
    for (int j = 0; j < d; ++j) out[j].c[i] -= geo.xi_eff[j][i] * dot;
  }
  return out;
}

void dealias(SpectralField& f, double fraction) {
  const Geometry& geo = geometry(f.grid);
  const double cut = fraction * (f.grid.n / 2);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (int j = 0; j < f.grid.dim; ++j) {
      if (std::abs(geo.k[i][j]) >= cut) {
        f.c[i] = 0.0;
        break;
      }
    }
  }
}

bool is_dealiased(const SpectralField& f, double fraction) {
  const Geometry& geo = geometry(f.grid);
  const double cut = fraction * (f.grid.n / 2);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (int j = 0; j < f.grid.dim; ++j)
      if (std::abs(geo.k[i][j]) >= cut && f.c[i] != cplx(0.0)) return false;
  return true;
}

void hermitian_symmetrize(SpectralField& f) {
  const Geometry& geo = geometry(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::size_t j = geo.conj[i];
    if (j < i) continue;
    if (j == i) {
      f.c[i] = f.c[i].real();
      continue;
    }
    const cplx avg = 0.5 * (f.c[i] + std::conj(f.c[j]));
    f.c[i] = avg;
    f.c[j] = std::conj(avg);
  }
}

double hermitian_defect(const SpectralField& f) {
  const Geometry& geo = geometry(f.grid);
  double defect = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    defect = std::max(defect, std::abs(f.c[geo.conj[i]] - std::conj(f.c[i])));
    scale = std::max(scale, std::abs(f.c[i]));
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

double lp_norm(const PhysicalField& f, double p) {
  require(p >= 1.0, ErrorKind::Domain, "L^p norm needs p >= 1, got " + std::to_string(p));
  const auto& k = simd::kernels();
  if (std::isinf(p)) return k.max_abs(f.v.data(), f.size());
  const double s = k.sum_abs_pow(f.v.data(), f.size(), p) * f.grid.cell_volume();
  return std::pow(s, 1.0 / p);
}

double lp_norm(const SpectralField& f, double p) { return lp_norm(inverse_transform(f), p); }

double lp_norm(const std::vector<PhysicalField>& v, double p) {
  require(!v.empty(), ErrorKind::Dimension, "L^p norm of an empty vector field");
  if (v.size() == 1) return lp_norm(v.front(), p);
  PhysicalField mag(v.front().grid);
  for (const auto& c : v) {
    check_grid(mag.grid, c.grid);
    for (std::size_t i = 0; i < mag.size(); ++i) mag.v[i] += c.v[i] * c.v[i];
  }
  for (auto& x : mag.v) x = std::sqrt(x);
  return lp_norm(mag, p);
}

double l2_parseval(const SpectralField& f) {
  return std::sqrt(simd::kernels().sum_norm2(f.c.data(), f.size()) * f.grid.volume());
}

double l2_parseval(const VectorField& v) {
  double s = 0.0;
  for (const auto& c : v) s += simd::kernels().sum_norm2(c.c.data(), c.size());
  return v.empty() ? 0.0 : std::sqrt(s * v.front().grid.volume());
}

double coeff_l2(const SpectralField& f) { return std::sqrt(simd::kernels().sum_norm2(f.c.data(), f.size())); }

SpectralField resample(const SpectralField& f, int n) {
  const Grid g = Grid::make(f.grid.dim, n, f.grid.length);
  const Geometry& src = geometry(f.grid);
  const Geometry& dst = geometry(g);
  SpectralField out(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.c[i] == cplx(0.0)) continue;
    require(!src.nyquist[i], ErrorKind::Precondition, "resample: source field has Nyquist content");
    bool fits = true;
    for (int j = 0; j < f.grid.dim; ++j) fits = fits && 2 * std::abs(src.k[i][j]) < n;
    if (fits) out.c[dst.flat(src.k[i])] = f.c[i];
  }
  return out;
}

double divergence_defect(const VectorField& v) {
  const SpectralField dv = divergence(v);
  const Geometry& geo = geometry(v.front().grid);
  // compare |xi . H| against |xi| |H| mode-wise so the ratio is scale free
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < dv.size(); ++i) {
    num += std::norm(dv.c[i]);
    double h2 = 0.0;
    for (const auto& c : v) h2 += std::norm(c.c[i]);
    den += geo.kmag2[i] * h2;
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

}  // namespace bmhd
