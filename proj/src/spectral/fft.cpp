#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "bmhd/common/error.hpp"
#include "bmhd/simd/kernels.hpp"
#include "bmhd/spectral/operators.hpp"

namespace bmhd {

namespace {

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// Plans are created once per (d, N) on aligned scratch and executed through
// the new-array interface. Creation is serialized; execution is thread-safe.
const Plans& plans_for(const Grid& g) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, Plans> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({g.dim, g.n});
  if (it != cache.end()) return it->second;
  CVec in(g.size()), out(g.size());
  int dims[3] = {g.n, g.n, g.n};
  auto* pi = reinterpret_cast<fftw_complex*>(in.data());
  auto* po = reinterpret_cast<fftw_complex*>(out.data());
  Plans p;
  p.forward = fftw_plan_dft(g.dim, dims, pi, po, FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft(g.dim, dims, pi, po, FFTW_BACKWARD, FFTW_ESTIMATE);
  require(p.forward && p.backward, ErrorKind::Numeric, "FFTW plan creation failed");
  return cache.emplace(std::make_pair(g.dim, g.n), p).first->second;
}

void exec(fftw_plan plan, const CVec& in, CVec& out) {
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

SpectralField transform(const PhysicalField& f) {
  const Grid& g = f.grid;
  CVec buf(g.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = f.v[i];
  SpectralField out(g);
  exec(plans_for(g).forward, buf, out.c);
  out *= 1.0 / static_cast<double>(g.size());
  return out;
}

PhysicalField inverse_transform(const SpectralField& f) {
  const Grid& g = f.grid;
  CVec buf(g.size());
  exec(plans_for(g).backward, f.c, buf);
  PhysicalField out(g);
  double re_max = 0.0, im_max = 0.0;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    out.v[i] = buf[i].real();
    re_max = std::max(re_max, std::abs(buf[i].real()));
    im_max = std::max(im_max, std::abs(buf[i].imag()));
  }
  require(im_max <= 1e-9 * re_max + 1e-300, ErrorKind::Input,
          "inverse transform of a non-Hermitian spectrum (imaginary part " + std::to_string(im_max) + ")");
  return out;
}

std::vector<SpectralField> transform_many(const std::vector<const PhysicalField*>& in) {
  std::vector<SpectralField> out;
  out.reserve(in.size());
  if (in.empty()) return out;
  const Grid g = in.front()->grid;
  for (auto* f : in) require(f->grid == g, ErrorKind::Dimension, "transform_many: grid mismatch");
  const Geometry& geo = geometry(g);
  const Plans& p = plans_for(g);
  const double scale = 1.0 / static_cast<double>(g.size());
  CVec buf(g.size()), z(g.size());
  std::size_t i = 0;
  for (; i + 1 < in.size(); i += 2) {
    const RVec& x = in[i]->v;
    const RVec& y = in[i + 1]->v;
    for (std::size_t j = 0; j < buf.size(); ++j) buf[j] = cplx(x[j], y[j]);
    exec(p.forward, buf, z);
    SpectralField F(g), G(g);
    for (std::size_t j = 0; j < z.size(); ++j) {
      const cplx zc = std::conj(z[geo.conj[j]]);
      F.c[j] = 0.5 * scale * (z[j] + zc);
      G.c[j] = cplx(0.0, -0.5 * scale) * (z[j] - zc);
    }
    out.push_back(std::move(F));
    out.push_back(std::move(G));
  }
  if (i < in.size()) out.push_back(transform(*in[i]));
  return out;
}

std::vector<PhysicalField> inverse_transform_many(const std::vector<const SpectralField*>& in) {
  std::vector<PhysicalField> out;
  out.reserve(in.size());
  if (in.empty()) return out;
  const Grid g = in.front()->grid;
  for (auto* f : in) require(f->grid == g, ErrorKind::Dimension, "inverse_transform_many: grid mismatch");
  const Plans& p = plans_for(g);
  CVec buf(g.size()), z(g.size());
  std::size_t i = 0;
  for (; i + 1 < in.size(); i += 2) {
    const CVec& F = in[i]->c;
    const CVec& G = in[i + 1]->c;
    for (std::size_t j = 0; j < buf.size(); ++j)
      buf[j] = cplx(F[j].real() - G[j].imag(), F[j].imag() + G[j].real());
    exec(p.backward, buf, z);
    PhysicalField x(g), y(g);
    for (std::size_t j = 0; j < z.size(); ++j) {
      x.v[j] = z[j].real();
      y.v[j] = z[j].imag();
    }
    out.push_back(std::move(x));
    out.push_back(std::move(y));
  }
  if (i < in.size()) {
    exec(p.backward, in[i]->c, z);
    PhysicalField x(g);
    for (std::size_t j = 0; j < z.size(); ++j) x.v[j] = z[j].real();
    out.push_back(std::move(x));
  }
  return out;
}

PhysicalField physical(const Grid& g, const std::function<double(const Vec3&)>& f) {
  PhysicalField out(g);
  const double h = g.dx();
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    std::size_t rem = idx;
    Vec3 x{0.0, 0.0, 0.0};
    for (int j = g.dim - 1; j >= 0; --j) {
      x[j] = h * static_cast<double>(rem % g.n);
      rem /= g.n;
    }
    out.v[idx] = f(x);
  }
  return out;
}

}  // namespace bmhd
