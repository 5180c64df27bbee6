#include "bmhd/spectral/grid.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "bmhd/common/error.hpp"

namespace bmhd {

Grid Grid::make(int dim, int n, double length) {
  require(dim == 2 || dim == 3, ErrorKind::Dimension, "grid dimension must be 2 or 3, got " + std::to_string(dim));
  require(n >= 8 && n % 2 == 0, ErrorKind::Dimension, "points per axis must be even and >= 8, got " + std::to_string(n));
  require(std::isfinite(length) && length > 0.0, ErrorKind::Domain, "domain length must be positive");
  return Grid{dim, n, length};
}

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(n);
  return s;
}

double Grid::dk() const { return 2.0 * std::numbers::pi / length; }

double Grid::cell_volume() const { return std::pow(dx(), dim); }

double Grid::volume() const { return std::pow(length, dim); }

double Grid::max_frequency() const { return dk() * (n / 2) * std::sqrt(static_cast<double>(dim)); }

std::string Grid::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "d=" << dim << " N=" << n << " L=" << length;
  return os.str();
}

std::size_t Geometry::flat(const std::array<int, 3>& kv) const {
  const int n = grid.n;
  std::size_t idx = 0;
  for (int j = 0; j < grid.dim; ++j) {
    int i = kv[j] % n;
    if (i < 0) i += n;
    idx = idx * n + static_cast<std::size_t>(i);
  }
  return idx;
}

namespace {

std::unique_ptr<Geometry> build(const Grid& g) {
  auto geo = std::make_unique<Geometry>();
  geo->grid = g;
  const std::size_t total = g.size();
  geo->k.resize(total);
  for (auto& v : geo->xi) v.assign(total, 0.0);
  for (auto& v : geo->xi_eff) v.assign(total, 0.0);
  geo->kmag.assign(total, 0.0);
  geo->kmag2.assign(total, 0.0);
  geo->nyquist.assign(total, 0);
  geo->conj.assign(total, 0);
  const double dk = g.dk();
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    std::array<int, 3> kv{0, 0, 0};
    for (int j = g.dim - 1; j >= 0; --j) {
      kv[j] = g.wavenumber(static_cast<int>(rem % g.n));
      rem /= g.n;
    }
    geo->k[idx] = kv;
    double m2 = 0.0;
    for (int j = 0; j < g.dim; ++j) {
      const double x = dk * kv[j];
      geo->xi[j][idx] = x;
      const bool nyq = kv[j] == -g.n / 2;
      if (nyq) geo->nyquist[idx] |= static_cast<std::uint8_t>(1u << j);
      geo->xi_eff[j][idx] = nyq ? 0.0 : x;
      m2 += x * x;
    }
    geo->kmag2[idx] = m2;
    geo->kmag[idx] = std::sqrt(m2);
    geo->conj[idx] = geo->flat({-kv[0], -kv[1], -kv[2]});
  }
  return geo;
}

}  // namespace

const Geometry& geometry(const Grid& g) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<Geometry>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{g.dim, g.n, g.length}];
  if (!slot) slot = build(g);
  return *slot;
}

}  // namespace bmhd
