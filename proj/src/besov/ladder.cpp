#include "bmhd/besov/ladder.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "bmhd/common/error.hpp"

namespace bmhd {

double DyadicLadder::chi(double r) {
  constexpr double lo = 0.75, hi = 4.0 / 3.0;
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  const double x = (hi - r) / (hi - lo);
  // psi(x) / (psi(x) + psi(1-x)) with psi(x) = exp(-1/x)
  return 1.0 / (1.0 + std::exp(1.0 / x - 1.0 / (1.0 - x)));
}

double DyadicLadder::phi(double r) { return chi(0.5 * r) - chi(r); }

double DyadicLadder::weight(int k, double r) const { return phi(std::ldexp(r, -k)); }

DyadicLadder DyadicLadder::for_radii(double r_lo, double r_hi, int k0, int overlap) {
  require(r_lo > 0.0 && r_hi >= r_lo, ErrorKind::Domain, "ladder radii must satisfy 0 < lo <= hi");
  require(overlap >= 0, ErrorKind::Domain, "ladder overlap must be nonnegative");
  DyadicLadder l;
  // sum_{k=a}^{b} phi(2^-k r) = 1 for r in [2^a 4/3, 2^b 3/2]
  l.k_min = static_cast<int>(std::floor(std::log2(r_lo * 0.75)));
  l.k_max = static_cast<int>(std::ceil(std::log2(r_hi * 2.0 / 3.0)));
  l.k0 = k0;
  l.overlap = overlap;
  return l;
}

DyadicLadder DyadicLadder::for_grid(const Grid& g, int k0, int overlap) {
  return for_radii(g.dk(), g.max_frequency(), k0, overlap);
}

const RVec& block_weights(const Grid& g, int k) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double, int>, std::unique_ptr<RVec>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{g.dim, g.n, g.length, k}];
  if (!slot) {
    const Geometry& geo = geometry(g);
    slot = std::make_unique<RVec>(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      (*slot)[i] = geo.kmag[i] > 0.0 ? DyadicLadder::phi(std::ldexp(geo.kmag[i], -k)) : 0.0;
  }
  return *slot;
}

void write_ladder_csv(std::ostream& os, int n, double xi_max) {
  require(n >= 2, ErrorKind::Input, "ladder export needs at least two points");
  os << "xi,chi,phi\n";
  os.precision(17);
  for (int i = 0; i < n; ++i) {
    const double x = xi_max * i / (n - 1);
    os << x << ',' << DyadicLadder::chi(x) << ',' << DyadicLadder::phi(x) << '\n';
  }
}

}  // namespace bmhd
