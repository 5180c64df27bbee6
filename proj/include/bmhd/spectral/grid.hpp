#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bmhd/common/aligned.hpp"

namespace bmhd {

using Vec3 = std::array<double, 3>;

/// Periodic box [0, L)^d sampled on N^d points, d in {2, 3}, N even.
struct Grid {
  int dim = 2;
  int n = 0;
  double length = 0.0;

  static Grid make(int dim, int n, double length);

  std::size_t size() const;
  double dk() const;
  double dx() const { return length / n; }
  double cell_volume() const;
  double volume() const;
  /// Signed integer wavenumber of storage index i; index n/2 maps to -n/2.
  int wavenumber(int i) const { return i < n / 2 ? i : i - n; }
  /// Largest |xi| present on the grid (corner mode).
  double max_frequency() const;
  std::string describe() const;

  bool operator==(const Grid& o) const {
    return dim == o.dim && n == o.n && length == o.length;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

/// Per-grid wavevector tables, built once and shared.
struct Geometry {
  Grid grid;
  std::vector<std::array<int, 3>> k;  // integer wavevectors, unused axes 0
  std::array<RVec, 3> xi;             // physical wavevector components
  std::array<RVec, 3> xi_eff;         // Nyquist components zeroed
  RVec kmag;                          // |xi|
  RVec kmag2;                         // |xi|^2
  std::vector<std::uint8_t> nyquist;  // bit j set when axis j sits at -N/2
  std::vector<std::size_t> conj;      // storage index of -k
  std::size_t flat(const std::array<int, 3>& kv) const;
};

const Geometry& geometry(const Grid& g);

}  // namespace bmhd
