#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bmhd/spectral/field.hpp"

namespace bmhd {

/// Littlewood-Paley data: chi, phi(xi) = chi(xi/2) - chi(xi), a block range
/// and the low/high cutoff k0. The high part starts at k0 - overlap.
struct DyadicLadder {
  int k_min = -8;
  int k_max = 4;
  int k0 = 4;
  int overlap = 1;

  /// Smooth radial bump: 1 on [0, 3/4], 0 on [4/3, inf), built from e^{-1/x}.
  static double chi(double r);
  static double phi(double r);

  double weight(int k, double r) const;
  int high_start() const { return k0 - overlap; }
  int count() const { return k_max - k_min + 1; }

  /// Ladder whose blocks sum to one on every nonzero mode of g.
  static DyadicLadder for_grid(const Grid& g, int k0 = 4, int overlap = 1);
  /// Ladder covering radii [r_lo, r_hi].
  static DyadicLadder for_radii(double r_lo, double r_hi, int k0 = 4, int overlap = 1);
};

/// phi(2^{-k} |xi|) on every mode of g (cached).
const RVec& block_weights(const Grid& g, int k);

/// CSV rows (xi, chi(xi), phi(xi)) on n uniform points of [0, xi_max].
void write_ladder_csv(std::ostream& os, int n, double xi_max);

}  // namespace bmhd
