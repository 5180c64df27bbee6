#pragma once

#include "bmhd/common/aligned.hpp"
#include "bmhd/linear/mode.hpp"
#include "bmhd/spectral/field.hpp"

namespace bmhd {

/// Mode matrix on a grid mode; Nyquist components are averaged over their
/// aliases, matching fourier_multiplier.
CMat grid_mode_matrix(const Geometry& geo, std::size_t idx, const LinearParams& params);

/// exp(t M(xi_k)) for every mode of a grid, stored entry-major for the
/// batched SIMD matvec.
class Propagator {
 public:
  Propagator(const Grid& g, const LinearParams& params, double t);

  const Grid& grid() const { return grid_; }
  double time() const { return t_; }
  StateVector apply(const StateVector& s) const;
  void apply_into(const StateVector& s, StateVector& out) const;

 private:
  Grid grid_;
  double t_;
  int m_;
  CVec mats_;
};

StateVector semigroup_apply(const StateVector& state, double t, const LinearParams& params);

}  // namespace bmhd
