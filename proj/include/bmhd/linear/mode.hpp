#pragma once

#include <Eigen/Dense>
#include <complex>

#include "bmhd/spectral/grid.hpp"

namespace bmhd {

using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;
using CCol = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, 1, 0, 8, 1>;

/// Linearization about (rho, B) = (1, I) with nu = 2 mu + lambda = 1 and unit
/// sound speed.
struct LinearParams {
  int dim = 3;
  double mu_inf = 0.5;
  double lambda_inf = 0.0;
  Vec3 I{0.0, 0.0, 1.0};

  /// lambda_inf = 1 - 2 mu_inf; I must be a unit vector (or zero when
  /// allow_zero_field, used for the decoupled heat checks).
  static LinearParams make(int dim, double mu_inf, const Vec3& I, bool allow_zero_field = false);

  double mu_bar() const { return mu_inf < 1.0 ? mu_inf : 1.0; }
  double sigma() const { return 0.5 * mu_bar(); }
  double field_norm() const;
};

/// (1+2d) x (1+2d) symbol at xi, unknowns ordered (a, u_1..u_d, H_1..H_d).
struct ModeMatrix {
  Vec3 xi{0.0, 0.0, 0.0};
  int dim = 3;
  CMat m;
};

ModeMatrix mode_matrix(const Vec3& xi, const LinearParams& params);

/// Scaling-and-squaring with diagonal Pade approximants of order 3..13.
CMat expm(const CMat& a);

/// exp(t M) U0.
CCol propagate_mode(const ModeMatrix& m, double t, const CCol& u0);

}  // namespace bmhd
