#pragma once

#include <vector>

#include "bmhd/linear/mode.hpp"

namespace bmhd {

using CMat3 = Eigen::Matrix3cd;

/// A = a^, V = i xi.u^/|xi|, W_ij = i(xi_j u_i - xi_i u_j)/|xi|,
/// M_ij = i(xi_j H_i - xi_i H_j)/|xi|. Matrix norms sum over i < j.
struct ModeDecomposition {
  int dim = 3;
  std::complex<double> A{0.0, 0.0};
  std::complex<double> V{0.0, 0.0};
  CMat3 W = CMat3::Zero();
  CMat3 M = CMat3::Zero();

  double norm2() const;
  /// Coordinates (A, V, W_{i<j}, M_{i<j}).
  CCol coords() const;
  static ModeDecomposition from_coords(const CCol& c, int dim);
};

/// Upper-triangle pair count d(d-1)/2.
int skew_pairs(int dim);

ModeDecomposition decompose(const CCol& u, const Vec3& xi, int dim);
CCol reconstruct(const ModeDecomposition& x, const Vec3& xi);

/// Matrix of the (A, V, W, M) system on coords():
///   A' = -|xi| V
///   V' = -|xi|^2 V + |xi| A + I.(i xi M)
///   W' = -mu |xi|^2 W + i (I.xi) M
///   M' = -|xi|^2 M - i Gamma V + i (I.xi) W,  Gamma_ij = xi_j I_i - xi_i I_j
CMat induced_matrix(const Vec3& xi, const LinearParams& params);

/// L^2 = |(A,V,W,M)|^2 + sigma (|xi|^2 |A|^2 - 2 |xi| Re(A conj V)).
double lyapunov(const ModeDecomposition& x, double xi_norm, double sigma);

struct DissipationSample {
  double t = 0.0;
  double lyapunov = 0.0;
  double dlyapunov = 0.0;      // analytic d/dt L^2
  double dissipation = 0.0;    // mu_bar |xi|^2 (|A|^2/2 + |V|^2 + 2|W|^2 + 3|M|^2/2)
  double margin = 0.0;         // (dL^2 + dissipation) / scale, must be <= tol
  double identity[5] = {0, 0, 0, 0, 0};  // A, V, W, M identities and the cross functional, / scale
  double fd_residual = 0.0;    // |FD d/dt|A|^2 - analytic| / scale
};

struct DissipationReport {
  Vec3 xi{0.0, 0.0, 0.0};
  double sigma = 0.0;
  double tolerance = 1e-8;
  double identity_tolerance = 1e-10;
  double fd_tolerance = 1e-9;
  std::vector<DissipationSample> samples;
  bool passed = true;
  bool monotone = true;  // sqrt(L^2) non-increasing across samples
  double worst_margin = -1e300;
  double worst_t = 0.0;
  double worst_identity = 0.0;
  double worst_fd = 0.0;
};

/// Evaluates the dissipation inequality and the per-component energy
/// identities along exp(tM) U0. The default radius cap is 2^{k0+1} 8/3.
DissipationReport lyapunov_dissipation_check(const Vec3& xi, const CCol& u0, const std::vector<double>& t_grid,
                                             const LinearParams& params, double rho0);

}  // namespace bmhd
