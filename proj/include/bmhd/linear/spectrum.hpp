#pragma once

#include <functional>
#include <ostream>
#include <vector>

#include "bmhd/besov/norms.hpp"
#include "bmhd/decay/trace.hpp"
#include "bmhd/linear/mode.hpp"
#include "bmhd/spectral/field.hpp"

namespace bmhd {

// ---- dissipativity sweep ---------------------------------------------------

struct SweepRow {
  double xi_norm = 0.0;
  int direction = 0;
  std::vector<std::complex<double>> eigenvalues;
  double eta = 0.0;     // |xi|^2 / (1 + |xi|^2)
  double margin = 0.0;  // max Re(lambda) / eta
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double max_margin = -1e300;
  double c = 0.0;  // -max_margin
};

/// n_dir directions (circle or Fibonacci sphere) times n_mag magnitudes
/// log-spaced on [lo, hi].
std::vector<std::pair<int, Vec3>> sweep_samples(int dim, int n_dir, int n_mag, double lo, double hi);

SweepResult eigen_sweep(const std::vector<std::pair<int, Vec3>>& samples, const LinearParams& params);
void write_sweep_csv(std::ostream& os, const SweepResult& r);

// ---- block decay -------------------------------------------------------------

struct BlockFit {
  int k = 0;
  double c = 0.0;         // fitted exponential rate
  double c_scaled = 0.0;  // c / 2^{2k}
  double r_squared = 0.0;
  std::vector<double> norms;
};

/// Least-squares slope of log ||Delta_k G(t) U0||_{L^2} against t.
BlockFit block_decay_fit(const StateVector& state0, int k, const std::vector<double>& t_grid,
                         const LinearParams& params);

// ---- whole-space decay curve ---------------------------------------------

/// Data of the form
///   a^ = a(rho),  u^ = -i (xi/|xi|) v(rho) + P_xi I w(rho),  H^ = P_xi I h(rho),
/// with P_xi the projection orthogonal to xi. It is axisymmetric about I, so
/// |G(t)U0|^2 only depends on |xi| and the angle to I.
struct RadialData {
  std::function<double(double)> a, v, w, h;

  CCol at(const Vec3& xi, int dim, const Vec3& I) const;
};

struct DecayCurveOptions {
  int radial_min_nodes = 64;
  int angular_min_nodes = 24;
  double nodes_per_radian = 0.4;   // per radian of oscillation phase across the interval
  double negligible = 1e-13;       // relative density below which octaves are skipped
  int k_floor = -40;               // lowest block index
};

/// Low-frequency B^s_{2,1} norm of G(t)U0 at each t for every s, by radial
/// quadrature with an angular average. Series are named "low_B^<s>_2,1";
/// "low_B^-s0_2,inf" is added for reference.
DecayTrace linear_decay_curve(const RadialData& u0, const std::vector<double>& s_values, double p_target,
                              const std::vector<double>& t_grid, const LinearParams& params, int k0,
                              const DecayCurveOptions& opts = {});

/// Block L^2 norms of G(t)U0 (angle-averaged quadrature).
BlockNorms radial_semigroup_blocks(const RadialData& u0, double t, const LinearParams& params,
                                   const DyadicLadder& ladder, const DecayCurveOptions& opts);

std::string series_name_low(double s);

}  // namespace bmhd
