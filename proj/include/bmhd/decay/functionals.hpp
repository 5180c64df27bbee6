#pragma once

#include <map>
#include <string>
#include <vector>

#include "bmhd/besov/norms.hpp"
#include "bmhd/decay/trace.hpp"

namespace bmhd {

/// Rejects p outside 2 <= p <= min(4, 2d/(d-2)), p != 4 when d = 2.
void check_admissible(double p, int d);

// ---- rate fitting -----------------------------------------------------------

struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double r_squared = 0.0;
  int samples = 0;
  bool trimmed = false;
};

struct FitOptions {
  bool auto_trim = true;
  double min_r_squared = 0.9;
  int min_samples = 8;
};

/// (L / 2 pi)^2 / 4 for a torus trace, infinity otherwise.
double torus_horizon(const DecayTrace& trace);

/// Least squares of log value against log <t> over samples with t in [t_lo, t_hi].
RateFit fit_rate(const DecayTrace& trace, const std::string& series, double t_lo, double t_hi,
                 const FitOptions& opts = {});

// ---- predicted exponents -------------------------------------------------------

enum class Quantity { Density, VelocityMagnetic };

/// -(s0 + s)/2 with s0 = 2d/p - d/2; needs -s0 < s <= d/p (density) or
/// s <= d/p - 1 (velocity and magnetic field).
double predicted_rate(double p, int d, double s, Quantity q = Quantity::Density);
/// -(d/2)(1 - 1/r) - l/2 for p = 2, 2 <= r <= inf and
/// -d/2 < l + d(1/2 - 1/r) <= d/2 - 1.
double predicted_rate_lr(double p, int d, double r, double l);

// ---- norm histories and functionals -------------------------------------------

/// Block norms of a trajectory. Keys: "a|2", "u|2", "H|2" (L^2 blocks) and
/// "a|p", "u|p", "H|p", "grad_a|p", "grad_u|p", "grad_H|p" (L^p blocks).
struct NormHistory {
  std::vector<double> times;
  DyadicLadder ladder;
  double p = 2.0;
  int dim = 2;
  std::map<std::string, std::vector<BlockNorms>> blocks;

  void append(double t, const StateVector& s);
  BlockHistory history(const std::string& key, std::size_t upto = static_cast<std::size_t>(-1)) const;
  std::size_t size() const { return times.size(); }
};

NormHistory make_history(double p, int dim, const DyadicLadder& ladder);

struct FunctionalTerm {
  std::string name;
  std::string anchor;
  double value = 0.0;
};

struct FunctionalReport {
  double total = 0.0;
  std::vector<FunctionalTerm> terms;
};

/// Six summands: low L~inf(B^{d/2-1}_{2,1}) and L1(B^{d/2+1}_{2,1}) of (a,u,H),
/// high L~inf and L1 of a in B^{d/p}_{p,1}, high L~inf(B^{d/p-1}_{p,1}) and
/// L1(B^{d/p+1}_{p,1}) of (u,H). upto limits the history to a prefix.
FunctionalReport e_p_functional(const NormHistory& h, std::size_t upto = static_cast<std::size_t>(-1));

struct DpOptions {
  double epsilon = 0.05;
  int s_points = 17;
  bool epsilon_zero = false;  // sup over [-s0, d/2+1] with L~inf, alpha = d/p + 1/2
};

FunctionalReport d_p_functional(const NormHistory& h, const DpOptions& opts = {},
                                std::size_t upto = static_cast<std::size_t>(-1));
/// D_p on every prefix [0, t_i]; nondecreasing by construction.
std::vector<double> d_p_running(const NormHistory& h, const DpOptions& opts = {});
std::vector<double> e_p_running(const NormHistory& h);

struct SmallnessReport {
  double e_p0 = 0.0;
  double d_p0 = 0.0;
  double e_threshold = 0.0;
  double d_threshold = 0.0;
  bool e_small = true;
  bool d_small = true;
  std::vector<FunctionalTerm> terms;
};

/// E_{p,0} and D_{p,0} = ||(a0,u0,H0)||^l_{B^{-s0}_{2,inf}}; div H0 must vanish.
SmallnessReport smallness_report(const StateVector& s0, double p, const DyadicLadder& ladder,
                                 double e_threshold = 1e-2, double d_threshold = 1e-2);

}  // namespace bmhd
