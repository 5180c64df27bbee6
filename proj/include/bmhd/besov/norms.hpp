#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bmhd/besov/ladder.hpp"

namespace bmhd {

struct BesovIndex {
  double s = 0.0;
  double p = 2.0;
  double r = 1.0;

  static BesovIndex make(double s, double p, double r);
};

enum class Part { Full, Low, High };

Part parse_part(const std::string& tag);
std::string to_string(Part part);

/// L^p norms of the dyadic blocks k_min..k_max.
struct BlockNorms {
  int k_min = 0;
  std::vector<double> v;
  bool zero_mode_dropped = false;

  int k_max() const { return k_min + static_cast<int>(v.size()) - 1; }
  double at(int k) const;
};

SpectralField dyadic_block(const SpectralField& f, int k, const DyadicLadder& ladder);

BlockNorms block_norms(const SpectralField& f, double p, const DyadicLadder& ladder);
/// Vector field: pointwise Euclidean magnitude inside L^p.
BlockNorms block_norms(const VectorField& v, double p, const DyadicLadder& ladder);

/// Range of block indices a part sums over.
std::pair<int, int> part_range(Part part, const DyadicLadder& ladder, int k_lo, int k_hi);

/// ell^r over the part's range of 2^{ks} b_k.
double assemble(const BlockNorms& b, double s, double r, Part part, const DyadicLadder& ladder);

double besov_norm(const SpectralField& f, const BesovIndex& idx, const DyadicLadder& ladder);
double besov_norm(const VectorField& v, const BesovIndex& idx, const DyadicLadder& ladder);

/// Low (k <= k0) or high (k >= k0 - overlap) part. r must be 1 or inf.
double hybrid_norm(const SpectralField& f, const BesovIndex& idx, const DyadicLadder& ladder, Part part);
double hybrid_norm(const VectorField& v, const BesovIndex& idx, const DyadicLadder& ladder, Part part);
double hybrid_norm(const SpectralField& f, const BesovIndex& idx, const DyadicLadder& ladder,
                   const std::string& part);

// ---- time-dependent norms ------------------------------------------------

struct BlockHistory {
  std::vector<double> times;
  std::vector<BlockNorms> blocks;  // one entry per time
};

/// ||(2^{ks} ||b_k||_{L^theta_T})||_{ell^r}, trapezoid in time, max for theta = inf.
double chemin_lerner_norm(const BlockHistory& h, double theta, double s, double r, Part part,
                          const DyadicLadder& ladder);
double chemin_lerner_norm(const std::vector<std::pair<double, SpectralField>>& traj, double theta,
                          const BesovIndex& idx, const DyadicLadder& ladder, Part part = Part::Full);
/// Standard L^theta_T(B^s_{p,r}) norm (time norm outside).
double lebesgue_besov_norm(const BlockHistory& h, double theta, double s, double r, Part part,
                           const DyadicLadder& ladder);

/// Time L^theta norm of samples g(t_i) by the trapezoid rule on g^theta.
double time_norm(const std::vector<double>& t, const std::vector<double>& g, double theta);

// ---- continuous radial quadrature -----------------------------------------

/// |S^{d-1}| / (2 pi)^d, so that ||f||_{L^2}^2 = c_d int |f^(rho)|^2 rho^{d-1} drho.
double sphere_constant(int d);

/// Gauss-Legendre nodes over octaves [2^j, 2^{j+1}], j = j_lo..j_hi. density
/// holds the (angle-averaged) energy sum_i |f^_i(rho)|^2 at each node.
struct RadialSamples {
  std::vector<double> rho;
  std::vector<double> weight;
  std::vector<double> density;
};

RadialSamples radial_nodes(int j_lo, int j_hi, const std::function<int(int)>& nodes_for_octave);
RadialSamples radial_nodes(int j_lo, int j_hi, int nodes_per_octave = 64);

BlockNorms radial_block_norms(const RadialSamples& s, int d, const DyadicLadder& ladder);

/// Radially symmetric field given by per-component profiles; p must be 2.
double radial_quadrature_norm(const std::vector<std::function<cplx(double)>>& profile, int d,
                              const BesovIndex& idx, const DyadicLadder& ladder, Part part,
                              int nodes_per_octave = 64);
BlockNorms radial_quadrature_blocks(const std::vector<std::function<cplx(double)>>& profile, int d,
                                    const DyadicLadder& ladder, int nodes_per_octave = 64);

}  // namespace bmhd
