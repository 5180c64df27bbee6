#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "bmhd/linear/semigroup.hpp"
#include "bmhd/spectral/field.hpp"

namespace bmhd {

/// Barotropic gamma law P(rho) = rho^gamma / gamma (so P'(1) = 1) and affine
/// viscosities mu(rho) = mu_inf + mu_slope (rho - 1), likewise lambda, with
/// lambda_inf = 1 - 2 mu_inf.
struct FluidLaws {
  double mu_inf = 0.5;
  double gamma = 1.4;
  double mu_slope = 0.2;
  double lambda_slope = -0.2;

  static FluidLaws make(double mu_inf, double gamma, double mu_slope, double lambda_slope);

  double lambda_inf() const { return 1.0 - 2.0 * mu_inf; }
  double pi1(double a) const { return a / (1.0 + a); }
  double pi2(double a) const { return std::pow(1.0 + a, gamma - 2.0) - 1.0; }
  double mu_tilde(double a) const { return mu_slope * a; }
  double lambda_tilde(double a) const { return lambda_slope * a; }
  double mu_tilde_prime(double) const { return mu_slope; }
  double lambda_tilde_prime(double) const { return lambda_slope; }
  std::string describe() const;
};

enum class Law { Pi1, Pi2, MuTilde, LambdaTilde };
Law parse_law(const std::string& name);
std::string to_string(Law law);
double law_value(const FluidLaws& laws, Law law, double a);

/// Pointwise F(a) in physical space, transformed back and dealiased.
SpectralField composition_apply(const FluidLaws& laws, Law law, const SpectralField& a, double dealias = 2.0 / 3.0);

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double dealias = 2.0 / 3.0;
  bool cfl_check = true;
  double cfl_limit = 0.5;
  int snapshot_stride = 100;  // steps between stored snapshots
  bool nonlinear = true;      // false zeroes (f, g, m)

  void validate() const;
};

/// Right-hand sides of the perturbation system. g_parts holds g1..g6 when
/// requested; their sum equals g up to round-off.
struct NonlinearTerms {
  SpectralField f;
  VectorField g;
  VectorField m;
  std::array<VectorField, 6> g_parts;
  bool has_parts = false;
  double aliasing_fraction = 0.0;  // upper-third energy share of the raw products
  double min_density = 1.0;        // min over the grid of 1 + a

  StateVector as_state() const;
};

NonlinearTerms nonlinear_terms(const StateVector& s, const FluidLaws& laws, const LinearParams& params,
                               double dealias = 2.0 / 3.0, bool parts = false);

struct StepDiagnostics {
  double div_drift = 0.0;  // divergence_defect of H before re-projection
  double cfl = 0.0;        // dt max|u| / dx
  double aliasing = 0.0;
  double min_density = 1.0;
};

/// Integrating-factor Heun:
///   U* = G(dt)(U + dt N(U)),  U+ = G(dt)(U + dt/2 N(U)) + dt/2 N(U*)
/// followed by Hermitian symmetrization and Leray re-projection of H.
class Stepper {
 public:
  Stepper(const Grid& g, const LinearParams& params, const FluidLaws& laws, const SolverConfig& cfg);

  /// (f, g, m) as a state, or zero when nonlinear terms are off.
  StateVector source(const StateVector& u, StepDiagnostics* diag = nullptr) const;
  /// One step given N(U); n_u may be null to have it evaluated.
  StateVector step(const StateVector& u, const StateVector* n_u, StepDiagnostics* diag = nullptr) const;

  const Propagator& propagator() const { return prop_; }
  const SolverConfig& config() const { return cfg_; }
  const LinearParams& params() const { return params_; }
  const FluidLaws& laws() const { return laws_; }

 private:
  Grid grid_;
  LinearParams params_;
  FluidLaws laws_;
  SolverConfig cfg_;
  Propagator prop_;
};

StateVector step(const StateVector& state, const FluidLaws& laws, const LinearParams& params, const SolverConfig& cfg);

/// w = grad (-Delta)^{-1} (a - div u).
VectorField effective_velocity(const StateVector& s);

/// Streaming trapezoid for int_0^t G(t - tau) N(tau) dtau:
///   I_{n+1} = G(dt)(I_n + dt/2 N_n) + dt/2 N_{n+1}.
class DuhamelAccumulator {
 public:
  DuhamelAccumulator(const Propagator& g_dt, const Grid& grid);
  void push(const StateVector& n_prev, const StateVector& n_next);
  const StateVector& integral() const { return integral_; }

 private:
  const Propagator& g_dt_;
  StateVector integral_;
  StateVector work_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
};

struct RunResult {
  Trajectory traj;
  StateVector final_state;
  int steps = 0;
  double duhamel_residual = 0.0;
  double max_div_drift = 0.0;
  double max_cfl = 0.0;
  double max_aliasing = 0.0;
  double min_density = 1.0;
  bool aliasing_flag = false;  // upper-third share above 1e-8
};

/// Integrates from 0 to cfg.t_end, storing every snapshot_stride-th state and
/// accumulating the Duhamel residual |U(T) - G(T)U0 - int| / |U(T)|.
/// on_snapshot, when set, receives each stored state.
RunResult simulate(const StateVector& u0, const LinearParams& params, const FluidLaws& laws, const SolverConfig& cfg,
                   const std::function<void(double, const StateVector&)>& on_snapshot = {});

/// Duhamel residual of a stored, uniformly spaced trajectory (trapezoid in
/// time over the stored samples).
double duhamel_residual(const Trajectory& traj, const LinearParams& params, const FluidLaws& laws,
                        double dealias = 2.0 / 3.0, bool nonlinear = true);

struct ResidualReport {
  int stride = 1;
  double spacing = 0.0;
  double a_equation = 0.0;   // d_t a + a - f + div w
  double w_equation = 0.0;   // d_t w - Delta w - grad(-Delta)^{-1}(f - div g) - w + (-Delta)^{-1} grad a + grad(I.H)
  double pu_equation = 0.0;  // d_t Pu - mu Delta Pu - I.grad H - P g
  std::vector<double> centers;
};

/// Relative residuals of the (a, w) and Pu equations with centered time
/// differences of width stride * spacing, at snapshot indices in
/// [first, last] (defaults: every admissible center).
ResidualReport high_freq_residuals(const Trajectory& traj, const LinearParams& params, const FluidLaws& laws,
                                   int stride, double dealias = 2.0 / 3.0, bool nonlinear = true, int first = -1,
                                   int last = -1);

}  // namespace bmhd
