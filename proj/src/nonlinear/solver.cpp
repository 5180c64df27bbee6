#include "bmhd/nonlinear/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bmhd/common/error.hpp"
#include "bmhd/simd/kernels.hpp"
#include "bmhd/spectral/operators.hpp"

namespace bmhd {

namespace {

constexpr double kVacuum = 0.1;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double state_l2(const StateVector& s) {
  double acc = 0.0;
  for (const auto& f : s.f) acc += simd::kernels().sum_norm2(f.c.data(), f.size());
  return std::sqrt(acc * s.grid.volume());
}

// share of |c|^2 sitting in modes the dealiasing rule removes
double upper_share(const SpectralField& f, double fraction) {
  const Geometry& geo = geometry(f.grid);
  const double cut = fraction * (f.grid.n / 2);
  double hi = 0.0, tot = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double e = std::norm(f.c[i]);
    tot += e;
    for (int j = 0; j < f.grid.dim; ++j)
      if (std::abs(geo.k[i][j]) >= cut) {
        hi += e;
        break;
      }
  }
  return tot > 0.0 ? hi / tot : 0.0;
}

}  // namespace

FluidLaws FluidLaws::make(double mu_inf, double gamma, double mu_slope, double lambda_slope) {
  require(mu_inf > 0.0 && mu_inf <= 1.0, ErrorKind::Config, "laws.mu_inf must lie in (0, 1] so that lambda_inf + 2 mu_inf = 1 keeps mu(1) > 0");
  require(gamma >= 1.0, ErrorKind::Config, "laws.gamma must be >= 1");
  require(std::isfinite(mu_slope) && std::isfinite(lambda_slope), ErrorKind::Config, "viscosity slopes must be finite");
  FluidLaws l;
  l.mu_inf = mu_inf;
  l.gamma = gamma;
  l.mu_slope = mu_slope;
  l.lambda_slope = lambda_slope;
  return l;
}

std::string FluidLaws::describe() const {
  return "P(rho)=rho^gamma/gamma, gamma=" + fmt(gamma) + "; mu(rho)=" + fmt(mu_inf) + "+" + fmt(mu_slope) +
         "(rho-1); lambda(rho)=" + fmt(lambda_inf()) + "+" + fmt(lambda_slope) + "(rho-1)";
}

Law parse_law(const std::string& name) {
  if (name == "pi1") return Law::Pi1;
  if (name == "pi2") return Law::Pi2;
  if (name == "mu_tilde") return Law::MuTilde;
  if (name == "lambda_tilde") return Law::LambdaTilde;
  fail(ErrorKind::Input, "unknown composition law '" + name + "' (pi1, pi2, mu_tilde, lambda_tilde)");
}

std::string to_string(Law law) {
  switch (law) {
    case Law::Pi1: return "pi1";
    case Law::Pi2: return "pi2";
    case Law::MuTilde: return "mu_tilde";
    case Law::LambdaTilde: return "lambda_tilde";
  }
  return "?";
}

double law_value(const FluidLaws& l, Law law, double a) {
  switch (law) {
    case Law::Pi1: return l.pi1(a);
    case Law::Pi2: return l.pi2(a);
    case Law::MuTilde: return l.mu_tilde(a);
    case Law::LambdaTilde: return l.lambda_tilde(a);
  }
  return 0.0;
}

SpectralField composition_apply(const FluidLaws& laws, Law law, const SpectralField& a, double dealias_fraction) {
  PhysicalField x = inverse_transform(a);
  double lo = 1e300;
  for (double v : x.v) lo = std::min(lo, 1.0 + v);
  if (law == Law::Pi1 || law == Law::Pi2)
    require(lo >= kVacuum, ErrorKind::State, "composition: min(1+a) = " + fmt(lo) + " is below the vacuum guard 0.1");
  for (double& v : x.v) v = law_value(laws, law, v);
  SpectralField out = transform(x);
  dealias(out, dealias_fraction);
  return out;
}

void SolverConfig::validate() const {
  require(std::isfinite(dt) && dt > 0.0, ErrorKind::Config, "solver.dt must be positive");
  require(std::isfinite(t_end) && t_end >= 0.0, ErrorKind::Config, "solver.t_end must be nonnegative");
  require(dealias > 0.0 && dealias <= 1.0, ErrorKind::Config, "solver.dealias must lie in (0, 1]");
  require(snapshot_stride >= 1, ErrorKind::Config, "solver.snapshot_stride must be >= 1");
  require(cfl_limit > 0.0, ErrorKind::Config, "solver.cfl_limit must be positive");
}

StateVector NonlinearTerms::as_state() const {
  StateVector s(f.grid);
  s.f[0] = f;
  const int d = f.grid.dim;
  for (int i = 0; i < d; ++i) {
    s.f[1 + i] = g[i];
    s.f[1 + d + i] = m[i];
  }
  return s;
}

NonlinearTerms nonlinear_terms(const StateVector& s, const FluidLaws& laws, const LinearParams& params,
                               double dealias_fraction, bool parts) {
  const Grid& gr = s.grid;
  const int d = gr.dim;
  require(params.dim == d, ErrorKind::Dimension, "nonlinear terms: parameter dimension differs from grid");
  require(std::abs(laws.mu_inf - params.mu_inf) <= 1e-14, ErrorKind::Config,
          "fluid laws and linear parameters disagree on mu_inf");

  // spectral inputs: a, u, H, grad a, grad u, grad H, Lap u, grad div u
  std::vector<SpectralField> spec;
  spec.reserve(5 + 3 * d + 2 * d * d);
  spec.push_back(s.a());
  for (int i = 0; i < d; ++i) spec.push_back(s.u(i));
  for (int i = 0; i < d; ++i) spec.push_back(s.H(i));
  for (int k = 0; k < d; ++k) spec.push_back(derivative(s.a(), k));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) spec.push_back(derivative(s.u(i), k));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) spec.push_back(derivative(s.H(i), k));
  for (int i = 0; i < d; ++i) spec.push_back(laplacian(s.u(i)));
  {
    VectorField uv = s.velocity();
    const SpectralField div = divergence(uv);
    for (int i = 0; i < d; ++i) spec.push_back(derivative(div, i));
  }
  std::vector<const SpectralField*> ptr;
  for (const auto& f : spec) ptr.push_back(&f);
  const std::vector<PhysicalField> ph = inverse_transform_many(ptr);

  std::size_t at = 0;
  const PhysicalField& A = ph[at++];
  std::vector<const PhysicalField*> U(d), H(d), GA(d), LU(d), GD(d);
  std::vector<std::vector<const PhysicalField*>> GU(d, std::vector<const PhysicalField*>(d)), GH = GU;
  for (int i = 0; i < d; ++i) U[i] = &ph[at++];
  for (int i = 0; i < d; ++i) H[i] = &ph[at++];
  for (int k = 0; k < d; ++k) GA[k] = &ph[at++];
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) GU[i][k] = &ph[at++];  // d_k u_i
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) GH[i][k] = &ph[at++];  // d_k H_i
  for (int i = 0; i < d; ++i) LU[i] = &ph[at++];
  for (int i = 0; i < d; ++i) GD[i] = &ph[at++];

  NonlinearTerms out;
  const std::size_t n = gr.size();
  double lo = 1e300;
  for (std::size_t x = 0; x < n; ++x) lo = std::min(lo, 1.0 + A.v[x]);
  out.min_density = lo;
  require(lo >= kVacuum, ErrorKind::State, "min(1+a) = " + fmt(lo) + " is below the vacuum guard 0.1");

  const double mu = params.mu_inf, lam = params.lambda_inf;
  std::vector<PhysicalField> au(d, PhysicalField(gr)), gt(d, PhysicalField(gr)), mt(d, PhysicalField(gr));
  std::vector<PhysicalField> gp(parts ? 6 * d : 0, PhysicalField(gr));
  for (std::size_t x = 0; x < n; ++x) {
    const double a = A.v[x];
    const double inv = 1.0 / (1.0 + a);
    const double p1 = laws.pi1(a), p2 = laws.pi2(a);
    const double mt_ = laws.mu_tilde(a), lt = laws.lambda_tilde(a);
    const double mtp = laws.mu_tilde_prime(a), ltp = laws.lambda_tilde_prime(a);
    double divu = 0.0;
    for (int k = 0; k < d; ++k) divu += GU[k][k]->v[x];
    for (int i = 0; i < d; ++i) {
      au[i].v[x] = a * U[i]->v[x];
      double adv = 0.0, hgradu = 0.0, ugradh = 0.0, dga = 0.0, igradh = 0.0, gradih = 0.0, hgradh = 0.0,
             gradh2 = 0.0;
      for (int k = 0; k < d; ++k) {
        adv += U[k]->v[x] * GU[i][k]->v[x];
        hgradu += H[k]->v[x] * GU[i][k]->v[x];
        ugradh += U[k]->v[x] * GH[i][k]->v[x];
        dga += 0.5 * (GU[i][k]->v[x] + GU[k][i]->v[x]) * GA[k]->v[x];
        igradh += params.I[k] * GH[i][k]->v[x];
        gradih += params.I[k] * GH[k][i]->v[x];
        hgradh += H[k]->v[x] * GH[i][k]->v[x];
        gradh2 += H[k]->v[x] * GH[k][i]->v[x];
      }
      const double Au = mu * LU[i]->v[x] + (lam + mu) * GD[i]->v[x];
      const double divD = 0.5 * (LU[i]->v[x] + GD[i]->v[x]);
      const double g1 = -adv;
      const double g2 = -p2 * GA[i]->v[x];
      const double g3 = inv * (2.0 * mt_ * divD + lt * GD[i]->v[x]) - p1 * Au;
      const double g4 = inv * (2.0 * mtp * dga + ltp * divu * GA[i]->v[x]);
      const double g5 = p1 * (gradih - igradh);
      const double g6 = -inv * (gradh2 - hgradh);
      // monolithic: -u.grad u - pi1 Au - pi2 grad a + div(2 mu~ D + lambda~ div u Id)/(1+a) + ...
      const double stress = 2.0 * mt_ * divD + 2.0 * mtp * dga + lt * GD[i]->v[x] + ltp * divu * GA[i]->v[x];
      gt[i].v[x] = -adv - p1 * Au - p2 * GA[i]->v[x] + inv * stress + p1 * (gradih - igradh) -
                   inv * (gradh2 - hgradh);
      mt[i].v[x] = -H[i]->v[x] * divu + hgradu - ugradh;
      if (parts) {
        gp[0 * d + i].v[x] = g1;
        gp[1 * d + i].v[x] = g2;
        gp[2 * d + i].v[x] = g3;
        gp[3 * d + i].v[x] = g4;
        gp[4 * d + i].v[x] = g5;
        gp[5 * d + i].v[x] = g6;
      }
    }
  }

  std::vector<const PhysicalField*> fw;
  for (auto& f : au) fw.push_back(&f);
  for (auto& f : gt) fw.push_back(&f);
  for (auto& f : mt) fw.push_back(&f);
  for (auto& f : gp) fw.push_back(&f);
  std::vector<SpectralField> sp = transform_many(fw);
  double share = 0.0;
  for (const auto& f : sp) share = std::max(share, upper_share(f, dealias_fraction));
  out.aliasing_fraction = share;
  for (auto& f : sp) dealias(f, dealias_fraction);

  VectorField auv(sp.begin(), sp.begin() + d);
  out.f = divergence(auv);
  out.f *= -1.0;
  out.g.assign(sp.begin() + d, sp.begin() + 2 * d);
  out.m.assign(sp.begin() + 2 * d, sp.begin() + 3 * d);
  if (parts) {
    for (int p = 0; p < 6; ++p)
      out.g_parts[p].assign(sp.begin() + (3 + p) * d, sp.begin() + (4 + p) * d);
    out.has_parts = true;
  }
  return out;
}

// ---- stepping ------------------------------------------------------------

Stepper::Stepper(const Grid& g, const LinearParams& params, const FluidLaws& laws, const SolverConfig& cfg)
    : grid_(g), params_(params), laws_(laws), cfg_(cfg), prop_((cfg.validate(), g), params, cfg.dt) {}

StateVector Stepper::source(const StateVector& u, StepDiagnostics* diag) const {
  if (cfg_.cfl_check || diag) {
    double umax = 0.0;
    std::vector<const SpectralField*> uf;
    for (int i = 0; i < grid_.dim; ++i) uf.push_back(&u.u(i));
    for (const auto& p : inverse_transform_many(uf))
      umax = std::max(umax, simd::kernels().max_abs(p.v.data(), p.size()));
    const double cfl = cfg_.dt * umax / grid_.dx();
    if (diag) diag->cfl = std::max(diag->cfl, cfl);
    if (cfg_.cfl_check)
      require(cfl <= cfg_.cfl_limit, ErrorKind::Numeric,
              "CFL number " + fmt(cfl) + " exceeds the limit " + fmt(cfg_.cfl_limit));
  }
  if (!cfg_.nonlinear) return StateVector(grid_);
  const NonlinearTerms nt = nonlinear_terms(u, laws_, params_, cfg_.dealias, false);
  if (diag) {
    diag->aliasing = std::max(diag->aliasing, nt.aliasing_fraction);
    diag->min_density = std::min(diag->min_density, nt.min_density);
  }
  return nt.as_state();
}

StateVector Stepper::step(const StateVector& u, const StateVector* n_u, StepDiagnostics* diag) const {
  require(u.grid == grid_, ErrorKind::Dimension, "stepper applied on a different grid");
  StateVector n0 = n_u ? *n_u : source(u, diag);
  const double dt = cfg_.dt;
  StateVector tmp = u;
  tmp.axpy(dt, n0);
  const StateVector pred = prop_.apply(tmp);
  const StateVector n1 = source(pred, diag);
  tmp = u;
  tmp.axpy(0.5 * dt, n0);
  StateVector next = prop_.apply(tmp);
  next.axpy(0.5 * dt, n1);

  const VectorField h = next.magnetic();
  const double drift = divergence_defect(h);
  if (diag) diag->div_drift = std::max(diag->div_drift, drift);
  for (auto& f : next.f) {
    hermitian_symmetrize(f);
    dealias(f, cfg_.dealias);
  }
  next.set_magnetic(leray_project(next.magnetic()));
  if (!next.finite()) fail(ErrorKind::BlowUp, "non-finite state after a step of size " + fmt(dt));
  return next;
}

StateVector step(const StateVector& state, const FluidLaws& laws, const LinearParams& params, const SolverConfig& cfg) {
  return Stepper(state.grid, params, laws, cfg).step(state, nullptr);
}

VectorField effective_velocity(const StateVector& s) {
  SpectralField r = s.a();
  r -= divergence(s.velocity());
  return gradient(inverse_neg_laplacian(r));
}

DuhamelAccumulator::DuhamelAccumulator(const Propagator& g_dt, const Grid& grid)
    : g_dt_(g_dt), integral_(grid), work_(grid) {}

void DuhamelAccumulator::push(const StateVector& n_prev, const StateVector& n_next) {
  const double h = g_dt_.time();
  work_ = integral_;
  work_.axpy(0.5 * h, n_prev);
  g_dt_.apply_into(work_, integral_);
  integral_.axpy(0.5 * h, n_next);
}

RunResult simulate(const StateVector& u0, const LinearParams& params, const FluidLaws& laws, const SolverConfig& cfg,
                   const std::function<void(double, const StateVector&)>& on_snapshot) {
  cfg.validate();
  const long nsteps = std::lround(cfg.t_end / cfg.dt);
  require(std::abs(nsteps * cfg.dt - cfg.t_end) <= 1e-9 * std::max(1.0, cfg.t_end), ErrorKind::Config,
          "solver.t_end must be a whole number of steps");
  const Stepper st(u0.grid, params, laws, cfg);
  RunResult res;
  StateVector u = u0;
  StepDiagnostics first;
  StateVector n = st.source(u, &first);
  res.max_cfl = first.cfl;
  res.max_aliasing = first.aliasing;
  res.min_density = first.min_density;
  DuhamelAccumulator acc(st.propagator(), u0.grid);
  auto store = [&](double t, const StateVector& s) {
    res.traj.times.push_back(t);
    res.traj.states.push_back(s);
    if (on_snapshot) on_snapshot(t, s);
  };
  store(0.0, u);
  for (long k = 1; k <= nsteps; ++k) {
    StepDiagnostics diag;
    StateVector next = st.step(u, &n, &diag);
    StateVector n_next = st.source(next, &diag);
    acc.push(n, n_next);
    u = std::move(next);
    n = std::move(n_next);
    res.max_div_drift = std::max(res.max_div_drift, diag.div_drift);
    res.max_cfl = std::max(res.max_cfl, diag.cfl);
    res.max_aliasing = std::max(res.max_aliasing, diag.aliasing);
    res.min_density = std::min(res.min_density, diag.min_density);
    if (k % cfg.snapshot_stride == 0 || k == nsteps) store(k * cfg.dt, u);
  }
  res.steps = static_cast<int>(nsteps);
  res.aliasing_flag = res.max_aliasing > 1e-8;
  StateVector rhs = Propagator(u0.grid, params, cfg.t_end).apply(u0);
  rhs += acc.integral();
  StateVector diff = u;
  diff.axpy(-1.0, rhs);
  const double nu = state_l2(u);
  res.duhamel_residual = nu > 0.0 ? state_l2(diff) / nu : state_l2(diff);
  res.final_state = std::move(u);
  return res;
}

double duhamel_residual(const Trajectory& traj, const LinearParams& params, const FluidLaws& laws,
                        double dealias_fraction, bool nonlinear) {
  const std::size_t n = traj.states.size();
  require(n >= 2 && traj.times.size() == n, ErrorKind::Input, "Duhamel residual needs at least two stored states");
  const double h = traj.times[1] - traj.times[0];
  require(h > 0.0, ErrorKind::Input, "trajectory times must increase");
  for (std::size_t i = 1; i < n; ++i)
    require(std::abs(traj.times[i] - traj.times[i - 1] - h) <= 1e-9 * h, ErrorKind::Input,
            "Duhamel residual needs uniformly spaced samples");
  const Grid& g = traj.states[0].grid;
  SolverConfig cfg;
  cfg.dt = h;
  cfg.dealias = dealias_fraction;
  cfg.nonlinear = nonlinear;
  cfg.cfl_check = false;
  const Stepper st(g, params, laws, cfg);
  DuhamelAccumulator acc(st.propagator(), g);
  StateVector prev = st.source(traj.states[0]);
  for (std::size_t i = 1; i < n; ++i) {
    StateVector next = st.source(traj.states[i]);
    acc.push(prev, next);
    prev = std::move(next);
  }
  StateVector rhs = Propagator(g, params, traj.times.back() - traj.times.front()).apply(traj.states.front());
  rhs += acc.integral();
  StateVector diff = traj.states.back();
  diff.axpy(-1.0, rhs);
  const double nu = state_l2(traj.states.back());
  return nu > 0.0 ? state_l2(diff) / nu : state_l2(diff);
}

namespace {

double vec_l2(const VectorField& v) { return l2_parseval(v); }

VectorField vsub(VectorField a, const VectorField& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

VectorField vscale(VectorField a, double s) {
  for (auto& f : a) f *= s;
  return a;
}

// energy-weighted frequency of the fastest linear mechanism present
double effective_frequency(const StateVector& s, const LinearParams& params) {
  const Geometry& geo = geometry(s.grid);
  const double speed = std::sqrt(1.0 + params.field_norm() * params.field_norm());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    double e = 0.0;
    for (const auto& f : s.f) e += std::norm(f.c[i]);
    const double w = speed * geo.kmag[i] + geo.kmag2[i];
    num += w * w * e;
    den += e;
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

}  // namespace

ResidualReport high_freq_residuals(const Trajectory& traj, const LinearParams& params, const FluidLaws& laws,
                                   int stride, double dealias_fraction, bool nonlinear, int first, int last) {
  const int n = static_cast<int>(traj.states.size());
  require(stride >= 1, ErrorKind::Precondition, "residual stride must be >= 1");
  require(n >= 2 * stride + 1, ErrorKind::Precondition, "trajectory too short for the requested stride");
  const double h = traj.times[1] - traj.times[0];
  for (int i = 1; i < n; ++i)
    require(std::abs(traj.times[i] - traj.times[i - 1] - h) <= 1e-9 * h, ErrorKind::Input,
            "residuals need uniformly spaced snapshots");
  const double width = stride * h;
  const double omega = effective_frequency(traj.states.front(), params);
  require(width * omega < 1.0, ErrorKind::Precondition,
          "snapshot stride too coarse: width " + fmt(width) + " times effective frequency " + fmt(omega) + " >= 1");
  if (first < 0) first = stride;
  if (last < 0) last = n - 1 - stride;
  require(first >= stride && last <= n - 1 - stride && first <= last, ErrorKind::Precondition,
          "residual centers fall outside the trajectory");

  ResidualReport rep;
  rep.stride = stride;
  rep.spacing = width;
  const int d = traj.states.front().dim();
  const double mu = params.mu_inf;
  for (int c = first; c <= last; ++c) {
    const StateVector& s = traj.states[c];
    const StateVector& sp = traj.states[c + stride];
    const StateVector& sm = traj.states[c - stride];
    const double inv2h = 1.0 / (2.0 * width);

    SpectralField f(s.grid);
    VectorField g(d, SpectralField(s.grid));
    if (nonlinear) {
      const NonlinearTerms nt = nonlinear_terms(s, laws, params, dealias_fraction);
      f = nt.f;
      g = nt.g;
    }
    const VectorField w = effective_velocity(s);

    // a-equation
    SpectralField at = sp.a();
    at -= sm.a();
    at *= inv2h;
    const SpectralField divw = divergence(w);
    SpectralField ra = at;
    ra += s.a();
    ra -= f;
    ra += divw;
    const double sa = l2_parseval(at) + l2_parseval(s.a()) + l2_parseval(f) + l2_parseval(divw);
    rep.a_equation = std::max(rep.a_equation, sa > 0.0 ? l2_parseval(ra) / sa : 0.0);

    // w-equation
    const VectorField wt = vscale(vsub(effective_velocity(sp), effective_velocity(sm)), inv2h);
    VectorField lapw(d, SpectralField(s.grid));
    for (int i = 0; i < d; ++i) lapw[i] = laplacian(w[i]);
    SpectralField src = f;
    src -= divergence(g);
    const VectorField forcing = gradient(inverse_neg_laplacian(src));
    const VectorField ga = gradient(inverse_neg_laplacian(s.a()));
    SpectralField ih(s.grid);
    for (int i = 0; i < d; ++i) ih.axpy(params.I[i], s.H(i));
    const VectorField gih = gradient(ih);
    VectorField rw = wt;
    for (int i = 0; i < d; ++i) {
      rw[i] -= lapw[i];
      rw[i] -= forcing[i];
      rw[i] -= w[i];
      rw[i] += ga[i];
      rw[i] += gih[i];
    }
    const double sw = vec_l2(wt) + vec_l2(lapw) + vec_l2(forcing) + vec_l2(w) + vec_l2(ga) + vec_l2(gih);
    rep.w_equation = std::max(rep.w_equation, sw > 0.0 ? vec_l2(rw) / sw : 0.0);

    // Pu equation
    const VectorField pu = leray_project(s.velocity());
    const VectorField put =
        vscale(vsub(leray_project(sp.velocity()), leray_project(sm.velocity())), inv2h);
    VectorField lap(d, SpectralField(s.grid)), igh(d, SpectralField(s.grid));
    for (int i = 0; i < d; ++i) {
      lap[i] = laplacian(pu[i]);
      lap[i] *= mu;
      for (int k = 0; k < d; ++k) igh[i].axpy(params.I[k], derivative(s.H(i), k));
    }
    const VectorField pg = leray_project(g);
    VectorField rp = put;
    for (int i = 0; i < d; ++i) {
      rp[i] -= lap[i];
      rp[i] -= igh[i];
      rp[i] -= pg[i];
    }
    const double spu = vec_l2(put) + vec_l2(lap) + vec_l2(igh) + vec_l2(pg);
    rep.pu_equation = std::max(rep.pu_equation, spu > 0.0 ? vec_l2(rp) / spu : 0.0);
    rep.centers.push_back(traj.times[c]);
  }
  return rep;
}

}  // namespace bmhd
