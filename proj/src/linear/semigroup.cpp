#include "bmhd/linear/semigroup.hpp"

#include "bmhd/common/error.hpp"
#include "bmhd/common/parallel.hpp"
#include "bmhd/simd/kernels.hpp"

namespace bmhd {

CMat grid_mode_matrix(const Geometry& geo, std::size_t idx, const LinearParams& params) {
  const int d = geo.grid.dim;
  Vec3 xi{0.0, 0.0, 0.0};
  for (int j = 0; j < d; ++j) xi[j] = geo.xi[j][idx];
  const std::uint8_t nyq = geo.nyquist[idx];
  if (!nyq) return mode_matrix(xi, params).m;
  CMat acc;
  int count = 0;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    if ((mask & ~static_cast<unsigned>(nyq)) != 0) continue;
    Vec3 x = xi;
    for (int j = 0; j < d; ++j)
      if (mask & (1u << j)) x[j] = -x[j];
    const CMat m = mode_matrix(x, params).m;
    if (count == 0) acc = m;
    else acc += m;
    ++count;
  }
  return acc / static_cast<double>(count);
}

Propagator::Propagator(const Grid& g, const LinearParams& params, double t)
    : grid_(g), t_(t), m_(1 + 2 * g.dim) {
  require(params.dim == g.dim, ErrorKind::Dimension, "propagator: parameter dimension differs from grid");
  require(t >= 0.0, ErrorKind::Domain, "propagation time must be nonnegative");
  const Geometry& geo = geometry(g);
  const std::size_t n = g.size();
  const std::size_t mm = static_cast<std::size_t>(m_) * m_;
  mats_.assign(mm * n, cplx(0.0));
  // one exponential per conjugate pair; the partner gets the conjugate
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < n; ++i)
    if (i <= geo.conj[i]) reps.push_back(i);
  parallel_for(reps.size(), [&](std::size_t r) {
    const std::size_t i = reps[r];
    const CMat e = expm(t * grid_mode_matrix(geo, i, params));
    const std::size_t j = geo.conj[i];
    for (int a = 0; a < m_; ++a)
      for (int b = 0; b < m_; ++b) {
        const std::size_t slot = static_cast<std::size_t>(a * m_ + b) * n;
        mats_[slot + i] = e(a, b);
        if (j != i) mats_[slot + j] = std::conj(e(a, b));
      }
  });
}

void Propagator::apply_into(const StateVector& s, StateVector& out) const {
  require(s.grid == grid_, ErrorKind::Dimension, "propagator applied on a different grid");
  if (out.grid != grid_ || out.f.size() != s.f.size()) out = StateVector(grid_);
  std::vector<const cplx*> in(m_);
  std::vector<cplx*> dst(m_);
  for (int c = 0; c < m_; ++c) {
    in[c] = s.f[c].c.data();
    dst[c] = out.f[c].c.data();
  }
  require(&s != &out, ErrorKind::Input, "propagator input and output must differ");
  simd::kernels().batched_matvec(mats_.data(), static_cast<std::size_t>(m_), in.data(), dst.data(), grid_.size());
}

StateVector Propagator::apply(const StateVector& s) const {
  StateVector out(grid_);
  apply_into(s, out);
  return out;
}

StateVector semigroup_apply(const StateVector& state, double t, const LinearParams& params) {
  if (t == 0.0) return state;
  return Propagator(state.grid, params, t).apply(state);
}

}  // namespace bmhd
