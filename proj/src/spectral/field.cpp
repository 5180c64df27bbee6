#include "bmhd/spectral/field.hpp"

#include <cmath>

#include "bmhd/common/error.hpp"
#include "bmhd/simd/kernels.hpp"

namespace bmhd {

namespace {
void same_grid(const Grid& a, const Grid& b) {
  require(a == b, ErrorKind::Dimension, "grid mismatch: " + a.describe() + " vs " + b.describe());
}
}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  same_grid(grid, o.grid);
  simd::kernels().axpy(c.data(), 1.0, o.c.data(), c.size());
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  same_grid(grid, o.grid);
  simd::kernels().axpy(c.data(), -1.0, o.c.data(), c.size());
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& x : c) x *= s;
  return *this;
}

void SpectralField::axpy(cplx alpha, const SpectralField& x) {
  same_grid(grid, x.grid);
  simd::kernels().axpy(c.data(), alpha, x.c.data(), c.size());
}

StateVector::StateVector(const Grid& g) : grid(g) {
  f.assign(static_cast<std::size_t>(1 + 2 * g.dim), SpectralField(g));
}

VectorField StateVector::velocity() const {
  return VectorField(f.begin() + 1, f.begin() + 1 + grid.dim);
}

VectorField StateVector::magnetic() const {
  return VectorField(f.begin() + 1 + grid.dim, f.end());
}

void StateVector::set_velocity(const VectorField& v) {
  require(static_cast<int>(v.size()) == grid.dim, ErrorKind::Dimension, "velocity needs d components");
  for (int i = 0; i < grid.dim; ++i) {
    same_grid(grid, v[i].grid);
    u(i) = v[i];
  }
}

void StateVector::set_magnetic(const VectorField& v) {
  require(static_cast<int>(v.size()) == grid.dim, ErrorKind::Dimension, "magnetic field needs d components");
  for (int i = 0; i < grid.dim; ++i) {
    same_grid(grid, v[i].grid);
    H(i) = v[i];
  }
}

StateVector& StateVector::operator+=(const StateVector& o) {
  require(f.size() == o.f.size(), ErrorKind::Dimension, "state component count mismatch");
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += o.f[i];
  return *this;
}

StateVector& StateVector::operator*=(double s) {
  for (auto& x : f) x *= s;
  return *this;
}

void StateVector::axpy(double alpha, const StateVector& x) {
  require(f.size() == x.f.size(), ErrorKind::Dimension, "state component count mismatch");
  for (std::size_t i = 0; i < f.size(); ++i) f[i].axpy(alpha, x.f[i]);
}

bool StateVector::finite() const {
  for (const auto& x : f)
    for (const auto& v : x.c)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace bmhd
