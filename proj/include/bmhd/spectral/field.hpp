#pragma once

#include <cstddef>
#include <vector>

#include "bmhd/common/aligned.hpp"
#include "bmhd/spectral/grid.hpp"

namespace bmhd {

/// Fourier coefficients c_k = N^{-d} sum_x f(x) e^{-i k.x}, full complex
/// storage in row-major index order.
struct SpectralField {
  Grid grid;
  CVec c;

  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid(g), c(g.size(), cplx(0.0)) {}

  std::size_t size() const { return c.size(); }
  cplx& operator[](std::size_t i) { return c[i]; }
  const cplx& operator[](std::size_t i) const { return c[i]; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  void axpy(cplx alpha, const SpectralField& x);
};

struct PhysicalField {
  Grid grid;
  RVec v;

  PhysicalField() = default;
  explicit PhysicalField(const Grid& g) : grid(g), v(g.size(), 0.0) {}

  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  const double& operator[](std::size_t i) const { return v[i]; }
};

using VectorField = std::vector<SpectralField>;

/// Perturbation state (a, u_1..u_d, H_1..H_d) as 1 + 2d spectral fields.
struct StateVector {
  Grid grid;
  std::vector<SpectralField> f;

  StateVector() = default;
  explicit StateVector(const Grid& g);

  int dim() const { return grid.dim; }
  int components() const { return 1 + 2 * grid.dim; }
  SpectralField& a() { return f[0]; }
  const SpectralField& a() const { return f[0]; }
  SpectralField& u(int i) { return f[1 + i]; }
  const SpectralField& u(int i) const { return f[1 + i]; }
  SpectralField& H(int i) { return f[1 + grid.dim + i]; }
  const SpectralField& H(int i) const { return f[1 + grid.dim + i]; }
  VectorField velocity() const;
  VectorField magnetic() const;
  void set_velocity(const VectorField& v);
  void set_magnetic(const VectorField& v);

  StateVector& operator+=(const StateVector& o);
  StateVector& operator*=(double s);
  void axpy(double alpha, const StateVector& x);
  bool finite() const;
};

}  // namespace bmhd
