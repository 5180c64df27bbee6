#pragma once

#include <functional>
#include <vector>

#include "bmhd/spectral/field.hpp"

namespace bmhd::harness {

/// Pointwise data handed to a zero-set integrand.
struct PointData {
  double f = 0.0;
  double grad2 = 0.0;  // |grad f|^2
  double lap = 0.0;    // Delta f
};

struct LineQuadratureOptions {
  double tolerance = 1e-10;  // relative, per output
  int max_panels = 6000;
};

struct LineQuadratureResult {
  std::vector<double> values;
  double error_estimate = 0.0;  // relative, worst output
  int panels = 0;
  bool converged = false;
};

/// Integrals over the 2D periodic box of functions that are smooth away from
/// {f = 0} but may have kinks there (|f|^q with q not even). Each x-line is
/// split at the zeros of the trigonometric polynomial f(., y), found as
/// companion-matrix roots on the unit circle, and integrated with
/// Gauss-Legendre pieces; the y-integral is adaptive Gauss-Kronrod. Accuracy
/// is independent of the grid the field is stored on.
LineQuadratureResult zero_set_integrals(const SpectralField& f, int n_out,
                                        const std::function<void(const PointData&, double*)>& integrand,
                                        const LineQuadratureOptions& opts = {});

}  // namespace bmhd::harness
