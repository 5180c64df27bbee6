#pragma once

#include <vector>

namespace bmhd {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (cached, thread-safe).
const GaussRule& gauss_legendre(int n);

/// Integrates f over [a, b] with an n-point rule.
template <class F>
double integrate_gl(F&& f, double a, double b, int n) {
  const GaussRule& g = gauss_legendre(n);
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += g.weights[i] * f(c + h * g.nodes[i]);
  return s * h;
}

}  // namespace bmhd
