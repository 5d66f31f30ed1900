#pragma once

#include <array>
#include <vector>

namespace gavms {

/// Quadrature on a reference cell. For triangles, points are barycentric
/// (lambda0, lambda1, lambda2) on the unit right triangle and the weights sum to
/// 1/2. For edges, only lambda1 is used (the coordinate s in [0,1]) and the weights sum to 1.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;  ///< polynomial degree integrated exactly

  std::size_t size() const { return weights.size(); }
};

/// Symmetric Gauss rule on the reference triangle exact for polynomials of the
/// requested degree (1..6).
QuadratureRule triangle_quadrature(int degree);

/// Gauss-Legendre rule with the given number of points (1..5) on [0,1].
QuadratureRule edge_quadrature(int points);

}  // namespace gavms
