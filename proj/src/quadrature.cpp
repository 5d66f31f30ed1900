#include "gavms/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gavms {

namespace {

// Symmetric orbits with weights normalised to sum 1 over the triangle.
void add_centroid(QuadratureRule& q, double w) {
  q.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  q.weights.push_back(w);
}

void add_orbit3(QuadratureRule& q, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  for (auto p : {std::array<double, 3>{b, a, a}, {a, b, a}, {a, a, b}}) {
    q.points.push_back(p);
    q.weights.push_back(w);
  }
}

void add_orbit6(QuadratureRule& q, double a, double b, double w) {
  const double c = 1.0 - a - b;
  for (auto p : {std::array<double, 3>{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}}) {
    q.points.push_back(p);
    q.weights.push_back(w);
  }
}

}  // namespace

QuadratureRule triangle_quadrature(int degree) {
  QuadratureRule q;
  switch (degree) {
    case 1:
      add_centroid(q, 1.0);
      q.degree = 1;
      break;
    case 2:
      add_orbit3(q, 1.0 / 6.0, 1.0 / 3.0);
      q.degree = 2;
      break;
    case 3:
    case 4:
      // Dunavant degree-4 rule; positive weights, also serves degree 3.
      add_orbit3(q, 0.44594849091596488631832925388305, 0.22338158967801146569500700843312);
      add_orbit3(q, 0.091576213509770743459571463402202, 0.10995174365532186763832632490021);
      q.degree = 4;
      break;
    case 5:
      add_centroid(q, 0.225);
      add_orbit3(q, 0.47014206410511508977044120951345, 0.13239415278850618073764938783315);
      add_orbit3(q, 0.10128650732345633880098736191512, 0.12593918054482715259568394550018);
      q.degree = 5;
      break;
    case 6:
      add_orbit3(q, 0.24928674517091042129163855310702, 0.11678627572637936602528961138558);
      add_orbit3(q, 0.063089014491502228340331602870819, 0.050844906370206816920936809106869);
      add_orbit6(q, 0.053145049844816947353249671631398, 0.31035245103378440541660773395655,
                 0.082851075618373575193553456420442);
      q.degree = 6;
      break;
    default:
      throw std::invalid_argument("unsupported triangle quadrature degree " + std::to_string(degree));
  }
  for (double& w : q.weights) w *= 0.5;
  return q;
}

QuadratureRule edge_quadrature(int points) {
  if (points < 1 || points > 5)
    throw std::invalid_argument("unsupported edge quadrature size " + std::to_string(points));
  QuadratureRule q;
  q.degree = 2 * points - 1;
  const int n = points;
  // Newton iteration on the Legendre polynomial P_n, nodes mapped from [-1,1].
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double s = 0.5 * (1.0 - x);
    q.points.push_back({1.0 - s, s, 0.0});
    q.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return q;
}

}  // namespace gavms
