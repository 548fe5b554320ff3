#include "quadrature.hpp"

#include <cmath>

namespace isopar {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::Precondition, "gauss_legendre: n must be positive");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] -> [0, 1].
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.5;
  return rule;
}

TriangleQuadrature triangle_quadrature(int degree) {
  if (degree < 0) throw Error(ErrorCode::Precondition, "triangle_quadrature: negative degree");
  // x = u, y = v (1 - u), Jacobian (1 - u): degree + 1 in u, degree in v.
  const int n = (degree + 2 + 1) / 2;
  const GaussLegendre gl = gauss_legendre(n);
  TriangleQuadrature q;
  q.exact_degree = degree;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = gl.nodes[i];
      const double v = gl.nodes[j];
      q.points.push_back({u, v * (1.0 - u)});
      q.weights.push_back(gl.weights[i] * gl.weights[j] * (1.0 - u));
    }
  }
  return q;
}

}  // namespace isopar
