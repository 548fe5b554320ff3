#pragma once

#include <vector>

#include "common.hpp"

namespace isopar {

struct GaussLegendre {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

// n-point Gauss-Legendre rule mapped to [0, 1]; exact for degree 2n - 1.
GaussLegendre gauss_legendre(int n);

struct TriangleQuadrature {
  std::vector<Vec2> points;  // reference coordinates
  std::vector<double> weights;
  int exact_degree = 0;
};

// Collapsed (Duffy) tensor Gauss rule on the reference triangle, exact for
// polynomials of total degree <= `degree`. All weights are positive.
TriangleQuadrature triangle_quadrature(int degree);

}  // namespace isopar
