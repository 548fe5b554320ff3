#pragma once

#include <array>
#include <vector>

#include "common.hpp"
#include "quadrature.hpp"

namespace isopar {

/// Lagrange element of degree r on the reference triangle (0,0), (1,0), (0,1),
/// with nodes on the principal lattice of order r.
///
/// Node order: the three vertices, then r - 1 nodes on each edge (0,1), (1,2),
/// (2,0) running from the first vertex to the second, then the interior node
/// (r = 3 only).
class ReferenceElement {
 public:
  explicit ReferenceElement(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec2>& nodes() const { return nodes_; }
  /// Integer barycentric multi-indices (sum r) of the nodes.
  const std::vector<std::array<int, 3>>& multi_indices() const { return alpha_; }

  /// Basis values / reference gradients at a reference point; `out` has size().
  void values(const Vec2& ref, double* out) const;
  void gradients(const Vec2& ref, Vec2* out) const;

  /// Quadrature exact for total degree 2r + 2, with basis tabulated at its points.
  const TriangleQuadrature& quadrature() const { return quad_; }
  const std::vector<double>& quad_values(int q) const { return qval_[q]; }
  const std::vector<Vec2>& quad_gradients(int q) const { return qgrad_[q]; }

  /// Local node indices on reference edge e (joining vertices e and e+1),
  /// endpoints included, ordered from vertex e to vertex e+1.
  std::vector<int> edge_nodes(int e) const;

 private:
  int degree_;
  std::vector<std::array<int, 3>> alpha_;
  std::vector<Vec2> nodes_;
  TriangleQuadrature quad_;
  std::vector<std::vector<double>> qval_;
  std::vector<std::vector<Vec2>> qgrad_;
};

/// Shared immutable instances for r = 1, 2, 3.
const ReferenceElement& reference_element(int degree);

}  // namespace isopar
