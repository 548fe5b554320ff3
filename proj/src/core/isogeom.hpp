#pragma once

#include <array>
#include <memory>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"
#include "meshgen.hpp"
#include "reference.hpp"

namespace isopar::iso {

/// How the exact curved element is built from the arc and the straight triangle.
enum class Blend {
  /// F(l) = sum l_i v_i + l0 l1 beta(xi), xi = (1 + l1 - l0) / 2,
  /// beta = (gamma(s_a + ds xi) - chord(xi)) / (xi (1 - xi)).
  /// Smooth on the closed triangle, so degree-r interpolants converge at h^(r+1).
  Smooth,
  /// Classical transfinite blend (l0 + l1) [gamma(s_a + ds t) - chord(t)],
  /// t = l1 / (l0 + l1). Only Lipschitz at the opposite vertex; kept for comparison.
  GordonHall,
};

/// One element of the elevated mesh. Local vertices are a rotation of the
/// mesh triangle chosen so that the curved edge, if any, joins local vertices
/// 0 and 1 (reference edge y = 0).
struct ElementGeometry {
  int element = 0;
  bool curved = false;
  std::array<int, 3> vertices{};  // mesh vertex ids in local order
  std::array<Vec2, 3> corners{};
  Mat2 affine;                    // x = corners[0] + affine * ref
  int arc = -1;
  double s_a = 0.0, s_b = 0.0;
  std::vector<Vec2> nodes;        // F_K node positions g_i
};

/// Degree-r isoparametric geometry on a mesh: the exact maps F̌_K, their
/// Lagrange interpolants F_K, and Phi_h = F̌_K o F_K^{-1}.
class Geometry {
 public:
  /// Elevates the mesh to degree r. Throws ErrorCode::Elevation naming the
  /// element when det grad F_K <= 0 at a quadrature or sample point.
  Geometry(std::shared_ptr<const geometry::CurvilinearPolygon> polygon, const mesh::Mesh& mesh, int degree,
           Blend blend = Blend::Smooth);

  int degree() const { return degree_; }
  Blend blend() const { return blend_; }
  const ReferenceElement& reference() const { return reference_element(degree_); }
  const geometry::CurvilinearPolygon& polygon() const { return *polygon_; }
  const std::shared_ptr<const geometry::CurvilinearPolygon>& polygon_ptr() const { return polygon_; }
  const mesh::Mesh& mesh() const { return mesh_; }
  int element_count() const { return static_cast<int>(elements_.size()); }
  const ElementGeometry& element(int e) const { return elements_[e]; }

  /// Exact map F̌_K and its reference gradient. Throws ErrorCode::Domain
  /// outside the closed reference triangle (tolerance 1e-12).
  Vec2 exact_map(int e, const Vec2& ref) const;
  Mat2 exact_jacobian(int e, const Vec2& ref) const;

  /// Isoparametric map F_K = sum g_i N_i and its gradient.
  Vec2 map(int e, const Vec2& ref) const;
  Mat2 jacobian(int e, const Vec2& ref) const;

  /// Reference point of x in K by damped Newton on F_K (tolerance 1e-12, 50
  /// iterations). ErrorCode::Inversion on failure, ErrorCode::Domain when the
  /// preimage lies outside the reference triangle by more than 1e-10.
  Vec2 invert(int e, const Vec2& x) const;
  /// Reference point of x in the exact element by Newton on F̌_K. Returns
  /// false when Newton fails or the preimage is outside by more than `slack`.
  bool invert_exact(int e, const Vec2& x, Vec2& ref, double slack = 1e-10) const;

  Vec2 phi(int e, const Vec2& x) const;
  Mat2 phi_jacobian(int e, const Vec2& x) const;

  /// A_h = grad Phi grad Phi^T / det grad Phi at the point F̌_K(ref).
  /// ErrorCode::Geometry when the determinant is not positive.
  Mat2 coefficient_matrix(int e, const Vec2& ref) const;

 private:
  void check_reference(const Vec2& ref) const;

  std::shared_ptr<const geometry::CurvilinearPolygon> polygon_;
  mesh::Mesh mesh_;
  int degree_;
  Blend blend_;
  std::vector<ElementGeometry> elements_;
};

/// Reference sample points i/9, j/9 with i + j <= 9.
std::vector<Vec2> reference_sample_grid(int order = 9);

struct GeometryErrors {
  double h = 0.0;
  double phi_error = 0.0;       // max |Phi_h - Id|
  double grad_phi_error = 0.0;  // max ||grad Phi_h - I||_F
  double a_error = 0.0;         // max ||A_h - I||_F
  double boundary_distance = 0.0;  // max distance of curved-edge samples of dOmega_h to dOmega
  double interior_max = 0.0;    // all three maxima restricted to interior elements
};

/// Maxima over boundary elements on the reference sample grid.
GeometryErrors geometry_errors(const Geometry& geometry);

}  // namespace isopar::iso
