#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "isogeom.hpp"
#include "sparse.hpp"

namespace isopar::fem {

/// Continuous degree-r Lagrange space on the elevated mesh.
///
/// Global numbering: mesh vertices first, then r - 1 nodes per edge (edges in
/// order of first appearance, nodes running from the lower to the higher
/// vertex id), then one interior node per element for r = 3.
class Space {
 public:
  explicit Space(std::shared_ptr<const iso::Geometry> geometry);

  int degree() const { return geometry_->degree(); }
  int dof_count() const { return dof_count_; }
  int local_size() const { return geometry_->reference().size(); }
  const iso::Geometry& geometry() const { return *geometry_; }
  const std::shared_ptr<const iso::Geometry>& geometry_ptr() const { return geometry_; }
  int element_count() const { return geometry_->element_count(); }

  /// Global dofs of element e in reference node order.
  const int* element_dofs(int e) const { return &element_dofs_[static_cast<std::size_t>(e) * local_size()]; }
  /// Node positions on Omega_h (F_K images) and on Omega (F̌_K images).
  const std::vector<Vec2>& dof_points() const { return points_; }
  const std::vector<Vec2>& exact_dof_points() const { return exact_points_; }
  /// Dofs on curved (boundary) edges, ascending.
  const std::vector<int>& boundary_dofs() const { return boundary_dofs_; }
  bool is_boundary(int dof) const { return boundary_flag_[dof] != 0; }

 private:
  std::shared_ptr<const iso::Geometry> geometry_;
  int dof_count_ = 0;
  std::vector<int> element_dofs_;
  std::vector<Vec2> points_;
  std::vector<Vec2> exact_points_;
  std::vector<int> boundary_dofs_;
  std::vector<char> boundary_flag_;
};

enum class Mode {
  Approx,  // pullback through grad F_K (the Dirichlet form on Omega_h)
  Exact,   // pullback through grad F̌_K with coefficient A_h (the perturbed form on Omega)
};

/// Reference quadrature with tabulated basis. Degree 0 selects the element default 2r + 2.
struct QuadratureTable {
  std::vector<Vec2> points;
  std::vector<double> weights;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<Vec2>> gradients;
};
QuadratureTable quadrature_table(int r, int degree = 0);

/// Global stiffness matrix. ErrorCode::Assembly names the element when a
/// Jacobian determinant is not positive.
sparse::CsrMatrix assemble_stiffness(const Space& space, Mode mode, int quadrature_degree = 0);

/// Load vector entries int f(F_K(x)) N_i |det grad F_K|.
std::vector<double> assemble_load(const Space& space, const std::function<double(Vec2)>& f,
                                  int quadrature_degree = 0);

/// Symmetric elimination of a fixed set of constrained dofs.
class DirichletReduction {
 public:
  /// `constrained` must be boundary dofs of `space` (ErrorCode::Contract otherwise).
  DirichletReduction(const Space& space, const sparse::CsrMatrix& a, std::vector<int> constrained);
  /// Eliminates every boundary dof.
  DirichletReduction(const Space& space, const sparse::CsrMatrix& a);

  const sparse::CsrMatrix& matrix() const { return reduced_; }
  const std::vector<int>& free_dofs() const { return free_; }
  const std::vector<int>& constrained_dofs() const { return constrained_; }

  /// Reduced right-hand side b_f - A_fc g for full-length b and constrained values g.
  std::vector<double> rhs(const std::vector<double>& b, const std::vector<double>& values) const;
  /// Full coefficient vector from the free solution and constrained values.
  std::vector<double> expand(const std::vector<double>& x_free, const std::vector<double>& values) const;
  /// Solves with CG to relative residual `tol` (or with the dense oracle when `dense` is set).
  std::vector<double> solve(const std::vector<double>& b, const std::vector<double>& values, bool dense = false,
                            sparse::CgResult* stats = nullptr, double tol = 1e-12) const;

 private:
  std::vector<int> free_;
  std::vector<int> constrained_;
  sparse::CsrMatrix reduced_;
  sparse::CsrMatrix coupling_;  // free rows x constrained columns
};

/// Largest entrywise relative difference |a - b| / max(|a|, |b|, floor), with
/// floor = 1e-12 max |a|. The two matrices must share a pattern.
double relative_difference(const sparse::CsrMatrix& a, const sparse::CsrMatrix& b);

}  // namespace isopar::fem
