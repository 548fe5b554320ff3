#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fem.hpp"

namespace isopar::ops {

/// Finite element function: u_h on Omega_h, or its transplant u_h o Phi_h^{-1}
/// on Omega. Both share the coefficient vector.
struct DiscreteFunction {
  std::shared_ptr<const fem::Space> space;
  std::vector<double> coeffs;

  /// Value of the reference-side function at a reference point of element e.
  double value(int e, const Vec2& ref) const;
};

using ScalarField = std::function<double(Vec2)>;
using VectorField = std::function<Vec2(Vec2)>;

enum class Placement {
  OnOmegaH,  // coefficients g(F_K(a_i))
  OnOmega,   // coefficients g(F̌_K(a_i))
};

DiscreteFunction interpolate(std::shared_ptr<const fem::Space> space, const ScalarField& g, Placement placement);

/// Discrete harmonic extensions of boundary data. Assembles and reduces the
/// stiffness matrix once so that many boundary data can be solved for.
class HarmonicSolver {
 public:
  explicit HarmonicSolver(std::shared_ptr<const fem::Space> space);

  const fem::Space& space() const { return *space_; }
  /// Values are given per boundary dof, in the order of Space::boundary_dofs().
  DiscreteFunction solve(const std::vector<double>& boundary_values, sparse::CgResult* stats = nullptr) const;
  DiscreteFunction solve(const ScalarField& g, sparse::CgResult* stats = nullptr) const;

 private:
  std::shared_ptr<const fem::Space> space_;
  sparse::CsrMatrix stiffness_;
  fem::DirichletReduction reduction_;
};

DiscreteFunction discrete_harmonic(std::shared_ptr<const fem::Space> space, const ScalarField& g);

/// Homogeneous Dirichlet Poisson problem on Omega_h with load f. A positive
/// `quadrature_degree` overrides the element default for both assemblies.
DiscreteFunction solve_poisson(std::shared_ptr<const fem::Space> space, const ScalarField& f,
                               sparse::CgResult* stats = nullptr, double tol = 1e-12, int quadrature_degree = 0);

/// Ritz projection for the perturbed form (A_h grad ., grad .) on Omega.
/// `grad_v` is the analytic gradient of v; v must vanish on the boundary.
DiscreteFunction ritz_project(std::shared_ptr<const fem::Space> space, const VectorField& grad_v,
                              sparse::CgResult* stats = nullptr);

/// Same, with the projected gradient given per element and reference point.
/// Used for functions that are only elementwise smooth.
using ElementGradient = std::function<Vec2(int element, const Vec2& ref)>;
DiscreteFunction ritz_project(std::shared_ptr<const fem::Space> space, const ElementGradient& grad_v,
                              sparse::CgResult* stats = nullptr);

/// Physical gradient of the transplanted function u_h o Phi_h^{-1} at F̌_K(ref).
Vec2 transplanted_gradient(const DiscreteFunction& u, int e, const Vec2& ref);

enum class Sampling {
  OnOmega,   // |u(F̌_K(x)) - û_h(x)|: the error of the transplant on Omega
  OnOmegaH,  // |u(F_K(x)) - û_h(x)|: u extended by its closed form
};

/// Per-element sample points: the principal lattice of order r + 3 and the
/// element quadrature points.
const std::vector<Vec2>& sample_points(int degree);

/// Sampled max |u - u_h|.
double linf_error(const DiscreteFunction& uh, const ScalarField& u, Sampling sampling = Sampling::OnOmega);
/// Sampled max |u_h| over all elements.
double linf_norm(const DiscreteFunction& uh);
/// Max |u_h| over 33 equispaced samples of every curved boundary edge.
double boundary_sup(const DiscreteFunction& uh);
/// (sum_K int_{K̂} |grad u(F̌) - grad ǔ_h|^2 |det grad F̌|)^(1/2).
double h1_seminorm_error(const DiscreteFunction& uh, const VectorField& grad_u);

/// Point location in the exact elements F̌_K(K̂) through a bucket grid.
class PointLocator {
 public:
  explicit PointLocator(std::shared_ptr<const iso::Geometry> geometry);

  /// Element and reference point with F̌_K(ref) = x. Points within `slack`
  /// (reference units) of an element are accepted and clamped into it.
  bool locate(const Vec2& x, int& element, Vec2& ref, double slack = 1e-9) const;

 private:
  std::shared_ptr<const iso::Geometry> geometry_;
  Vec2 origin_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

/// Evaluates the transplant u_h o Phi_h^{-1} at physical points of Omega.
/// ErrorCode::Domain when a point cannot be located.
class Transplant {
 public:
  explicit Transplant(DiscreteFunction u);
  double operator()(const Vec2& x) const;
  const DiscreteFunction& function() const { return u_; }

 private:
  DiscreteFunction u_;
  PointLocator locator_;
};

}  // namespace isopar::ops
