#include "operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <string>

namespace isopar::ops {

double DiscreteFunction::value(int e, const Vec2& ref) const {
  const ReferenceElement& re = space->geometry().reference();
  double n[10];
  re.values(ref, n);
  const int* d = space->element_dofs(e);
  double s = 0.0;
  for (int i = 0; i < re.size(); ++i) s += coeffs[d[i]] * n[i];
  return s;
}

DiscreteFunction interpolate(std::shared_ptr<const fem::Space> space, const ScalarField& g, Placement placement) {
  const auto& pts = placement == Placement::OnOmega ? space->exact_dof_points() : space->dof_points();
  DiscreteFunction u{space, std::vector<double>(pts.size())};
  for (std::size_t i = 0; i < pts.size(); ++i) u.coeffs[i] = g(pts[i]);
  return u;
}

HarmonicSolver::HarmonicSolver(std::shared_ptr<const fem::Space> space)
    : space_(std::move(space)),
      stiffness_(fem::assemble_stiffness(*space_, fem::Mode::Approx)),
      reduction_(*space_, stiffness_) {}

DiscreteFunction HarmonicSolver::solve(const std::vector<double>& boundary_values, sparse::CgResult* stats) const {
  if (boundary_values.size() != space_->boundary_dofs().size())
    throw Error(ErrorCode::Contract, "expected " + std::to_string(space_->boundary_dofs().size()) + " boundary values");
  return {space_, reduction_.solve({}, boundary_values, false, stats)};
}

DiscreteFunction HarmonicSolver::solve(const ScalarField& g, sparse::CgResult* stats) const {
  std::vector<double> values;
  values.reserve(space_->boundary_dofs().size());
  for (int d : space_->boundary_dofs()) values.push_back(g(space_->dof_points()[d]));
  return solve(values, stats);
}

DiscreteFunction discrete_harmonic(std::shared_ptr<const fem::Space> space, const ScalarField& g) {
  return HarmonicSolver(std::move(space)).solve(g);
}

DiscreteFunction solve_poisson(std::shared_ptr<const fem::Space> space, const ScalarField& f,
                               sparse::CgResult* stats, double tol, int quadrature_degree) {
  const auto a = fem::assemble_stiffness(*space, fem::Mode::Approx, quadrature_degree);
  const fem::DirichletReduction red(*space, a);
  const auto b = fem::assemble_load(*space, f, quadrature_degree);
  const std::vector<double> zero(red.constrained_dofs().size(), 0.0);
  return {space, red.solve(b, zero, false, stats, tol)};
}

DiscreteFunction ritz_project(std::shared_ptr<const fem::Space> space, const ElementGradient& grad_v,
                              sparse::CgResult* stats) {
  const iso::Geometry& geo = space->geometry();
  const ReferenceElement& re = geo.reference();
  const int nloc = re.size();
  const auto& quad = re.quadrature();
  std::vector<double> b(space->dof_count(), 0.0);
  for (int e = 0; e < space->element_count(); ++e) {
    const int* d = space->element_dofs(e);
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const Vec2& x = quad.points[q];
      const Mat2 jac = geo.exact_jacobian(e, x);
      const Mat2 inv_t = jac.inverse().transpose();
      const Vec2 flux = geo.coefficient_matrix(e, x) * grad_v(e, x);
      const double w = quad.weights[q] * std::abs(jac.det());
      const auto& grads = re.quad_gradients(static_cast<int>(q));
      for (int i = 0; i < nloc; ++i) b[d[i]] += w * dot(flux, inv_t * grads[i]);
    }
  }
  const auto a = fem::assemble_stiffness(*space, fem::Mode::Exact);
  const fem::DirichletReduction red(*space, a);
  const std::vector<double> zero(red.constrained_dofs().size(), 0.0);
  return {space, red.solve(b, zero, false, stats)};
}

DiscreteFunction ritz_project(std::shared_ptr<const fem::Space> space, const VectorField& grad_v,
                              sparse::CgResult* stats) {
  const iso::Geometry& geo = space->geometry();
  return ritz_project(
      space, ElementGradient([&](int e, const Vec2& ref) { return grad_v(geo.exact_map(e, ref)); }), stats);
}

Vec2 transplanted_gradient(const DiscreteFunction& u, int e, const Vec2& ref) {
  const iso::Geometry& geo = u.space->geometry();
  const ReferenceElement& re = geo.reference();
  Vec2 g[10];
  re.gradients(ref, g);
  const int* d = u.space->element_dofs(e);
  Vec2 s{0, 0};
  for (int i = 0; i < re.size(); ++i) s += u.coeffs[d[i]] * g[i];
  return geo.exact_jacobian(e, ref).inverse().transpose() * s;
}

const std::vector<Vec2>& sample_points(int degree) {
  static std::array<std::vector<Vec2>, 4> cache;
  static std::once_flag once[4];
  if (degree < 1 || degree > 3) throw Error(ErrorCode::Contract, "degree must be 1, 2 or 3");
  std::call_once(once[degree], [degree] {
    auto pts = iso::reference_sample_grid(degree + 3);
    const auto& quad = reference_element(degree).quadrature().points;
    pts.insert(pts.end(), quad.begin(), quad.end());
    cache[degree] = std::move(pts);
  });
  return cache[degree];
}

namespace {

// Basis values at the sample points of the space's degree.
std::vector<std::vector<double>> tabulate(const ReferenceElement& re, const std::vector<Vec2>& pts) {
  std::vector<std::vector<double>> t(pts.size(), std::vector<double>(re.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) re.values(pts[k], t[k].data());
  return t;
}

double combine(const std::vector<double>& basis, const int* dofs, const std::vector<double>& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) s += c[dofs[i]] * basis[i];
  return s;
}

}  // namespace

double linf_error(const DiscreteFunction& uh, const ScalarField& u, Sampling sampling) {
  const iso::Geometry& geo = uh.space->geometry();
  const auto& pts = sample_points(geo.degree());
  const auto table = tabulate(geo.reference(), pts);
  double worst = 0.0;
  for (int e = 0; e < uh.space->element_count(); ++e) {
    const int* d = uh.space->element_dofs(e);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Vec2 x = sampling == Sampling::OnOmega ? geo.exact_map(e, pts[k]) : geo.map(e, pts[k]);
      worst = std::max(worst, std::abs(u(x) - combine(table[k], d, uh.coeffs)));
    }
  }
  return worst;
}

double linf_norm(const DiscreteFunction& uh) {
  const iso::Geometry& geo = uh.space->geometry();
  const auto table = tabulate(geo.reference(), sample_points(geo.degree()));
  double worst = 0.0;
  for (int e = 0; e < uh.space->element_count(); ++e) {
    const int* d = uh.space->element_dofs(e);
    for (const auto& basis : table) worst = std::max(worst, std::abs(combine(basis, d, uh.coeffs)));
  }
  return worst;
}

double boundary_sup(const DiscreteFunction& uh) {
  const iso::Geometry& geo = uh.space->geometry();
  std::vector<Vec2> pts;
  for (int k = 0; k <= 32; ++k) pts.push_back({k / 32.0, 0.0});
  const auto table = tabulate(geo.reference(), pts);
  double worst = 0.0;
  for (int e = 0; e < uh.space->element_count(); ++e) {
    if (!geo.element(e).curved) continue;
    const int* d = uh.space->element_dofs(e);
    for (const auto& basis : table) worst = std::max(worst, std::abs(combine(basis, d, uh.coeffs)));
  }
  return worst;
}

double h1_seminorm_error(const DiscreteFunction& uh, const VectorField& grad_u) {
  const iso::Geometry& geo = uh.space->geometry();
  const ReferenceElement& re = geo.reference();
  const auto& quad = re.quadrature();
  double sum = 0.0;
  for (int e = 0; e < uh.space->element_count(); ++e) {
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const Vec2& x = quad.points[q];
      const Mat2 jac = geo.exact_jacobian(e, x);
      const Vec2 diff = grad_u(geo.exact_map(e, x)) - transplanted_gradient(uh, e, x);
      sum += quad.weights[q] * std::abs(jac.det()) * dot(diff, diff);
    }
  }
  return std::sqrt(sum);
}

PointLocator::PointLocator(std::shared_ptr<const iso::Geometry> geometry) : geometry_(std::move(geometry)) {
  const iso::Geometry& geo = *geometry_;
  const int ne = geo.element_count();
  std::vector<geometry::BoundingBox> boxes(ne);
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (int e = 0; e < ne; ++e) {
    Vec2 a{1e300, 1e300}, b{-1e300, -1e300};
    const auto& el = geo.element(e);
    const int samples = el.curved ? 16 : 1;
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < samples; ++j) {
        const double t = double(j) / samples;
        const Vec2 p = el.curved ? geo.exact_map(e, (1.0 - t) * geo.reference().nodes()[k] +
                                                        t * geo.reference().nodes()[(k + 1) % 3])
                                 : el.corners[k];
        a = {std::min(a.x, p.x), std::min(a.y, p.y)};
        b = {std::max(b.x, p.x), std::max(b.y, p.y)};
      }
    }
    // Room for the bulge of the arc between samples.
    const double pad = el.curved ? 0.05 * distance(a, b) : 1e-12;
    boxes[e] = {a - Vec2{pad, pad}, b + Vec2{pad, pad}};
    lo = {std::min(lo.x, boxes[e].lo.x), std::min(lo.y, boxes[e].lo.y)};
    hi = {std::max(hi.x, boxes[e].hi.x), std::max(hi.y, boxes[e].hi.y)};
  }
  origin_ = lo;
  cell_ = std::max(geo.mesh().h, 1e-3 * distance(lo, hi));
  nx_ = std::max(1, static_cast<int>(std::ceil((hi.x - lo.x) / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil((hi.y - lo.y) / cell_)));
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (int e = 0; e < ne; ++e) {
    const int i0 = std::clamp(static_cast<int>((boxes[e].lo.x - lo.x) / cell_), 0, nx_ - 1);
    const int i1 = std::clamp(static_cast<int>((boxes[e].hi.x - lo.x) / cell_), 0, nx_ - 1);
    const int j0 = std::clamp(static_cast<int>((boxes[e].lo.y - lo.y) / cell_), 0, ny_ - 1);
    const int j1 = std::clamp(static_cast<int>((boxes[e].hi.y - lo.y) / cell_), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(e);
  }
}

bool PointLocator::locate(const Vec2& x, int& element, Vec2& ref, double slack) const {
  const int i = static_cast<int>(std::floor((x.x - origin_.x) / cell_));
  const int j = static_cast<int>(std::floor((x.y - origin_.y) / cell_));
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return false;
  for (int e : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
    Vec2 r;
    bool inside = false;
    try {
      inside = geometry_->invert_exact(e, x, r, slack);
    } catch (const Error&) {
      inside = false;  // Newton left the parameter range of the arc
    }
    if (!inside) continue;
    auto l = barycentric(r);
    for (double& v : l) v = std::max(v, 0.0);
    const double s = l[0] + l[1] + l[2];
    element = e;
    ref = {l[1] / s, l[2] / s};
    return true;
  }
  return false;
}

Transplant::Transplant(DiscreteFunction u) : u_(std::move(u)), locator_(u_.space->geometry_ptr()) {}

double Transplant::operator()(const Vec2& x) const {
  int e = 0;
  Vec2 ref;
  if (!locator_.locate(x, e, ref))
    throw Error(ErrorCode::Domain, "point (" + std::to_string(x.x) + ", " + std::to_string(x.y) +
                                       ") is not in any element");
  return u_.value(e, ref);
}

}  // namespace isopar::ops
