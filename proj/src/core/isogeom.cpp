#include "isogeom.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace isopar::iso {

namespace {

constexpr double kEndpointBand = 1e-4;

std::string point_text(const Vec2& p) {
  std::ostringstream os;
  os.precision(6);
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

}  // namespace

// The exact map, evaluated from barycentric coordinates so that node values
// on straight edges see l0 or l1 exactly zero.
static void exact_eval(const ElementGeometry& el, const geometry::CurvilinearPolygon& poly, Blend blend,
                       const std::array<double, 3>& l, Vec2* value, Mat2* grad) {
  const Vec2 v0 = el.corners[0], v1 = el.corners[1], v2 = el.corners[2];
  const Vec2 affine_value = l[0] * v0 + l[1] * v1 + l[2] * v2;
  if (!el.curved) {
    if (value) *value = affine_value;
    if (grad) *grad = el.affine;
    return;
  }
  const auto& arc = poly.arc(el.arc);
  const double ds = el.s_b - el.s_a;
  const Vec2 chord = v1 - v0;
  Vec2 corr{0, 0}, corr_dx{0, 0}, corr_dy{0, 0};

  if (blend == Blend::GordonHall) {
    const double S = l[0] + l[1];
    if (S >= 1e-14) {
      const double t = l[1] / S;
      const auto g = arc.eval(el.s_a + ds * t);
      const Vec2 G = g.p - ((1.0 - t) * v0 + t * v1);
      const Vec2 Gp = ds * g.d1 - chord;
      corr = S * G;
      corr_dx = Gp;
      corr_dy = t * Gp - G;
    }
  } else {
    const double xi = 0.5 * (1.0 + l[1] - l[0]);
    Vec2 beta, dbeta;
    if (xi < kEndpointBand) {
      const auto g = arc.eval(el.s_a);
      const Vec2 b1 = ds * g.d1 - chord;
      const Vec2 b2 = ds * ds * g.d2;
      const Vec2 num = b1 + 0.5 * xi * b2;
      beta = num / (1.0 - xi);
      dbeta = (0.5 * (1.0 - xi) * b2 + num) / ((1.0 - xi) * (1.0 - xi));
    } else if (xi > 1.0 - kEndpointBand) {
      const double eta = 1.0 - xi;
      const auto g = arc.eval(el.s_b);
      const Vec2 c1 = ds * g.d1 - chord;
      const Vec2 c2 = ds * ds * g.d2;
      const Vec2 num = 0.5 * eta * c2 - c1;
      beta = num / xi;
      dbeta = (-0.5 / xi) * c2 - num / (xi * xi);
    } else {
      const auto g = arc.eval(el.s_a + ds * xi);
      const Vec2 B = g.p - ((1.0 - xi) * v0 + xi * v1);
      const Vec2 Bp = ds * g.d1 - chord;
      const double w = xi * (1.0 - xi);
      beta = B / w;
      dbeta = (w * Bp - (1.0 - 2.0 * xi) * B) / (w * w);
    }
    const double p = l[0] * l[1];
    corr = p * beta;
    corr_dx = (l[0] - l[1]) * beta + p * dbeta;
    corr_dy = (-l[1]) * beta + (0.5 * p) * dbeta;
  }
  if (value) *value = affine_value + corr;
  if (grad) *grad = el.affine + Mat2::from_columns(corr_dx, corr_dy);
}

Geometry::Geometry(std::shared_ptr<const geometry::CurvilinearPolygon> polygon, const mesh::Mesh& mesh, int degree,
                   Blend blend)
    : polygon_(std::move(polygon)), mesh_(mesh), degree_(degree), blend_(blend) {
  const ReferenceElement& ref = reference_element(degree);
  std::vector<int> bound(mesh.triangle_count(), -1);
  for (int b = 0; b < static_cast<int>(mesh.boundary.size()); ++b) {
    const int t = mesh.boundary[b].triangle;
    if (bound[t] >= 0)
      throw Error(ErrorCode::Elevation, "element " + std::to_string(t) + " has more than one curved edge");
    bound[t] = b;
  }

  const auto samples = reference_sample_grid();
  elements_.resize(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    ElementGeometry& el = elements_[t];
    el.element = t;
    const int rot = bound[t] >= 0 ? mesh.boundary[bound[t]].local_edge : 0;
    for (int i = 0; i < 3; ++i) {
      el.vertices[i] = mesh.triangles[t][(rot + i) % 3];
      el.corners[i] = mesh.vertices[el.vertices[i]];
    }
    el.affine = Mat2::from_columns(el.corners[1] - el.corners[0], el.corners[2] - el.corners[0]);
    if (bound[t] >= 0) {
      const auto& be = mesh.boundary[bound[t]];
      el.curved = true;
      el.arc = be.arc;
      el.s_a = be.s_a;
      el.s_b = be.s_b;
    }
    el.nodes.resize(ref.size());
    for (int i = 0; i < ref.size(); ++i) {
      const auto& a = ref.multi_indices()[i];
      if (i < 3) {
        el.nodes[i] = el.corners[i];
      } else if (el.curved && a[2] == 0) {
        el.nodes[i] = polygon_->arc(el.arc).eval(el.s_a + (el.s_b - el.s_a) * a[1] / degree).p;
      } else {
        const std::array<double, 3> l{double(a[0]) / degree, double(a[1]) / degree, double(a[2]) / degree};
        exact_eval(el, *polygon_, blend_, l, &el.nodes[i], nullptr);
      }
    }

    auto check = [&](const Vec2& p) {
      const double det = jacobian(t, p).det();
      if (!(det > 0.0))
        throw Error(ErrorCode::Elevation, "element " + std::to_string(t) + ": det grad F_K = " +
                                              std::to_string(det) + " at reference point " + point_text(p));
    };
    if (!el.curved) {
      check({1.0 / 3.0, 1.0 / 3.0});
      continue;
    }
    for (const auto& p : ref.quadrature().points) check(p);
    for (const auto& p : samples) check(p);
  }
}

void Geometry::check_reference(const Vec2& ref) const {
  const auto l = barycentric(ref);
  if (l[0] < -1e-12 || l[1] < -1e-12 || l[2] < -1e-12)
    throw Error(ErrorCode::Domain, "reference point " + point_text(ref) + " outside the reference triangle");
}

Vec2 Geometry::exact_map(int e, const Vec2& ref) const {
  check_reference(ref);
  Vec2 v;
  exact_eval(elements_[e], *polygon_, blend_, barycentric(ref), &v, nullptr);
  return v;
}

Mat2 Geometry::exact_jacobian(int e, const Vec2& ref) const {
  check_reference(ref);
  Mat2 g;
  exact_eval(elements_[e], *polygon_, blend_, barycentric(ref), nullptr, &g);
  return g;
}

Vec2 Geometry::map(int e, const Vec2& ref) const {
  const ElementGeometry& el = elements_[e];
  if (!el.curved) return el.corners[0] + el.affine * ref;
  const ReferenceElement& re = reference();
  double n[10];
  re.values(ref, n);
  Vec2 x{0, 0};
  for (int i = 0; i < re.size(); ++i) x += n[i] * el.nodes[i];
  return x;
}

Mat2 Geometry::jacobian(int e, const Vec2& ref) const {
  const ElementGeometry& el = elements_[e];
  if (!el.curved) return el.affine;
  const ReferenceElement& re = reference();
  Vec2 g[10];
  re.gradients(ref, g);
  Mat2 j{};
  for (int i = 0; i < re.size(); ++i) j = j + Mat2{el.nodes[i].x * g[i].x, el.nodes[i].x * g[i].y,
                                                   el.nodes[i].y * g[i].x, el.nodes[i].y * g[i].y};
  return j;
}

Vec2 Geometry::invert(int e, const Vec2& x) const {
  const ElementGeometry& el = elements_[e];
  Vec2 ref = el.affine.inverse() * (x - el.corners[0]);
  if (el.curved) {
    bool converged = false;
    for (int it = 0; it < 50 && !converged; ++it) {
      const Vec2 res = map(e, ref) - x;
      const Vec2 step = jacobian(e, ref).inverse() * res;
      double damping = 1.0;
      Vec2 trial = ref - step;
      const double r0 = norm(res);
      for (int k = 0; k < 30 && norm(map(e, trial) - x) > r0 && r0 > 0.0; ++k) {
        damping *= 0.5;
        trial = ref - damping * step;
      }
      ref = trial;
      converged = norm(step) * damping <= 1e-12 || norm(map(e, ref) - x) <= 1e-15 * (1.0 + norm(x));
    }
    if (!converged)
      throw Error(ErrorCode::Inversion,
                  "Newton inversion failed in element " + std::to_string(e) + " at point " + point_text(x));
  }
  const auto l = barycentric(ref);
  if (l[0] < -1e-10 || l[1] < -1e-10 || l[2] < -1e-10)
    throw Error(ErrorCode::Domain, "point " + point_text(x) + " is outside element " + std::to_string(e));
  return {std::clamp(ref.x, 0.0, 1.0), std::clamp(ref.y, 0.0, 1.0)};
}

bool Geometry::invert_exact(int e, const Vec2& x, Vec2& ref, double slack) const {
  const ElementGeometry& el = elements_[e];
  ref = el.affine.inverse() * (x - el.corners[0]);
  if (el.curved) {
    bool converged = false;
    for (int it = 0; it < 50 && !converged; ++it) {
      const auto l = barycentric(ref);
      if (l[0] < -0.5 || l[1] < -0.5 || l[2] < -0.5) return false;
      Vec2 val;
      Mat2 grad;
      exact_eval(el, *polygon_, blend_, l, &val, &grad);
      if (norm(val - x) <= 1e-14 * (1.0 + norm(x))) {
        converged = true;
        break;
      }
      const Vec2 step = grad.inverse() * (val - x);
      ref = ref - step;
      converged = norm(step) <= 1e-13;
    }
    if (!converged) return false;
  }
  const auto l = barycentric(ref);
  return l[0] >= -slack && l[1] >= -slack && l[2] >= -slack;
}

Vec2 Geometry::phi(int e, const Vec2& x) const {
  if (!elements_[e].curved) return x;
  const Vec2 ref = invert(e, x);
  Vec2 v;
  exact_eval(elements_[e], *polygon_, blend_, barycentric(ref), &v, nullptr);
  return v;
}

Mat2 Geometry::phi_jacobian(int e, const Vec2& x) const {
  if (!elements_[e].curved) return Mat2::identity();
  const Vec2 ref = invert(e, x);
  Mat2 g;
  exact_eval(elements_[e], *polygon_, blend_, barycentric(ref), nullptr, &g);
  return g * jacobian(e, ref).inverse();
}

Mat2 Geometry::coefficient_matrix(int e, const Vec2& ref) const {
  if (!elements_[e].curved) return Mat2::identity();
  const Mat2 g = exact_jacobian(e, ref) * jacobian(e, ref).inverse();
  const double J = g.det();
  if (!(J > 0.0))
    throw Error(ErrorCode::Geometry, "element " + std::to_string(e) + ": det grad Phi_h = " + std::to_string(J) +
                                         " at reference point " + point_text(ref));
  return (g * g.transpose()) * (1.0 / J);
}

std::vector<Vec2> reference_sample_grid(int order) {
  std::vector<Vec2> pts;
  for (int j = 0; j <= order; ++j)
    for (int i = 0; i + j <= order; ++i) pts.push_back({double(i) / order, double(j) / order});
  return pts;
}

GeometryErrors geometry_errors(const Geometry& geo) {
  GeometryErrors out;
  out.h = geo.mesh().h;
  const auto samples = reference_sample_grid();
  const Mat2 I = Mat2::identity();
  for (int e = 0; e < geo.element_count(); ++e) {
    const ElementGeometry& el = geo.element(e);
    if (!el.curved) {
      // Phi_h is the identity here; evaluate through the public maps anyway.
      const Vec2 c = geo.map(e, {1.0 / 3.0, 1.0 / 3.0});
      const double err = std::max({distance(geo.phi(e, c), c), (geo.phi_jacobian(e, c) - I).frobenius(),
                                   (geo.coefficient_matrix(e, {1.0 / 3.0, 1.0 / 3.0}) - I).frobenius()});
      out.interior_max = std::max(out.interior_max, err);
      continue;
    }
    for (const auto& p : samples) {
      const Vec2 exact = geo.exact_map(e, p);
      const Vec2 approx = geo.map(e, p);
      const Mat2 grad_phi = geo.exact_jacobian(e, p) * geo.jacobian(e, p).inverse();
      out.phi_error = std::max(out.phi_error, distance(exact, approx));
      out.grad_phi_error = std::max(out.grad_phi_error, (grad_phi - I).frobenius());
      out.a_error = std::max(out.a_error, (geo.coefficient_matrix(e, p) - I).frobenius());
    }
    for (int k = 0; k <= 16; ++k) {
      const Vec2 q = geo.map(e, {k / 16.0, 0.0});
      out.boundary_distance = std::max(out.boundary_distance, geo.polygon().closest_boundary(q).distance);
    }
  }
  return out;
}

}  // namespace isopar::iso
