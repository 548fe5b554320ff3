#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace isopar::geometry {

/// Point with first and second parameter derivatives.
struct ArcSample {
  Vec2 p;
  Vec2 d1;
  Vec2 d2;
};

/// Smooth regular parametric curve gamma: [0, 1] -> R^2.
class BoundaryArc {
 public:
  virtual ~BoundaryArc() = default;

  /// Unchecked evaluation; callers guarantee s in [0, 1] (or a tiny overshoot).
  virtual ArcSample eval(double s) const = 0;
  /// Human-readable description, one line in the domain file grammar.
  virtual std::string describe() const = 0;

  Vec2 start() const { return eval(0.0).p; }
  Vec2 end() const { return eval(1.0).p; }
};

/// Circle arc c + R (cos t, sin t), t = t0 + (t1 - t0) s. Counterclockwise when t1 > t0.
class CircleArc final : public BoundaryArc {
 public:
  CircleArc(Vec2 center, double radius, double theta0, double theta1);
  ArcSample eval(double s) const override;
  std::string describe() const override;

 private:
  Vec2 center_;
  double radius_;
  double theta0_;
  double theta1_;
};

/// Polar graph c + rho(t) (cos t, sin t) with the trigonometric polynomial
/// rho(t) = a0 + sum_k (a_k cos kt + b_k sin kt).
class PolarArc final : public BoundaryArc {
 public:
  /// `coefficients` = {a0, a1, b1, a2, b2, ...}.
  PolarArc(Vec2 center, double theta0, double theta1, std::vector<double> coefficients);
  ArcSample eval(double s) const override;
  std::string describe() const override;

 private:
  Vec2 center_;
  double theta0_;
  double theta1_;
  std::vector<double> coeffs_;
};

/// Junction between arc `before` (at s = 1) and arc `after` (at s = 0).
struct Junction {
  Vec2 point;
  int before = 0;
  int after = 0;
  double angle = kPi;  // interior opening angle
  bool is_corner = false;
};

struct BoundingBox {
  Vec2 lo;
  Vec2 hi;
  double diameter() const { return distance(lo, hi); }
};

struct PolygonOptions {
  // Reject corners whose opening exceeds pi; only relaxed to exercise
  // error paths further down the pipeline.
  bool require_convex_corners = true;
};

struct ClosestPoint {
  int arc = 0;
  double s = 0.0;
  double distance = 0.0;
  Vec2 point;
};

/// Closed positively oriented curvilinear polygon. Immutable after construction.
class CurvilinearPolygon {
 public:
  CurvilinearPolygon(std::vector<std::shared_ptr<const BoundaryArc>> arcs, PolygonOptions options = {});

  int arc_count() const { return static_cast<int>(arcs_.size()); }
  const BoundaryArc& arc(int id) const { return *arcs_.at(id); }
  const std::vector<Junction>& junctions() const { return junctions_; }
  std::vector<Junction> corners() const;
  const BoundingBox& bounding_box() const { return bbox_; }
  double signed_area() const { return area_; }

  /// Checked evaluation of gamma_arc(s).
  Vec2 arc_point(int arc, double s) const;
  /// Unit outward normal of an arc at parameter s.
  Vec2 outward_normal(int arc, double s) const;
  /// Distance-minimizing boundary point. Ties within 1e-12 go to the lower
  /// arc id, then the smaller parameter.
  ClosestPoint closest_boundary(const Vec2& p) const;
  /// Signed distance, negative inside.
  double signed_distance(const Vec2& p) const;
  /// Open-set membership; points within 1e-12 of the boundary are outside.
  bool contains(const Vec2& p) const;
  /// Arc length of one arc by composite 16-point Gauss quadrature.
  double arc_length(int arc, double s0 = 0.0, double s1 = 1.0) const;
  /// Largest inscribed disk radius, estimated on a sample grid.
  double inradius_estimate() const;

 private:
  void build_polyline();

  std::vector<std::shared_ptr<const BoundaryArc>> arcs_;
  std::vector<Junction> junctions_;
  BoundingBox bbox_;
  double area_ = 0.0;

  // Dense boundary polyline bucketed into horizontal slabs for ray casting.
  std::vector<Vec2> poly_;
  double slab_y0_ = 0.0;
  double slab_dy_ = 1.0;
  std::vector<std::vector<int>> slabs_;  // segment ids (poly_[i], poly_[i+1]) per slab
};

/// Manufactured solution with u = 0 on the boundary and f = -Laplace(u).
struct Manufactured {
  std::function<double(const Vec2&)> u;
  std::function<Vec2(const Vec2&)> grad_u;
  std::function<double(const Vec2&)> f;
};

struct DomainEntry {
  std::string name;
  std::shared_ptr<const CurvilinearPolygon> polygon;
  std::optional<Manufactured> solution;
};

/// Stock domains: "disk", "lens", "flower".
DomainEntry make_domain(const std::string& name);
std::vector<std::string> stock_domain_names();

/// Reads a domain file (grammar documented in docs/domain-format.md).
DomainEntry load_domain_file(const std::string& path);
DomainEntry parse_domain_text(const std::string& text, const std::string& name = "custom");

/// Domain name or path to a domain file.
DomainEntry resolve_domain(const std::string& name_or_path);

struct ManufacturedCheck {
  double max_boundary_u = 0.0;
  double max_laplacian_rel_error = 0.0;
  bool ok = false;
};

/// Boundary trace at 512 points and central-difference Laplacian at 64 interior points.
ManufacturedCheck check_manufactured(const DomainEntry& entry);

}  // namespace isopar::geometry
