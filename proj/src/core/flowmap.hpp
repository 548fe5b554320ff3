#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "geometry.hpp"

namespace isopar::flowmap {

/// Compactly supported outward field X = eta(d) V around the boundary.
///
/// d is the signed distance (negative inside). eta is a C^2 quintic step:
/// 0 for d <= -w0 and d >= w, 1 on [-w0/2, w/2]. V normalizes a kernel
/// average of outward normals at boundary nodes within distance 1.25 w of x,
/// so near a corner it blends the normals of both incident arcs.
class OutwardField {
 public:
  /// ErrorCode::Construction for a corner opening >= pi - 1e-6;
  /// ErrorCode::Precondition unless 0 < w0 < w and w <= 1/4 of the smallest
  /// corner-to-corner distance.
  OutwardField(std::shared_ptr<const geometry::CurvilinearPolygon> polygon, double w, double w0);
  /// Defaults w = 0.2 inradius, w0 = 0.1 inradius.
  explicit OutwardField(std::shared_ptr<const geometry::CurvilinearPolygon> polygon);

  Vec2 operator()(const Vec2& x) const;
  /// Unit blended normal V(x); zero when no boundary node is within 1.25 w.
  Vec2 direction(const Vec2& x) const;
  double cutoff(double signed_distance) const;
  /// Signed distance to the boundary (negative inside), by Newton projection
  /// from the nearest kernel nodes. Returns +-infinity beyond 1.25 w.
  double signed_distance(const Vec2& x) const;

  double width() const { return w_; }
  double inner_width() const { return w0_; }
  const geometry::CurvilinearPolygon& polygon() const { return *polygon_; }

  /// min <X(y), N_y> over boundary samples; at a corner both one-sided normals count.
  double min_normal_component(int samples = 512) const;

 private:
  template <class F>
  void for_each_near(const Vec2& x, F&& f) const;

  std::shared_ptr<const geometry::CurvilinearPolygon> polygon_;
  double w_ = 0.0;
  double w0_ = 0.0;
  double radius_ = 0.0;          // kernel support
  double spacing_ = 0.0;         // largest gap between neighbouring nodes
  std::vector<Vec2> points_;     // kernel nodes on the boundary
  std::vector<Vec2> normals_;    // their outward normals
  std::vector<double> weights_;  // arc-length weights
  std::vector<int> arc_of_;
  std::vector<double> param_;
  Vec2 origin_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> cells_;
};

/// Boundary samples distributed over the arcs in proportion to arc length,
/// with the one-sided outward normals at each.
struct BoundarySample {
  Vec2 point;
  Vec2 normal;
  Vec2 other_normal;  // differs from `normal` only at a corner
};
std::vector<BoundarySample> boundary_samples(const geometry::CurvilinearPolygon& polygon, int count);

/// Psi_t(x0) by classical RK4 with `steps` uniform steps. t = 0 returns x0.
Vec2 flow(const OutwardField& field, double t, const Vec2& x0, int steps = 64);

struct SandwichRow {
  double t = 0.0;
  double min_distance = 0.0;
  double max_distance = 0.0;
  double lambda = 0.0;   // min over samples of min(dist/t, t/dist); 0 for the t = 0 row
  double min_jacobian = 0.0;
};

struct SandwichReport {
  std::vector<SandwichRow> rows;
  double lambda = 0.0;        // over all rows with t > 0
  double min_jacobian = 0.0;
  double normal_component = 0.0;  // c of the field
};

struct SandwichOptions {
  int samples = 512;
  double delta = 0.05;         // largest admissible t
  double jacobian_step = 1e-6;
};

/// ErrorCode::Precondition for t outside [0, delta].
SandwichReport verify_sandwich(const OutwardField& field, const std::vector<double>& ts,
                               const SandwichOptions& options = {});

/// max |Psi_{t/2}(Psi_{t/2}(x)) - Psi_t(x)| over `count` seeded random points
/// of the collar {-w0 < d < w}.
double semigroup_defect(const OutwardField& field, double t, int count = 100, std::uint64_t seed = 42);

}  // namespace isopar::flowmap
