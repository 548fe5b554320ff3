#include "flowmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace isopar::flowmap {

namespace {

// C^2 step from 0 at u = 0 to 1 at u = 1.
double smoothstep5(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double kernel(double rho2) {
  if (rho2 >= 1.0) return 0.0;
  const double a = 1.0 - rho2;
  return a * a * a;
}

}  // namespace

std::vector<BoundarySample> boundary_samples(const geometry::CurvilinearPolygon& polygon, int count) {
  const int na = polygon.arc_count();
  std::vector<double> length(na);
  double total = 0.0;
  for (int a = 0; a < na; ++a) total += length[a] = polygon.arc_length(a);
  std::vector<BoundarySample> out;
  out.reserve(count);
  int used = 0;
  double acc = 0.0;
  for (int a = 0; a < na; ++a) {
    acc += length[a];
    const int n = a + 1 == na ? count - used : static_cast<int>(std::lround(count * acc / total)) - used;
    const auto& junction = polygon.junctions();
    for (int k = 0; k < n; ++k) {
      const double s = double(k) / n;
      BoundarySample b;
      b.point = polygon.arc_point(a, s);
      b.normal = polygon.outward_normal(a, s);
      b.other_normal = b.normal;
      if (k == 0) {
        // Junction at the start of this arc: the previous arc ends here.
        for (const auto& j : junction)
          if (j.after == a && j.is_corner) b.other_normal = polygon.outward_normal(j.before, 1.0);
      }
      out.push_back(b);
    }
    used += n;
  }
  return out;
}

OutwardField::OutwardField(std::shared_ptr<const geometry::CurvilinearPolygon> polygon)
    : OutwardField(polygon, 0.2 * polygon->inradius_estimate(), 0.1 * polygon->inradius_estimate()) {}

OutwardField::OutwardField(std::shared_ptr<const geometry::CurvilinearPolygon> polygon, double w, double w0)
    : polygon_(std::move(polygon)), w_(w), w0_(w0) {
  const auto corners = polygon_->corners();
  for (const auto& c : corners)
    if (c.angle >= kPi - 1e-6)
      throw Error(ErrorCode::Construction, "corner opening " + std::to_string(c.angle) +
                                               " leaves no uniformly outward direction");
  if (!(w0 > 0.0 && w0 < w))
    throw Error(ErrorCode::Precondition, "collar widths need 0 < w0 < w");
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < corners.size(); ++i)
    for (std::size_t j = i + 1; j < corners.size(); ++j)
      closest = std::min(closest, distance(corners[i].point, corners[j].point));
  if (w > 0.25 * closest)
    throw Error(ErrorCode::Precondition, "collar width " + std::to_string(w) +
                                             " exceeds a quarter of the corner spacing " + std::to_string(closest));

  // Kernel nodes at arc-length spacing about w / 16 (midpoint rule per arc).
  radius_ = 1.25 * w;
  for (int a = 0; a < polygon_->arc_count(); ++a) {
    const int n = std::max(16, static_cast<int>(std::ceil(16.0 * polygon_->arc_length(a) / w)));
    const auto& arc = polygon_->arc(a);
    Vec2 previous = arc.eval(0.0).p;
    for (int k = 0; k < n; ++k) {
      const double s = (k + 0.5) / n;
      const auto e = arc.eval(s);
      spacing_ = std::max(spacing_, 2.0 * distance(previous, e.p));
      previous = e.p;
      points_.push_back(e.p);
      normals_.push_back(perp(e.d1) / norm(e.d1));
      weights_.push_back(norm(e.d1) / n);
      arc_of_.push_back(a);
      param_.push_back(s);
    }
  }

  const auto& box = polygon_->bounding_box();
  origin_ = box.lo - Vec2{2.0 * radius_, 2.0 * radius_};
  nx_ = static_cast<int>(std::ceil((box.hi.x - box.lo.x) / radius_)) + 4;
  ny_ = static_cast<int>(std::ceil((box.hi.y - box.lo.y) / radius_)) + 4;
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const int i = static_cast<int>((points_[k].x - origin_.x) / radius_);
    const int j = static_cast<int>((points_[k].y - origin_.y) / radius_);
    cells_[static_cast<std::size_t>(j) * nx_ + i].push_back(static_cast<int>(k));
  }
}

// Visits every kernel node within radius_ of x (and possibly a few more).
template <class F>
void OutwardField::for_each_near(const Vec2& x, F&& f) const {
  const int i = static_cast<int>(std::floor((x.x - origin_.x) / radius_));
  const int j = static_cast<int>(std::floor((x.y - origin_.y) / radius_));
  for (int jj = std::max(j - 1, 0); jj <= std::min(j + 1, ny_ - 1); ++jj)
    for (int ii = std::max(i - 1, 0); ii <= std::min(i + 1, nx_ - 1); ++ii)
      for (int k : cells_[static_cast<std::size_t>(jj) * nx_ + ii]) f(k);
}

double OutwardField::cutoff(double d) const {
  if (d <= -0.5 * w0_) return smoothstep5((d + w0_) / (0.5 * w0_));
  if (d >= 0.5 * w_) return smoothstep5((w_ - d) / (0.5 * w_));
  return 1.0;
}

Vec2 OutwardField::direction(const Vec2& x) const {
  Vec2 sum{0, 0};
  const double inv = 1.0 / (radius_ * radius_);
  for_each_near(x, [&](int k) {
    const Vec2 d = x - points_[k];
    const double wk = kernel(dot(d, d) * inv);
    if (wk > 0.0) sum += (wk * weights_[k]) * normals_[k];
  });
  const double n = norm(sum);
  return n > 0.0 ? sum / n : Vec2{0, 0};
}

double OutwardField::signed_distance(const Vec2& x) const {
  double nearest = std::numeric_limits<double>::infinity();
  for_each_near(x, [&](int k) { nearest = std::min(nearest, distance(x, points_[k])); });
  if (nearest > radius_) return polygon_->contains(x) ? -nearest : nearest;

  // Project onto the arc from every node that could sit next to the closest point.
  double best = std::numeric_limits<double>::infinity();
  Vec2 best_point, best_normal;
  bool at_end = false;
  for_each_near(x, [&](int k) {
    if (distance(x, points_[k]) > nearest + spacing_) return;
    const auto& arc = polygon_->arc(arc_of_[k]);
    double s = param_[k];
    geometry::ArcSample e = arc.eval(s);
    for (int it = 0; it < 20; ++it) {
      const double g = dot(e.p - x, e.d1);
      const double dg = dot(e.d1, e.d1) + dot(e.p - x, e.d2);
      if (!(dg > 0.0)) break;
      const double next = std::clamp(s - g / dg, 0.0, 1.0);
      const bool done = std::abs(next - s) <= 1e-15;
      s = next;
      e = arc.eval(s);
      if (done) break;
    }
    const double d = distance(x, e.p);
    if (d < best) {
      best = d;
      best_point = e.p;
      best_normal = perp(e.d1);
      at_end = s <= 0.0 || s >= 1.0;
    }
  });
  if (best == 0.0) return 0.0;
  const bool inside = at_end ? polygon_->contains(x) : dot(x - best_point, best_normal) < 0.0;
  return inside ? -best : best;
}

Vec2 OutwardField::operator()(const Vec2& x) const {
  const double d = signed_distance(x);
  if (d <= -w0_ || d >= w_) return {0, 0};
  return cutoff(d) * direction(x);
}

double OutwardField::min_normal_component(int samples) const {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& b : boundary_samples(*polygon_, samples)) {
    const Vec2 x = (*this)(b.point);
    c = std::min({c, dot(x, b.normal), dot(x, b.other_normal)});
  }
  return c;
}

Vec2 flow(const OutwardField& field, double t, const Vec2& x0, int steps) {
  if (t < 0.0) throw Error(ErrorCode::Precondition, "flow time must be nonnegative");
  if (t == 0.0 || steps <= 0) return x0;
  const double dt = t / steps;
  Vec2 x = x0;
  for (int i = 0; i < steps; ++i) {
    const Vec2 k1 = field(x);
    const Vec2 k2 = field(x + (0.5 * dt) * k1);
    const Vec2 k3 = field(x + (0.5 * dt) * k2);
    const Vec2 k4 = field(x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

SandwichReport verify_sandwich(const OutwardField& field, const std::vector<double>& ts,
                               const SandwichOptions& options) {
  for (double t : ts)
    if (t < 0.0 || t > options.delta)
      throw Error(ErrorCode::Precondition, "flow time " + std::to_string(t) + " is outside [0, delta]");
  const auto samples = boundary_samples(field.polygon(), options.samples);
  const auto& poly = field.polygon();
  const double step = options.jacobian_step;

  SandwichReport report;
  report.lambda = std::numeric_limits<double>::infinity();
  report.min_jacobian = std::numeric_limits<double>::infinity();
  report.normal_component = field.min_normal_component(options.samples);
  for (double t : ts) {
    SandwichRow row;
    row.t = t;
    row.min_distance = std::numeric_limits<double>::infinity();
    row.lambda = t > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    row.min_jacobian = std::numeric_limits<double>::infinity();
    for (const auto& b : samples) {
      const Vec2 y = flow(field, t, b.point);
      const double d = t > 0.0 ? std::max(poly.signed_distance(y), 0.0) : 0.0;
      row.min_distance = std::min(row.min_distance, d);
      row.max_distance = std::max(row.max_distance, d);
      if (t > 0.0) row.lambda = std::min(row.lambda, d > 0.0 ? std::min(d / t, t / d) : 0.0);
      const Vec2 ex{step, 0.0}, ey{0.0, step};
      const Vec2 cx = (flow(field, t, b.point + ex) - flow(field, t, b.point - ex)) / (2.0 * step);
      const Vec2 cy = (flow(field, t, b.point + ey) - flow(field, t, b.point - ey)) / (2.0 * step);
      row.min_jacobian = std::min(row.min_jacobian, Mat2::from_columns(cx, cy).det());
    }
    if (t > 0.0) report.lambda = std::min(report.lambda, row.lambda);
    report.min_jacobian = std::min(report.min_jacobian, row.min_jacobian);
    report.rows.push_back(row);
  }
  if (!std::isfinite(report.lambda)) report.lambda = 0.0;
  return report;
}

double semigroup_defect(const OutwardField& field, double t, int count, std::uint64_t seed) {
  const auto& poly = field.polygon();
  const auto& box = poly.bounding_box();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.lo.x - field.width(), box.hi.x + field.width());
  std::uniform_real_distribution<double> uy(box.lo.y - field.width(), box.hi.y + field.width());
  double worst = 0.0;
  for (int found = 0; found < count;) {
    const Vec2 x{ux(rng), uy(rng)};
    const double d = poly.signed_distance(x);
    if (d <= -field.inner_width() || d >= field.width()) continue;
    ++found;
    const Vec2 half = flow(field, 0.5 * t, flow(field, 0.5 * t, x));
    worst = std::max(worst, distance(half, flow(field, t, x)));
  }
  return worst;
}

}  // namespace isopar::flowmap
