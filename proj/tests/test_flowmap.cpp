#include <random>

#include "doctest.h"
#include "flowmap.hpp"

using namespace isopar;
using namespace isopar::flowmap;

namespace {

// Union of the two lens disks: two reflex corners.
std::shared_ptr<const geometry::CurvilinearPolygon> peanut() {
  const double a = std::atan2(std::sqrt(1.0 - 0.16), 0.4);
  std::vector<std::shared_ptr<const geometry::BoundaryArc>> arcs = {
      std::make_shared<geometry::CircleArc>(Vec2{-0.4, 0.0}, 1.0, a, 2.0 * kPi - a),
      std::make_shared<geometry::CircleArc>(Vec2{0.4, 0.0}, 1.0, -(kPi - a), kPi - a)};
  geometry::PolygonOptions options;
  options.require_convex_corners = false;
  return std::make_shared<geometry::CurvilinearPolygon>(arcs, options);
}

}  // namespace

TEST_CASE("outward field on the disk is radial") {
  const auto disk = geometry::make_domain("disk");
  const OutwardField field(disk.polygon);
  CHECK(field.width() == doctest::Approx(0.2).epsilon(1e-3));
  CHECK(field.inner_width() == doctest::Approx(0.1).epsilon(1e-3));

  const Vec2 x = field(Vec2{1.0, 0.0});
  CHECK(std::abs(x.x - 1.0) <= 1e-12);
  CHECK(std::abs(x.y) <= 1e-12);
  CHECK(norm(field(Vec2{0.0, 0.0})) == 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi), radius(0.8, 1.3);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double t = angle(rng), r = radius(rng);
    const Vec2 p{r * std::cos(t), r * std::sin(t)};
    const Vec2 expected = field.cutoff(r - 1.0) * Vec2{std::cos(t), std::sin(t)};
    worst = std::max(worst, distance(field(p), expected));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("outward field conditions") {
  for (const char* name : {"disk", "lens", "flower"}) {
    const auto dom = geometry::make_domain(name);
    const OutwardField field(dom.polygon);
    const auto& poly = *dom.polygon;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    double biggest = 0.0, dist_gap = 0.0;
    bool support_ok = true;
    for (int k = 0; k < 3000; ++k) {
      const Vec2 p{coord(rng), coord(rng)};
      const double d = poly.signed_distance(p);
      const Vec2 x = field(p);
      biggest = std::max(biggest, norm(x));
      if (d <= -field.inner_width() || d >= field.width()) support_ok = support_ok && x == Vec2{0, 0};
      if (d > -field.width() && d < field.width()) dist_gap = std::max(dist_gap, std::abs(d - field.signed_distance(p)));
    }
    CAPTURE(name);
    CHECK(biggest <= 1.0 + 1e-14);
    CHECK(support_ok);
    CHECK(dist_gap <= 1e-12);
    CHECK(field.min_normal_component() >= 0.2);
  }
}

TEST_CASE("blended direction at lens corners points out of both arcs") {
  const auto lens = geometry::make_domain("lens");
  const OutwardField field(lens.polygon);
  const auto corners = lens.polygon->corners();
  REQUIRE(corners.size() == 2);
  for (const auto& c : corners) {
    const Vec2 v = field.direction(c.point);
    CHECK(dot(v, lens.polygon->outward_normal(c.before, 1.0)) > 0.0);
    CHECK(dot(v, lens.polygon->outward_normal(c.after, 0.0)) > 0.0);
  }
}

TEST_CASE("field construction errors") {
  try {
    OutwardField bad(peanut(), 0.1, 0.05);
    FAIL("expected construction error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Construction);
  }
  const auto lens = geometry::make_domain("lens");
  CHECK_THROWS_AS(OutwardField(lens.polygon, 0.1, 0.2), Error);
  CHECK_THROWS_AS(OutwardField(lens.polygon, 0.6, 0.1), Error);
}

TEST_CASE("flow map") {
  const auto disk = geometry::make_domain("disk");
  const OutwardField field(disk.polygon);
  const Vec2 p{0.3, -0.95};
  CHECK(flow(field, 0.0, p) == p);
  for (double t : {0.0125, 0.025, 0.05}) {
    const Vec2 y = flow(field, t, Vec2{1.0, 0.0});
    CHECK(std::abs(y.x - (1.0 + t)) <= 1e-6);
    CHECK(std::abs(y.y) <= 1e-6);
  }
  // Identity exactly off the support.
  for (const Vec2 q : {Vec2{0.1, 0.2}, Vec2{1.5, 0.0}, Vec2{0.0, -0.85}})
    CHECK(flow(field, 0.05, q) == q);
}

TEST_CASE("sandwich verification") {
  SandwichOptions options;
  options.samples = 96;
  for (const char* name : {"disk", "lens"}) {
    const auto dom = geometry::make_domain(name);
    const OutwardField field(dom.polygon);
    const auto report = verify_sandwich(field, {0.0, 0.0125, 0.025, 0.05}, options);
    CAPTURE(name);
    REQUIRE(report.rows.size() == 4);
    CHECK(report.rows[0].max_distance == 0.0);
    CHECK(report.rows[0].lambda == 0.0);
    CHECK(report.lambda >= (std::string(name) == "disk" ? 0.5 : 0.2));
    CHECK(report.min_jacobian > 0.0);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      CHECK(report.rows[i].min_distance >= report.rows[i - 1].min_distance);
      CHECK(report.rows[i].max_distance >= report.rows[i - 1].max_distance);
    }
    CHECK(semigroup_defect(field, 0.05, 40) <= 1e-6);
  }
  const auto disk = geometry::make_domain("disk");
  CHECK_THROWS_AS(verify_sandwich(OutwardField(disk.polygon), {0.1}), Error);
}

TEST_CASE("boundary points escape monotonically") {
  const auto lens = geometry::make_domain("lens");
  const OutwardField field(lens.polygon);
  for (const auto& b : boundary_samples(*lens.polygon, 24)) {
    double previous = 0.0;
    for (int k = 1; k <= 8; ++k) {
      const double d = lens.polygon->signed_distance(flow(field, 0.05 * k / 8, b.point, 16));
      CHECK(d >= previous - 1e-12);
      previous = d;
    }
  }
}
