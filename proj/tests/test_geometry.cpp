#include <random>

#include "doctest.h"
#include "geometry.hpp"

using namespace isopar;
using namespace isopar::geometry;

namespace {

// Dense polyline scan used as an independent closest-point oracle.
double brute_force_distance(const CurvilinearPolygon& poly, const Vec2& p, int samples_per_arc) {
  double best = 1e300;
  for (int a = 0; a < poly.arc_count(); ++a)
    for (int k = 0; k <= samples_per_arc; ++k)
      best = std::min(best, distance(p, poly.arc_point(a, static_cast<double>(k) / samples_per_arc)));
  return best;
}

}  // namespace

TEST_CASE("arc_point on the unit circle") {
  const auto disk = make_domain("disk");
  const auto& poly = *disk.polygon;
  const Vec2 p0 = poly.arc_point(0, 0.0);
  CHECK(p0.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(p0.y) < 1e-15);
  const Vec2 q = poly.arc_point(0, 0.25);
  CHECK(std::abs(q.x) < 1e-15);
  CHECK(q.y == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(poly.arc_point(0, 1.5), Error);
  CHECK_THROWS_AS(poly.arc_point(0, -1e-9), Error);
}

TEST_CASE("lens arc midpoint is equidistant from the corners") {
  const auto lens = make_domain("lens");
  const auto& poly = *lens.polygon;
  const auto corners = poly.corners();
  REQUIRE(corners.size() == 2);
  for (int a = 0; a < 2; ++a) {
    const Vec2 mid = poly.arc_point(a, 0.5);
    CHECK(std::abs(distance(mid, corners[0].point) - distance(mid, corners[1].point)) < 1e-13);
  }
  // Opening angle pi - angle between the two radii at the corner.
  const double expected = kPi - std::acos(0.68);
  for (const auto& c : corners) CHECK(c.angle == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("polygon invariants are enforced") {
  const auto disk = make_domain("disk");
  CHECK(disk.polygon->corners().empty());
  CHECK(disk.polygon->signed_area() == doctest::Approx(kPi).epsilon(1e-9));

  // Gap between arcs.
  CHECK_THROWS_AS(CurvilinearPolygon({std::make_shared<CircleArc>(Vec2{0, 0}, 1.0, 0.0, 6.0)}), Error);
  // Clockwise circle.
  CHECK_THROWS_AS(CurvilinearPolygon({std::make_shared<CircleArc>(Vec2{0, 0}, 1.0, 2.0 * kPi, 0.0)}), Error);
  // Reflex corner: union of two disks rather than the intersection.
  const double alpha = std::acos(0.4);
  std::vector<std::shared_ptr<const BoundaryArc>> union_arcs = {
      std::make_shared<CircleArc>(Vec2{0.4, 0}, 1.0, -(kPi - alpha), kPi - alpha),
      std::make_shared<CircleArc>(Vec2{-0.4, 0}, 1.0, alpha, 2.0 * kPi - alpha)};
  CHECK_THROWS_AS(CurvilinearPolygon(union_arcs, PolygonOptions{}), Error);
  PolygonOptions relaxed;
  relaxed.require_convex_corners = false;
  const CurvilinearPolygon reflex(union_arcs, relaxed);
  for (const auto& c : reflex.corners()) CHECK(c.angle > kPi);
}

TEST_CASE("closest_boundary examples") {
  const auto disk = make_domain("disk");
  const auto& poly = *disk.polygon;

  const auto far = poly.closest_boundary({2.0, 0.0});
  CHECK(far.distance == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(distance(far.point, {1.0, 0.0}) < 1e-12);

  const auto centre = poly.closest_boundary({0.0, 0.0});
  CHECK(centre.distance == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(centre.s == 0.0);

  const auto lens = make_domain("lens");
  const auto corner = lens.polygon->corners().front();
  const Vec2 p = corner.point + Vec2{0.0, 0.01};
  const auto cp = lens.polygon->closest_boundary(p);
  CHECK(cp.distance == doctest::Approx(distance(p, corner.point)).epsilon(1e-12));
  CHECK((cp.s == 0.0 || cp.s == 1.0));
  CHECK(cp.arc == 0);  // tie between arc 0 (s = 1) and arc 1 (s = 0)
  CHECK(std::abs(cp.distance - brute_force_distance(*lens.polygon, p, 5000)) < 1e-6);
}

TEST_CASE("closest_boundary matches brute force and is stationary") {
  std::mt19937_64 rng(3);
  for (const auto& name : stock_domain_names()) {
    const auto entry = make_domain(name);
    const auto& poly = *entry.polygon;
    const auto& bb = poly.bounding_box();
    std::uniform_real_distribution<double> ux(bb.lo.x - 0.5, bb.hi.x + 0.5), uy(bb.lo.y - 0.5, bb.hi.y + 0.5);
    for (int i = 0; i < 200; ++i) {
      const Vec2 p{ux(rng), uy(rng)};
      const auto cp = poly.closest_boundary(p);
      const double brute = brute_force_distance(poly, p, 10000);
      CHECK(cp.distance <= brute + 1e-12);
      CHECK(cp.distance >= brute - 1e-5);
      if (cp.s > 1e-9 && cp.s < 1.0 - 1e-9) {
        const Vec2 t = poly.arc(cp.arc).eval(cp.s).d1;
        CHECK(std::abs(dot(p - cp.point, t)) <= 1e-9 * norm(t) * std::max(cp.distance, 1e-3));
      }
    }
  }
}

TEST_CASE("closest_boundary is symmetric on the disk") {
  const auto disk = make_domain("disk");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.8, 1.8);
  for (int i = 0; i < 500; ++i) {
    const Vec2 p{u(rng), u(rng)};
    CHECK(std::abs(disk.polygon->closest_boundary(p).distance - disk.polygon->closest_boundary({-p.x, p.y}).distance) <
          1e-10);
  }
}

TEST_CASE("contains examples") {
  CHECK(make_domain("disk").polygon->contains({0, 0}));
  CHECK_FALSE(make_domain("disk").polygon->contains({2, 0}));
  CHECK(make_domain("flower").polygon->contains({1.1, 0}));
  CHECK_FALSE(make_domain("flower").polygon->contains({1.25, 0}));
  CHECK_FALSE(make_domain("disk").polygon->contains({1.0, 0.0}));
}

TEST_CASE("contains agrees with analytic descriptions") {
  const auto disk = make_domain("disk");
  const auto lens = make_domain("lens");
  const auto flower = make_domain("flower");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int disagreements = 0;
  for (int i = 0; i < 100000; ++i) {
    const Vec2 p{u(rng), u(rng)};
    const double r = norm(p);
    const double disk_level = 1.0 - r;
    const double lens_level =
        std::min(1.0 - distance(p, {0.4, 0.0}), 1.0 - distance(p, {-0.4, 0.0}));
    const double flower_level = 1.0 + 0.2 * std::cos(5.0 * std::atan2(p.y, p.x)) - r;
    if (std::abs(disk_level) > 1e-8 && disk.polygon->contains(p) != (disk_level > 0)) ++disagreements;
    if (std::abs(lens_level) > 1e-8 && lens.polygon->contains(p) != (lens_level > 0)) ++disagreements;
    if (std::abs(flower_level) > 1e-8 && flower.polygon->contains(p) != (flower_level > 0)) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("domain file grammar") {
  const auto flower = parse_domain_text(
      "# five-petal flower\n"
      "name flower2\n"
      "polar-arc 0 0 0 2pi 1 0 0 0 0 0 0 0 0 0.2 0\n");
  CHECK(flower.name == "flower2");
  const auto stock = make_domain("flower");
  for (double s : {0.0, 0.13, 0.5, 0.77})
    CHECK(distance(flower.polygon->arc_point(0, s), stock.polygon->arc_point(0, s)) < 1e-15);

  // describe() emits the grammar, so stock domains round-trip through text.
  const auto lens = make_domain("lens");
  std::string text;
  for (int a = 0; a < lens.polygon->arc_count(); ++a) text += lens.polygon->arc(a).describe() + "\n";
  const auto reparsed = parse_domain_text(text);
  CHECK(reparsed.polygon->corners().size() == 2);
  CHECK(distance(reparsed.polygon->arc_point(1, 0.3), lens.polygon->arc_point(1, 0.3)) < 1e-15);
}

TEST_CASE("domain file errors carry line numbers") {
  try {
    parse_domain_text("circle-arc 0 0 1 0 2pi\nbogus 1 2\n");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_domain_text("circle-arc 0 0 1 0\n"), Error);
  CHECK_THROWS_AS(parse_domain_text("# nothing\n"), Error);
  CHECK_THROWS_AS(make_domain("square"), Error);
}

TEST_CASE("manufactured solutions vanish on the boundary and solve the Poisson equation") {
  for (const char* name : {"disk", "lens"}) {
    const auto entry = make_domain(name);
    REQUIRE(entry.solution.has_value());
    const auto check = check_manufactured(entry);
    CHECK(check.max_boundary_u <= 1e-10);
    CHECK(check.max_laplacian_rel_error <= 1e-4);
    CHECK(check.ok);
  }
  CHECK_FALSE(make_domain("flower").solution.has_value());
}

TEST_CASE("arc length and inradius") {
  const auto disk = make_domain("disk");
  CHECK(disk.polygon->arc_length(0) == doctest::Approx(2.0 * kPi).epsilon(1e-13));
  CHECK(disk.polygon->inradius_estimate() == doctest::Approx(1.0).epsilon(1e-5));
  const auto lens = make_domain("lens");
  CHECK(lens.polygon->arc_length(0) == doctest::Approx(2.0 * std::acos(0.4)).epsilon(1e-13));
  CHECK(lens.polygon->inradius_estimate() == doctest::Approx(0.6).epsilon(1e-5));
}
