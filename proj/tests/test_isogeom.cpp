#include <random>

#include "doctest.h"
#include "isogeom.hpp"
#include "rates.hpp"

using namespace isopar;
using namespace isopar::iso;

namespace {

// Quarter-circle element: curved edge from (1,0) to (0,1) on the unit circle, apex at the origin.
mesh::Mesh quarter_mesh() {
  mesh::Mesh m;
  m.vertices = {{1, 0}, {0, 1}, {0, 0}};
  m.triangles = {{0, 1, 2}};
  m.boundary = {{0, 0, 0, 0.0, 0.25}};
  m.update_size();
  return m;
}

std::array<double, 2> symmetric_eigenvalues(const Mat2& a) {
  const double m = 0.5 * (a.a + a.d);
  const double r = std::sqrt(0.25 * (a.a - a.d) * (a.a - a.d) + a.b * a.c);
  return {m - r, m + r};
}

Vec2 affine_map(const ElementGeometry& el, const Vec2& ref) { return el.corners[0] + el.affine * ref; }

}  // namespace

TEST_CASE("quarter-circle element under the smooth blend") {
  const auto disk = geometry::make_domain("disk");
  const Geometry g(disk.polygon, quarter_mesh(), 2);
  const Vec2 mid = g.exact_map(0, {0.5, 0.0});
  CHECK(mid.x == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(mid.y == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  const Vec2 apex = g.exact_map(0, {0.0, 1.0});
  CHECK(norm(apex) < 1e-15);
  const Vec2 c = g.exact_map(0, {1.0 / 3.0, 1.0 / 3.0});
  const double expected = 1.0 / 3.0 + 4.0 / 9.0 * (std::sqrt(0.5) - 0.5);
  CHECK(c.x == doctest::Approx(expected).epsilon(1e-13));
  CHECK(c.y == doctest::Approx(expected).epsilon(1e-13));
  CHECK_THROWS_AS(g.exact_map(0, {0.7, 0.7}), Error);
}

TEST_CASE("quarter-circle element under the Gordon-Hall blend") {
  const auto disk = geometry::make_domain("disk");
  const Geometry g(disk.polygon, quarter_mesh(), 2, Blend::GordonHall);
  const Vec2 c = g.exact_map(0, {1.0 / 3.0, 1.0 / 3.0});
  CHECK(c.x == doctest::Approx(0.471404).epsilon(1e-6));
  CHECK(c.y == doctest::Approx(0.471404).epsilon(1e-6));
  CHECK(norm(g.exact_map(0, {0.0, 1.0})) < 1e-15);
}

TEST_CASE("exact map: straight-edge conformity, arc exactness, gradient") {
  for (const char* name : {"disk", "lens", "flower"}) {
    const auto dom = geometry::make_domain(name);
    const auto m = mesh::generate(*dom.polygon, 0.1);
    for (Blend blend : {Blend::Smooth, Blend::GordonHall}) {
      const Geometry g(dom.polygon, m, 2, blend);
      double straight = 0.0, arc = 0.0, grad = 0.0;
      for (int e = 0; e < g.element_count(); ++e) {
        const auto& el = g.element(e);
        if (!el.curved) continue;
        for (int k = 0; k <= 20; ++k) {
          const double t = k / 20.0;
          // l0 = 0 edge (x + y = 1) and l1 = 0 edge (x = 0).
          const Vec2 p1{1.0 - t, t}, p2{0.0, t};
          straight = std::max(straight, distance(g.exact_map(e, p1), affine_map(el, p1)));
          straight = std::max(straight, distance(g.exact_map(e, p2), affine_map(el, p2)));
          const Vec2 on_arc = dom.polygon->arc(el.arc).eval(el.s_a + (el.s_b - el.s_a) * t).p;
          arc = std::max(arc, distance(g.exact_map(e, {t, 0.0}), on_arc));
        }
        // Includes points in both endpoint bands of the smooth blend.
        for (const Vec2 p : {Vec2{0.2, 0.3}, Vec2{2e-5, 1e-4}, Vec2{0.6, 0.1}, Vec2{0.9999, 5e-5}}) {
          const double eps = 1e-6;
          const Mat2 J = g.exact_jacobian(e, p);
          const Vec2 dx = (g.exact_map(e, p + Vec2{eps, 0}) - g.exact_map(e, p - Vec2{eps, 0})) / (2 * eps);
          const Vec2 dy = (g.exact_map(e, p + Vec2{0, eps}) - g.exact_map(e, p - Vec2{0, eps})) / (2 * eps);
          grad = std::max({grad, norm(dx - J.col0()), norm(dy - J.col1())});
        }
      }
      CAPTURE(name);
      CHECK(straight <= 1e-13);
      CHECK(arc <= 1e-12);
      CHECK(grad <= 1e-7);
    }
  }
}

TEST_CASE("elevation examples") {
  const auto disk = geometry::make_domain("disk");
  const auto m = mesh::generate(*disk.polygon, 0.3);

  const Geometry g1(disk.polygon, m, 1);
  double affine_gap = 0.0;
  int curved = 0;
  for (int e = 0; e < g1.element_count(); ++e) {
    const auto& el = g1.element(e);
    curved += el.curved;
    for (const Vec2 p : {Vec2{0.2, 0.3}, Vec2{0.5, 0.5}, Vec2{0.9, 0.05}})
      affine_gap = std::max(affine_gap, distance(g1.map(e, p), affine_map(el, p)));
  }
  CHECK(affine_gap <= 1e-15);
  CHECK(curved == static_cast<int>(m.boundary.size()));

  const Geometry g2(disk.polygon, m, 2);
  const auto& re = g2.reference();
  for (int e = 0; e < g2.element_count(); ++e) {
    const auto& el = g2.element(e);
    if (!el.curved) continue;
    CHECK(std::abs(norm(el.nodes[re.edge_nodes(0)[1]]) - 1.0) <= 1e-12);
    // F_K interpolates F̌_K at every node.
    for (int i = 0; i < re.size(); ++i) CHECK(distance(g2.map(e, re.nodes()[i]), g2.exact_map(e, re.nodes()[i])) <= 1e-14);
  }

  const auto flower = geometry::make_domain("flower");
  const Geometry gf(flower.polygon, mesh::generate(*flower.polygon, 0.1), 2);
  for (int e = 0; e < gf.element_count(); ++e)
    for (const auto& p : reference_sample_grid()) CHECK(gf.jacobian(e, p).det() > 0.0);
}

TEST_CASE("elevation rejects folded elements") {
  // A flower valley arc bound to a triangle whose apex sits between the chord
  // and the arc, so the curved edge crosses the opposite vertex.
  const auto flower = geometry::make_domain("flower");
  const double t0 = kPi / 5.0 - 0.3, t1 = kPi / 5.0 + 0.3;
  const double s0 = t0 / (2.0 * kPi), s1 = t1 / (2.0 * kPi);
  mesh::Mesh m;
  const Vec2 v0 = flower.polygon->arc_point(0, s0), v1 = flower.polygon->arc_point(0, s1);
  m.vertices = {v0, v1, 0.98 * (0.5 * (v0 + v1))};
  m.triangles = {{0, 1, 2}};
  m.boundary = {{0, 0, 0, s0, s1}};
  m.update_size();
  try {
    Geometry g(flower.polygon, m, 2);
    FAIL("expected elevation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Elevation);
    CHECK(std::string(e.what()).find("element 0") != std::string::npos);
  }
}

TEST_CASE("phi examples") {
  const auto disk = geometry::make_domain("disk");
  const auto m = mesh::generate(*disk.polygon, 0.2);
  for (int r = 1; r <= 3; ++r) {
    const Geometry g(disk.polygon, m, r);
    const auto& re = g.reference();
    for (int e = 0; e < g.element_count(); ++e) {
      const auto& el = g.element(e);
      if (!el.curved) {
        const Vec2 x = affine_map(el, {0.25, 0.25});
        CHECK(g.phi(e, x) == x);
        const Mat2 J = g.phi_jacobian(e, x);
        CHECK((J.a == 1.0 && J.b == 0.0 && J.c == 0.0 && J.d == 1.0));
        continue;
      }
      for (int i = 0; i < re.size(); ++i) CHECK(distance(g.phi(e, g.map(e, re.nodes()[i])), el.nodes[i]) <= 1e-12);
      if (r == 1) {
        const Vec2 mid = 0.5 * (el.corners[0] + el.corners[1]);
        const Vec2 p = g.phi(e, mid);
        CHECK(std::abs(norm(p) - 1.0) <= 1e-12);
        CHECK(distance(p, disk.polygon->arc_point(0, 0.5 * (el.s_a + el.s_b))) <= 1e-12);
      }
    }
  }
}

TEST_CASE("Newton round trip on boundary elements") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* name : {"disk", "lens", "flower"}) {
    const auto dom = geometry::make_domain(name);
    const Geometry g(dom.polygon, mesh::generate(*dom.polygon, 0.1), 3);
    double worst = 0.0;
    for (int e = 0; e < g.element_count(); ++e) {
      if (!g.element(e).curved) continue;
      for (int k = 0; k < 100; ++k) {
        double a = u(rng), b = u(rng);
        if (a + b > 1.0) {
          a = 1.0 - a;
          b = 1.0 - b;
        }
        const Vec2 x = g.map(e, {a, b});
        const Vec2 ref = g.invert(e, x);
        worst = std::max(worst, distance(g.map(e, ref), x));
        Vec2 ref2;
        CHECK(g.invert_exact(e, g.exact_map(e, {a, b}), ref2));
        CHECK(distance(ref2, Vec2{a, b}) < 1e-10);
      }
    }
    CAPTURE(name);
    CHECK(worst <= 1e-10);
    // A point far away is rejected.
    int curved = 0;
    while (!g.element(curved).curved) ++curved;
    CHECK_THROWS_AS(g.invert(curved, g.map(curved, {0.3, 0.3}) + Vec2{5.0, 5.0}), Error);
  }
}

TEST_CASE("coefficient matrix is close to the identity") {
  const auto disk = geometry::make_domain("disk");
  const double h = 0.2;
  const Geometry g(disk.polygon, mesh::generate(*disk.polygon, h), 2);
  double worst = 0.0;
  for (int e = 0; e < g.element_count(); ++e) {
    for (const auto& p : g.reference().quadrature().points) {
      const Mat2 A = g.coefficient_matrix(e, p);
      if (!g.element(e).curved) {
        CHECK((A.a == 1.0 && A.b == 0.0 && A.c == 0.0 && A.d == 1.0));
        continue;
      }
      CHECK(std::abs(A.b - A.c) <= 1e-15);
      const auto ev = symmetric_eigenvalues(A);
      CHECK(ev[0] > 0.0);
      worst = std::max({worst, (A - Mat2::identity()).frobenius(), std::abs(ev[0] - 1.0), std::abs(ev[1] - 1.0)});
    }
  }
  CHECK(worst / (h * h) < 10.0);
}

TEST_CASE("geometric convergence rates on the disk") {
  const auto disk = geometry::make_domain("disk");
  std::vector<double> hs, phi1, a2;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    const auto m = mesh::generate(*disk.polygon, h);
    const auto e1 = geometry_errors(Geometry(disk.polygon, m, 1));
    const auto e2 = geometry_errors(Geometry(disk.polygon, m, 2));
    CHECK(e1.interior_max == 0.0);
    CHECK(e2.interior_max == 0.0);
    hs.push_back(m.h);
    phi1.push_back(e1.phi_error);
    a2.push_back(e2.a_error);
  }
  const double s1 = fit_rate(hs, phi1).slope;
  const double s2 = fit_rate(hs, a2).slope;
  CHECK(s1 >= 1.7);
  CHECK(s1 <= 2.3);
  CHECK(s2 >= 1.7);
  CHECK(s2 <= 2.3);
}

TEST_CASE("inverse estimate constant is stable in h") {
  const auto lens = geometry::make_domain("lens");
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> constants;
  for (double h : {0.2, 0.1, 0.05}) {
    const Geometry g(lens.polygon, mesh::generate(*lens.polygon, h), 2);
    const auto& re = g.reference();
    const auto samples = reference_sample_grid();
    std::vector<std::vector<double>> val(samples.size(), std::vector<double>(re.size()));
    std::vector<std::vector<Vec2>> grad(samples.size(), std::vector<Vec2>(re.size()));
    for (std::size_t k = 0; k < samples.size(); ++k) {
      re.values(samples[k], val[k].data());
      re.gradients(samples[k], grad[k].data());
    }
    double c = 0.0;
    std::vector<double> coef(re.size());
    for (int e = 0; e < g.element_count(); ++e) {
      if (!g.element(e).curved) continue;
      for (int trial = 0; trial < 100; ++trial) {
        for (auto& x : coef) x = u(rng);
        double vmax = 0.0, gmax = 0.0;
        for (std::size_t k = 0; k < samples.size(); ++k) {
          double v = 0.0;
          Vec2 gr{0, 0};
          for (int i = 0; i < re.size(); ++i) {
            v += coef[i] * val[k][i];
            gr += coef[i] * grad[k][i];
          }
          const Vec2 phys = g.jacobian(e, samples[k]).inverse().transpose() * gr;
          vmax = std::max(vmax, std::abs(v));
          gmax = std::max(gmax, norm(phys));
        }
        c = std::max(c, h * gmax / vmax);
      }
    }
    constants.push_back(c);
  }
  const double lo = *std::min_element(constants.begin(), constants.end());
  const double hi = *std::max_element(constants.begin(), constants.end());
  CHECK(hi / lo <= 2.0);
}
