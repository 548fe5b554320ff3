#include <random>

#include "doctest.h"
#include "quadrature.hpp"
#include "reference.hpp"

using namespace isopar;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Integral of x^a y^b over the reference triangle.
double monomial_integral(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

}  // namespace

TEST_CASE("quadrature weights and exactness") {
  for (int d = 0; d <= 12; ++d) {
    const auto q = triangle_quadrature(d);
    CAPTURE(d);
    double sum = 0.0;
    for (double w : q.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 0.5) <= 1e-14);
    CHECK(q.exact_degree >= d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.points.size(); ++i)
          s += q.weights[i] * std::pow(q.points[i].x, a) * std::pow(q.points[i].y, b);
        CHECK(std::abs(s - monomial_integral(a, b)) <= 1e-15);
      }
  }
}

TEST_CASE("reference element basics") {
  for (int r = 1; r <= 3; ++r) {
    CAPTURE(r);
    const auto& re = reference_element(r);
    CHECK(re.size() == (r + 1) * (r + 2) / 2);
    CHECK(re.quadrature().exact_degree >= 2 * r + 2);

    // Kronecker property.
    std::vector<double> v(re.size());
    for (int j = 0; j < re.size(); ++j) {
      re.values(re.nodes()[j], v.data());
      for (int i = 0; i < re.size(); ++i) CHECK(std::abs(v[i] - (i == j ? 1.0 : 0.0)) <= 1e-13);
    }
    // Partition of unity and zero-sum gradients at quadrature points.
    for (std::size_t q = 0; q < re.quadrature().points.size(); ++q) {
      double s = 0.0;
      Vec2 g{0, 0};
      for (int i = 0; i < re.size(); ++i) {
        s += re.quad_values(q)[i];
        g += re.quad_gradients(q)[i];
      }
      CHECK(std::abs(s - 1.0) <= 1e-13);
      CHECK(norm(g) <= 1e-12);
    }
  }
}

TEST_CASE("node layout") {
  const auto& re = reference_element(3);
  // Edge (0,1) runs along y = 0 from the origin.
  const auto e0 = re.edge_nodes(0);
  REQUIRE(e0.size() == 4);
  CHECK(re.nodes()[e0[1]].x == doctest::Approx(1.0 / 3.0));
  CHECK(re.nodes()[e0[2]].x == doctest::Approx(2.0 / 3.0));
  for (int i : e0) CHECK(re.nodes()[i].y == 0.0);
  // Edge (2,0) runs along x = 0 from (0,1) down.
  const auto e2 = re.edge_nodes(2);
  CHECK(re.nodes()[e2[1]].y == doctest::Approx(2.0 / 3.0));
  CHECK(re.nodes()[9].x == doctest::Approx(1.0 / 3.0));
  CHECK(re.nodes()[9].y == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("basis gradients match finite differences and polynomials are reproduced") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, 0.45);
  for (int r = 1; r <= 3; ++r) {
    const auto& re = reference_element(r);
    std::vector<double> vp(re.size()), vm(re.size()), v(re.size());
    std::vector<Vec2> g(re.size());
    for (int trial = 0; trial < 20; ++trial) {
      const Vec2 p{u(rng), u(rng)};
      re.gradients(p, g.data());
      const double eps = 1e-6;
      re.values(p + Vec2{eps, 0}, vp.data());
      re.values(p - Vec2{eps, 0}, vm.data());
      for (int i = 0; i < re.size(); ++i) CHECK(std::abs((vp[i] - vm[i]) / (2 * eps) - g[i].x) < 1e-7);
      re.values(p + Vec2{0, eps}, vp.data());
      re.values(p - Vec2{0, eps}, vm.data());
      for (int i = 0; i < re.size(); ++i) CHECK(std::abs((vp[i] - vm[i]) / (2 * eps) - g[i].y) < 1e-7);

      // Degree-r polynomial interpolated at the nodes is reproduced.
      auto poly = [r](Vec2 q) { return 0.3 + q.x - 2.0 * q.y + std::pow(q.x, r) + 0.7 * std::pow(q.y, r); };
      re.values(p, v.data());
      double s = 0.0;
      for (int i = 0; i < re.size(); ++i) s += poly(re.nodes()[i]) * v[i];
      CHECK(std::abs(s - poly(p)) < 1e-13);
    }
  }
  CHECK_THROWS_AS(reference_element(4), Error);
}
