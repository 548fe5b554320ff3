#include <random>

#include "doctest.h"
#include "operators.hpp"
#include "rates.hpp"

using namespace isopar;
using namespace isopar::ops;

namespace {

std::shared_ptr<const fem::Space> make_space(const std::string& domain, double h, int r) {
  const auto dom = geometry::make_domain(domain);
  return std::make_shared<fem::Space>(
      std::make_shared<iso::Geometry>(dom.polygon, mesh::generate(*dom.polygon, h), r));
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("interpolation reproduces linear functions and constants") {
  const ScalarField lin = [](Vec2 p) { return 0.3 - 1.2 * p.x + 0.7 * p.y; };
  for (int r = 1; r <= 3; ++r) {
    const auto space = make_space("disk", 0.2, r);
    const auto u = interpolate(space, lin, Placement::OnOmegaH);
    // 10 x 10 samples per interior element.
    double worst = 0.0;
    const auto& geo = space->geometry();
    for (int e = 0; e < space->element_count(); ++e) {
      if (geo.element(e).curved) continue;
      for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
          const Vec2 ref{i / 10.0 * (1.0 - j / 10.0), j / 10.0};
          worst = std::max(worst, std::abs(u.value(e, ref) - lin(geo.map(e, ref))));
        }
    }
    CHECK(worst <= 1e-13);
    // On straight P1 meshes the Omega_h-sampled error is zero as well.
    if (r == 1) CHECK(linf_error(u, lin, Sampling::OnOmegaH) <= 1e-13);

    for (auto placement : {Placement::OnOmega, Placement::OnOmegaH}) {
      const auto c = interpolate(space, [](Vec2) { return -2.5; }, placement);
      CHECK(std::all_of(c.coeffs.begin(), c.coeffs.end(), [](double v) { return v == -2.5; }));
    }
  }
}

TEST_CASE("interpolation error rate for x^2 + y^2 with r = 2") {
  const ScalarField g = [](Vec2 p) { return p.x * p.x + p.y * p.y; };
  std::vector<double> hs, errs;
  for (double h : {0.2, 0.1, 0.05}) {
    const auto space = make_space("disk", h, 2);
    hs.push_back(space->geometry().mesh().h);
    errs.push_back(linf_error(interpolate(space, g, Placement::OnOmega), g));
  }
  const auto fit = fit_rate(hs, errs);
  CAPTURE(fit.slope);
  CHECK(fit.slope >= 2.6);
  CHECK(fit.slope <= 3.4);
}

TEST_CASE("discrete harmonic extension") {
  for (int r = 1; r <= 3; ++r) {
    const auto space = make_space("lens", 0.2, r);
    const auto one = discrete_harmonic(space, [](Vec2) { return 1.0; });
    double worst = 0.0;
    for (double c : one.coeffs) worst = std::max(worst, std::abs(c - 1.0));
    CHECK(worst <= 1e-10);
    CHECK(linf_norm(one) / boundary_sup(one) == doctest::Approx(1.0).epsilon(1e-10));
  }

  // Linear boundary data on a P1 (straight) mesh: the interpolant of x.
  const auto p1 = make_space("disk", 0.1, 1);
  const auto ux = discrete_harmonic(p1, [](Vec2 p) { return p.x; });
  double gap = 0.0;
  for (int d = 0; d < p1->dof_count(); ++d) gap = std::max(gap, std::abs(ux.coeffs[d] - p1->dof_points()[d].x));
  CHECK(gap <= 1e-10);

  // Galerkin orthogonality against interior test functions.
  const auto p2 = make_space("flower", 0.2, 2);
  const auto u = discrete_harmonic(p2, [](Vec2 p) { return std::sin(3.0 * p.x) * p.y; });
  const auto a = fem::assemble_stiffness(*p2, fem::Mode::Approx);
  std::vector<double> au;
  a.multiply(u.coeffs, au);
  double res = 0.0;
  for (int d = 0; d < p2->dof_count(); ++d)
    if (!p2->is_boundary(d)) res = std::max(res, std::abs(au[d]));
  CHECK(res <= 1e-10 * max_abs(a.val));
}

TEST_CASE("nodal delta boundary data matches the dense oracle") {
  const auto space = make_space("lens", 0.1, 1);
  const HarmonicSolver solver(space);
  const auto& bd = space->boundary_dofs();
  std::vector<double> g(bd.size(), 0.0);
  g[bd.size() / 3] = 1.0;
  const auto u = solver.solve(g);

  const auto a = fem::assemble_stiffness(*space, fem::Mode::Approx);
  const fem::DirichletReduction red(*space, a);
  REQUIRE(red.free_dofs().size() < 2000);
  const auto dense = red.solve({}, g, true);
  double diff = 0.0;
  for (std::size_t i = 0; i < dense.size(); ++i) diff = std::max(diff, std::abs(dense[i] - u.coeffs[i]));
  CHECK(diff <= 1e-10);
  CHECK(boundary_sup(u) == doctest::Approx(1.0).epsilon(1e-14));
  const double ratio = linf_norm(u) / boundary_sup(u);
  CHECK(ratio >= 1.0);
  CHECK(ratio <= 1.5);
}

TEST_CASE("Poisson solver") {
  const auto dom = geometry::make_domain("disk");
  const auto zero = solve_poisson(make_space("disk", 0.2, 2), [](Vec2) { return 0.0; });
  CHECK(max_abs(zero.coeffs) == 0.0);

  // u = 1 - x^2 - y^2, f = 4.
  const ScalarField u = [](Vec2 p) { return 1.0 - p.x * p.x - p.y * p.y; };
  const double coarse = linf_error(solve_poisson(make_space("disk", 0.2, 1), [](Vec2) { return 4.0; }), u);
  const double fine = linf_error(solve_poisson(make_space("disk", 0.1, 1), [](Vec2) { return 4.0; }), u);
  CAPTURE(coarse);
  CAPTURE(fine);
  CHECK(coarse / fine >= 3.0);

  const auto lens = geometry::make_domain("lens");
  const auto& sol = *lens.solution;
  std::vector<double> hs, errs;
  for (double h : {0.2, 0.1, 0.05}) {
    const auto space = make_space("lens", h, 2);
    sparse::CgResult stats;
    const auto uh = solve_poisson(space, sol.f, &stats);
    CHECK(stats.residual <= 1e-12);
    hs.push_back(space->geometry().mesh().h);
    errs.push_back(linf_error(uh, sol.u));
  }
  const auto fit = fit_rate(hs, errs);
  CAPTURE(fit.slope);
  CHECK(fit.slope >= 2.6);
  CHECK(fit.slope <= 3.4);
}

TEST_CASE("Ritz projection") {
  for (int r = 1; r <= 3; ++r) {
    const auto space = make_space("flower", 0.2, r);
    const auto zero = ritz_project(space, VectorField([](Vec2) { return Vec2{0, 0}; }));
    CHECK(max_abs(zero.coeffs) == 0.0);

    // Idempotence on the interior-supported space.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coin(-1.0, 1.0);
    DiscreteFunction v{space, std::vector<double>(space->dof_count())};
    for (int d = 0; d < space->dof_count(); ++d) v.coeffs[d] = space->is_boundary(d) ? 0.0 : coin(rng);
    const auto rv =
        ritz_project(space, ElementGradient([&](int e, const Vec2& ref) { return transplanted_gradient(v, e, ref); }));
    double diff = 0.0;
    for (int d = 0; d < space->dof_count(); ++d) diff = std::max(diff, std::abs(rv.coeffs[d] - v.coeffs[d]));
    CAPTURE(r);
    CHECK(diff <= 1e-10);
  }

  const VectorField grad = [](Vec2 p) { return Vec2{-2.0 * p.x, -2.0 * p.y}; };
  std::vector<double> hs, errs;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    const auto space = make_space("disk", h, 1);
    hs.push_back(space->geometry().mesh().h);
    errs.push_back(h1_seminorm_error(ritz_project(space, grad), grad));
  }
  const auto fit = fit_rate(hs, errs);
  CAPTURE(fit.slope);
  CHECK(fit.slope >= 0.7);
  CHECK(fit.slope <= 1.3);
}

TEST_CASE("sup-norm estimators") {
  const auto space = make_space("lens", 0.2, 2);
  const auto c = interpolate(space, [](Vec2) { return -3.0; }, Placement::OnOmega);
  CHECK(boundary_sup(c) == 3.0);
  CHECK(linf_error(c, [](Vec2) { return 0.0; }) == doctest::Approx(3.0).epsilon(1e-14));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coin(-1.0, 1.0);
  DiscreteFunction v{space, std::vector<double>(space->dof_count())};
  for (double& x : v.coeffs) x = coin(rng);
  CHECK(linf_error(v, [](Vec2) { return 0.0; }) == linf_norm(v));
  CHECK(linf_error(v, [](Vec2) { return 0.0; }, Sampling::OnOmegaH) == linf_norm(v));

  const auto p1 = make_space("lens", 0.2, 1);
  DiscreteFunction delta{p1, std::vector<double>(p1->dof_count(), 0.0)};
  delta.coeffs[p1->boundary_dofs()[5]] = 1.0;
  CHECK(boundary_sup(delta) == 1.0);
}

TEST_CASE("both L-infinity conventions agree up to the geometric perturbation") {
  const auto dom = geometry::make_domain("disk");
  const auto& sol = *dom.solution;
  for (int r = 1; r <= 3; ++r) {
    for (double h : {0.2, 0.1}) {
      const auto space = make_space("disk", h, r);
      const auto uh = solve_poisson(space, sol.f);
      const auto geo_err = iso::geometry_errors(space->geometry());
      double grad_max = 0.0;
      for (const Vec2& p : space->exact_dof_points()) grad_max = std::max(grad_max, norm(sol.grad_u(p)));
      const double a = linf_error(uh, sol.u, Sampling::OnOmega);
      const double b = linf_error(uh, sol.u, Sampling::OnOmegaH);
      CAPTURE(r);
      CAPTURE(h);
      CHECK(std::abs(a - b) <= 3.0 * grad_max * geo_err.phi_error);
    }
  }
}

TEST_CASE("point location in exact elements") {
  const auto space = make_space("flower", 0.1, 3);
  const auto& geo = space->geometry();
  const PointLocator loc(space->geometry_ptr());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-1.25, 1.25);
  int inside = 0;
  for (int k = 0; k < 2000; ++k) {
    const Vec2 x{coord(rng), coord(rng)};
    int e = -1;
    Vec2 ref;
    const bool found = loc.locate(x, e, ref);
    if (geo.polygon().signed_distance(x) < -1e-9) {
      ++inside;
      REQUIRE(found);
      CHECK(distance(geo.exact_map(e, ref), x) <= 1e-10);
    } else if (geo.polygon().signed_distance(x) > 1e-6) {
      CHECK_FALSE(found);
    }
  }
  CHECK(inside > 1000);

  // Transplant of the exact-geometry interpolant reproduces nodal values.
  const ScalarField g = [](Vec2 p) { return std::cos(p.x) + p.y * p.y; };
  const Transplant t(interpolate(space, g, Placement::OnOmega));
  double worst = 0.0;
  for (const Vec2& p : space->exact_dof_points()) worst = std::max(worst, std::abs(t(p) - g(p)));
  CHECK(worst <= 1e-10);
  CHECK_THROWS_AS(t(Vec2{3.0, 3.0}), Error);
}
