#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sphereppw/error.hpp"
#include "sphereppw/sphere_domain.hpp"

using namespace sphereppw;
using namespace sphereppw::domain;
constexpr double pi = std::numbers::pi;

namespace {
SphericalDomainMesh cap(double th, double h) {
  DomainParams p;
  p.theta1 = th;
  p.h = h;
  return make_domain(p);
}
}  // namespace

TEST_CASE("cap eigenvalues against Legendre roots") {
  const auto m = cap(1.0, 0.04);
  const auto sp = solve_dirichlet(m, 3);
  const double l1 = oracle::cap_lambda1_s2(1.0), l2 = oracle::cap_lambda2_s2(1.0);
  CHECK(sp.lambda1 == doctest::Approx(l1).epsilon(2e-3));
  CHECK(sp.lambda2 == doctest::Approx(l2).epsilon(3e-3));
  // lambda2 is double: the third value repeats it.
  CHECK(sp.eigenvalues[2] == doctest::Approx(sp.lambda2).epsilon(1e-3));
  // P1 elements overestimate.
  CHECK(sp.lambda1 > l1);
}

TEST_CASE("eigenvector normalisation") {
  const auto m = cap(1.2, 0.08);
  const auto sp = solve_dirichlet(m);
  for (std::size_t i = 0; i < m.num_vertices(); ++i) {
    if (m.boundary[i]) CHECK(sp.u1[i] == 0.0);
    else CHECK(sp.u1[i] > 0.0);
  }
  const auto cells = make_cells(m, sp.u1, 4);
  CHECK(cells.total_measure() == doctest::Approx(spherical_area(m)).epsilon(1e-12));
  CHECK(cells.mass() == doctest::Approx(1.0).epsilon(2e-2));
  const auto lm = level_measure(m, sp.u1);
  CHECK(lm.total_measure == doctest::Approx(spherical_area(m)).epsilon(1e-12));
}

TEST_CASE("level measure keeps the triangle means") {
  const auto m = cap(0.6, 0.1);
  std::vector<double> u(m.num_vertices());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = m.vertices[i].z();
  const auto dm = level_measure(m, u, 8);
  double mean = 0.0;
  for (const auto& [v, mu] : dm.entries) mean += v * mu;
  double flat = 0.0;
  for (const auto& t : m.triangles) {
    const Vec3 a = m.vertices[t[0]], b = m.vertices[t[1]], c = m.vertices[t[2]];
    const double s = spherical_area({{a, b, c}, {{0, 1, 2}}, {0, 0, 0}, ""});
    flat += (a.z() + b.z() + c.z()) / 3.0 * s;
  }
  CHECK(mean == doctest::Approx(flat).epsilon(1e-12));
}

TEST_CASE("centre of mass of a symmetric cap is its pole") {
  const auto m = cap(1.0, 0.08);
  const auto sp = solve_dirichlet(m);
  const auto cells = make_cells(m, sp.u1);
  // Symmetric about pi/2, as the reflected weights are.
  const auto w = [](double t) { return 1.5 + std::cos(2 * t); };
  const auto r = center_of_mass(cells, w);
  // The ring mesh is only approximately axisymmetric.
  CHECK(std::abs(r.y0.z()) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(r.residuals[0]) < 1e-10);
  CHECK(std::abs(r.residuals[1]) < 1e-10);
  const auto g = center_of_mass_grid(cells, w);
  CHECK(std::abs(g.y0.z()) == doctest::Approx(1.0).epsilon(1e-8));
  const Vec3 y = Vec3(0.2, 0.1, 0.9).normalized();
  CHECK((moment(cells, w, y) - moment(cells, w, -y)).norm() < 1e-12 * moment(cells, w, y).norm());
}

TEST_CASE("centre of mass of a rotated domain") {
  DomainParams p;
  p.kind = DomainKind::PerturbedCap;
  p.amplitude = 0.1;
  p.h = 0.08;
  p.center = Vec3(0.3, 0.2, 1.0).normalized();
  const auto m = make_domain(p);
  const auto sp = solve_dirichlet(m);
  GapBoundOptions go;
  go.link_tolerance = 0.02;
  const auto rep = gap_bound(m, sp, go);
  CHECK(std::abs(rep.com.residuals[0]) < 1e-8);
  CHECK(std::abs(rep.com.residuals[1]) < 1e-8);
  CHECK(rep.com.y0.dot(p.center) > 0.99);
  CHECK(rep.ok());
  CHECK(rep.lambda2 < rep.lambda2_ball);
}

TEST_CASE("Richardson estimate on a cap") {
  DomainParams p;
  p.theta1 = 1.0;
  p.h = 0.05;
  const auto est = mesh_error_estimate(p);
  const double exact = oracle::cap_lambda1_s2(1.0);
  CHECK(est.observed_order == doctest::Approx(2.0).epsilon(0.15));
  CHECK(std::abs(est.lambda1_extrapolated - exact) < 0.2 * std::abs(est.fine.lambda1 - exact));
  CHECK(est.err1 == doctest::Approx(est.fine.lambda1 - exact).epsilon(0.3));
}

TEST_CASE("ppw check on a cap and a triangle") {
  const auto m = cap(1.0, 0.05);
  const auto exact = ppw_check(m, oracle::cap_lambda1_s2(1.0), oracle::cap_lambda2_s2(1.0));
  CHECK(std::abs(exact.margin_i1) < 1e-8);
  CHECK(exact.area == doctest::Approx(2 * pi * (1 - std::cos(1.0))).epsilon(1e-3));
  DomainParams p;
  p.kind = DomainKind::GeodesicPolygon;
  p.corners = {Vec3(0.8, 0, 0.6).normalized(), Vec3(-0.4, 0.69, 0.6).normalized(), Vec3(-0.4, -0.69, 0.6).normalized()};
  p.h = 0.06;
  const auto t = make_domain(p);
  const auto sp = solve_dirichlet(t);
  const auto r = ppw_check(t, sp.lambda1, sp.lambda2, 0.1);
  CHECK(r.ok());
  CHECK(r.margin_i1 > 1.0);
}

TEST_CASE("preconditions") {
  const auto m = cap(1.0, 0.2);
  CHECK_THROWS_AS(solve_dirichlet(m, 1), InvalidArgument);
  CHECK_THROWS_AS(make_cells(m, {1.0, 2.0}), InvalidArgument);
  const auto big = cap(1.5, 0.1);
  auto sp = solve_dirichlet(big);
  sp.lambda1 = 1.5;
  CHECK_THROWS_AS(gap_bound(big, sp), InvalidArgument);
}
