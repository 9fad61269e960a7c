#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "sphereppw/error.hpp"
#include "sphereppw/mesh.hpp"

using namespace sphereppw;
using namespace sphereppw::domain;
constexpr double pi = std::numbers::pi;

TEST_CASE("cap mesh geometry") {
  DomainParams p;
  p.theta1 = 1.0;
  p.h = 0.05;
  const auto m = make_domain(p);
  CHECK_NOTHROW(m.validate());
  CHECK(spherical_area(m) == doctest::Approx(2 * pi * (1 - std::cos(1.0))).epsilon(2e-3));
  CHECK(boundary_length(m) == doctest::Approx(2 * pi * std::sin(1.0)).epsilon(2e-3));
  CHECK(flat_area(m) < spherical_area(m));
  CHECK(m.max_edge() < 2.0 * p.h);
  Vec3 d;
  CHECK(in_open_hemisphere(m, &d));
  for (const auto& v : m.vertices) CHECK(v.dot(d) > 0.0);
  int boundary = 0;
  for (std::size_t i = 0; i < m.num_vertices(); ++i)
    if (m.boundary[i]) {
      ++boundary;
      CHECK(std::acos(m.vertices[i].z()) == doctest::Approx(1.0).epsilon(1e-12));
    }
  CHECK(boundary == static_cast<int>(m.boundary_edges().size()));
}

TEST_CASE("area converges at second order") {
  DomainParams p;
  p.kind = DomainKind::PerturbedCap;
  p.theta1 = 0.9;
  p.amplitude = 0.1;
  double prev = 0, prev_diff = 0;
  for (double h : {0.08, 0.04, 0.02}) {
    p.h = h;
    const double a = spherical_area(make_domain(p));
    if (prev_diff != 0) CHECK(std::abs(a - prev) < 0.4 * std::abs(prev_diff));
    if (prev != 0) prev_diff = a - prev;
    prev = a;
  }
}

TEST_CASE("geodesic triangle area is the spherical excess") {
  DomainParams p;
  p.kind = DomainKind::GeodesicPolygon;
  // Octant triangle: area pi/2.
  p.corners = {Vec3(1, 0, 0.0), Vec3(0, 1, 0.0), Vec3(0, 0, 1)};
  p.center = Vec3(1, 1, 1).normalized();
  p.h = 0.05;
  const auto m = make_domain(p);
  CHECK(spherical_area(m) == doctest::Approx(pi / 2).epsilon(1e-12));
  CHECK(boundary_length(m) == doctest::Approx(3 * pi / 2).epsilon(1e-12));
}

TEST_CASE("rotations") {
  const Vec3 y = Vec3(0.3, -0.5, 0.8).normalized();
  const auto R = rotation_to_pole(y);
  CHECK((R * y - Vec3::UnitZ()).norm() < 1e-14);
  CHECK((R * R.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-14);
  DomainParams p;
  p.h = 0.1;
  const auto m = make_domain(p);
  const auto r = rotated(m, R.transpose());
  CHECK(spherical_area(r) == doctest::Approx(spherical_area(m)).epsilon(1e-13));
}

TEST_CASE("mesh text round trip") {
  DomainParams p;
  p.h = 0.2;
  const auto m = make_domain(p);
  std::stringstream ss;
  write_mesh(ss, m);
  const auto r = read_mesh(ss);
  CHECK(r.num_vertices() == m.num_vertices());
  CHECK(r.num_triangles() == m.num_triangles());
  CHECK(spherical_area(r) == doctest::Approx(spherical_area(m)).epsilon(1e-14));
  std::istringstream bad("v 1 0 0\nv 0 1 0\nt 0 1 2\n");
  CHECK_THROWS_AS(read_mesh(bad), MeshError);
}

TEST_CASE("hemisphere requirement") {
  DomainParams p;
  p.theta1 = 1.8;
  p.h = 0.2;
  CHECK_THROWS_AS(make_domain(p), MeshError);
  p.require_hemisphere = false;
  CHECK_NOTHROW(make_domain(p));
}
