#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "sphereppw/error.hpp"
#include "sphereppw/rearrangement.hpp"

using namespace sphereppw;
using namespace sphereppw::rearr;
constexpr double pi = std::numbers::pi;

TEST_CASE("volumes") {
  CHECK(unit_ball_volume(2) == doctest::Approx(pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0));
  CHECK(unit_ball_volume(4) == doctest::Approx(pi * pi / 2.0));
  CHECK(sphere_volume(2) == doctest::Approx(4.0 * pi));
  CHECK(sphere_volume(3) == doctest::Approx(2.0 * pi * pi));
  CHECK(sphere_volume(2, 2.0) == doctest::Approx(16.0 * pi));
  for (double r : {0.1, 1.0, 2.5}) {
    CHECK(cap_volume(2, 1.0, r) == doctest::Approx(2.0 * pi * (1.0 - std::cos(r))));
    CHECK(cap_volume(3, 1.0, r) == doctest::Approx(2.0 * pi * (r - std::sin(r) * std::cos(r))));
    CHECK(cap_boundary(3, 1.0, r) == doctest::Approx(4.0 * pi * std::sin(r) * std::sin(r)));
    for (int n : {2, 3, 5}) CHECK(theta_of_volume(n, 1.0, cap_volume(n, 1.0, r)) == doctest::Approx(r).epsilon(1e-12));
  }
  CHECK_THROWS_AS(theta_of_volume(2, 1.0, 13.0), InvalidArgument);
}

TEST_CASE("hand-computed rearrangement") {
  DomainMeasure dm;
  dm.add(1.0, 2.0);
  dm.add(3.0, 1.0);
  dm.add(2.0, 0.5);
  dm.add(3.0, 0.25);
  const auto d = decreasing_rearrangement(dm);
  REQUIRE(d.steps() == 3);
  CHECK(d.values[0] == 3.0);
  CHECK(d.s_grid[1] == doctest::Approx(1.25));
  CHECK(d(1.5) == 2.0);
  CHECK(d(3.74) == 1.0);
  CHECK(d(3.75) == 0.0);
  CHECK(d.measure_above(1.5) == doctest::Approx(1.75));
  CHECK(d.integral_power(2.0) == doctest::Approx(9 * 1.25 + 4 * 0.5 + 2.0));
  const auto i = increasing_rearrangement(dm);
  CHECK(i.values.front() == 1.0);
  CHECK(i.values.back() == 3.0);
  CHECK(integral_product(d, i) == doctest::Approx(3 * 1 * 1.25 + 2 * 1 * 0.5 + 1 * 1 * 0.25 + 1 * 2 * 0.5 + 1 * 3 * 1.25));
}

TEST_CASE("symmetric value and weighted integral") {
  DomainMeasure dm;
  dm.add(2.0, cap_volume(2, 1.0, 0.5));
  dm.add(1.0, 1.0);
  const auto d = decreasing_rearrangement(dm);
  CHECK(symmetric_value(d, 2, 1.0, 0.4) == 2.0);
  CHECK(symmetric_value(d, 2, 1.0, 0.6) == 1.0);
  const double w = integral_weighted(d, [](double s) { return s * s; });
  const double a = d.s_grid[1], b = d.s_grid[2];
  CHECK(w == doctest::Approx(2.0 * a * a * a / 3.0 + (b * b * b - a * a * a) / 3.0));
}

TEST_CASE("isoperimetric equality for caps") {
  for (double r : {0.2, 1.0, 2.0}) {
    const auto rep = isoperimetric_cap_s2(r);
    CHECK(rep.length == doctest::Approx(2 * pi * std::sin(r)));
    CHECK(std::abs(rep.defect) < 1e-12);
  }
}

TEST_CASE("csv round trip") {
  std::istringstream is("value,measure\n1.5,2\n-0.5,0.25\n");
  const auto dm = read_csv(is);
  REQUIRE(dm.size() == 2);
  CHECK(dm.total_measure == doctest::Approx(2.25));
  std::ostringstream os;
  write_csv(os, decreasing_rearrangement(dm));
  CHECK(os.str().rfind("s,value\n", 0) == 0);
  std::istringstream bad("1,-2\n");
  CHECK_THROWS_AS(read_csv(bad), InvalidArgument);
}
