#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sphereppw/gap_profile.hpp"

using namespace sphereppw;
using namespace sphereppw::gap;

TEST_CASE("p on S^3 against the closed-form ground state") {
  const double th = 1.1;
  const auto g = build_profile({3, th});
  const double k = std::numbers::pi / th;
  CHECK(g.lambda1 == doctest::Approx(k * k - 1.0).epsilon(1e-10));
  for (std::size_t i = 0; i < g.size(); i += 97) {
    const double t = g.grid[i];
    const double p = 1.0 / std::tan(t) - k / std::tan(k * t);
    CHECK(g.p[i] == doctest::Approx(p).epsilon(1e-8));
    CHECK(g.y1[i] == doctest::Approx(oracle::ground_state_s3(g.lambda1, t)).epsilon(1e-9));
  }
}

TEST_CASE("hemisphere closed forms") {
  for (int n : {2, 4}) {
    const auto g = build_profile({n, std::numbers::pi / 2});
    for (std::size_t i = 0; i < g.size(); i += 50) {
      const double t = g.grid[i];
      CHECK(g.q[i] == doctest::Approx(std::cos(t)).epsilon(1e-9));
      CHECK(g.g[i] / g.c1 == doctest::Approx(std::sin(t)).epsilon(1e-9));
      CHECK(g.B[i] / (g.c1 * g.c1) == doctest::Approx(n - 1 + std::cos(t) * std::cos(t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("boundary formulas") {
  // q''(0) = -1 and q'(pi/2) = -1 on the hemisphere, where q = cos.
  for (int n = 2; n <= 6; ++n) {
    CHECK(q_second_derivative_at_zero(n, n, 2.0 * (n + 1)) == doctest::Approx(-1.0));
    CHECK(q_slope_at_boundary(n, std::numbers::pi / 2, n, 2.0 * (n + 1)) == doctest::Approx(-1.0));
  }
  const auto g = build_profile({3, 0.9});
  CHECK(g.q_pp0 < -1.0);
  CHECK(g.dq_end < 0.0);
  CHECK(std::abs(g.dg_end) < 1e-8 * std::abs(g.g_end));
}

TEST_CASE("structure checks pass on a cap") {
  const auto g = build_profile({4, 0.8});
  CHECK(p_structure_check(g).ok());
  CHECK(q_bounds_check(g).ok());
  const auto r = riccati_residuals(g);
  CHECK(r.p < 1e-6);
  CHECK(r.q < 1e-6);
}

TEST_CASE("extension beyond theta1") {
  const auto g = build_profile({2, 1.0});
  CHECK(g.g_ext(1.3) == doctest::Approx(g.g_end));
  CHECK(g.g_ext(std::numbers::pi - 1.3) == doctest::Approx(g.g_ext(1.3)));
  CHECK(g.gtilde(0.0) == doctest::Approx(g.c1));
  CHECK(g.B_ext(1.2) <= g.B_ext(1.0) + 1e-12);
}

TEST_CASE("csv header") {
  const auto g = build_profile({2, 0.5}, {{}, 10});
  std::ostringstream os;
  write_csv(os, g);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "theta,y1,y2,p,q,g,B");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 10);
}
