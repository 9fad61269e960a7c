#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sphereppw/error.hpp"
#include "sphereppw/radial_core.hpp"

using namespace sphereppw;
using namespace sphereppw::radial;

namespace {
std::vector<double> grid(double a, double b, int k) {
  std::vector<double> g(k);
  for (int i = 0; i < k; ++i) g[i] = a + (b - a) * i / (k - 1);
  return g;
}
}  // namespace

TEST_CASE("leading coefficient recursion") {
  CHECK(leading_coefficient(3, 0, 7.0) == 1.0);
  // c1 = lambda / n, c2 = (lambda - n) / (n + 2) c1
  CHECK(leading_coefficient(3, 1, 7.0) == doctest::Approx(7.0 / 3.0));
  CHECK(leading_coefficient(3, 2, 7.0) == doctest::Approx((7.0 - 3.0) / 5.0 * 7.0 / 3.0));
}

TEST_CASE("series coefficients of cos t") {
  // lambda = n gives u_0 = cos t in every dimension.
  for (int n = 2; n <= 6; ++n) {
    const auto a = series_coefficients({n, 0, static_cast<double>(n)}, 4);
    double f = 1.0;
    for (int k = 0; k <= 4; ++k) {
      CHECK(a[k] == doctest::Approx((k % 2 ? -1.0 : 1.0) / f).epsilon(1e-14));
      f *= (2 * k + 1) * (2 * k + 2);
    }
  }
}

TEST_CASE("frobenius seed matches closed forms") {
  const auto s = frobenius_seed({4, 0, 4.0}, 6, 1e-3);
  CHECK(s.value == doctest::Approx(std::cos(1e-3)).epsilon(1e-15));
  CHECK(s.derivative == doctest::Approx(-std::sin(1e-3)).epsilon(1e-13));
  CHECK(s.truncation_bound < 1e-40);
}

TEST_CASE("eval_um reproduces spherical harmonics") {
  const auto g = grid(0.05, 3.0, 60);
  for (int n = 2; n <= 6; ++n) {
    // degree 1: lambda = n, u_0 = cos, u_1 = sin
    const auto u0 = eval_um({n, 0, static_cast<double>(n)}, g);
    const auto u1 = eval_um({n, 1, static_cast<double>(n)}, g);
    // degree 2: lambda = 2(n+1), u_0 = ((n+1) cos^2 - 1) / n
    const auto w0 = eval_um({n, 0, 2.0 * (n + 1)}, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = g[i], c = std::cos(t);
      CHECK(std::abs(u0.values[i] - c) < 1e-10);
      CHECK(std::abs(u0.derivs[i] + std::sin(t)) < 1e-9);
      CHECK(std::abs(u1.values[i] - std::sin(t)) < 1e-9);
      CHECK(std::abs(w0.values[i] - ((n + 1) * c * c - 1.0) / n) < 1e-9);
    }
  }
}

TEST_CASE("raising, lowering and the three-term relation") {
  const auto g = grid(0.1, 2.5, 80);
  const double lambda = 9.3;
  for (int n : {2, 3, 5}) {
    const auto u0 = eval_um({n, 0, lambda}, g);
    const auto u1 = eval_um({n, 1, lambda}, g);
    const auto u2 = eval_um({n, 2, lambda}, g);
    const auto r1 = raise(u0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(r1.values[i] == doctest::Approx(u1.values[i]).epsilon(1e-9));
    const auto l1 = lower(u1);
    CHECK(l1.mode.m == 0);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(l1.values[i] == doctest::Approx(lambda * u0.values[i]).epsilon(1e-8));
    CHECK(recursion_residual(u0, u1, u2) < 1e-8);
    const auto fine = grid(0.1, 2.5, 800);
    CHECK(integral_identity_residual(eval_um({n, 0, lambda}, fine), eval_um({n, 1, lambda}, fine)) < 1e-9);
  }
}

TEST_CASE("ode residual is small") {
  CHECK(ode_residual({3, 0, 12.0}, 0.1, 3.0, 400) < 1e-5);
  CHECK(ode_residual({2, 1, 6.0}, 0.1, 3.0, 400) < 1e-5);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(ModeParams({1, 0, 1.0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(ModeParams({2, -1, 1.0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(BallSpec({2, 0.0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(BallSpec({2, std::numbers::pi}).validate(), InvalidArgument);
  const std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS_AS(eval_um({2, 0, 1.0}, bad), InvalidArgument);
}
