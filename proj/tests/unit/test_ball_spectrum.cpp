#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "sphereppw/ball_spectrum.hpp"
#include "sphereppw/error.hpp"

using namespace sphereppw;
using namespace sphereppw::ball;

TEST_CASE("S^3 ground state closed form") {
  for (double th : {0.2, 0.7, 1.3, 2.0, 2.9}) {
    const double exact = oracle::cap_lambda1_s3(th);
    CHECK(lambda_shoot({3, th}, 0) == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("S^2 caps against Legendre function roots") {
  for (double th : {0.4, 1.0, 1.5, 2.2}) {
    const auto pair = spectral_pair({2, th});
    CHECK(pair.lambda1 == doctest::Approx(oracle::cap_lambda1_s2(th)).epsilon(1e-9));
    CHECK(pair.lambda2 == doctest::Approx(oracle::cap_lambda2_s2(th)).epsilon(1e-9));
    CHECK(pair.residual1 < 1e-9);
  }
}

TEST_CASE("small caps approach Bessel zeros") {
  for (int n : {2, 3, 4}) {
    const double j = oracle::bessel_zero1(0.5 * n - 1.0);
    const double th = 5e-3;
    CHECK(th * th * lambda_shoot({n, th}, 0) == doctest::Approx(j * j).epsilon(1e-5));
  }
}

TEST_CASE("zeros of u_0 on S^3") {
  const double lambda = 24.0;  // k = 5, zeros at j pi / 5
  const auto z = zeros({3, 0, lambda}, 3.1);
  REQUIRE(z.size() == 4);
  for (int j = 0; j < 4; ++j) CHECK(z[j] == doctest::Approx((j + 1) * std::numbers::pi / 5).epsilon(1e-11));
  CHECK(count_zeros({3, 0, lambda}, 1.0) == 1);
  CHECK(first_zero({3, 0, lambda}) == doctest::Approx(std::numbers::pi / 5).epsilon(1e-11));
  CHECK(std::abs(boundary_value({3, 0, lambda}, std::numbers::pi / 5)) < 1e-10);
  CHECK_THROWS_AS(first_zero({3, 0, -0.5}), NoZeroInRange);
}

TEST_CASE("radius_for_lambda1 inverts lambda1") {
  for (int n : {2, 4}) {
    for (double th : {0.3, 1.0, std::numbers::pi / 2}) {
      const double l1 = lambda_shoot({n, th}, 0);
      CHECK(radius_for_lambda1(n, l1) == doctest::Approx(th).epsilon(1e-10));
    }
  }
}

TEST_CASE("interlacing of u_0 and u_1 zeros") {
  CHECK(interlace_check(2, 40.0));
  CHECK(interlace_check(5, 90.0));
}

TEST_CASE("ratio and gap report") {
  const auto below = ratio_gap_checks(spectral_pair({3, 1.0}));
  CHECK(below.ratio_ok);
  CHECK_FALSE(below.equality);
  CHECK(below.ratio_lhs > below.ratio_rhs);
  CHECK(below.gap_applicable);
  CHECK(below.gap_ok);
  const auto above = ratio_gap_checks(spectral_pair({3, 2.2}));
  CHECK(above.ratio_ok);
  CHECK(above.ratio_lhs < above.ratio_rhs);
  CHECK_FALSE(above.gap_applicable);
  const auto half = ratio_gap_checks(spectral_pair({3, std::numbers::pi / 2}));
  CHECK(half.equality);
}

TEST_CASE("monotonicity checker") {
  std::vector<ScanRow> rows(4);
  const double vals[4] = {1.0, 2.0, 1.5, 3.0};
  for (int i = 0; i < 4; ++i) rows[i].ratio = vals[i];
  const auto v = check_monotone(rows, Column::Ratio, Trend::Increasing);
  CHECK_FALSE(v.holds);
  REQUIRE(v.first_violation.has_value());
  CHECK(*v.first_violation == 1);
  CHECK(check_monotone(rows, Column::Ratio, Trend::Increasing, 0.3).holds);
}

TEST_CASE("scan output independent of thread count") {
  std::vector<double> g;
  for (int i = 0; i < 24; ++i) g.push_back(0.1 + 0.1 * i);
  const auto a = scan(4, g, {}, 1);
  const auto b = scan(4, g, {}, 4);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].lambda1 == b.rows[i].lambda1);
    CHECK(a.rows[i].lambda2 == b.rows[i].lambda2);
  }
}

TEST_CASE("invalid dimension") { CHECK_THROWS_AS(spectral_pair({1, 1.0}), InvalidArgument); }
