#include <doctest.h>

#include <cmath>

#include "sphereppw/ball_spectrum.hpp"
#include "sphereppw/perturbation.hpp"

using namespace sphereppw;
using namespace sphereppw::perturb;

namespace {
long double ell_direct(long double t) {
  const long double s = std::sin(t);
  return std::cos(t) / s - t / (s * s);
}
}  // namespace

TEST_CASE("ell against the direct formula") {
  for (double t : {1e-3, 0.01, 0.05, 0.2, 0.7, 1.5, 2.5, 3.0}) {
    CHECK(ell(t) == doctest::Approx(static_cast<double>(ell_direct(t))).epsilon(1e-9));
  }
  CHECK(ell(1e-8) == doctest::Approx(-2e-8 / 3.0).epsilon(1e-6));
}

TEST_CASE("mfun is -ell'/2") {
  for (double t : {0.02, 0.3, 1.0, 2.0, 2.8}) {
    const double h = 1e-5;
    const double d = (ell(t + h) - ell(t - h)) / (2 * h);
    CHECK(mfun(t) == doctest::Approx(-0.5 * d).epsilon(1e-7));
  }
  CHECK(mfun(1e-9) == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("S^3: c^2 lambda1(c theta1) = pi^2/theta1^2 - c^2") {
  for (double th : {0.4, 1.2, 2.0, 2.7}) {
    CHECK(dlambda1_dc({3, th}) == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(dlambda1_dc_raw({3, th}) == doctest::Approx(-2.0).epsilon(1e-9));
  }
}

TEST_CASE("analytic derivatives match finite differences") {
  for (int n : {2, 5}) {
    for (double th : {0.6, 1.4, 2.3}) {
      const BallSpec spec{n, th};
      CHECK(dlambda1_dc(spec) == doctest::Approx(finite_difference_dc(spec, 0, 1e-4)).epsilon(1e-6));
      CHECK(dlambda2_dc(spec) == doctest::Approx(finite_difference_dc(spec, 1, 1e-4)).epsilon(1e-6));
    }
  }
}

TEST_CASE("report fields are consistent") {
  const auto r = report({2, 1.0});
  CHECK(r.d_lambda1_dc < 0.0);
  CHECK(r.d_lambda2_dc > 0.0);
  const double expect = r.d_lambda2_dc / r.lambda2 - r.d_lambda1_dc / r.lambda1;
  CHECK(r.ratio_derivative == doctest::Approx(expect));
  CHECK(r.ratio_derivative > 0.0);
}
