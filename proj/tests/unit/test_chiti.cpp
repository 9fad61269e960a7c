#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sphereppw/chiti_compare.hpp"
#include "sphereppw/rearrangement.hpp"

using namespace sphereppw;
using namespace sphereppw::chiti;

TEST_CASE("volume profile on S^3") {
  const BallSpec spec{3, 1.3};
  const auto prof = v1_volume_profile(spec);
  CHECK(prof.lambda1 == doctest::Approx(oracle::cap_lambda1_s3(1.3)).epsilon(1e-10));
  CHECK(prof.volume == doctest::Approx(rearr::cap_volume(3, 1.0, 1.3)));
  CHECK(prof.residual < 1e-10);
  for (double t : {0.1, 0.5, 0.9, 1.25}) {
    const double s = rearr::cap_volume(3, 1.0, t);
    CHECK(prof(s) == doctest::Approx(oracle::ground_state_s3(prof.lambda1, t)).epsilon(1e-9));
    CHECK(prof.theta_of(s) == doctest::Approx(t).epsilon(1e-11));
  }
  CHECK(prof(prof.volume * 1.01) == 0.0);
  // int_B v^2 in closed form: 4 pi int_0^theta1 sin^2(kt)/k^2 dt
  const double k = std::sqrt(prof.lambda1 + 1.0);
  const double l2 = 4 * std::numbers::pi / (k * k) * (0.5 * 1.3 - std::sin(2 * k * 1.3) / (4 * k));
  CHECK(prof.l2_squared() == doctest::Approx(l2).epsilon(1e-10));
}

TEST_CASE("ball self-comparison is identical") {
  for (int n : {2, 5}) {
    for (double th : {0.7, 2.4}) {
      const BallSpec spec{n, th};
      const auto dm = radial_samples(spec, 1500);
      CHECK(dm.total_measure == doctest::Approx(rearr::cap_volume(n, 1.0, th)).epsilon(1e-12));
      const auto r = chiti_crossing(dm, spec);
      CHECK(r.verdict == Verdict::Identical);
      CHECK(r.ok());
      CHECK(r.sup_difference < 1e-6);
      CHECK(r.normalization_defect < 1e-12);
    }
  }
}

TEST_CASE("larger radial profile crosses once") {
  const BallSpec spec{3, 1.0};
  const auto dm = radial_samples({3, 1.15}, 1500);
  const auto r = chiti_crossing(dm, spec);
  CHECK(r.verdict == Verdict::SingleCrossing);
  CHECK(r.sign_pattern);
  CHECK(r.u0 < r.v0);
  CHECK(r.crossing_volume > 0.0);
  CHECK(r.crossing_volume < r.ball_volume);
  CHECK(r.crossing_radius == doctest::Approx(rearr::theta_of_volume(3, 1.0, r.crossing_volume)));
}

TEST_CASE("derivative inequality holds with equality on the ball") {
  const BallSpec spec{2, 1.0};
  const auto res = chiti_inequality_residual(radial_samples(spec, 4000), spec, 50);
  CHECK(res.checked == 48);
  CHECK(res.max_abs < 1e-3);
  CHECK_THROWS(chiti_inequality_residual(radial_samples(spec, 100), spec, 10, 2.0));
}

TEST_CASE("csv output") {
  const BallSpec spec{2, 0.8};
  ChitiOptions o;
  o.samples = 20;
  const auto r = chiti_crossing(radial_samples(spec, 300), spec, o);
  std::ostringstream os;
  write_csv(os, r);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "s,u_sharp,v1");
  CHECK(verdict_name(Verdict::SingleCrossing) == "single-crossing");
}
