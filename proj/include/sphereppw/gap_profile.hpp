#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sphereppw/ball_spectrum.hpp"

namespace sphereppw::gap {

struct ProfileOptions {
  ball::ShootOptions shoot{};
  int samples = 2000;  // interior nodes theta1 * i / (samples + 1)
};

/// Joint tabulation of the ball eigenfunctions y1 = u_0(.; lambda1),
/// y2 = u_1(.; lambda2) and the derived functions on the open interval (0, theta1).
struct GapProfile {
  BallSpec spec;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  radial::SolverOptions ode{};

  std::vector<double> grid;
  std::vector<double> y1, dy1, y2, dy2;
  std::vector<double> p;    // -y1'/y1
  std::vector<double> g;    // y2/y1
  std::vector<double> dg;   // g'
  std::vector<double> d2g;  // g''
  std::vector<double> q;    // sin(t) g'/g
  std::vector<double> B;    // g'^2 + (n-1) g^2 / sin^2(t)

  // Limits at t = 0: g ~ c1 t with c1 = lambda2 / n.
  double c1 = 0.0;
  double q_pp0 = 0.0;       // q''(0)
  // Limits at t = theta1.
  double g_end = 0.0;       // y2'(theta1) / y1'(theta1)
  double dg_end = 0.0;      // g'(theta1), zero up to rounding
  double d2g_end = 0.0;     // g''(theta1)
  std::vector<double> end_taylor;  // Taylor coefficients of g in (t - theta1)
  double dq_end = 0.0;      // q'(theta1); q(theta1) = 0

  /// g continued by g(theta1) on [theta1, pi/2] and reflected about pi/2.
  double g_ext(double theta) const;
  double dg_ext(double theta) const;
  /// B built from the extended g; bounded at both poles.
  double B_ext(double theta) const;
  /// g_ext(theta) / sin(theta), with limit c1 at the poles.
  double gtilde(double theta) const;

  std::size_t size() const { return grid.size(); }

 private:
  friend GapProfile build_profile(const BallSpec&, const ProfileOptions&);
  void hermite(double theta, double& value, double& slope) const;
};

GapProfile build_profile(const BallSpec& spec, const ProfileOptions& opts = {});

/// q''(0) = 2 (lambda1/n - lambda2/(n+2) - (2-n)/(2(n+2))).
double q_second_derivative_at_zero(int n, double lambda1, double lambda2);

/// q'(theta1) = -(lambda2 - lambda1 - (n-1)/sin^2 theta1) sin(theta1) / 3.
double q_slope_at_boundary(int n, double theta1, double lambda1, double lambda2);

struct RiccatiResiduals {
  double p = 0.0;  // sup |p' - (lambda1 + p^2 - (n-1) cot p)|
  double q = 0.0;  // sup |q' - (2pq - (n-2) q cot - (q^2+1-n)/sin - (lambda2-lambda1) sin)|
};

/// Residuals at 181 points of the interior 5%-95% of (0, theta1), with
/// derivatives from five-point central differences of freshly evaluated p and q.
RiccatiResiduals riccati_residuals(const GapProfile& profile);

struct PStructureReport {
  bool p_positive = true;
  bool p_increasing = true;   // sigma > 0
  bool p_convex = true;       // s > 0
  double min_sigma = 0.0;
  double min_s = 0.0;
  double p_origin_defect = 0.0;  // sup |p - lambda1 t / n| / t^3 on the smallest samples
  bool p_blows_up = true;        // p at the last sample exceeds 1 / tolerance scale
  bool r_monotone = true;        // r = p cot - lambda1 / n increasing (theta1 < pi/2)
  bool hemisphere = false;       // theta1 == pi/2, where r is checked to vanish
  double r_sup = 0.0;            // sup |r| (reported for the hemisphere)
  bool ok() const {
    return p_positive && p_increasing && p_convex && p_blows_up && r_monotone;
  }
};

PStructureReport p_structure_check(const GapProfile& profile, double slack = 1e-8);

struct QBoundsReport {
  bool q_nonnegative = true;
  bool q_below_cos = true;
  bool q_nonincreasing = true;
  bool g_nondecreasing = true;
  bool B_nonincreasing = true;
  bool B_ext_nonincreasing = true;  // on [theta1, pi/2]
  double max_q_excess = 0.0;        // sup (q - cos)
  double min_q = 0.0;
  double q0_fit = 0.0;              // q(0) extrapolated from small-t samples
  double q_pp0_fit = 0.0;           // q''(0) fitted from small-t samples
  double q_end = 0.0;               // q(theta1) from the boundary series of g
  double dq_end = 0.0;              // q'(theta1) from the boundary series of g
  bool ok() const {
    return q_nonnegative && q_below_cos && q_nonincreasing && g_nondecreasing && B_nonincreasing &&
           B_ext_nonincreasing;
  }
};

QBoundsReport q_bounds_check(const GapProfile& profile, double slack = 1e-8);

/// CSV with header theta,y1,y2,p,q,g,B.
void write_csv(std::ostream& os, const GapProfile& profile);

}  // namespace sphereppw::gap
