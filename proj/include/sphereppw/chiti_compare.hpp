#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sphereppw/ball_spectrum.hpp"
#include "sphereppw/rearrangement.hpp"

namespace sphereppw::chiti {

/// Ball eigenfunction v1 = u_0(.; lambda1) viewed as a function of volume s = A(theta).
/// Tabulated on a uniform theta grid; v1(0) = 1 before any rescaling.
struct VolumeProfile {
  BallSpec spec;
  double lambda1 = 0.0;
  double volume = 0.0;             // |B|
  std::vector<double> theta;       // nodes 0 .. theta1
  std::vector<double> s;           // A(theta)
  std::vector<double> v, dv;       // v1 and dv1/dtheta
  std::vector<double> cumulative;  // int_0^s v ds'
  std::vector<double> cumulative2; // int_0^s v^2 ds'
  double residual = 0.0;           // sup relative defect of the integrated equation in volume form

  double operator()(double s) const;  // 0 beyond |B|
  double dv_ds(double s) const;
  double integral(double s) const;    // int_0^min(s,|B|) v
  double l2_squared() const { return cumulative2.back(); }
  double theta_of(double s) const;    // inverse of A on [0, |B|]
};

VolumeProfile v1_volume_profile(const BallSpec& spec, int intervals = 4000, const ball::ShootOptions& opts = {});

enum class Verdict { Identical, SingleCrossing, NoCrossing, MultipleCrossings };
std::string verdict_name(Verdict v);

struct ChitiOptions {
  double slack_rel = 1e-6;      // sign changes below slack_rel * |v1|_inf are ignored
  double identical_tol = 1e-6;  // sup |v1 - u#| / |v1|_inf for the Identical verdict
  int bins = 400;               // comparison bins on [0, |B|], continued to |Omega|
  int samples = 1000;           // rows of the emitted (s, u#, v1) table
  int intervals = 4000;
  ball::ShootOptions shoot{};
};

struct ChitiReport {
  BallSpec spec;
  double lambda1 = 0.0;
  double ball_volume = 0.0;
  double domain_volume = 0.0;
  double scale = 1.0;               // factor applied to the u values
  double normalization_defect = 0.0;// |int u#^2 - int v1^2| / int v1^2 after scaling
  double slack = 0.0;
  double sup_difference = 0.0;      // relative to |v1|_inf, over the steps of u#
  double u0 = 0.0, v0 = 0.0;        // u#(0) and v1(0)
  int crossings = 0;
  double crossing_volume = 0.0;     // s1
  double crossing_radius = 0.0;     // r1 = theta(s1)
  bool sign_pattern = false;        // v1 >= u# on [0, s1], v1 <= u# on [s1, |B|]
  Verdict verdict = Verdict::NoCrossing;
  std::vector<double> s_grid, u_sharp, v_profile;
  bool ok() const {
    return verdict == Verdict::Identical || (verdict == Verdict::SingleCrossing && sign_pattern && u0 < v0);
  }
};

/// u_dm holds (u1 value, measure) pairs for the first eigenfunction of a domain
/// whose lambda1 equals that of the ball `spec`.
ChitiReport chiti_crossing(const rearr::DomainMeasure& u_dm, const BallSpec& spec, const ChitiOptions& opts = {});

struct InequalityResidual {
  double max_violation = 0.0;  // sup of (lhs - rhs) / rhs
  double max_abs = 0.0;        // sup |lhs - rhs| / rhs
  int bins = 0;
  int checked = 0;             // bins at radius >= min_radius
};

/// Checks -du#/ds <= lambda1 n^-2 C_n^-2 sin(theta(s))^(2-2n) int_0^s u# on
/// averages of u# over bins of equal radial width, differentiated in the radius.
/// Bins centred below `min_radius` (unresolved by the data) are skipped.
InequalityResidual chiti_inequality_residual(const rearr::DomainMeasure& u_dm, const BallSpec& spec,
                                             int bins = 50, double min_radius = 0.0,
                                             const ball::ShootOptions& opts = {});

/// Radial samples: means of v1 of the ball `spec` over
/// `annuli` equal-width rings, with the ring volumes as measures.
rearr::DomainMeasure radial_samples(const BallSpec& spec, int annuli, const ball::ShootOptions& opts = {});

/// CSV header s,u_sharp,v1.
void write_csv(std::ostream& os, const ChitiReport& report);

}  // namespace sphereppw::chiti
