#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sphereppw/radial_core.hpp"

namespace sphereppw::ball {

struct ShootOptions {
  radial::SolverOptions ode{};
  double guard = 1e-6;          // keep integrations at theta <= pi - guard
  double zero_tol = 1e-12;      // absolute tolerance on located zeros
  int max_bracket_steps = 80;
};

/// Number of sign changes of u_m on (0, theta_end].
int count_zeros(const radial::ModeParams& mode, double theta_end, const ShootOptions& opts = {});

/// u_m(theta_end; lambda).
double boundary_value(const radial::ModeParams& mode, double theta_end,
                      const ShootOptions& opts = {});

/// All zeros of u_m in (0, theta_max), in increasing order.
std::vector<double> zeros(const radial::ModeParams& mode, double theta_max,
                          const ShootOptions& opts = {});

/// First positive zero of u_m on (0, pi - guard). Throws NoZeroInRange.
double first_zero(const radial::ModeParams& mode, const ShootOptions& opts = {});

/// Smallest lambda with u_m(theta1; lambda) = 0, for m in {0, 1}.
double lambda_shoot(const BallSpec& spec, int m, const ShootOptions& opts = {});

struct SpectralPair {
  BallSpec spec;
  double lambda1 = 0.0;   // lowest eigenvalue of the m = 0 radial problem
  double lambda2 = 0.0;   // lowest eigenvalue of the m = 1 radial problem
  double residual1 = 0.0; // |u_0(theta1; lambda1)|
  double residual2 = 0.0; // |u_1(theta1; lambda2)|
};

SpectralPair spectral_pair(const BallSpec& spec, const ShootOptions& opts = {});

struct ScanRow {
  double theta1 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double ratio = 0.0;           // lambda2 / lambda1
  double scaled_lambda1 = 0.0;  // theta1^2 lambda1
  double scaled_lambda2 = 0.0;  // theta1^2 lambda2
  double scaled_gap = 0.0;      // theta1^2 (lambda2 - lambda1)
};

enum class Column { Lambda1, Lambda2, Ratio, ScaledLambda1, ScaledLambda2, ScaledGap };
enum class Trend { Increasing, Decreasing };

std::string column_name(Column c);
double column_value(const ScanRow& row, Column c);

struct MonotoneVerdict {
  Column column = Column::Ratio;
  Trend trend = Trend::Increasing;
  bool holds = true;
  std::optional<std::size_t> first_violation;  // index i of the failing pair (i, i+1)
  double worst_excess = 0.0;                   // largest relative step against the trend
};

struct ScanTable {
  int n = 2;
  std::vector<ScanRow> rows;
  std::vector<MonotoneVerdict> verdicts;  // one per column, with the trend each is expected to show
};

/// Strict monotonicity test with a relative slack: a pair fails when it moves
/// against `trend` by more than slack * max(1, |value|).
MonotoneVerdict check_monotone(std::span<const ScanRow> rows, Column column, Trend trend,
                               double slack = 1e-9);

/// Eigenvalue table on a radius grid. Rows are independent and computed on up
/// to `threads` workers (0 means the SPHEREPPW_THREADS / hardware default).
ScanTable scan(int n, std::span<const double> thetas, const ShootOptions& opts = {},
               unsigned threads = 0, double slack = 1e-9);

struct RatioGapReport {
  double ratio_lhs = 0.0;  // (lambda2 - n) / lambda1
  double ratio_rhs = 0.0;  // (n + 2) / n
  bool equality = false;   // |lhs - rhs| < 1e-8
  bool ratio_ok = false;   // ">" below pi/2, equality at pi/2, "<" above pi/2
  double gap = 0.0;        // lambda2 - lambda1
  double gap_floor = 0.0;  // (n - 1) / sin^2 theta1
  bool gap_applicable = false;  // theta1 <= pi/2
  bool gap_ok = false;
};

RatioGapReport ratio_gap_checks(const SpectralPair& pair, double equality_tol = 1e-8);

/// Strict alternation of the zeros of u_0 and u_1 on (0, pi - guard).
bool interlace_check(int n, double lambda, const ShootOptions& opts = {});

/// Inverse of lambda1(theta1): the radius of the ball whose first eigenvalue is `lambda1`.
double radius_for_lambda1(int n, double lambda1, const ShootOptions& opts = {});

/// Starting guess for j_{nu,1}; not accurate enough for verification work.
double bessel_zero_guess(double nu);

}  // namespace sphereppw::ball
