#include "sphereppw/ball_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "sphereppw/detail/radial_ode.hpp"
#include "sphereppw/error.hpp"
#include "sphereppw/parallel.hpp"

namespace sphereppw::ball {

namespace {

using radial::ModeParams;
using radial::detail::State;

struct Bracket {
  double t_lo;
  State<2> x_lo;
  double t_hi;
};

/// Integrates u_m from the seed to `theta_end`, collecting the step brackets
/// in which u_m changes sign. Stops after `max_zeros` brackets when positive.
std::vector<Bracket> sign_change_brackets(const ModeParams& mode, double theta_end,
                                          const ShootOptions& opts, std::size_t max_zeros) {
  std::vector<Bracket> out;
  const auto& ode = opts.ode;
  if (theta_end <= ode.theta_seed) return out;
  radial::detail::RadialRhs<2, radial::detail::NoQuadrature> rhs{mode, {}};
  auto x = radial::detail::seed_state<2>(mode, ode, ode.theta_seed);
  double t = ode.theta_seed;
  double dt = radial::detail::initial_step(ode.theta_seed);
  double t_prev = t;
  State<2> x_prev = x;
  radial::detail::advance<2>(rhs, x, t, theta_end, dt, ode, [&](double tc, const State<2>& xc) {
    if (x_prev[0] * xc[0] < 0.0 || (xc[0] == 0.0 && x_prev[0] != 0.0)) {
      out.push_back({t_prev, x_prev, tc});
    }
    t_prev = tc;
    x_prev = xc;
    return max_zeros > 0 && out.size() >= max_zeros;
  });
  return out;
}

/// u_m at `theta` by continuing from a stored state.
double value_from(const ModeParams& mode, const ShootOptions& opts, double t0,
                  const State<2>& x0, double theta) {
  radial::detail::RadialRhs<2, radial::detail::NoQuadrature> rhs{mode, {}};
  State<2> x = x0;
  double t = t0;
  double dt = std::max(theta - t0, 1e-6) * 0.5;
  if (theta > t0) radial::detail::advance<2>(rhs, x, t, theta, dt, opts.ode, [](double, const auto&) {});
  return x[0];
}

double refine_zero(const ModeParams& mode, const ShootOptions& opts, const Bracket& b) {
  auto f = [&](double theta) { return value_from(mode, opts, b.t_lo, b.x_lo, theta); };
  const double f_lo = b.x_lo[0];
  const double f_hi = f(b.t_hi);
  if (f_hi == 0.0) return b.t_hi;
  std::uintmax_t iters = 200;
  const double tol = opts.zero_tol;
  auto r = boost::math::tools::toms748_solve(
      f, b.t_lo, b.t_hi, f_lo, f_hi,
      [tol](double a, double c) { return std::abs(c - a) <= tol; }, iters);
  return 0.5 * (r.first + r.second);
}

double theta_limit(const ShootOptions& opts) { return std::numbers::pi - opts.guard; }

}  // namespace

int count_zeros(const ModeParams& mode, double theta_end, const ShootOptions& opts) {
  mode.validate();
  return static_cast<int>(sign_change_brackets(mode, theta_end, opts, 0).size());
}

double boundary_value(const ModeParams& mode, double theta_end, const ShootOptions& opts) {
  mode.validate();
  const double pt[1] = {theta_end};
  return radial::eval_um(mode, pt, opts.ode).values[0];
}

std::vector<double> zeros(const ModeParams& mode, double theta_max, const ShootOptions& opts) {
  mode.validate();
  theta_max = std::min(theta_max, theta_limit(opts));
  std::vector<double> out;
  for (const Bracket& b : sign_change_brackets(mode, theta_max, opts, 0))
    out.push_back(refine_zero(mode, opts, b));
  return out;
}

double first_zero(const ModeParams& mode, const ShootOptions& opts) {
  mode.validate();
  const auto brackets = sign_change_brackets(mode, theta_limit(opts), opts, 1);
  if (brackets.empty())
    throw NoZeroInRange("u_m keeps one sign on (0, pi - guard) for lambda = " +
                        std::to_string(mode.lambda));
  return refine_zero(mode, opts, brackets.front());
}

double bessel_zero_guess(double nu) {
  if (nu < 1.0) return 2.404825557695773 + (3.831705970207512 - 2.404825557695773) * nu;
  const double c = std::cbrt(nu);
  return nu + 1.8557571 * c + 1.033150 / c - 0.00397 / nu;
}

double lambda_shoot(const BallSpec& spec, int m, const ShootOptions& opts) {
  spec.validate();
  if (m != 0 && m != 1) throw InvalidArgument("lambda_shoot supports m = 0 or m = 1");
  const int n = spec.n;
  const double theta1 = spec.theta1;
  auto zeros_at = [&](double lambda) { return count_zeros({n, m, lambda}, theta1, opts); };

  const double j = bessel_zero_guess(0.5 * n - 1.0 + m);
  const double guess = j * j / (theta1 * theta1);
  double lo = 0.5 * guess;
  double hi = 2.0 * guess;
  int steps = 0;
  while (zeros_at(lo) > 0) {
    hi = lo;
    lo *= 0.5;
    if (++steps > opts.max_bracket_steps) throw BracketError("lower eigenvalue bracket exhausted");
  }
  while (zeros_at(hi) == 0) {
    lo = hi;
    hi *= 2.0;
    if (++steps > opts.max_bracket_steps) throw BracketError("upper eigenvalue bracket exhausted");
  }
  // Narrow until exactly one zero lies in (0, theta1]: then u_m(theta1) changes sign once.
  while (zeros_at(hi) > 1) {
    const double mid = 0.5 * (lo + hi);
    if (zeros_at(mid) == 0) lo = mid; else hi = mid;
    if (++steps > 4 * opts.max_bracket_steps) throw BracketError("could not isolate the first eigenvalue");
  }

  auto f = [&](double lambda) { return boundary_value({n, m, lambda}, theta1, opts); };
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (f_lo * f_hi > 0.0) throw BracketError("boundary value does not change sign on the bracket");
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi,
                                             boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

SpectralPair spectral_pair(const BallSpec& spec, const ShootOptions& opts) {
  SpectralPair p;
  p.spec = spec;
  p.lambda1 = lambda_shoot(spec, 0, opts);
  p.lambda2 = lambda_shoot(spec, 1, opts);
  p.residual1 = std::abs(boundary_value({spec.n, 0, p.lambda1}, spec.theta1, opts));
  p.residual2 = std::abs(boundary_value({spec.n, 1, p.lambda2}, spec.theta1, opts));
  return p;
}

std::string column_name(Column c) {
  switch (c) {
    case Column::Lambda1: return "lambda1";
    case Column::Lambda2: return "lambda2";
    case Column::Ratio: return "ratio";
    case Column::ScaledLambda1: return "theta1^2*lambda1";
    case Column::ScaledLambda2: return "theta1^2*lambda2";
    case Column::ScaledGap: return "theta1^2*(lambda2-lambda1)";
  }
  return "?";
}

double column_value(const ScanRow& row, Column c) {
  switch (c) {
    case Column::Lambda1: return row.lambda1;
    case Column::Lambda2: return row.lambda2;
    case Column::Ratio: return row.ratio;
    case Column::ScaledLambda1: return row.scaled_lambda1;
    case Column::ScaledLambda2: return row.scaled_lambda2;
    case Column::ScaledGap: return row.scaled_gap;
  }
  return 0.0;
}

MonotoneVerdict check_monotone(std::span<const ScanRow> rows, Column column, Trend trend,
                               double slack) {
  MonotoneVerdict v;
  v.column = column;
  v.trend = trend;
  const double sign = trend == Trend::Increasing ? 1.0 : -1.0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double a = column_value(rows[i], column);
    const double b = column_value(rows[i + 1], column);
    const double scale = std::max(1.0, std::abs(a));
    const double against = -sign * (b - a) / scale;  // > 0 means a step against the trend
    v.worst_excess = std::max(v.worst_excess, against);
    if (against >= slack && v.holds) {
      v.holds = false;
      v.first_violation = i;
    }
  }
  return v;
}

ScanTable scan(int n, std::span<const double> thetas, const ShootOptions& opts, unsigned threads,
               double slack) {
  ScanTable table;
  table.n = n;
  table.rows.resize(thetas.size());
  parallel_for(thetas.size(), threads, [&](std::size_t i) {
    const SpectralPair p = spectral_pair({n, thetas[i]}, opts);
    ScanRow& r = table.rows[i];
    const double t2 = thetas[i] * thetas[i];
    r.theta1 = thetas[i];
    r.lambda1 = p.lambda1;
    r.lambda2 = p.lambda2;
    r.ratio = p.lambda2 / p.lambda1;
    r.scaled_lambda1 = t2 * p.lambda1;
    r.scaled_lambda2 = t2 * p.lambda2;
    r.scaled_gap = t2 * (p.lambda2 - p.lambda1);
  });
  const std::pair<Column, Trend> expected[] = {
      {Column::Lambda1, Trend::Decreasing},       {Column::Lambda2, Trend::Decreasing},
      {Column::Ratio, Trend::Increasing},         {Column::ScaledLambda1, Trend::Decreasing},
      {Column::ScaledLambda2, Trend::Increasing}, {Column::ScaledGap, Trend::Increasing}};
  for (const auto& [c, t] : expected) table.verdicts.push_back(check_monotone(table.rows, c, t, slack));
  return table;
}

RatioGapReport ratio_gap_checks(const SpectralPair& pair, double equality_tol) {
  const double n = pair.spec.n;
  const double theta1 = pair.spec.theta1;
  RatioGapReport r;
  r.ratio_lhs = (pair.lambda2 - n) / pair.lambda1;
  r.ratio_rhs = (n + 2.0) / n;
  const double delta = r.ratio_lhs - r.ratio_rhs;
  r.equality = std::abs(delta) < equality_tol;
  const double half_pi = 0.5 * std::numbers::pi;
  if (std::abs(theta1 - half_pi) < 1e-12) {
    r.ratio_ok = r.equality;
  } else if (theta1 < half_pi) {
    r.ratio_ok = delta > 0.0 && !r.equality;
  } else {
    r.ratio_ok = delta < 0.0 && !r.equality;
  }
  r.gap = pair.lambda2 - pair.lambda1;
  const double s = std::sin(theta1);
  r.gap_floor = (n - 1.0) / (s * s);
  r.gap_applicable = theta1 <= half_pi + 1e-12;
  r.gap_ok = r.gap > r.gap_floor;
  return r;
}

bool interlace_check(int n, double lambda, const ShootOptions& opts) {
  if (!(lambda > 0.0)) throw InvalidArgument("interlace_check needs lambda > 0");
  const double limit = theta_limit(opts);
  const std::vector<double> z0 = zeros({n, 0, lambda}, limit, opts);
  const std::vector<double> z1 = zeros({n, 1, lambda}, limit, opts);
  // theta = 0 is a zero of sin^{n-1} u_1, so the merged sequence must start with u_0.
  std::size_t i = 0, k = 0;
  int last = 1;
  while (i < z0.size() || k < z1.size()) {
    const bool take0 = k >= z1.size() || (i < z0.size() && z0[i] < z1[k]);
    const int kind = take0 ? 0 : 1;
    if (kind == last) return false;
    if (i < z0.size() && k < z1.size() && z0[i] == z1[k]) return false;
    last = kind;
    if (take0) ++i; else ++k;
  }
  return true;
}

double radius_for_lambda1(int n, double lambda1, const ShootOptions& opts) {
  if (!(lambda1 > 0.0)) throw InvalidArgument("lambda1 must be positive");
  return first_zero({n, 0, lambda1}, opts);
}

}  // namespace sphereppw::ball
