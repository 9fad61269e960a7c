#include "sphereppw/radial_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "sphereppw/detail/radial_ode.hpp"
#include "sphereppw/error.hpp"

namespace sphereppw {

void BallSpec::validate() const {
  if (n < 2) throw InvalidArgument("dimension n must be >= 2, got " + std::to_string(n));
  if (!(theta1 > 0.0 && theta1 < std::numbers::pi))
    throw InvalidArgument("theta1 must lie in (0, pi), got " + std::to_string(theta1));
}

namespace radial {

void ModeParams::validate() const {
  if (n < 2) throw InvalidArgument("dimension n must be >= 2, got " + std::to_string(n));
  if (m < 0) throw InvalidArgument("angular index m must be >= 0");
  if (!std::isfinite(lambda)) throw InvalidArgument("lambda must be finite");
}

double leading_coefficient(int n, int m, double lambda) {
  double c = 1.0;
  for (int k = 0; k < m; ++k) c *= (lambda - static_cast<double>(k) * (k + n - 1)) / (2.0 * k + n);
  return c;
}

std::vector<double> series_coefficients(const ModeParams& mode, int order) {
  // Power series of sin^2 t (from t^2) and sin t cos t (from t^1), both in t^2.
  const int terms = order + 2;
  std::vector<double> sin2(terms + 1, 0.0), sincos(terms + 1, 0.0);
  {
    double fact = 1.0;  // (2j)! running
    double pow4 = 1.0;  // 4^j
    for (int j = 0; j <= terms; ++j) {
      if (j > 0) fact *= (2.0 * j - 1.0) * (2.0 * j);
      if (j >= 1) sin2[j] = ((j % 2 == 1) ? 1.0 : -1.0) * pow4 / 2.0 / fact;
      sincos[j] = ((j % 2 == 0) ? 1.0 : -1.0) * pow4 / (fact * (2.0 * j + 1.0));
      pow4 *= 4.0;
    }
  }
  const double m = mode.m;
  const double n = mode.n;
  auto e = [&](int k) { return (m + 2.0 * k) * (m + 2.0 * k - 1.0); };

  std::vector<double> a(order + 2, 0.0);
  a[0] = 1.0;
  for (int big_n = 1; big_n <= order + 1; ++big_n) {
    double rhs = 0.0;
    for (int j = 2; j <= big_n + 1; ++j) rhs -= sin2[j] * a[big_n - j + 1] * e(big_n - j + 1);
    for (int j = 1; j <= big_n; ++j)
      rhs -= (n - 1.0) * sincos[j] * a[big_n - j] * (m + 2.0 * (big_n - j));
    for (int j = 1; j <= big_n; ++j) rhs -= mode.lambda * sin2[j] * a[big_n - j];
    const double d = (m + 2.0 * big_n) * (m + 2.0 * big_n + n - 2.0) - mode.potential();
    a[big_n] = rhs / d;
  }
  return a;
}

SeriesValue frobenius_seed(const ModeParams& mode, int order, double theta_seed) {
  mode.validate();
  if (order < 2) throw InvalidArgument("series order must be >= 2");
  if (!(theta_seed > 0.0 && theta_seed <= 1e-3))
    throw InvalidArgument("theta_seed must lie in (0, 1e-3], got " + std::to_string(theta_seed));

  const double cm = leading_coefficient(mode.n, mode.m, mode.lambda);
  const std::vector<double> a = series_coefficients(mode, order);
  const double t2 = theta_seed * theta_seed;
  double sum = 0.0, dsum = 0.0, p = 1.0;  // p = t^{2k}
  for (int k = 0; k <= order; ++k) {
    sum += a[k] * p;
    dsum += a[k] * (mode.m + 2.0 * k) * p;
    p *= t2;
  }
  const double tm = std::pow(theta_seed, mode.m);
  SeriesValue out;
  out.value = cm * tm * sum;
  out.derivative = cm * tm * dsum / theta_seed;
  out.truncation_bound = std::abs(cm * tm * a[order + 1] * p);
  return out;
}

namespace {

void check_grid(std::span<const double> grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0 && grid[i] < std::numbers::pi))
      throw InvalidArgument("grid points must lie in (0, pi)");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw InvalidArgument("grid must be strictly increasing");
  }
}

void check_common_grid(const RadialFunction& a, const RadialFunction& b) {
  if (a.grid != b.grid) throw InvalidArgument("radial functions are sampled on different grids");
  if (a.mode.n != b.mode.n || a.mode.lambda != b.mode.lambda)
    throw InvalidArgument("radial functions belong to different (n, lambda)");
}

}  // namespace

RadialFunction eval_um(const ModeParams& mode, std::span<const double> grid,
                       const SolverOptions& opts) {
  mode.validate();
  check_grid(grid);

  RadialFunction out;
  out.mode = mode;
  out.grid.assign(grid.begin(), grid.end());
  out.values.resize(grid.size());
  out.derivs.resize(grid.size());

  std::size_t i = 0;
  for (; i < grid.size() && grid[i] <= opts.theta_seed; ++i) {
    const SeriesValue sv = frobenius_seed(mode, opts.series_order, grid[i]);
    out.values[i] = sv.value;
    out.derivs[i] = sv.derivative;
  }
  if (i == grid.size()) return out;

  detail::RadialRhs<2, detail::NoQuadrature> rhs{mode, {}};
  auto x = detail::seed_state<2>(mode, opts, opts.theta_seed);
  double t = opts.theta_seed;
  double dt = detail::initial_step(opts.theta_seed);
  for (; i < grid.size(); ++i) {
    detail::advance<2>(rhs, x, t, grid[i], dt, opts, [](double, const auto&) {});
    out.values[i] = x[0];
    out.derivs[i] = x[1];
  }
  return out;
}

RadialFunction raise(const RadialFunction& u) {
  const auto& md = u.mode;
  RadialFunction out;
  out.mode = {md.n, md.m + 1, md.lambda};
  out.scale = u.scale;
  out.grid = u.grid;
  out.values.resize(u.size());
  out.derivs.resize(u.size());
  const double k = md.lambda - static_cast<double>(md.m) * (md.m + md.n - 1);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double cot = 1.0 / std::tan(u.grid[i]);
    out.values[i] = -u.derivs[i] + md.m * cot * u.values[i];
    out.derivs[i] = k * u.values[i] - (md.m + md.n - 1) * cot * out.values[i];
  }
  return out;
}

RadialFunction lower(const RadialFunction& u) {
  const auto& md = u.mode;
  if (md.m < 1) throw InvalidArgument("lower() needs m >= 1");
  const double k = md.lambda - static_cast<double>(md.m - 1) * (md.m + md.n - 2);
  RadialFunction out;
  out.mode = {md.n, md.m - 1, md.lambda};
  out.scale = u.scale * k;
  out.grid = u.grid;
  out.values.resize(u.size());
  out.derivs.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double cot = 1.0 / std::tan(u.grid[i]);
    out.values[i] = u.derivs[i] + (md.m + md.n - 2) * cot * u.values[i];
    out.derivs[i] = -k * u.values[i] + (md.m - 1) * cot * out.values[i];
  }
  return out;
}

double recursion_residual(const RadialFunction& prev, const RadialFunction& mid,
                          const RadialFunction& next) {
  check_common_grid(prev, mid);
  check_common_grid(mid, next);
  const int m = mid.mode.m;
  if (prev.mode.m != m - 1 || next.mode.m != m + 1)
    throw InvalidArgument("recursion_residual needs consecutive modes m-1, m, m+1");
  const int n = mid.mode.n;
  const double k = mid.mode.lambda - static_cast<double>(m - 1) * (m + n - 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < mid.size(); ++i) {
    const double cot = 1.0 / std::tan(mid.grid[i]);
    const double r = next.values[i] - (2.0 * m + n - 2.0) * cot * mid.values[i] + k * prev.values[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double integral_identity_residual(const RadialFunction& um, const RadialFunction& next,
                                  const SolverOptions& opts) {
  check_common_grid(um, next);
  if (next.mode.m != um.mode.m + 1)
    throw InvalidArgument("integral_identity_residual needs consecutive modes m, m+1");
  if (um.size() == 0) return 0.0;
  const int m = um.mode.m;
  const int n = um.mode.n;
  const int k = m + n - 1;
  const double factor = um.mode.lambda - static_cast<double>(m) * (m + n - 1);

  auto weight = [k](double t) { return std::pow(std::sin(t), k); };
  auto dweight = [k](double t) { return k * std::pow(std::sin(t), k - 1) * std::cos(t); };

  // Head [0, grid[0]] by Gauss-Legendre on freshly evaluated samples.
  const double t0 = um.grid.front();
  const double scale = um.scale;
  double cumulative = boost::math::quadrature::gauss<double, 20>::integrate(
      [&](double t) {
        if (t <= opts.theta_seed) {
          return weight(t) * scale * frobenius_seed(um.mode, opts.series_order, t).value;
        }
        const double pt[1] = {t};
        return weight(t) * scale * eval_um(um.mode, pt, opts).values[0];
      },
      0.0, t0);

  double worst = 0.0;
  for (std::size_t i = 0; i < um.size(); ++i) {
    if (i > 0) {
      // Hermite-corrected trapezoid: fourth order, uses the stored derivatives.
      const double a = um.grid[i - 1], b = um.grid[i], h = b - a;
      const double fa = weight(a) * um.values[i - 1];
      const double fb = weight(b) * um.values[i];
      const double dfa = dweight(a) * um.values[i - 1] + weight(a) * um.derivs[i - 1];
      const double dfb = dweight(b) * um.values[i] + weight(b) * um.derivs[i];
      cumulative += 0.5 * h * (fa + fb) + h * h / 12.0 * (dfa - dfb);
    }
    const double lhs = weight(um.grid[i]) * next.values[i];
    worst = std::max(worst, std::abs(lhs - factor * cumulative));
  }
  return worst;
}

double ode_residual(const ModeParams& mode, double theta_lo, double theta_hi, int points,
                    const SolverOptions& opts) {
  if (points < 1 || !(theta_hi > theta_lo)) throw InvalidArgument("bad residual sampling range");
  const double delta = std::min(1e-3, 0.1 * theta_lo);
  std::vector<double> grid;
  grid.reserve(5 * static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? theta_lo : theta_lo + (theta_hi - theta_lo) * i / (points - 1);
    for (int s = -2; s <= 2; ++s) grid.push_back(t + s * delta);
  }
  const RadialFunction u = eval_um(mode, grid, opts);
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const std::size_t c = 5 * static_cast<std::size_t>(i) + 2;
    const double d2 = (-u.derivs[c + 2] + 8.0 * u.derivs[c + 1] - 8.0 * u.derivs[c - 1] +
                       u.derivs[c - 2]) / (12.0 * delta);
    const double t = u.grid[c];
    const double s = std::sin(t);
    const double r = -d2 - (mode.n - 1) * (std::cos(t) / s) * u.derivs[c] +
                     (mode.potential() / (s * s) - mode.lambda) * u.values[c];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace radial
}  // namespace sphereppw
