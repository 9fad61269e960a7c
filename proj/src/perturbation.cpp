#include "sphereppw/perturbation.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "sphereppw/detail/radial_ode.hpp"
#include "sphereppw/error.hpp"

namespace sphereppw::perturb {

namespace {

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi))
    throw InvalidArgument("theta must lie in (0, pi)");
}

constexpr double kSeriesCut = 0.1;

double sin_pow(double t, int k) { return std::pow(std::sin(t), k); }

}  // namespace

double ell(double theta) {
  check_theta(theta);
  if (theta < kSeriesCut) {
    const double t2 = theta * theta;
    const double c[] = {-2.0 / 3.0,         -4.0 / 45.0,  -4.0 / 315.0,
                        -8.0 / 4725.0,      -4.0 / 18711.0, -5528.0 / 212837625.0,
                        -8.0 / 2606175.0};
    double sum = 0.0, p = theta;
    for (double ck : c) {
      sum += ck * p;
      p *= t2;
    }
    return sum;
  }
  const double s = std::sin(theta);
  return std::cos(theta) / s - theta / (s * s);
}

double mfun(double theta) {
  check_theta(theta);
  if (theta < kSeriesCut) {
    const double t2 = theta * theta;
    const double c[] = {1.0 / 3.0,    2.0 / 15.0,          2.0 / 63.0,  4.0 / 675.0,
                        2.0 / 2079.0, 2764.0 / 19348875.0, 4.0 / 200475.0};
    double sum = 0.0, p = 1.0;
    for (double ck : c) {
      sum += ck * p;
      p *= t2;
    }
    return sum;
  }
  const double s = std::sin(theta);
  return (1.0 - theta * std::cos(theta) / s) / (s * s);
}

double dlambda1_dc(const BallSpec& spec, const Options& opts) {
  spec.validate();
  const int n = spec.n;
  const double lambda = ball::lambda_shoot(spec, 0, opts.shoot);
  auto density = [n](double t, double y, double dy) {
    const double w = sin_pow(t, n - 1);
    return std::array<double, 2>{-ell(t) * y * dy * w, y * y * w};
  };
  const auto q = radial::detail::quadrature_to<2>({n, 0, lambda}, spec.theta1, opts.shoot.ode, density);
  return (n - 1) * q[0] / q[1];
}

double dlambda1_dc_raw(const BallSpec& spec, const Options& opts) {
  spec.validate();
  const int n = spec.n;
  const double lambda = ball::lambda_shoot(spec, 0, opts.shoot);
  auto density = [n](double t, double y, double) {
    const double v2 = y * y * sin_pow(t, n - 1);
    return std::array<double, 2>{((n - 3) * mfun(t) - (n - 1)) * v2, v2};
  };
  const auto q = radial::detail::quadrature_to<2>({n, 0, lambda}, spec.theta1, opts.shoot.ode, density);
  return 0.5 * (n - 1) * q[0] / q[1];
}

double dlambda2_dc(const BallSpec& spec, const Options& opts) {
  spec.validate();
  const int n = spec.n;
  const double lambda = ball::lambda_shoot(spec, 1, opts.shoot);
  auto density = [n](double t, double y, double) {
    const double v2 = y * y * sin_pow(t, n - 1);
    return std::array<double, 2>{((n + 1) * mfun(t) - (n - 1)) * v2, v2};
  };
  const auto q = radial::detail::quadrature_to<2>({n, 1, lambda}, spec.theta1, opts.shoot.ode, density);
  return 0.5 * (n - 1) * q[0] / q[1];
}

double finite_difference_dc(const BallSpec& spec, int m, double step, const Options& opts) {
  spec.validate();
  if (!(step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  auto f = [&](double c) {
    return c * c * ball::lambda_shoot({spec.n, c * spec.theta1}, m, opts.shoot);
  };
  return (f(1.0 + step) - f(1.0 - step)) / (2.0 * step);
}

Report report(const BallSpec& spec, const Options& opts) {
  Report r;
  r.spec = spec;
  r.lambda1 = ball::lambda_shoot(spec, 0, opts.shoot);
  r.lambda2 = ball::lambda_shoot(spec, 1, opts.shoot);
  r.d_lambda1_dc = dlambda1_dc(spec, opts);
  r.d_lambda1_dc_raw = dlambda1_dc_raw(spec, opts);
  r.d_lambda2_dc = dlambda2_dc(spec, opts);
  r.fd1 = finite_difference_dc(spec, 0, opts.fd_step, opts);
  r.fd2 = finite_difference_dc(spec, 1, opts.fd_step, opts);
  r.ratio_derivative = r.d_lambda2_dc / r.lambda2 - r.d_lambda1_dc / r.lambda1;
  return r;
}

int normalized_crossings(const BallSpec& spec, int samples, const Options& opts) {
  spec.validate();
  if (samples < 3) throw InvalidArgument("need at least 3 samples");
  const int n = spec.n;
  const double l1 = ball::lambda_shoot(spec, 0, opts.shoot);
  const double l2 = ball::lambda_shoot(spec, 1, opts.shoot);
  auto norm2 = [&](int m, double lambda) {
    auto density = [n](double t, double y, double) {
      return std::array<double, 1>{y * y * sin_pow(t, n - 1)};
    };
    return radial::detail::quadrature_to<1>({n, m, lambda}, spec.theta1, opts.shoot.ode, density)[0];
  };
  const double s0 = 1.0 / std::sqrt(norm2(0, l1));
  const double s1 = 1.0 / std::sqrt(norm2(1, l2));
  std::vector<double> grid(samples);
  for (int i = 0; i < samples; ++i) grid[i] = spec.theta1 * (i + 1.0) / (samples + 1.0);
  const auto u0 = radial::eval_um({n, 0, l1}, grid, opts.shoot.ode);
  const auto u1 = radial::eval_um({n, 1, l2}, grid, opts.shoot.ode);
  int changes = 0;
  int last = 0;
  for (int i = 0; i < samples; ++i) {
    const double w = std::pow(std::sin(grid[i]), 0.5 * (n - 1));
    const double d = (s1 * u1.values[i] - s0 * u0.values[i]) * w;
    const int sg = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sg != 0 && last != 0 && sg != last) ++changes;
    if (sg != 0) last = sg;
  }
  return changes;
}

}  // namespace sphereppw::perturb
