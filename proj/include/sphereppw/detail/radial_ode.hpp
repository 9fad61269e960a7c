#pragma once

// Adaptive integration of the radial equation, with optional quadrature
// components carried along as extra state entries.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include "sphereppw/error.hpp"
#include "sphereppw/radial_core.hpp"

namespace sphereppw::radial::detail {

template <std::size_t N>
using State = std::array<double, N>;

/// Right-hand side of the first-order system (y, y', quadratures...).
/// `Integrand` maps (theta, y, y') to the K = N-2 quadrature densities.
template <std::size_t N, class Integrand>
struct RadialRhs {
  ModeParams mode;
  Integrand integrand;

  void operator()(const State<N>& x, State<N>& dxdt, double t) const {
    const double s = std::sin(t);
    const double c = std::cos(t);
    dxdt[0] = x[1];
    dxdt[1] = -(mode.n - 1) * (c / s) * x[1] + (mode.potential() / (s * s) - mode.lambda) * x[0];
    if constexpr (N > 2) {
      const auto q = integrand(t, x[0], x[1]);
      for (std::size_t k = 0; k + 2 < N; ++k) dxdt[k + 2] = q[k];
    }
  }
};

struct NoQuadrature {
  std::array<double, 0> operator()(double, double, double) const { return {}; }
};

/// Advances `x` from `t` to `t_end`, calling `observe(t, x)` after every
/// accepted step. `dt` carries the step-size suggestion between calls. An
/// observer returning `true` stops the integration early; advance() then
/// returns false.
template <std::size_t N, class Rhs, class Observer>
bool advance(const Rhs& rhs, State<N>& x, double& t, double t_end, double& dt,
             const SolverOptions& opts, Observer&& observe) {
  namespace odeint = boost::numeric::odeint;
  using Stepper = odeint::runge_kutta_fehlberg78<State<N>>;
  auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, Stepper());

  const double eps = 4e-16 * std::max(1.0, std::abs(t_end));
  while (t_end - t > eps) {
    double trial = std::min(dt, t_end - t);
    const bool clipped = trial < dt;
    const double t_before = t;
    const odeint::controlled_step_result res = stepper.try_step(rhs, x, t, trial);
    if (res == odeint::success) {
      for (double v : x) {
        if (!std::isfinite(v)) throw IntegrationError("non-finite radial state", t_before);
      }
      if (t_end - t <= eps) t = t_end;
      if (!clipped || trial > dt) dt = trial;
      if constexpr (std::is_same_v<decltype(observe(t, x)), bool>) {
        if (observe(t, x)) return false;
      } else {
        observe(t, x);
      }
    } else {
      dt = trial;
      if (dt < opts.min_step) throw IntegrationError("radial integrator step underflow", t);
    }
  }
  t = t_end;
  return true;
}

/// Series seed for (y, y') at `theta` followed by zeroed quadrature entries.
template <std::size_t N>
State<N> seed_state(const ModeParams& mode, const SolverOptions& opts, double theta) {
  const SeriesValue sv = frobenius_seed(mode, opts.series_order, theta);
  State<N> x{};
  x[0] = sv.value;
  x[1] = sv.derivative;
  return x;
}

inline double initial_step(double theta_seed) { return 0.25 * theta_seed; }

}  // namespace sphereppw::radial::detail

namespace sphereppw::radial::detail {

/// Contribution of [0, theta] to the quadratures, from the power series.
template <std::size_t K, class Integrand>
std::array<double, K> seed_quadrature(const ModeParams& mode, const SolverOptions& opts,
                                      double theta, const Integrand& integrand) {
  std::array<double, K> out{};
  if constexpr (K > 0) {
    for (std::size_t k = 0; k < K; ++k) {
      out[k] = boost::math::quadrature::gauss<double, 20>::integrate(
          [&](double t) {
            const SeriesValue sv = frobenius_seed(mode, opts.series_order, t);
            return integrand(t, sv.value, sv.derivative)[k];
          },
          0.0, theta);
    }
  }
  return out;
}

}  // namespace sphereppw::radial::detail

namespace sphereppw::radial::detail {

/// Integrals of the K densities over (0, theta_end], carried along with the
/// solution from the series seed.
template <std::size_t K, class Integrand>
std::array<double, K> quadrature_to(const ModeParams& mode, double theta_end,
                                    const SolverOptions& opts, const Integrand& integrand) {
  const double seed = std::min(opts.theta_seed, theta_end);
  std::array<double, K> head = seed_quadrature<K>(mode, opts, seed, integrand);
  if (theta_end <= seed) return head;
  RadialRhs<K + 2, Integrand> rhs{mode, integrand};
  auto x = seed_state<K + 2>(mode, opts, seed);
  for (std::size_t k = 0; k < K; ++k) x[k + 2] = head[k];
  double t = seed;
  double dt = initial_step(seed);
  advance<K + 2>(rhs, x, t, theta_end, dt, opts, [](double, const auto&) {});
  std::array<double, K> out{};
  for (std::size_t k = 0; k < K; ++k) out[k] = x[k + 2];
  return out;
}

}  // namespace sphereppw::radial::detail
