#pragma once

#include <span>
#include <vector>

namespace sphereppw {

/// Geodesic ball (polar cap) of radius theta1 in the unit n-sphere.
struct BallSpec {
  int n = 2;
  double theta1 = 1.0;

  void validate() const;
};

namespace radial {

/// Angular index m and eigenparameter lambda of the radial equation
///   -y'' - (n-1) cot(t) y' + m(m+n-2) csc^2(t) y = lambda y.
struct ModeParams {
  int n = 2;
  int m = 0;
  double lambda = 0.0;

  double potential() const { return static_cast<double>(m) * (m + n - 2); }
  void validate() const;
};

/// Numerical knobs shared by every integration of the radial equation.
struct SolverOptions {
  double theta_seed = 1e-3;  // hand-off point from the power series to the integrator
  int series_order = 6;      // number of even-offset series terms after the leading one
  double rel_tol = 1e-12;
  double abs_tol = 1e-13;
  double min_step = 1e-13;   // below this the integrator reports failure
};

/// Sampled u_m(theta; lambda) with its derivative. `scale` records a constant
/// factor carried by the samples (lower() multiplies by its prefactor).
struct RadialFunction {
  ModeParams mode;
  double scale = 1.0;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> derivs;

  std::size_t size() const { return grid.size(); }
};

struct SeriesValue {
  double value = 0.0;
  double derivative = 0.0;
  double truncation_bound = 0.0;  // magnitude of the first omitted term
};

/// Leading coefficient c_m with c_0 = 1 and c_{k+1} = (lambda - k(k+n-1)) / (2k+n) c_k.
double leading_coefficient(int n, int m, double lambda);

/// Coefficients a_0 = 1, a_1, ..., a_order of u_m = c_m t^m sum_k a_k t^{2k}.
std::vector<double> series_coefficients(const ModeParams& mode, int order);

/// Power series evaluation of u_m near the regular singular point t = 0.
SeriesValue frobenius_seed(const ModeParams& mode, int order, double theta_seed);

/// Integrates the radial equation from the series seed and samples u_m on `grid`.
/// The grid must be strictly increasing and contained in (0, pi).
RadialFunction eval_um(const ModeParams& mode, std::span<const double> grid,
                       const SolverOptions& opts = {});

/// u_{m+1} = -u_m' + m cot(t) u_m, pointwise.
RadialFunction raise(const RadialFunction& u);

/// u_m' + (m+n-2) cot(t) u_m, which equals [lambda - (m-1)(m+n-2)] u_{m-1}.
/// The returned function carries mode m-1 and that scale factor.
RadialFunction lower(const RadialFunction& u);

/// sup |u_{m+1} - (2m+n-2) cot(t) u_m + [lambda - (m-1)(m+n-2)] u_{m-1}|.
double recursion_residual(const RadialFunction& prev, const RadialFunction& mid,
                          const RadialFunction& next);

/// sup |sin^{m+n-1}(t) u_{m+1}(t) - [lambda - m(m+n-1)] int_0^t sin^{m+n-1} u_m|.
double integral_identity_residual(const RadialFunction& um, const RadialFunction& next,
                                  const SolverOptions& opts = {});

/// Sup-norm of the ODE residual, with u'' taken from a finite-difference of
/// the sampled derivative on a uniformly refined copy of the grid.
double ode_residual(const ModeParams& mode, double theta_lo, double theta_hi, int points,
                    const SolverOptions& opts = {});

}  // namespace radial
}  // namespace sphereppw
