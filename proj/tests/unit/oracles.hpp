#pragma once

// Reference values computed from first principles, independent of the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double a, double b, double tol = 1e-14) {
  double fa = f(a);
  for (int i = 0; i < 200 && b - a > tol * std::max(1.0, std::abs(a)); ++i) {
    const double m = 0.5 * (a + b), fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// First sign change of f on a uniform scan of [a, b], then bisection.
inline double first_root(const std::function<double(double)>& f, double a, double b, double step) {
  double x = a, fx = f(a);
  while (x < b) {
    const double y = x + step, fy = f(y);
    if ((fy < 0) != (fx < 0)) return bisect(f, x, y);
    x = y;
    fx = fy;
  }
  return NAN;
}

// J_nu(x) from its power series.
inline double bessel_j(double nu, double x) {
  long double term = std::pow(0.5L * x, nu) / std::tgamma(nu + 1.0L), sum = term;
  const long double q = -0.25L * x * x;
  for (int k = 1; k < 200; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

inline double bessel_zero1(double nu) { return first_root([nu](double x) { return bessel_j(nu, x); }, 0.5, 10.0, 0.05); }

// 2F1(a, b; c; z) by direct summation, |z| < 1.
inline double hyp2f1(double a, double b, double c, double z) {
  long double term = 1.0L, sum = 1.0L;
  for (int k = 0; k < 5000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0L)) * z;
    sum += term;
    if (std::abs(term) < 1e-20L) break;
  }
  return static_cast<double>(sum);
}

// Cap of radius theta on S^2: lambda1 = nu(nu+1) with P_nu(cos theta) = 0,
// lambda2 from the first zero of P_nu^1, i.e. of dP_nu/dx.
inline double cap_lambda1_s2(double theta) {
  const double z = 0.5 * (1.0 - std::cos(theta));
  const double nu = first_root([z](double v) { return hyp2f1(-v, v + 1.0, 1.0, z); }, 1e-3, 200.0, 0.01);
  return nu * (nu + 1.0);
}

inline double cap_lambda2_s2(double theta) {
  const double z = 0.5 * (1.0 - std::cos(theta));
  const double nu = first_root([z](double v) { return hyp2f1(1.0 - v, v + 2.0, 2.0, z); }, 1.0 + 1e-3, 200.0, 0.01);
  return nu * (nu + 1.0);
}

// On S^3 the radial ground state is sin(k t) / sin t with lambda = k^2 - 1.
inline double cap_lambda1_s3(double theta) {
  const double k = std::numbers::pi / theta;
  return k * k - 1.0;
}

inline double ground_state_s3(double lambda, double t) {
  const double k = std::sqrt(lambda + 1.0);
  return std::sin(k * t) / (k * std::sin(t));
}

}  // namespace oracle
