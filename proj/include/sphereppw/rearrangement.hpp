#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "sphereppw/mesh.hpp"

namespace sphereppw::rearr {

/// Volume C_n of the unit ball in R^n.
double unit_ball_volume(int n);

/// |S^n(rho)|.
double sphere_volume(int n, double rho = 1.0);

/// Volume A(r) of the geodesic ball of radius r in S^n(rho).
double cap_volume(int n, double rho, double r);

/// Boundary measure L(r) = n C_n (rho sin(r / rho))^{n-1}.
double cap_boundary(int n, double rho, double r);

/// Inverse of cap_volume on [0, |S^n(rho)|].
double theta_of_volume(int n, double rho, double s);

/// A function on a measured set as (value, measure) pairs.
struct DomainMeasure {
  std::vector<std::pair<double, double>> entries;
  double total_measure = 0.0;

  void add(double value, double measure);
  void validate() const;
  std::size_t size() const { return entries.size(); }
};

/// Step function on [0, total]: values[i] on [s_grid[i], s_grid[i+1]).
struct RearrangedProfile {
  std::vector<double> s_grid;
  std::vector<double> values;

  double total() const { return s_grid.empty() ? 0.0 : s_grid.back(); }
  std::size_t steps() const { return values.size(); }
  /// Value at s; 0 outside [0, total).
  double operator()(double s) const;
  /// Sum of |value|^p over steps weighted by step length.
  double integral_power(double p) const;
  /// Measure of {value > t}.
  double measure_above(double t) const;
};

/// Nonincreasing equimeasurable profile f^#; equal values merge into one step.
RearrangedProfile decreasing_rearrangement(const DomainMeasure& dm);
/// Nondecreasing equimeasurable profile f_#.
RearrangedProfile increasing_rearrangement(const DomainMeasure& dm);

/// Measure of {f > t} in the source data.
double measure_above(const DomainMeasure& dm, double t);

/// f^star(r) = f^#(A(r)).
double symmetric_value(const RearrangedProfile& sharp, int n, double rho, double r);

/// Exact integral over [0, min(totals)] of the product of two step functions.
double integral_product(const RearrangedProfile& a, const RearrangedProfile& b);

/// Integral of profile(s) * w(s) over [0, total], with a 4-point Gauss rule per step.
template <class Weight>
double integral_weighted(const RearrangedProfile& a, const Weight& w) {
  static constexpr double x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                  0.8611363115940526};
  static constexpr double c[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                  0.3478548451374538};
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double lo = a.s_grid[i], hi = a.s_grid[i + 1];
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double part = 0.0;
    for (int k = 0; k < 4; ++k) part += c[k] * w(mid + half * x[k]);
    sum += a.values[i] * half * part;
  }
  return sum;
}

struct IsoperimetricReport {
  double length = 0.0;
  double area = 0.0;
  double defect = 0.0;  // L^2 - (4 pi A - A^2)
};

/// Isoperimetric defect of a mesh domain on S^2 (geodesic boundary arcs,
/// spherical-excess areas).
IsoperimetricReport isoperimetric_check_s2(const domain::SphericalDomainMesh& mesh);
/// Same quantities for the exact cap of radius r on S^2.
IsoperimetricReport isoperimetric_cap_s2(double r);

/// Rows "value,measure"; a header line is skipped when it does not parse.
DomainMeasure read_csv(std::istream& is);
/// Rows "s,value" at the left end of every step plus the final breakpoint.
void write_csv(std::ostream& os, const RearrangedProfile& profile);

}  // namespace sphereppw::rearr
