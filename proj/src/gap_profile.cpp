#include "sphereppw/gap_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/Dense>

#include "sphereppw/error.hpp"

namespace sphereppw::gap {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

struct Row {
  double y1, dy1, y2, dy2, p, g, dg, d2g, q, B;
};

constexpr int kEndOrder = 28;
constexpr double kEndWindow = 0.1;  // series region theta1 - t < kEndWindow * theta1

using Series = std::vector<double>;

Series mul(const Series& a, const Series& b) {
  Series c(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

Series div(const Series& a, const Series& b) {
  Series c(a.size(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    double acc = a[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * c[k - j];
    c[k] = acc / b[0];
  }
  return c;
}

/// Taylor coefficients in tau = t - theta1 of the solution of the radial
/// equation with y(theta1) = 0, y'(theta1) = slope.
Series boundary_taylor(int n, int m, double lambda, double theta1, double slope) {
  const int k_max = kEndOrder + 2;
  Series sn(k_max, 0.0), cs(k_max, 0.0);
  double fact = 1.0;
  for (int k = 0; k < k_max; ++k) {
    if (k > 0) fact *= k;
    sn[k] = std::sin(theta1 + 0.5 * k * std::numbers::pi) / fact;
    cs[k] = std::cos(theta1 + 0.5 * k * std::numbers::pi) / fact;
  }
  const Series cot = div(cs, sn);
  Series one(k_max, 0.0);
  one[0] = 1.0;
  const Series csc2 = div(one, mul(sn, sn));
  const double pot = static_cast<double>(m) * (m + n - 2);
  Series a(k_max, 0.0);
  a[1] = slope;
  for (int k = 0; k + 2 < k_max; ++k) {
    double rhs = -lambda * a[k];
    for (int j = 0; j <= k; ++j) {
      rhs -= (n - 1) * cot[j] * (k - j + 1) * a[k - j + 1];
      rhs += pot * csc2[j] * a[k - j];
    }
    a[k + 2] = rhs / ((k + 2.0) * (k + 1.0));
  }
  return a;
}

/// g = y2/y1 as a Taylor series about theta1, from the shifted series of y1 and y2.
struct EndSeries {
  Series g;

  EndSeries(int n, double theta1, double l1, double l2, double dy1, double dy2) {
    const Series a = boundary_taylor(n, 0, l1, theta1, dy1);
    const Series b = boundary_taylor(n, 1, l2, theta1, dy2);
    const Series a1(a.begin() + 1, a.begin() + 1 + kEndOrder);
    const Series b1(b.begin() + 1, b.begin() + 1 + kEndOrder);
    g = div(b1, a1);
  }

  explicit EndSeries(Series coeffs) : g(std::move(coeffs)) {}

  void eval(double tau, double& f, double& df, double& d2f) const {
    f = df = d2f = 0.0;
    const int k_max = static_cast<int>(g.size()) - 1;
    for (int k = k_max; k >= 0; --k) f = f * tau + g[k];
    for (int k = k_max; k >= 1; --k) df = df * tau + k * g[k];
    for (int k = k_max; k >= 2; --k) d2f = d2f * tau + k * (k - 1.0) * g[k];
  }
};

/// Everything the profile tabulates, evaluated directly at the given points.
/// Within the boundary window g and its derivatives come from `end`.
std::vector<Row> pointwise(int n, double theta1, double l1, double l2, std::span<const double> pts,
                           const radial::SolverOptions& ode, const EndSeries* end) {
  const auto u0 = radial::eval_um({n, 0, l1}, pts, ode);
  const auto u1 = radial::eval_um({n, 1, l2}, pts, ode);
  std::vector<Row> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Row& r = out[i];
    const double s = std::sin(pts[i]);
    const double cot = std::cos(pts[i]) / s;
    r.y1 = u0.values[i];
    r.dy1 = u0.derivs[i];
    r.y2 = u1.values[i];
    r.dy2 = u1.derivs[i];
    r.p = -r.dy1 / r.y1;
    if (end != nullptr && theta1 - pts[i] < kEndWindow * theta1) {
      end->eval(pts[i] - theta1, r.g, r.dg, r.d2g);
    } else {
      r.g = r.y2 / r.y1;
      r.dg = (r.dy2 * r.y1 - r.dy1 * r.y2) / (r.y1 * r.y1);
      r.d2g = 2.0 * r.p * r.dg - (n - 1) * cot * r.dg + ((n - 1) / (s * s) - (l2 - l1)) * r.g;
    }
    r.q = s * r.dg / r.g;
    r.B = r.dg * r.dg + (n - 1) * r.g * r.g / (s * s);
  }
  return out;
}

bool is_hemisphere(double theta1) { return std::abs(theta1 - kHalfPi) < 1e-12; }

bool nonincreasing(const std::vector<double>& v, double slack) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i + 1] - v[i] > slack * std::max(1.0, std::abs(v[i]))) return false;
  return true;
}

bool nondecreasing(const std::vector<double>& v, double slack) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i] - v[i + 1] > slack * std::max(1.0, std::abs(v[i]))) return false;
  return true;
}

}  // namespace

double q_second_derivative_at_zero(int n, double lambda1, double lambda2) {
  return 2.0 * (lambda1 / n - lambda2 / (n + 2.0) - (2.0 - n) / (2.0 * (n + 2.0)));
}

double q_slope_at_boundary(int n, double theta1, double lambda1, double lambda2) {
  const double s = std::sin(theta1);
  return -(lambda2 - lambda1 - (n - 1) / (s * s)) * s / 3.0;
}

GapProfile build_profile(const BallSpec& spec, const ProfileOptions& opts) {
  spec.validate();
  if (spec.theta1 > kHalfPi + 1e-12)
    throw InvalidArgument("gap profile needs theta1 <= pi/2");
  if (opts.samples < 8) throw InvalidArgument("gap profile needs at least 8 samples");
  const int n = spec.n;

  GapProfile gp;
  gp.spec = spec;
  gp.ode = opts.shoot.ode;
  const ball::SpectralPair pair = ball::spectral_pair(spec, opts.shoot);
  gp.lambda1 = pair.lambda1;
  gp.lambda2 = pair.lambda2;

  const double end_pt[1] = {spec.theta1};
  const double dy1_end = radial::eval_um({n, 0, gp.lambda1}, end_pt, opts.shoot.ode).derivs[0];
  const double dy2_end = radial::eval_um({n, 1, gp.lambda2}, end_pt, opts.shoot.ode).derivs[0];
  const EndSeries end(n, spec.theta1, gp.lambda1, gp.lambda2, dy1_end, dy2_end);
  gp.end_taylor = end.g;

  const int m = opts.samples;
  gp.grid.resize(m);
  for (int i = 0; i < m; ++i) gp.grid[i] = spec.theta1 * (i + 1.0) / (m + 1.0);
  const auto rows = pointwise(n, spec.theta1, gp.lambda1, gp.lambda2, gp.grid, opts.shoot.ode, &end);
  for (const Row& r : rows) {
    gp.y1.push_back(r.y1);
    gp.dy1.push_back(r.dy1);
    gp.y2.push_back(r.y2);
    gp.dy2.push_back(r.dy2);
    gp.p.push_back(r.p);
    gp.g.push_back(r.g);
    gp.dg.push_back(r.dg);
    gp.d2g.push_back(r.d2g);
    gp.q.push_back(r.q);
    gp.B.push_back(r.B);
  }

  gp.c1 = gp.lambda2 / n;
  gp.q_pp0 = q_second_derivative_at_zero(n, gp.lambda1, gp.lambda2);
  gp.g_end = end.g[0];
  gp.dg_end = end.g[1];
  gp.d2g_end = 2.0 * end.g[2];
  gp.dq_end = q_slope_at_boundary(n, spec.theta1, gp.lambda1, gp.lambda2);
  return gp;
}

void GapProfile::hermite(double t, double& value, double& slope) const {
  // Uniform nodes x_0 = 0, x_i = grid[i-1], x_{m+1} = theta1 with (g, g', g'') data.
  const std::size_t m = grid.size();
  const double h = spec.theta1 / (m + 1.0);
  std::size_t k = static_cast<std::size_t>(std::floor(t / h));
  k = std::min(k, m);
  auto node = [&](std::size_t i, double& f, double& df, double& d2f) {
    if (i == 0) {
      f = 0.0;
      df = c1;
      d2f = 0.0;
    } else if (i == m + 1) {
      f = g_end;
      df = 0.0;
      d2f = d2g_end;
    } else {
      f = g[i - 1];
      df = dg[i - 1];
      d2f = d2g[i - 1];
    }
  };
  double f0, d0, s0, f1, d1, s1;
  node(k, f0, d0, s0);
  node(k + 1, f1, d1, s1);
  const double x = (t - k * h) / h;
  // Quintic Hermite basis on [0, 1].
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
  const double h00 = 1 - 10 * x3 + 15 * x4 - 6 * x5;
  const double h10 = x - 6 * x3 + 8 * x4 - 3 * x5;
  const double h20 = 0.5 * (x2 - 3 * x3 + 3 * x4 - x5);
  const double h01 = 10 * x3 - 15 * x4 + 6 * x5;
  const double h11 = -4 * x3 + 7 * x4 - 3 * x5;
  const double h21 = 0.5 * (x3 - 2 * x4 + x5);
  value = h00 * f0 + h * h10 * d0 + h * h * h20 * s0 + h01 * f1 + h * h11 * d1 + h * h * h21 * s1;
  const double dh00 = -30 * x2 + 60 * x3 - 30 * x4;
  const double dh10 = 1 - 18 * x2 + 32 * x3 - 15 * x4;
  const double dh20 = 0.5 * (2 * x - 9 * x2 + 12 * x3 - 5 * x4);
  const double dh01 = 30 * x2 - 60 * x3 + 30 * x4;
  const double dh11 = -12 * x2 + 28 * x3 - 15 * x4;
  const double dh21 = 0.5 * (3 * x2 - 8 * x3 + 5 * x4);
  slope = (dh00 * f0 + dh01 * f1) / h + dh10 * d0 + dh11 * d1 + h * (dh20 * s0 + dh21 * s1);
}

double GapProfile::g_ext(double theta) const {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw InvalidArgument("theta must lie in [0, pi]");
  const double t = theta > kHalfPi ? std::numbers::pi - theta : theta;
  if (t >= spec.theta1) return g_end;
  double v, d;
  hermite(t, v, d);
  return v;
}

double GapProfile::dg_ext(double theta) const {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw InvalidArgument("theta must lie in [0, pi]");
  const bool reflected = theta > kHalfPi;
  const double t = reflected ? std::numbers::pi - theta : theta;
  if (t >= spec.theta1) return 0.0;
  double v, d;
  hermite(t, v, d);
  return reflected ? -d : d;
}

double GapProfile::B_ext(double theta) const {
  const double t = theta > kHalfPi ? std::numbers::pi - theta : theta;
  const double n1 = spec.n - 1.0;
  if (t < 1e-7) return spec.n * c1 * c1;
  const double s = std::sin(t);
  const double gv = g_ext(t);
  const double dv = dg_ext(t);
  return dv * dv + n1 * gv * gv / (s * s);
}

double GapProfile::gtilde(double theta) const {
  const double t = theta > kHalfPi ? std::numbers::pi - theta : theta;
  if (t < 1e-7) return c1;
  return g_ext(t) / std::sin(t);
}

RiccatiResiduals riccati_residuals(const GapProfile& gp) {
  const int n = gp.spec.n;
  const EndSeries end(gp.end_taylor);
  const double th = gp.spec.theta1;
  const double delta = 1e-4 * th;
  const int checks = 181;
  std::vector<double> pts;
  std::vector<double> centers;
  for (int i = 0; i < checks; ++i) {
    const double t = th * (0.05 + 0.9 * i / (checks - 1.0));
    centers.push_back(t);
    for (int s = -2; s <= 2; ++s) pts.push_back(t + s * delta);
  }
  const auto rows = pointwise(n, gp.spec.theta1, gp.lambda1, gp.lambda2, pts, gp.ode, &end);
  RiccatiResiduals out;
  const double l1 = gp.lambda1, l2 = gp.lambda2;
  for (int i = 0; i < checks; ++i) {
    const std::size_t c = 5 * static_cast<std::size_t>(i) + 2;
    auto d = [&](auto field) {
      return (-field(rows[c + 2]) + 8.0 * field(rows[c + 1]) - 8.0 * field(rows[c - 1]) +
              field(rows[c - 2])) / (12.0 * delta);
    };
    const double t = centers[i];
    const double s = std::sin(t);
    const double cot = std::cos(t) / s;
    const Row& r = rows[c];
    const double dp = d([](const Row& x) { return x.p; });
    const double dq = d([](const Row& x) { return x.q; });
    const double rp = dp - (l1 + r.p * r.p - (n - 1) * cot * r.p);
    const double rq = dq - (2.0 * r.p * r.q - (n - 2) * r.q * cot - (r.q * r.q + 1.0 - n) / s -
                            (l2 - l1) * s);
    out.p = std::max(out.p, std::abs(rp));
    out.q = std::max(out.q, std::abs(rq));
  }
  return out;
}

PStructureReport p_structure_check(const GapProfile& gp, double slack) {
  const int n = gp.spec.n;
  const double l1 = gp.lambda1;
  PStructureReport rep;
  rep.hemisphere = is_hemisphere(gp.spec.theta1);
  rep.min_sigma = INFINITY;
  rep.min_s = INFINITY;
  std::vector<double> r(gp.size());
  for (std::size_t i = 0; i < gp.size(); ++i) {
    const double t = gp.grid[i];
    const double sn = std::sin(t);
    const double cot = std::cos(t) / sn;
    const double u0 = gp.y1[i];
    const double u1 = -gp.dy1[i];
    const double p = gp.p[i];
    const double sigma = l1 * u0 * u0 + u1 * u1 - (n - 1) * cot * u0 * u1;
    const double s = (n - 1) * u0 * u0 * p / (sn * sn) - (n - 1) * cot * sigma + 2.0 * p * sigma;
    // sigma and s carry a factor y1^2; compare against that scale.
    const double scale = std::max(u0 * u0, 1e-300);
    rep.min_sigma = std::min(rep.min_sigma, sigma / scale);
    rep.min_s = std::min(rep.min_s, s / scale);
    if (!(p > 0.0)) rep.p_positive = false;
    if (!(sigma > -slack * scale)) rep.p_increasing = false;
    if (!(s > -slack * scale)) rep.p_convex = false;
    r[i] = p * cot - l1 / n;
  }
  // Strictness beyond slack, sampled away from the origin where sigma ~ lambda1 > 0 anyway.
  if (rep.min_sigma <= 0.0) rep.p_increasing = false;
  if (rep.min_s <= 0.0) rep.p_convex = false;

  const std::size_t k = std::min<std::size_t>(10, gp.size());
  for (std::size_t i = 0; i < k; ++i) {
    const double t = gp.grid[i];
    rep.p_origin_defect = std::max(rep.p_origin_defect, std::abs(gp.p[i] - l1 * t / n) / (t * t * t));
  }
  const double gap = gp.spec.theta1 - gp.grid.back();
  rep.p_blows_up = gp.p.back() > 0.5 / gap;

  if (rep.hemisphere) {
    for (double v : r) rep.r_sup = std::max(rep.r_sup, std::abs(v));
    rep.r_monotone = rep.r_sup < 1e-8;
  } else {
    for (double v : r) rep.r_sup = std::max(rep.r_sup, std::abs(v));
    rep.r_monotone = nondecreasing(r, slack);
  }
  return rep;
}

QBoundsReport q_bounds_check(const GapProfile& gp, double slack) {
  QBoundsReport rep;
  rep.min_q = INFINITY;
  rep.max_q_excess = -INFINITY;
  for (std::size_t i = 0; i < gp.size(); ++i) {
    const double c = std::cos(gp.grid[i]);
    rep.min_q = std::min(rep.min_q, gp.q[i]);
    rep.max_q_excess = std::max(rep.max_q_excess, gp.q[i] - c);
  }
  rep.q_nonnegative = rep.min_q >= -slack;
  rep.q_below_cos = rep.max_q_excess <= slack;
  rep.q_nonincreasing = nonincreasing(gp.q, slack);
  rep.g_nondecreasing = nondecreasing(gp.g, slack);
  rep.B_nonincreasing = nonincreasing(gp.B, slack);

  std::vector<double> bext;
  const double th = gp.spec.theta1;
  for (int i = 0; i <= 200; ++i) bext.push_back(gp.B_ext(th + (kHalfPi - th) * i / 200.0));
  rep.B_ext_nonincreasing = nonincreasing(bext, slack) && bext.front() <= gp.B.back() * (1 + slack);

  // Boundary data from dedicated samples: q is even at 0, generic at theta1.
  const int n = gp.spec.n;
  const EndSeries end(gp.end_taylor);
  {
    const double d = 0.02 * th;
    const double pts[3] = {d, 2 * d, 3 * d};
    const auto rows = pointwise(n, gp.spec.theta1, gp.lambda1, gp.lambda2, pts, gp.ode, &end);
    Eigen::Matrix3d v;
    Eigen::Vector3d f;
    for (int i = 0; i < 3; ++i) {
      const double t2 = pts[i] * pts[i];
      v(i, 0) = 1.0;
      v(i, 1) = t2;
      v(i, 2) = t2 * t2;
      f(i) = rows[i].q;
    }
    const Eigen::Vector3d c = v.fullPivLu().solve(f);
    rep.q0_fit = c(0);
    rep.q_pp0_fit = 2.0 * c(1);
  }
  {
    // q = sin g'/g differentiated at theta1 with the boundary series of g.
    const double s1 = std::sin(th), c1 = std::cos(th);
    const double g0 = gp.end_taylor[0], g1 = gp.end_taylor[1], g2 = 2.0 * gp.end_taylor[2];
    rep.q_end = s1 * g1 / g0;
    rep.dq_end = c1 * g1 / g0 + s1 * (g2 / g0 - g1 * g1 / (g0 * g0));
  }
  return rep;
}

void write_csv(std::ostream& os, const GapProfile& gp) {
  os << "theta,y1,y2,p,q,g,B\n";
  os.precision(17);
  for (std::size_t i = 0; i < gp.size(); ++i) {
    os << gp.grid[i] << ',' << gp.y1[i] << ',' << gp.y2[i] << ',' << gp.p[i] << ',' << gp.q[i]
       << ',' << gp.g[i] << ',' << gp.B[i] << '\n';
  }
}

}  // namespace sphereppw::gap
