#include "sphereppw/chiti_compare.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "sphereppw/error.hpp"

namespace sphereppw::chiti {

namespace {

// Five-point Gauss-Legendre on [-1, 1].
constexpr double kX[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                          0.9061798459386640};
constexpr double kW[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                          0.2369268850561891};

double surface_factor(int n) { return n * rearr::unit_ball_volume(n); }

double area_density(int n, double t) { return surface_factor(n) * std::pow(std::sin(t), n - 1); }

template <class F>
double gauss(double a, double b, const F& f) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 5; ++k) s += kW[k] * f(mid + half * kX[k]);
  return half * s;
}

/// Cubic Hermite value and slope on [a, b].
void hermite(double a, double b, double fa, double fb, double da, double db, double t, double& f, double& d) {
  const double h = b - a;
  const double x = (t - a) / h;
  const double x2 = x * x, x3 = x2 * x;
  f = (2 * x3 - 3 * x2 + 1) * fa + (x3 - 2 * x2 + x) * h * da + (-2 * x3 + 3 * x2) * fb + (x3 - x2) * h * db;
  d = ((6 * x2 - 6 * x) * fa + (-6 * x2 + 6 * x) * fb) / h + (3 * x2 - 4 * x + 1) * da + (3 * x2 - 2 * x) * db;
}

/// Running integral of a step profile.
struct StepIntegral {
  const rearr::RearrangedProfile& p;
  std::vector<double> cum;
  explicit StepIntegral(const rearr::RearrangedProfile& prof) : p(prof) {
    cum.assign(p.s_grid.size(), 0.0);
    for (std::size_t i = 0; i < p.values.size(); ++i)
      cum[i + 1] = cum[i] + p.values[i] * (p.s_grid[i + 1] - p.s_grid[i]);
  }
  double operator()(double s) const {
    if (s <= 0.0 || p.values.empty()) return 0.0;
    if (s >= p.total()) return cum.back();
    const auto it = std::upper_bound(p.s_grid.begin(), p.s_grid.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - p.s_grid.begin()) - 1;
    return cum[i] + p.values[i] * (s - p.s_grid[i]);
  }
};

}  // namespace

VolumeProfile v1_volume_profile(const BallSpec& spec, int intervals, const ball::ShootOptions& opts) {
  spec.validate();
  if (intervals < 16) throw InvalidArgument("volume profile needs at least 16 intervals");
  const int n = spec.n;
  VolumeProfile p;
  p.spec = spec;
  p.lambda1 = ball::lambda_shoot(spec, 0, opts);

  const int N = intervals;
  p.theta.resize(N + 1);
  for (int i = 0; i <= N; ++i) p.theta[i] = spec.theta1 * i / N;
  p.theta[N] = spec.theta1;
  const auto u = radial::eval_um({n, 0, p.lambda1}, std::span<const double>(p.theta).subspan(1), opts.ode);
  p.v.assign(N + 1, 1.0);
  p.dv.assign(N + 1, 0.0);
  for (int i = 1; i <= N; ++i) {
    p.v[i] = u.values[i - 1];
    p.dv[i] = u.derivs[i - 1];
  }
  p.v[N] = 0.0;  // the boundary zero, up to the shooting tolerance

  p.s.assign(N + 1, 0.0);
  p.cumulative.assign(N + 1, 0.0);
  p.cumulative2.assign(N + 1, 0.0);
  for (int i = 0; i < N; ++i) {
    const double a = p.theta[i], b = p.theta[i + 1];
    auto vat = [&](double t) {
      double f, d;
      hermite(a, b, p.v[i], p.v[i + 1], p.dv[i], p.dv[i + 1], t, f, d);
      return f;
    };
    p.s[i + 1] = p.s[i] + gauss(a, b, [&](double t) { return area_density(n, t); });
    p.cumulative[i + 1] = p.cumulative[i] + gauss(a, b, [&](double t) { return vat(t) * area_density(n, t); });
    p.cumulative2[i + 1] =
        p.cumulative2[i] + gauss(a, b, [&](double t) { return vat(t) * vat(t) * area_density(n, t); });
  }
  p.volume = p.s[N];

  // -dv/ds = lambda1 (n C_n)^-2 sin^(2-2n) int_0^s v, node by node.
  const double k = p.lambda1 / (surface_factor(n) * surface_factor(n));
  double worst = 0.0, scale = 0.0;
  for (int i = 1; i <= N; ++i) {
    const double lhs = -p.dv[i] / area_density(n, p.theta[i]);
    const double rhs = k * std::pow(std::sin(p.theta[i]), 2 - 2 * n) * p.cumulative[i];
    worst = std::max(worst, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(lhs));
  }
  p.residual = worst / scale;
  return p;
}

double VolumeProfile::theta_of(double sv) const {
  if (sv <= 0.0) return 0.0;
  if (sv >= volume) return spec.theta1;
  if (spec.n == 2) return std::acos(std::clamp(1.0 - sv / (2.0 * std::numbers::pi), -1.0, 1.0));
  const auto it = std::upper_bound(s.begin(), s.end(), sv);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - s.begin()) - 1, s.size() - 2);
  const double a = theta[i], b = theta[i + 1];
  double t = a + (b - a) * (sv - s[i]) / (s[i + 1] - s[i]);
  for (int iter = 0; iter < 4; ++iter) {
    const double A = s[i] + gauss(a, t, [&](double x) { return area_density(spec.n, x); });
    const double d = area_density(spec.n, t);
    if (d <= 0.0) break;
    t = std::clamp(t - (A - sv) / d, a, b);
  }
  return t;
}

double VolumeProfile::operator()(double sv) const {
  if (sv < 0.0 || sv >= volume) return 0.0;
  const double t = theta_of(sv);
  const auto it = std::upper_bound(theta.begin(), theta.end(), t);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - theta.begin()) - 1, theta.size() - 2);
  double f, d;
  hermite(theta[i], theta[i + 1], v[i], v[i + 1], dv[i], dv[i + 1], t, f, d);
  return f;
}

double VolumeProfile::dv_ds(double sv) const {
  const double t = theta_of(std::clamp(sv, 0.0, volume));
  const auto it = std::upper_bound(theta.begin(), theta.end(), t);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - theta.begin()) - 1, theta.size() - 2);
  double f, d;
  hermite(theta[i], theta[i + 1], v[i], v[i + 1], dv[i], dv[i + 1], t, f, d);
  const double dens = area_density(spec.n, t);
  if (dens <= 0.0) return spec.n == 2 ? -lambda1 / (4.0 * std::numbers::pi) : -INFINITY;
  return d / dens;
}

double VolumeProfile::integral(double sv) const {
  if (sv <= 0.0) return 0.0;
  if (sv >= volume) return cumulative.back();
  const double t = theta_of(sv);
  const auto it = std::upper_bound(theta.begin(), theta.end(), t);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - theta.begin()) - 1, theta.size() - 2);
  return cumulative[i] + gauss(theta[i], t, [&](double x) {
           double f, d;
           hermite(theta[i], theta[i + 1], v[i], v[i + 1], dv[i], dv[i + 1], x, f, d);
           return f * area_density(spec.n, x);
         });
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Identical: return "identical";
    case Verdict::SingleCrossing: return "single-crossing";
    case Verdict::NoCrossing: return "no-crossing";
    case Verdict::MultipleCrossings: return "multiple-crossings";
  }
  return "unknown";
}

ChitiReport chiti_crossing(const rearr::DomainMeasure& u_dm, const BallSpec& spec, const ChitiOptions& opts) {
  u_dm.validate();
  if (u_dm.entries.empty()) throw InvalidArgument("empty domain measure");
  const auto prof = v1_volume_profile(spec, opts.intervals, opts.shoot);
  const auto sharp = rearr::decreasing_rearrangement(u_dm);

  ChitiReport r;
  r.spec = spec;
  r.lambda1 = prof.lambda1;
  r.ball_volume = prof.volume;
  r.domain_volume = sharp.total();
  const double target = prof.l2_squared();
  const double have = sharp.integral_power(2.0);
  if (!(have > 0.0)) throw InvalidArgument("u vanishes identically");
  r.scale = std::sqrt(target / have);
  r.normalization_defect = std::abs(r.scale * r.scale * have - target) / target;
  const double vinf = prof.v.front();
  r.slack = opts.slack_rel * vinf;
  r.u0 = r.scale * sharp.values.front();
  r.v0 = vinf;

  // Bin averages of v1 and u# on [0, max(|B|, |Omega|)], exact for both.
  const StepIntegral U(sharp);
  const int bins = std::max(8, opts.bins);
  const double w = r.ball_volume / bins;
  const int total_bins = bins + static_cast<int>(std::ceil(std::max(0.0, r.domain_volume - r.ball_volume) / w));
  int state = 0, first = 0;
  double last_mid = 0.0, last_d = 0.0;
  for (int j = 0; j < total_bins; ++j) {
    const double a = j * w, b = (j + 1) * w;
    const double d = (prof.integral(b) - prof.integral(a) - r.scale * (U(b) - U(a))) / w;
    const double mid = 0.5 * (a + b);
    const int sgn = d > r.slack ? 1 : (d < -r.slack ? -1 : 0);
    if (sgn == 0) continue;
    if (state == 0) first = sgn;
    if (state != 0 && sgn != state) {
      ++r.crossings;
      if (r.crossings == 1) r.crossing_volume = last_mid + last_d / (last_d - d) * (mid - last_mid);
    }
    state = sgn;
    last_mid = mid;
    last_d = d;
  }
  // Sup distance on the steps of u#, against the mean of v1 over each step.
  double sup = 0.0, lo_int = 0.0;
  for (std::size_t i = 0; i < sharp.values.size(); ++i) {
    const double a = sharp.s_grid[i], b = sharp.s_grid[i + 1];
    const double hi_int = prof.integral(b);
    sup = std::max(sup, std::abs((hi_int - lo_int) / (b - a) - r.scale * sharp.values[i]));
    lo_int = hi_int;
  }
  r.sup_difference = sup / vinf;
  if (r.sup_difference < opts.identical_tol) {
    r.verdict = Verdict::Identical;
    r.crossings = 0;
  } else if (r.crossings == 0) {
    r.verdict = Verdict::NoCrossing;
  } else if (r.crossings == 1) {
    r.verdict = Verdict::SingleCrossing;
  } else {
    r.verdict = Verdict::MultipleCrossings;
  }
  r.sign_pattern = r.verdict == Verdict::Identical ||
                   (r.verdict == Verdict::SingleCrossing && first == 1 && r.crossing_volume < r.ball_volume);
  if (r.verdict == Verdict::SingleCrossing) r.crossing_radius = prof.theta_of(r.crossing_volume);

  const int m = std::max(2, opts.samples);
  const double end = std::max(r.ball_volume, r.domain_volume);
  r.s_grid.resize(m);
  r.u_sharp.resize(m);
  r.v_profile.resize(m);
  for (int i = 0; i < m; ++i) {
    const double sv = end * i / (m - 1);
    r.s_grid[i] = sv;
    r.u_sharp[i] = r.scale * sharp(sv);
    r.v_profile[i] = prof(sv);
  }
  return r;
}

InequalityResidual chiti_inequality_residual(const rearr::DomainMeasure& u_dm, const BallSpec& spec, int bins,
                                             double min_radius, const ball::ShootOptions& opts) {
  u_dm.validate();
  if (bins < 5) throw InvalidArgument("need at least 5 bins");
  const int n = spec.n;
  const double lambda1 = ball::lambda_shoot(spec, 0, opts);
  const auto sharp = rearr::decreasing_rearrangement(u_dm);
  const StepIntegral U(sharp);
  const double total = sharp.total();
  if (total > rearr::sphere_volume(n) * (1 - 1e-12)) throw InvalidArgument("domain fills the sphere");

  // Bins of equal radial width; u#(A(t)) is smooth in t where it is singular in s.
  const double tmax = rearr::theta_of_volume(n, 1.0, total);
  std::vector<double> edge(bins + 1), node(bins), avg(bins);
  for (int j = 0; j <= bins; ++j) edge[j] = rearr::cap_volume(n, 1.0, tmax * j / bins);
  edge[bins] = total;
  for (int j = 0; j < bins; ++j) {
    avg[j] = (U(edge[j + 1]) - U(edge[j])) / (edge[j + 1] - edge[j]);
    node[j] = rearr::theta_of_volume(n, 1.0, 0.5 * (edge[j] + edge[j + 1]));
  }

  const double k = lambda1 / (surface_factor(n) * surface_factor(n));
  InequalityResidual out;
  out.bins = bins;
  out.max_violation = -INFINITY;
  for (int j = 1; j + 1 < bins; ++j) {
    // Three-point derivative on the non-uniform nodes.
    const double h0 = node[j] - node[j - 1], h1 = node[j + 1] - node[j];
    const double du = -h1 / (h0 * (h0 + h1)) * avg[j - 1] + (h1 - h0) / (h0 * h1) * avg[j] +
                      h0 / (h1 * (h0 + h1)) * avg[j + 1];
    const double t = node[j];
    if (t < min_radius) continue;
    const double lhs = -du / area_density(n, t);
    const double rhs = k * std::pow(std::sin(t), 2 - 2 * n) * U(rearr::cap_volume(n, 1.0, t));
    if (!(rhs > 0.0)) continue;
    ++out.checked;
    out.max_violation = std::max(out.max_violation, (lhs - rhs) / rhs);
    out.max_abs = std::max(out.max_abs, std::abs(lhs - rhs) / rhs);
  }
  if (out.checked == 0) throw InvalidArgument("no bin lies beyond min_radius");
  return out;
}

rearr::DomainMeasure radial_samples(const BallSpec& spec, int annuli, const ball::ShootOptions& opts) {
  if (annuli < 1) throw InvalidArgument("need at least one annulus");
  const auto prof = v1_volume_profile(spec, std::max(4000, annuli), opts);
  rearr::DomainMeasure dm;
  double inner = 0.0;
  for (int k = 0; k < annuli; ++k) {
    const double a = spec.theta1 * k / annuli, b = spec.theta1 * (k + 1) / annuli;
    const double ring = gauss(a, b, [&](double x) { return area_density(spec.n, x); });
    dm.add((prof.integral(inner + ring) - prof.integral(inner)) / ring, ring);
    inner += ring;
  }
  return dm;
}

void write_csv(std::ostream& os, const ChitiReport& r) {
  os << "s,u_sharp,v1\n";
  os.precision(17);
  for (std::size_t i = 0; i < r.s_grid.size(); ++i)
    os << r.s_grid[i] << ',' << r.u_sharp[i] << ',' << r.v_profile[i] << '\n';
}

}  // namespace sphereppw::chiti
