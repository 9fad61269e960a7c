#include "sphereppw/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>

#include <boost/math/special_functions/bessel.hpp>

#include "sphereppw/ball_spectrum.hpp"
#include "sphereppw/chiti_compare.hpp"
#include "sphereppw/error.hpp"
#include "sphereppw/gap_profile.hpp"
#include "sphereppw/parallel.hpp"
#include "sphereppw/perturbation.hpp"
#include "sphereppw/rearrangement.hpp"
#include "sphereppw/sphere_domain.hpp"

namespace sphereppw::acceptance {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = a + (b - a) * i / (count - 1);
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Collector {
  CriterionResult& r;
  void add(std::string name, bool pass, std::string detail) {
    r.checks.push_back({std::move(name), pass, std::move(detail)});
  }
};

void hemisphere(Collector c, const Options&) {
  for (int n = 2; n <= 6; ++n) {
    const auto pair = ball::spectral_pair({n, kHalfPi});
    const double e1 = rel(pair.lambda1, n), e2 = rel(pair.lambda2, 2.0 * (n + 1));
    c.add(fmt("n=%d", n), e1 < tol::hemisphere && e2 < tol::hemisphere,
          fmt("lambda1=%.12g (rel %.2e) lambda2=%.12g (rel %.2e)", pair.lambda1, e1, pair.lambda2, e2));
  }
}

void euclidean_limit(Collector c, const Options&) {
  const double theta = 1e-2;
  const auto p2 = ball::spectral_pair({2, theta});
  const double ratio = p2.lambda2 / p2.lambda1;
  c.add("n=2 ratio", std::abs(ratio - tol::euclid_ratio_value) < tol::euclid_ratio,
        fmt("lambda2/lambda1=%.6f target %.4f", ratio, tol::euclid_ratio_value));
  for (int n : {2, 3}) {
    const auto p = n == 2 ? p2 : ball::spectral_pair({n, theta});
    const double j = boost::math::cyl_bessel_j_zero(0.5 * n - 1.0, 1);
    const double e = rel(theta * theta * p.lambda1, j * j);
    c.add(fmt("n=%d bessel", n), e < tol::bessel,
          fmt("theta^2 lambda1=%.8f j^2=%.8f rel %.2e", theta * theta * p.lambda1, j * j, e));
  }
}

void monotone(Collector c, const Options& o, ball::Column col, ball::Trend trend, int n, double hi) {
  const auto grid = linspace(0.05, hi, 200);
  const auto table = ball::scan(n, grid, {}, o.threads, tol::monotone_slack);
  const auto v = ball::check_monotone(table.rows, col, trend, tol::monotone_slack);
  c.add(fmt("n=%d %s on [0.05, %.4f]", n, ball::column_name(col).c_str(), hi), v.holds,
        v.holds ? fmt("worst step against trend %.2e", v.worst_excess)
                : fmt("violation at pair %zu, excess %.2e", *v.first_violation, v.worst_excess));
}

void scaled_lambda1_trend(Collector c, const Options& o) {
  for (int n = 2; n <= 6; ++n) monotone(c, o, ball::Column::ScaledLambda1, ball::Trend::Decreasing, n, kPi - 0.05);
}

void ratio_trend(Collector c, const Options& o) {
  for (int n = 2; n <= 6; ++n) monotone(c, o, ball::Column::Ratio, ball::Trend::Increasing, n, kHalfPi);
  for (int n : {2, 3}) monotone(c, o, ball::Column::Ratio, ball::Trend::Increasing, n, kPi - 0.05);
}

void ratio_gap(Collector c, const Options& o) {
  auto grid = linspace(0.05, kPi - 0.05, 40);
  grid.push_back(kHalfPi);
  std::sort(grid.begin(), grid.end());
  for (int n = 2; n <= 6; ++n) {
    std::vector<ball::RatioGapReport> reports(grid.size());
    parallel_for(grid.size(), o.threads, [&](std::size_t i) {
      reports[i] = ball::ratio_gap_checks(ball::spectral_pair({n, grid[i]}), tol::equality);
    });
    int bad_ratio = 0, bad_eq = 0, bad_gap = 0, gap_checked = 0;
    double eq_delta = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& r = reports[i];
      const bool at_half = grid[i] == kHalfPi;
      if (!r.ratio_ok) ++bad_ratio;
      if (r.equality != at_half) ++bad_eq;
      if (at_half) eq_delta = r.ratio_lhs - r.ratio_rhs;
      if (grid[i] <= kHalfPi) {
        ++gap_checked;
        if (!r.gap_applicable || !r.gap_ok) ++bad_gap;
      }
    }
    c.add(fmt("n=%d ratio", n), bad_ratio == 0 && bad_eq == 0,
          fmt("%zu radii, %d sign failures, %d equality-flag failures, delta at pi/2 %.2e", grid.size(), bad_ratio,
              bad_eq, eq_delta));
    c.add(fmt("n=%d gap", n), bad_gap == 0, fmt("%d radii up to pi/2, %d failures", gap_checked, bad_gap));
  }
}

void perturbation(Collector c, const Options& o) {
  std::vector<BallSpec> specs;
  for (int n : {2, 3, 4})
    for (double th : {0.3, 1.0, 1.5, 2.5}) specs.push_back({n, th});
  std::vector<perturb::Report> reports(specs.size());
  parallel_for(specs.size(), o.threads, [&](std::size_t i) { reports[i] = perturb::report(specs[i]); });
  for (const auto& r : reports) {
    const double e1 = std::abs(r.d_lambda1_dc - r.fd1) / std::max(1.0, std::abs(r.fd1));
    const double e1raw = std::abs(r.d_lambda1_dc_raw - r.fd1) / std::max(1.0, std::abs(r.fd1));
    const double e2 = std::abs(r.d_lambda2_dc - r.fd2) / std::max(1.0, std::abs(r.fd2));
    const double internal = std::abs(r.d_lambda1_dc - r.d_lambda1_dc_raw) / std::max(1.0, std::abs(r.d_lambda1_dc));
    const bool sign1 = r.d_lambda1_dc < 0.0;
    const bool sign2 = r.spec.n != 2 || r.d_lambda2_dc > 0.0;
    c.add(fmt("n=%d theta1=%.2f", r.spec.n, r.spec.theta1),
          std::max({e1, e1raw, e2}) < tol::finite_difference && internal < tol::internal && sign1 && sign2,
          fmt("dl1=%.9f dl2=%.9f fd errs %.1e/%.1e/%.1e internal %.1e", r.d_lambda1_dc, r.d_lambda2_dc, e1, e1raw, e2,
              internal));
  }
}

void gap_suite(Collector c, const Options& o) {
  std::vector<BallSpec> specs;
  for (int n = 2; n <= 6; ++n)
    for (double th : {0.2, 0.5, 0.8, 1.1, 1.4, kHalfPi}) specs.push_back({n, th});
  std::vector<gap::GapProfile> profiles(specs.size());
  parallel_for(specs.size(), o.threads, [&](std::size_t i) { profiles[i] = gap::build_profile(specs[i]); });
  for (const auto& g : profiles) {
    const int n = g.spec.n;
    const auto ps = gap::p_structure_check(g);
    const auto qb = gap::q_bounds_check(g);
    const auto rr = gap::riccati_residuals(g);
    const double qs = gap::q_slope_at_boundary(n, g.spec.theta1, g.lambda1, g.lambda2);
    const double qpp = gap::q_second_derivative_at_zero(n, g.lambda1, g.lambda2);
    const double d_q0 = std::abs(qb.q0_fit - 1.0), d_qend = std::abs(qb.q_end);
    const double d_dq = rel(qb.dq_end, qs), d_qpp = rel(qb.q_pp0_fit, qpp);
    const bool boundary = d_q0 < tol::boundary_data && d_qend < tol::boundary_data && d_dq < tol::boundary_data &&
                          d_qpp < tol::boundary_fit && qs < 0.0;
    const bool riccati = rr.p < tol::riccati && rr.q < tol::riccati;
    std::string detail = fmt("p %s q %s riccati %.1e/%.1e q(0)-1 %.1e q(th) %.1e q'(th) %.1e q''(0) %.1e",
                             ps.ok() ? "ok" : "FAIL", qb.ok() ? "ok" : "FAIL", rr.p, rr.q, d_q0, d_qend, d_dq, d_qpp);
    bool closed = true;
    if (g.spec.theta1 == kHalfPi) {
      double eg = 0, eb = 0, ep = 0, eq = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = g.grid[i], s = std::sin(t), co = std::cos(t);
        eg = std::max(eg, std::abs(g.g[i] / g.c1 - s));
        eb = std::max(eb, std::abs(g.B[i] / (g.c1 * g.c1) - (n - 1 + co * co)));
        ep = std::max(ep, rel(g.p[i], std::tan(t)));
        eq = std::max(eq, std::abs(g.q[i] - co));
      }
      closed = std::max({eg, eb, ep, eq}) < tol::closed_form;
      detail += fmt(" closed forms g %.1e B %.1e p %.1e q %.1e", eg, eb, ep, eq);
    }
    c.add(fmt("n=%d theta1=%.4f", n, g.spec.theta1), ps.ok() && qb.ok() && riccati && boundary && closed, detail);
  }
}

void rearrangement(Collector c, const Options&) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> val(-2.0, 3.0), mu(0.01, 1.0);
  std::uniform_int_distribution<int> level(0, 9);
  for (int trial = 0; trial < 4; ++trial) {
    rearr::DomainMeasure dm;
    const int count = 50 + 150 * trial;
    for (int i = 0; i < count; ++i) dm.add(trial % 2 ? val(rng) : 0.25 * level(rng), mu(rng));
    const auto dec = rearr::decreasing_rearrangement(dm);
    const auto inc = rearr::increasing_rearrangement(dm);
    double worst = 0.0, l2 = 0.0;
    for (const auto& [v, m] : dm.entries) l2 += v * v * m;
    for (const auto& [v, m] : dm.entries) {
      (void)m;
      for (double t : {v, v - 1e-9, v + 1e-9}) {
        const double ref = rearr::measure_above(dm, t);
        worst = std::max({worst, std::abs(dec.measure_above(t) - ref), std::abs(inc.measure_above(t) - ref)});
      }
    }
    const double l2e = std::max(rel(dec.integral_power(2.0), l2), rel(inc.integral_power(2.0), l2));
    const double scale = dm.total_measure;
    c.add(fmt("constructed case %d (%zu cells%s)", trial, dm.size(), trial % 2 ? "" : ", ties"),
          worst < tol::exact * scale && l2e < tol::exact,
          fmt("distribution defect %.1e L2 defect %.1e", worst, l2e));
  }
  double worst_cap = 0.0;
  for (double r : {0.1, 0.5, 1.0, 1.5, kHalfPi, 2.0, 3.0}) worst_cap = std::max(worst_cap, std::abs(rearr::isoperimetric_cap_s2(r).defect));
  c.add("cap defect", worst_cap < tol::cap_defect, fmt("max |defect| %.2e over 7 radii", worst_cap));
  domain::DomainParams tri;
  tri.kind = domain::DomainKind::GeodesicPolygon;
  tri.corners = {domain::Vec3(0.8, 0, 0.6).normalized(), domain::Vec3(-0.4, 0.69, 0.6).normalized(),
                 domain::Vec3(-0.4, -0.69, 0.6).normalized()};
  tri.h = 0.05;
  const auto rep = rearr::isoperimetric_check_s2(domain::make_domain(tri));
  c.add("polygon defect", rep.defect > 0.0, fmt("L=%.6f A=%.6f defect %.6f", rep.length, rep.area, rep.defect));
}

domain::DomainParams perturbed_cap(double amp, double h) {
  domain::DomainParams p;
  p.kind = amp == 0.0 ? domain::DomainKind::Cap : domain::DomainKind::PerturbedCap;
  p.theta1 = 1.0;
  p.amplitude = amp;
  p.h = h;
  return p;
}

void chiti(Collector c, const Options& o) {
  std::vector<BallSpec> specs;
  for (int n = 2; n <= 6; ++n)
    for (double th : {0.5, 1.0, kHalfPi, 2.5}) specs.push_back({n, th});
  std::vector<chiti::ChitiReport> self(specs.size());
  parallel_for(specs.size(), o.threads, [&](std::size_t i) {
    self[i] = chiti::chiti_crossing(chiti::radial_samples(specs[i], 2000), specs[i]);
  });
  int bad = 0;
  double worst = 0.0;
  for (const auto& r : self) {
    if (r.verdict != chiti::Verdict::Identical) ++bad;
    worst = std::max(worst, r.sup_difference);
  }
  c.add("ball self-comparison", bad == 0,
        fmt("%zu balls n=2..6, %d not identical, max sup difference %.2e", specs.size(), bad, worst));

  const double h = o.h;
  const double min_radius = 2.5 * h;
  const int bins = 50;
  // Three meshes: the exact cap gives the discretisation floor of the inequality.
  const double amps[3] = {0.0, 0.05, 0.1};
  chiti::InequalityResidual res[3];
  chiti::ChitiReport cross[3];
  double lambda[3];
  for (int k = 0; k < 3; ++k) {
    const auto mesh = domain::make_domain(perturbed_cap(amps[k], h));
    const auto sp = domain::solve_dirichlet(mesh, 2);
    const BallSpec spec{2, ball::radius_for_lambda1(2, sp.lambda1)};
    const auto dm = domain::level_measure(mesh, sp.u1);
    res[k] = chiti::chiti_inequality_residual(dm, spec, bins, min_radius);
    if (k > 0) cross[k] = chiti::chiti_crossing(dm, spec);
    lambda[k] = sp.lambda1;
  }
  const double floor = res[0].max_abs;
  for (int k = 1; k < 3; ++k) {
    const auto& r = cross[k];
    c.add(fmt("perturbed cap amplitude %.2f crossing", amps[k]), r.verdict == chiti::Verdict::SingleCrossing && r.ok(),
          fmt("h=%.3f lambda1=%.6f %s, %d crossing(s), s1=%.5f, u#(0)=%.6f v1(0)=%.6f", h, lambda[k],
              chiti::verdict_name(r.verdict).c_str(), r.crossings, r.crossing_volume, r.u0, r.v0));
    c.add(fmt("perturbed cap amplitude %.2f inequality", amps[k]), res[k].max_violation <= tol::chiti_factor * floor,
          fmt("violation %.3e, mesh-error estimate %.3e (cap at same h), %d bins beyond r=%.3f", res[k].max_violation,
              floor, res[k].checked, min_radius));
  }
}

struct DomainCase {
  std::string name;
  domain::DomainParams params;
  bool cap = false;
};

void end_to_end(Collector c, const Options& o) {
  const double h = o.h;
  std::vector<DomainCase> cases;
  for (double th : {0.8, 1.2}) {
    DomainCase d{fmt("cap %.1f", th), {}, true};
    d.params.theta1 = th;
    cases.push_back(d);
  }
  for (double amp : {0.05, 0.1}) cases.push_back({fmt("perturbed cap %.2f", amp), perturbed_cap(amp, h), false});
  DomainCase tri{"geodesic triangle", {}, false};
  tri.params.kind = domain::DomainKind::GeodesicPolygon;
  tri.params.corners = {domain::Vec3(0.8, 0, 0.6).normalized(), domain::Vec3(-0.4, 0.69, 0.6).normalized(),
                        domain::Vec3(-0.4, -0.69, 0.6).normalized()};
  cases.push_back(tri);

  for (auto& d : cases) {
    d.params.h = h;
    const auto est = domain::mesh_error_estimate(d.params);
    const auto mesh = domain::make_domain(d.params);
    const auto& sp = est.fine;
    domain::GapBoundOptions go;
    go.link_tolerance = tol::mesh_factor * std::max(est.err1 / sp.lambda1, est.err2 / sp.lambda2);
    const auto gb = domain::gap_bound(mesh, sp, go);

    if (d.cap) {
      const double diff = sp.lambda2 - gb.lambda2_ball;
      c.add(d.name + " lambda2 = ball", std::abs(diff) <= tol::mesh_factor * est.err2,
            fmt("lambda2=%.6f lambda2(B)=%.6f diff %.2e, allowance %.2e (err1 %.1e err2 %.1e order %.2f)", sp.lambda2,
                gb.lambda2_ball, diff, tol::mesh_factor * est.err2, est.err1, est.err2, est.observed_order));
    } else {
      const auto ppw = domain::ppw_check(mesh, sp.lambda1, sp.lambda2, tol::mesh_factor * est.err2);
      c.add(d.name + " ppw", ppw.i1_ok && ppw.i4_ok && ppw.margin_i1 > 0.0 && ppw.margin_i4 > 0.0,
            fmt("lambda2(B)-lambda2 %.5f, ratio*-ratio %.5f, sperner %.5f, radii %.5f, allowance %.2e",
                ppw.margin_i1, ppw.margin_i4, ppw.margin_sperner, ppw.margin_radii, ppw.tolerance));
    }
    int failed = 0;
    std::string first;
    for (const auto& l : gb.links)
      if (!l.ok && failed++ == 0) first = fmt(", first failure %s: %.6g > %.6g", l.name.c_str(), l.lhs, l.rhs);
    c.add(d.name + " gap chain", failed == 0,
          fmt("%zu links, %d failed, bound %.6f lambda2 %.6f%s", gb.links.size(), failed, gb.bound, sp.lambda2,
              first.c_str()));
    const double orth = std::max(std::abs(gb.com.residuals[0]), std::abs(gb.com.residuals[1]));
    c.add(d.name + " orthogonality", orth < tol::orthogonality,
          fmt("residual %.2e via %s after %d iterations", orth, gb.com.method.c_str(), gb.com.iterations));
  }
}

}  // namespace

bool CriterionResult::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* CriterionResult::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

std::string criterion_title(int id) {
  switch (id) {
    case 1: return "hemisphere exactness";
    case 2: return "euclidean limit";
    case 3: return "scaled first eigenvalue decreasing";
    case 4: return "eigenvalue ratio increasing";
    case 5: return "ratio and gap bounds";
    case 6: return "perturbation formulas";
    case 7: return "gap profile properties";
    case 8: return "rearrangement and isoperimetry";
    case 9: return "chiti comparison";
    case 10: return "end-to-end ppw";
  }
  throw InvalidArgument("criterion id out of range");
}

CriterionResult run_criterion(int id, const Options& opts) {
  CriterionResult r;
  r.id = id;
  r.title = criterion_title(id);
  const auto t0 = std::chrono::steady_clock::now();
  Collector c{r};
  try {
    switch (id) {
      case 1: hemisphere(c, opts); break;
      case 2: euclidean_limit(c, opts); break;
      case 3: scaled_lambda1_trend(c, opts); break;
      case 4: ratio_trend(c, opts); break;
      case 5: ratio_gap(c, opts); break;
      case 6: perturbation(c, opts); break;
      case 7: gap_suite(c, opts); break;
      case 8: rearrangement(c, opts); break;
      case 9: chiti(c, opts); break;
      case 10: end_to_end(c, opts); break;
    }
  } catch (const std::exception& e) {
    c.add("exception", false, e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_all(const Options& opts, bool fail_fast,
                                     const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= criterion_count; ++id) {
    out.push_back(run_criterion(id, opts));
    if (on_result) on_result(out.back());
    if (fail_fast && !out.back().pass()) break;
  }
  return out;
}

}  // namespace sphereppw::acceptance
