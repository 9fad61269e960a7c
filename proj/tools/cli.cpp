#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Geometry>
#include <json.hpp>

#include "sphereppw/acceptance.hpp"
#include "sphereppw/ball_spectrum.hpp"
#include "sphereppw/chiti_compare.hpp"
#include "sphereppw/error.hpp"
#include "sphereppw/gap_profile.hpp"
#include "sphereppw/perturbation.hpp"
#include "sphereppw/rearrangement.hpp"
#include "sphereppw/sphere_domain.hpp"

namespace sphereppw::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr int kSchema = 1;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Common {
  std::string format = "json";
  std::string out;
  unsigned threads = 0;
};

struct DomainArgs {
  std::string kind = "cap";
  double theta1 = 1.0;
  double amplitude = 0.1;
  int wavenumber = 3;
  std::string corners;
  double h = 0.05;
  std::string mesh_file;
  std::string save_mesh;
  std::uint64_t seed = 0;
  bool exploratory = false;
  bool estimate = true;
  std::optional<double> tolerance;
};

void add_domain_options(CLI::App* app, DomainArgs& d) {
  app->add_option("--kind", d.kind, "cap | perturbed | polygon")
      ->check(CLI::IsMember({"cap", "perturbed", "polygon"}))
      ->capture_default_str();
  app->add_option("--theta1", d.theta1, "cap radius")->capture_default_str();
  app->add_option("--amplitude", d.amplitude, "perturbed cap: theta_b = theta1 (1 + a cos(k phi))")
      ->capture_default_str();
  app->add_option("--wavenumber", d.wavenumber, "perturbed cap: k")->capture_default_str();
  app->add_option("--corners", d.corners, "polygon corners \"x,y,z;x,y,z;...\" counter-clockwise");
  app->add_option("--h", d.h, "target edge length")->capture_default_str();
  app->add_option("--mesh", d.mesh_file, "read the domain from a mesh file instead of generating it");
  app->add_option("--save-mesh", d.save_mesh, "write the mesh that was used");
  app->add_option("--seed", d.seed, "rotate the generated domain by a pseudo-random rotation (0: none)")
      ->capture_default_str();
  app->add_flag("--exploratory", d.exploratory, "allow domains outside a hemisphere; no verdicts");
  app->add_flag("!--no-estimate", d.estimate, "skip the Richardson estimate on meshes at 2h and 4h");
  app->add_option("--tolerance", d.tolerance, "mesh-error allowance (default: 3x the Richardson estimate)");
}

void add_common(CLI::App* app, Common& c, bool csv = true) {
  if (csv)
    app->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app->add_option("--out", c.out, "write results to a file instead of stdout");
  app->add_option("--threads", c.threads, "worker cap (default SPHEREPPW_THREADS or all cores)");
}

double unit_from_bits(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

// Uniform random rotation from three uniforms (Shoemake).
Eigen::Matrix3d rotation_from_seed(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double u1 = unit_from_bits(rng()), u2 = unit_from_bits(rng()), u3 = unit_from_bits(rng());
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  const double t2 = 2.0 * std::numbers::pi * u2, t3 = 2.0 * std::numbers::pi * u3;
  Eigen::Quaterniond q(b * std::cos(t3), a * std::sin(t2), a * std::cos(t2), b * std::sin(t3));
  return q.normalized().toRotationMatrix();
}

std::vector<domain::Vec3> parse_corners(const std::string& s) {
  std::vector<domain::Vec3> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    std::stringstream is(item);
    std::string tok;
    double v[3];
    int k = 0;
    while (std::getline(is, tok, ',')) {
      if (k == 3) throw InvalidArgument("corner with more than three coordinates: " + item);
      v[k++] = std::stod(tok);
    }
    if (k != 3) throw InvalidArgument("corner needs three coordinates: " + item);
    out.emplace_back(v[0], v[1], v[2]);
  }
  if (out.size() < 3) throw InvalidArgument("a polygon needs at least three corners");
  return out;
}

domain::DomainParams domain_params(const DomainArgs& d, double h) {
  domain::DomainParams p;
  p.kind = d.kind == "cap" ? domain::DomainKind::Cap
           : d.kind == "perturbed" ? domain::DomainKind::PerturbedCap
                                   : domain::DomainKind::GeodesicPolygon;
  p.theta1 = d.theta1;
  p.amplitude = d.amplitude;
  p.wavenumber = d.wavenumber;
  if (p.kind == domain::DomainKind::GeodesicPolygon) {
    if (d.corners.empty()) throw InvalidArgument("--kind polygon requires --corners");
    p.corners = parse_corners(d.corners);
  }
  p.h = h;
  p.require_hemisphere = !d.exploratory;
  return p;
}

domain::SphericalDomainMesh build_mesh(const DomainArgs& d, double h) {
  domain::SphericalDomainMesh mesh;
  if (!d.mesh_file.empty()) {
    std::ifstream in(d.mesh_file);
    if (!in) throw InvalidArgument("cannot open mesh file " + d.mesh_file);
    mesh = domain::read_mesh(in);
  } else {
    mesh = domain::make_domain(domain_params(d, h));
  }
  if (d.seed != 0) {
    mesh = domain::rotated(mesh, rotation_from_seed(d.seed));
    mesh.provenance += " rotation-seed=" + std::to_string(d.seed);
  }
  return mesh;
}

struct SolvedDomain {
  domain::SphericalDomainMesh mesh;
  domain::DomainSpectrum spectrum;
  std::optional<domain::MeshErrorEstimate> estimate;
  double allowance = 0.0;  // absolute, on lambda2
  double link_tolerance = 0.0;
};

SolvedDomain solve_domain(const DomainArgs& d) {
  SolvedDomain s;
  s.mesh = build_mesh(d, d.h);
  if (!d.save_mesh.empty()) {
    std::ofstream os(d.save_mesh);
    if (!os) throw InvalidArgument("cannot write " + d.save_mesh);
    domain::write_mesh(os, s.mesh);
  }
  if (d.estimate && d.mesh_file.empty()) {
    // Rotation does not change the spectrum, so the estimate runs on the unrotated family.
    s.estimate = domain::mesh_error_estimate(domain_params(d, d.h));
    s.spectrum = d.seed == 0 ? s.estimate->fine : domain::solve_dirichlet(s.mesh, 2);
    s.allowance = acceptance::tol::mesh_factor * s.estimate->err2;
    s.link_tolerance = acceptance::tol::mesh_factor *
                       std::max(s.estimate->err1 / s.spectrum.lambda1, s.estimate->err2 / s.spectrum.lambda2);
  } else {
    s.spectrum = domain::solve_dirichlet(s.mesh, 2);
  }
  if (d.tolerance) {
    s.allowance = *d.tolerance;
    s.link_tolerance = *d.tolerance / s.spectrum.lambda2;
  }
  return s;
}

json vec_json(const domain::Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json domain_json(const SolvedDomain& s) {
  json j;
  j["provenance"] = s.mesh.provenance;
  j["vertices"] = s.mesh.num_vertices();
  j["triangles"] = s.mesh.num_triangles();
  j["mesh_h"] = s.spectrum.mesh_h;
  j["area"] = domain::spherical_area(s.mesh);
  j["lambda1"] = s.spectrum.lambda1;
  j["lambda2"] = s.spectrum.lambda2;
  j["ratio"] = s.spectrum.lambda2 / s.spectrum.lambda1;
  if (s.estimate) {
    j["mesh_error"] = {{"err1", s.estimate->err1},
                       {"err2", s.estimate->err2},
                       {"lambda1_extrapolated", s.estimate->lambda1_extrapolated},
                       {"lambda2_extrapolated", s.estimate->lambda2_extrapolated},
                       {"observed_order", s.estimate->observed_order}};
  }
  j["allowance"] = s.allowance;
  return j;
}

json ppw_json(const domain::PPWReport& r) {
  return {{"lambda2_ball_minus_lambda2", r.margin_i1}, {"ratio_star_minus_ratio", r.margin_i4},
          {"lambda1_minus_lambda1_star", r.margin_sperner}, {"theta_star_minus_theta_ball", r.margin_radii},
          {"theta_star", r.theta_star}, {"theta_ball", r.theta_ball}, {"ratio_star", r.ratio_star},
          {"lambda2_ball", r.lambda2_ball}, {"tolerance", r.tolerance},
          {"checks", {{"lambda2", r.i1_ok}, {"ratio", r.i4_ok}, {"sperner", r.sperner_ok}, {"radii", r.radii_ok}}}};
}

json gap_json(const domain::GapBoundReport& g) {
  json links = json::array();
  for (const auto& l : g.links)
    links.push_back({{"name", l.name}, {"lhs", l.lhs}, {"rhs", l.rhs}, {"tolerance", l.tolerance}, {"ok", l.ok}});
  return {{"theta_ball", g.theta_ball},     {"lambda2_ball", g.lambda2_ball}, {"numerator", g.numerator},
          {"denominator", g.denominator},   {"bound", g.bound},               {"ball_quotient", g.ball_quotient},
          {"b_chain", g.b_chain},           {"g_chain", g.g_chain},           {"links", links},
          {"ok", g.ok()}};
}

json com_json(const domain::CenterOfMassResult& c) {
  return {{"y0", vec_json(c.y0)},         {"residuals", c.residuals}, {"mass", c.mass},
          {"defect", c.defect},           {"iterations", c.iterations}, {"method", c.method},
          {"multiplicity", c.multiplicity}};
}

class Output {
 public:
  explicit Output(const Common& c, std::ostream& fallback) : fmt_(c.format) {
    if (!c.out.empty()) {
      file_.open(c.out);
      if (!file_) throw InvalidArgument("cannot write " + c.out);
    }
    os_ = c.out.empty() ? &fallback : &file_;
  }
  bool csv() const { return fmt_ == "csv"; }
  std::ostream& stream() { return *os_; }
  void emit(json j) {
    json top;
    top["schema"] = kSchema;
    for (auto& [k, v] : j.items()) top[k] = v;
    *os_ << top.dump(2) << '\n';
  }

 private:
  std::string fmt_;
  std::ofstream file_;
  std::ostream* os_;
};

bool parse_column(const std::string& s, ball::Column& c) {
  static const std::pair<const char*, ball::Column> table[] = {
      {"lambda1", ball::Column::Lambda1},        {"lambda2", ball::Column::Lambda2},
      {"ratio", ball::Column::Ratio},            {"scaled-lambda1", ball::Column::ScaledLambda1},
      {"scaled-lambda2", ball::Column::ScaledLambda2}, {"scaled-gap", ball::Column::ScaledGap}};
  for (const auto& [name, col] : table)
    if (s == name) {
      c = col;
      return true;
    }
  return false;
}

int cmd_ball(int n, double theta1, Common& c, std::ostream& out) {
  const auto pair = ball::spectral_pair({n, theta1});
  const auto chk = ball::ratio_gap_checks(pair, acceptance::tol::equality);
  const bool ok = chk.ratio_ok && (!chk.gap_applicable || chk.gap_ok);
  Output o(c, out);
  if (o.csv()) {
    o.stream() << "n,theta1,lambda1,lambda2,ratio\n"
               << n << ',' << num(theta1) << ',' << num(pair.lambda1) << ',' << num(pair.lambda2) << ','
               << num(pair.lambda2 / pair.lambda1) << '\n';
  } else {
    o.emit({{"command", "ball"},
            {"n", n},
            {"theta1", theta1},
            {"lambda1", pair.lambda1},
            {"lambda2", pair.lambda2},
            {"ratio", pair.lambda2 / pair.lambda1},
            {"residual1", pair.residual1},
            {"residual2", pair.residual2},
            {"checks",
             {{"ratio", {{"lhs", chk.ratio_lhs}, {"rhs", chk.ratio_rhs}, {"equality", chk.equality}, {"ok", chk.ratio_ok}}},
              {"gap",
               {{"gap", chk.gap}, {"floor", chk.gap_floor}, {"applicable", chk.gap_applicable}, {"ok", chk.gap_ok}}}}},
            {"ok", ok}});
  }
  return ok ? Pass : CheckFailed;
}

int cmd_scan(int n, const std::string& grid, const std::vector<std::string>& checks, double slack, Common& c,
             std::ostream& out, std::ostream& err) {
  const auto thetas = parse_grid(grid);
  std::vector<std::pair<ball::Column, ball::Trend>> wanted;
  for (const auto& s : checks) {
    const auto dash = s.rfind('-');
    ball::Column col;
    if (dash == std::string::npos || !parse_column(s.substr(0, dash), col))
      throw InvalidArgument("unknown check '" + s + "'");
    const auto t = s.substr(dash + 1);
    if (t != "increasing" && t != "decreasing") throw InvalidArgument("check must end in -increasing or -decreasing");
    wanted.emplace_back(col, t == "increasing" ? ball::Trend::Increasing : ball::Trend::Decreasing);
  }
  const auto table = ball::scan(n, thetas, {}, c.threads, slack);
  bool ok = true;
  json verdicts = json::array();
  for (std::size_t i = 0; i < wanted.size(); ++i) {
    const auto v = ball::check_monotone(table.rows, wanted[i].first, wanted[i].second, slack);
    ok = ok && v.holds;
    json vj = {{"check", checks[i]}, {"holds", v.holds}, {"worst_excess", v.worst_excess}};
    if (v.first_violation) {
      vj["first_violation"] = *v.first_violation;
      err << "check " << checks[i] << " fails between theta1=" << num(table.rows[*v.first_violation].theta1)
          << " and " << num(table.rows[*v.first_violation + 1].theta1) << '\n';
    }
    verdicts.push_back(vj);
  }
  Output o(c, out);
  if (o.csv()) {
    o.stream() << "theta1,lambda1,lambda2,ratio,scaled_lambda1,scaled_lambda2,scaled_gap\n";
    for (const auto& r : table.rows)
      o.stream() << num(r.theta1) << ',' << num(r.lambda1) << ',' << num(r.lambda2) << ',' << num(r.ratio) << ','
                 << num(r.scaled_lambda1) << ',' << num(r.scaled_lambda2) << ',' << num(r.scaled_gap) << '\n';
  } else {
    json rows = json::array();
    for (const auto& r : table.rows)
      rows.push_back({{"theta1", r.theta1}, {"lambda1", r.lambda1}, {"lambda2", r.lambda2}, {"ratio", r.ratio},
                      {"scaled_lambda1", r.scaled_lambda1}, {"scaled_lambda2", r.scaled_lambda2},
                      {"scaled_gap", r.scaled_gap}});
    o.emit({{"command", "scan"}, {"n", n}, {"rows", rows}, {"checks", verdicts}, {"ok", ok}});
  }
  return ok ? Pass : CheckFailed;
}

int cmd_perturb(int n, double theta1, double step, Common& c, std::ostream& out) {
  perturb::Options po;
  po.fd_step = step;
  const auto r = perturb::report({n, theta1}, po);
  const double fd1 = std::abs(r.d_lambda1_dc - r.fd1) / std::max(1.0, std::abs(r.fd1));
  const double fd2 = std::abs(r.d_lambda2_dc - r.fd2) / std::max(1.0, std::abs(r.fd2));
  const double internal = std::abs(r.d_lambda1_dc - r.d_lambda1_dc_raw) / std::max(1.0, std::abs(r.d_lambda1_dc));
  const bool ok = fd1 < acceptance::tol::finite_difference && fd2 < acceptance::tol::finite_difference &&
                  internal < acceptance::tol::internal && r.d_lambda1_dc < 0.0;
  Output o(c, out);
  if (o.csv()) {
    o.stream() << "n,theta1,lambda1,lambda2,dlambda1_dc,dlambda1_dc_raw,dlambda2_dc,fd1,fd2,ratio_derivative\n"
               << n << ',' << num(theta1) << ',' << num(r.lambda1) << ',' << num(r.lambda2) << ','
               << num(r.d_lambda1_dc) << ',' << num(r.d_lambda1_dc_raw) << ',' << num(r.d_lambda2_dc) << ','
               << num(r.fd1) << ',' << num(r.fd2) << ',' << num(r.ratio_derivative) << '\n';
  } else {
    o.emit({{"command", "perturb"},
            {"n", n},
            {"theta1", theta1},
            {"lambda1", r.lambda1},
            {"lambda2", r.lambda2},
            {"dlambda1_dc", r.d_lambda1_dc},
            {"dlambda1_dc_raw", r.d_lambda1_dc_raw},
            {"dlambda2_dc", r.d_lambda2_dc},
            {"finite_difference", {{"step", step}, {"dlambda1_dc", r.fd1}, {"dlambda2_dc", r.fd2}}},
            {"ratio_derivative", r.ratio_derivative},
            {"checks", {{"fd_defect1", fd1}, {"fd_defect2", fd2}, {"internal_defect", internal},
                        {"dlambda1_negative", r.d_lambda1_dc < 0.0}}},
            {"ok", ok}});
  }
  return ok ? Pass : CheckFailed;
}

int cmd_profile(int n, double theta1, int samples, Common& c, std::ostream& out) {
  gap::ProfileOptions po;
  po.samples = samples;
  const auto g = gap::build_profile({n, theta1}, po);
  const auto ps = gap::p_structure_check(g);
  const auto qb = gap::q_bounds_check(g);
  const auto rr = gap::riccati_residuals(g);
  const bool ok = ps.ok() && qb.ok() && rr.p < acceptance::tol::riccati && rr.q < acceptance::tol::riccati;
  Output o(c, out);
  if (o.csv()) {
    gap::write_csv(o.stream(), g);
  } else {
    o.emit({{"command", "profile"},
            {"n", n},
            {"theta1", theta1},
            {"lambda1", g.lambda1},
            {"lambda2", g.lambda2},
            {"c1", g.c1},
            {"q_pp0", g.q_pp0},
            {"g_end", g.g_end},
            {"dq_end", g.dq_end},
            {"riccati", {{"p", rr.p}, {"q", rr.q}}},
            {"p_structure",
             {{"positive", ps.p_positive}, {"increasing", ps.p_increasing}, {"convex", ps.p_convex},
              {"blows_up", ps.p_blows_up}, {"p_cot_increasing", ps.r_monotone}}},
            {"q_bounds",
             {{"nonnegative", qb.q_nonnegative}, {"below_cos", qb.q_below_cos}, {"nonincreasing", qb.q_nonincreasing},
              {"g_nondecreasing", qb.g_nondecreasing}, {"B_nonincreasing", qb.B_nonincreasing},
              {"q0_fit", qb.q0_fit}, {"q_pp0_fit", qb.q_pp0_fit}}},
            {"ok", ok}});
  }
  return ok ? Pass : CheckFailed;
}

int cmd_rearrange(const std::string& input, bool increasing, Common& c, std::ostream& out) {
  rearr::DomainMeasure dm;
  if (input == "-") {
    dm = rearr::read_csv(std::cin);
  } else {
    std::ifstream in(input);
    if (!in) throw InvalidArgument("cannot open " + input);
    dm = rearr::read_csv(in);
  }
  const auto prof = increasing ? rearr::increasing_rearrangement(dm) : rearr::decreasing_rearrangement(dm);
  double l2 = 0.0, worst = 0.0;
  for (const auto& [v, m] : dm.entries) l2 += v * v * m;
  for (const auto& [v, m] : dm.entries) {
    (void)m;
    worst = std::max(worst, std::abs(prof.measure_above(v) - rearr::measure_above(dm, v)));
  }
  const double l2r = prof.integral_power(2.0);
  const double l2_defect = std::abs(l2r - l2) / std::max(l2, 1e-300);
  const bool ok = l2_defect < 1e-12 && worst < 1e-12 * dm.total_measure;
  Output o(c, out);
  if (o.csv()) {
    rearr::write_csv(o.stream(), prof);
  } else {
    o.emit({{"command", "rearrange"},
            {"direction", increasing ? "increasing" : "decreasing"},
            {"cells", dm.size()},
            {"steps", prof.steps()},
            {"total_measure", prof.total()},
            {"l2_squared", l2},
            {"l2_defect", l2_defect},
            {"distribution_defect", worst},
            {"ok", ok}});
  }
  return ok ? Pass : CheckFailed;
}

json chiti_json(const chiti::ChitiReport& r) {
  return {{"lambda1", r.lambda1},
          {"ball_radius", r.spec.theta1},
          {"ball_volume", r.ball_volume},
          {"domain_volume", r.domain_volume},
          {"scale", r.scale},
          {"normalization_defect", r.normalization_defect},
          {"sup_difference", r.sup_difference},
          {"u_sharp_0", r.u0},
          {"v1_0", r.v0},
          {"crossings", r.crossings},
          {"crossing_volume", r.crossing_volume},
          {"crossing_radius", r.crossing_radius},
          {"sign_pattern", r.sign_pattern},
          {"verdict", chiti::verdict_name(r.verdict)}};
}

int cmd_chiti(bool ball_mode, int n, double theta1, int annuli, DomainArgs& d, int bins, double min_radius,
              double slack, Common& c, std::ostream& out) {
  chiti::ChitiOptions co;
  co.slack_rel = slack;
  json extra;
  chiti::ChitiReport r;
  if (ball_mode) {
    const BallSpec spec{n, theta1};
    r = chiti::chiti_crossing(chiti::radial_samples(spec, annuli), spec, co);
    extra = {{"mode", "ball"}, {"n", n}, {"theta1", theta1}, {"annuli", annuli}};
  } else {
    d.estimate = false;
    const auto s = solve_domain(d);
    const BallSpec spec{2, ball::radius_for_lambda1(2, s.spectrum.lambda1)};
    const auto dm = domain::level_measure(s.mesh, s.spectrum.u1);
    r = chiti::chiti_crossing(dm, spec, co);
    const double rmin = min_radius >= 0.0 ? min_radius : 2.5 * d.h;
    const auto res = chiti::chiti_inequality_residual(dm, spec, bins, rmin);
    extra = {{"mode", "domain"},
             {"domain", domain_json(s)},
             {"inequality", {{"max_violation", res.max_violation}, {"max_abs", res.max_abs}, {"bins", res.bins},
                             {"checked", res.checked}, {"min_radius", rmin}}}};
  }
  Output o(c, out);
  if (o.csv()) {
    chiti::write_csv(o.stream(), r);
  } else {
    json j = {{"command", "chiti"}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    j["comparison"] = chiti_json(r);
    j["ok"] = r.ok();
    o.emit(j);
  }
  return r.ok() ? Pass : CheckFailed;
}

int cmd_domain(DomainArgs& d, bool ppw_only, Common& c, std::ostream& out) {
  const auto s = solve_domain(d);
  json j = {{"command", ppw_only ? "ppw" : "domain"}};
  j["domain"] = domain_json(s);
  j["lambda1"] = s.spectrum.lambda1;
  j["lambda2"] = s.spectrum.lambda2;
  if (d.exploratory) {
    j["ok"] = nullptr;
    Output o(c, out);
    if (o.csv())
      o.stream() << "lambda1,lambda2\n" << num(s.spectrum.lambda1) << ',' << num(s.spectrum.lambda2) << '\n';
    else
      o.emit(j);
    return Pass;
  }
  const auto ppw = domain::ppw_check(s.mesh, s.spectrum.lambda1, s.spectrum.lambda2, s.allowance);
  domain::GapBoundOptions go;
  go.link_tolerance = s.link_tolerance;
  const auto gb = domain::gap_bound(s.mesh, s.spectrum, go);
  const double orth = std::max(std::abs(gb.com.residuals[0]), std::abs(gb.com.residuals[1]));
  const bool orth_ok = orth < acceptance::tol::orthogonality;
  const bool ok = ppw_only ? ppw.ok() : gb.ok() && orth_ok;
  j["bound"] = gb.bound;
  j["ppw_margins"] = ppw_json(ppw);
  j["y0"] = vec_json(gb.com.y0);
  if (!ppw_only) {
    j["gap_bound"] = gap_json(gb);
    j["center_of_mass"] = com_json(gb.com);
  }
  j["ok"] = ok;
  Output o(c, out);
  if (o.csv()) {
    o.stream() << "lambda1,lambda2,bound,lambda2_ball,margin_lambda2,margin_ratio,margin_sperner,margin_radii,"
                  "y0_x,y0_y,y0_z\n"
               << num(s.spectrum.lambda1) << ',' << num(s.spectrum.lambda2) << ',' << num(gb.bound) << ','
               << num(ppw.lambda2_ball) << ',' << num(ppw.margin_i1) << ',' << num(ppw.margin_i4) << ','
               << num(ppw.margin_sperner) << ',' << num(ppw.margin_radii) << ',' << num(gb.com.y0.x()) << ','
               << num(gb.com.y0.y()) << ',' << num(gb.com.y0.z()) << '\n';
  } else {
    o.emit(j);
  }
  return ok ? Pass : CheckFailed;
}

int cmd_verify_all(double h, Common& c, std::ostream& out, std::ostream& err) {
  acceptance::Options ao;
  ao.h = h;
  ao.threads = c.threads;
  const auto results = acceptance::run_all(ao, true, [&](const acceptance::CriterionResult& r) {
    err << (r.pass() ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title << '\n';
  });
  json crit = json::array();
  std::string first;
  for (const auto& r : results) {
    json checks = json::array();
    for (const auto& ch : r.checks) checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
    crit.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass()}, {"checks", checks}});
    if (first.empty() && !r.pass()) {
      const auto* f = r.first_failure();
      first = "criterion " + std::to_string(r.id) + " (" + r.title + "): " + (f ? f->name + ": " + f->detail : "no checks");
    }
  }
  const bool ok = first.empty() && static_cast<int>(results.size()) == acceptance::criterion_count;
  if (!ok) err << "first violated check: " << first << '\n';
  Output o(c, out);
  json j = {{"command", "verify-all"}, {"h", h}, {"criteria", crit}, {"ok", ok}};
  if (!ok) j["first_failure"] = first;
  o.emit(j);
  return ok ? Pass : CheckFailed;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw InvalidArgument("grid must be start:stop:count, got '" + spec + "'");
  double a, b;
  long count;
  try {
    std::size_t used = 0;
    a = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    b = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    count = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
  } catch (const std::logic_error&) {
    throw InvalidArgument("grid must be start:stop:count, got '" + spec + "'");
  }
  if (count < 1) throw InvalidArgument("grid count must be positive");
  if (count == 1) return {a};
  if (!(b > a)) throw InvalidArgument("grid stop must exceed start");
  std::vector<double> out(count);
  for (long i = 0; i < count; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvalue inequalities for Dirichlet problems on spherical domains", "sphereppw"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "sphereppw 0.1.0");

  Common common;
  int n = 2;
  double theta1 = 1.0;
  auto add_ball = [&](CLI::App* sub) {
    sub->add_option("--n", n, "dimension n >= 2")->required();
    sub->add_option("--theta1", theta1, "ball radius in (0, pi)")->required();
  };

  auto* ball_cmd = app.add_subcommand("ball", "lambda1 and lambda2 of a geodesic ball");
  add_ball(ball_cmd);
  add_common(ball_cmd, common);

  std::string grid;
  std::vector<std::string> checks;
  double slack = 1e-9;
  auto* scan_cmd = app.add_subcommand("scan", "eigenvalue table over a radius grid");
  scan_cmd->add_option("--n", n, "dimension n >= 2")->required();
  scan_cmd->add_option("--grid", grid, "start:stop:count")->required();
  scan_cmd->add_option("--check", checks, "column-trend, e.g. ratio-increasing, scaled-lambda1-decreasing");
  scan_cmd->add_option("--slack", slack, "relative slack for monotonicity")->capture_default_str();
  add_common(scan_cmd, common);

  double fd_step = 1e-4;
  auto* perturb_cmd = app.add_subcommand("perturb", "dilation derivatives against finite differences");
  add_ball(perturb_cmd);
  perturb_cmd->add_option("--fd-step", fd_step, "central difference step in c")->capture_default_str();
  add_common(perturb_cmd, common);

  int samples = 2000;
  auto* profile_cmd = app.add_subcommand("profile", "tabulate p, q, g, B and check their structure");
  add_ball(profile_cmd);
  profile_cmd->add_option("--samples", samples, "interior grid points")->capture_default_str();
  add_common(profile_cmd, common);

  std::string input;
  bool increasing = false;
  auto* rearr_cmd = app.add_subcommand("rearrange", "rearrangement of value,measure data");
  rearr_cmd->add_option("--input", input, "CSV file with value,measure rows ('-' for stdin)")->required();
  rearr_cmd->add_flag("--increasing", increasing, "nondecreasing instead of nonincreasing");
  add_common(rearr_cmd, common);

  DomainArgs dargs;
  int annuli = 2000, bins = 50;
  double min_radius = -1.0, chiti_slack = 1e-6;
  auto* chiti_cmd = app.add_subcommand("chiti", "compare u1# with the ball eigenfunction v1");
  chiti_cmd->add_option("--n", n, "ball mode: dimension");
  chiti_cmd->add_option("--theta1", theta1, "ball mode: radius, or cap radius in domain mode");
  chiti_cmd->add_option("--annuli", annuli, "ball mode: radial sample count")->capture_default_str();
  chiti_cmd->add_option("--kind", dargs.kind, "domain mode: cap | perturbed | polygon")
      ->check(CLI::IsMember({"cap", "perturbed", "polygon"}));
  chiti_cmd->add_option("--amplitude", dargs.amplitude)->capture_default_str();
  chiti_cmd->add_option("--wavenumber", dargs.wavenumber)->capture_default_str();
  chiti_cmd->add_option("--corners", dargs.corners);
  chiti_cmd->add_option("--h", dargs.h)->capture_default_str();
  chiti_cmd->add_option("--mesh", dargs.mesh_file);
  chiti_cmd->add_option("--seed", dargs.seed)->capture_default_str();
  chiti_cmd->add_option("--bins", bins, "radial bins for the derivative inequality")->capture_default_str();
  chiti_cmd->add_option("--min-radius", min_radius, "skip bins below this radius (default 2.5 h)");
  chiti_cmd->add_option("--slack", chiti_slack, "sign changes below slack * |v1|_inf are ignored")
      ->capture_default_str();
  add_common(chiti_cmd, common);

  auto* domain_cmd = app.add_subcommand("domain", "FEM spectrum, gap-bound chain and centre of mass");
  add_domain_options(domain_cmd, dargs);
  add_common(domain_cmd, common);

  auto* ppw_cmd = app.add_subcommand("ppw", "PPW-type inequalities for a domain");
  add_domain_options(ppw_cmd, dargs);
  add_common(ppw_cmd, common);

  double verify_h = 0.02;
  auto* verify_cmd = app.add_subcommand("verify-all", "run every acceptance criterion, stopping at the first failure");
  verify_cmd->add_option("--h", verify_h, "mesh size for the domain criteria")->capture_default_str();
  add_common(verify_cmd, common, false);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Pass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Pass;
  } catch (const CLI::CallForVersion&) {
    out << "sphereppw 0.1.0\n";
    return Pass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return UsageError;
  }

  try {
    if (ball_cmd->parsed()) return cmd_ball(n, theta1, common, out);
    if (scan_cmd->parsed()) return cmd_scan(n, grid, checks, slack, common, out, err);
    if (perturb_cmd->parsed()) return cmd_perturb(n, theta1, fd_step, common, out);
    if (profile_cmd->parsed()) return cmd_profile(n, theta1, samples, common, out);
    if (rearr_cmd->parsed()) return cmd_rearrange(input, increasing, common, out);
    if (chiti_cmd->parsed()) {
      const bool ball_mode = chiti_cmd->count("--kind") == 0 && chiti_cmd->count("--mesh") == 0;
      if (ball_mode && (chiti_cmd->count("--n") == 0 || chiti_cmd->count("--theta1") == 0))
        throw InvalidArgument("chiti needs --n and --theta1 (ball mode) or --kind/--mesh (domain mode)");
      if (!ball_mode && chiti_cmd->count("--n") && n != 2) throw InvalidArgument("domain mode is two-dimensional");
      dargs.theta1 = theta1;
      return cmd_chiti(ball_mode, n, theta1, annuli, dargs, bins, min_radius, chiti_slack, common, out);
    }
    if (domain_cmd->parsed()) return cmd_domain(dargs, false, common, out);
    if (ppw_cmd->parsed()) return cmd_domain(dargs, true, common, out);
    if (verify_cmd->parsed()) return cmd_verify_all(verify_h, common, out, err);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return UsageError;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return UsageError;
  }
  err << app.help();
  return UsageError;
}

}  // namespace sphereppw::cli
