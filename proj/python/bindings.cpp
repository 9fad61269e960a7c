#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sphereppw/acceptance.hpp"
#include "sphereppw/ball_spectrum.hpp"
#include "sphereppw/chiti_compare.hpp"
#include "sphereppw/error.hpp"
#include "sphereppw/gap_profile.hpp"
#include "sphereppw/perturbation.hpp"
#include "sphereppw/rearrangement.hpp"
#include "sphereppw/sphere_domain.hpp"

namespace py = pybind11;
using namespace sphereppw;

namespace {

py::array_t<double> arr(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::dict ball_pair(int n, double theta1) {
  const auto p = ball::spectral_pair({n, theta1});
  const auto c = ball::ratio_gap_checks(p);
  py::dict d;
  d["lambda1"] = p.lambda1;
  d["lambda2"] = p.lambda2;
  d["ratio"] = p.lambda2 / p.lambda1;
  d["ratio_ok"] = c.ratio_ok;
  d["equality"] = c.equality;
  d["gap_ok"] = c.gap_ok;
  d["gap_applicable"] = c.gap_applicable;
  return d;
}

py::dict scan(int n, const std::vector<double>& thetas, unsigned threads) {
  const auto t = ball::scan(n, thetas, {}, threads);
  std::vector<double> l1, l2, s1;
  for (const auto& r : t.rows) {
    l1.push_back(r.lambda1);
    l2.push_back(r.lambda2);
    s1.push_back(r.scaled_lambda1);
  }
  py::dict d;
  d["theta1"] = arr(thetas);
  d["lambda1"] = arr(l1);
  d["lambda2"] = arr(l2);
  d["scaled_lambda1"] = arr(s1);
  return d;
}

py::dict perturbation(int n, double theta1) {
  const auto r = perturb::report({n, theta1});
  py::dict d;
  d["lambda1"] = r.lambda1;
  d["lambda2"] = r.lambda2;
  d["dlambda1_dc"] = r.d_lambda1_dc;
  d["dlambda1_dc_raw"] = r.d_lambda1_dc_raw;
  d["dlambda2_dc"] = r.d_lambda2_dc;
  d["fd1"] = r.fd1;
  d["fd2"] = r.fd2;
  return d;
}

py::dict profile(int n, double theta1, int samples) {
  gap::ProfileOptions o;
  o.samples = samples;
  const auto g = gap::build_profile({n, theta1}, o);
  const auto rr = gap::riccati_residuals(g);
  py::dict d;
  d["theta"] = arr(g.grid);
  d["y1"] = arr(g.y1);
  d["y2"] = arr(g.y2);
  d["p"] = arr(g.p);
  d["q"] = arr(g.q);
  d["g"] = arr(g.g);
  d["B"] = arr(g.B);
  d["lambda1"] = g.lambda1;
  d["lambda2"] = g.lambda2;
  d["p_structure_ok"] = gap::p_structure_check(g).ok();
  d["q_bounds_ok"] = gap::q_bounds_check(g).ok();
  d["riccati_p"] = rr.p;
  d["riccati_q"] = rr.q;
  return d;
}

py::tuple rearrange(const std::vector<double>& values, const std::vector<double>& measures, bool increasing) {
  if (values.size() != measures.size()) throw InvalidArgument("values and measures differ in length");
  rearr::DomainMeasure dm;
  for (std::size_t i = 0; i < values.size(); ++i) dm.add(values[i], measures[i]);
  const auto p = increasing ? rearr::increasing_rearrangement(dm) : rearr::decreasing_rearrangement(dm);
  return py::make_tuple(arr(p.s_grid), arr(p.values));
}

py::dict chiti_ball(int n, double theta1, int annuli) {
  const BallSpec spec{n, theta1};
  const auto r = chiti::chiti_crossing(chiti::radial_samples(spec, annuli), spec);
  py::dict d;
  d["verdict"] = chiti::verdict_name(r.verdict);
  d["sup_difference"] = r.sup_difference;
  d["crossings"] = r.crossings;
  d["ok"] = r.ok();
  return d;
}

py::dict solve_domain(const std::string& kind, double theta1, double amplitude, int wavenumber,
                      const std::vector<std::array<double, 3>>& corners, double h, bool estimate) {
  domain::DomainParams p;
  if (kind == "cap") p.kind = domain::DomainKind::Cap;
  else if (kind == "perturbed") p.kind = domain::DomainKind::PerturbedCap;
  else if (kind == "polygon") p.kind = domain::DomainKind::GeodesicPolygon;
  else throw InvalidArgument("kind must be cap, perturbed or polygon");
  p.theta1 = theta1;
  p.amplitude = amplitude;
  p.wavenumber = wavenumber;
  for (const auto& c : corners) p.corners.emplace_back(c[0], c[1], c[2]);
  p.h = h;
  const auto mesh = domain::make_domain(p);
  domain::DomainSpectrum sp;
  double allowance = 0.0, link = 0.0;
  py::dict d;
  if (estimate) {
    const auto est = domain::mesh_error_estimate(p);
    sp = est.fine;
    allowance = acceptance::tol::mesh_factor * est.err2;
    link = acceptance::tol::mesh_factor * std::max(est.err1 / sp.lambda1, est.err2 / sp.lambda2);
    d["err1"] = est.err1;
    d["err2"] = est.err2;
  } else {
    sp = domain::solve_dirichlet(mesh);
  }
  domain::GapBoundOptions go;
  go.link_tolerance = link;
  const auto gb = domain::gap_bound(mesh, sp, go);
  const auto ppw = domain::ppw_check(mesh, sp.lambda1, sp.lambda2, allowance);
  d["lambda1"] = sp.lambda1;
  d["lambda2"] = sp.lambda2;
  d["bound"] = gb.bound;
  d["lambda2_ball"] = gb.lambda2_ball;
  d["chain_ok"] = gb.ok();
  d["y0"] = std::array<double, 3>{gb.com.y0.x(), gb.com.y0.y(), gb.com.y0.z()};
  d["orthogonality"] = gb.com.residuals;
  py::dict m;
  m["lambda2"] = ppw.margin_i1;
  m["ratio"] = ppw.margin_i4;
  m["sperner"] = ppw.margin_sperner;
  m["radii"] = ppw.margin_radii;
  d["ppw_margins"] = m;
  d["ppw_ok"] = ppw.ok();
  return d;
}

py::dict criterion(int id, double h) {
  acceptance::Options o;
  o.h = h;
  const auto r = acceptance::run_criterion(id, o);
  py::list checks;
  for (const auto& c : r.checks) checks.append(py::make_tuple(c.name, c.pass, c.detail));
  py::dict d;
  d["id"] = r.id;
  d["title"] = r.title;
  d["pass"] = r.pass();
  d["checks"] = checks;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<Error>(m, "NumericalError", PyExc_RuntimeError);

  m.def("ball_spectrum", &ball_pair, py::arg("n"), py::arg("theta1"));
  m.def("scan", &scan, py::arg("n"), py::arg("thetas"), py::arg("threads") = 0);
  m.def("radius_for_lambda1", [](int n, double l) { return ball::radius_for_lambda1(n, l); }, py::arg("n"),
        py::arg("lambda1"));
  m.def("perturbation", &perturbation, py::arg("n"), py::arg("theta1"));
  m.def("gap_profile", &profile, py::arg("n"), py::arg("theta1"), py::arg("samples") = 2000);
  m.def("rearrange", &rearrange, py::arg("values"), py::arg("measures"), py::arg("increasing") = false);
  m.def("cap_volume", [](int n, double r) { return rearr::cap_volume(n, 1.0, r); }, py::arg("n"), py::arg("r"));
  m.def("theta_of_volume", [](int n, double s) { return rearr::theta_of_volume(n, 1.0, s); }, py::arg("n"),
        py::arg("s"));
  m.def("chiti_ball", &chiti_ball, py::arg("n"), py::arg("theta1"), py::arg("annuli") = 2000);
  m.def("domain", &solve_domain, py::arg("kind") = "cap", py::arg("theta1") = 1.0, py::arg("amplitude") = 0.1,
        py::arg("wavenumber") = 3, py::arg("corners") = std::vector<std::array<double, 3>>{}, py::arg("h") = 0.05,
        py::arg("estimate") = true);
  m.def("criterion", &criterion, py::arg("id"), py::arg("h") = 0.02);
}
