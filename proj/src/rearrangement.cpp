#include "sphereppw/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <locale>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "sphereppw/error.hpp"

namespace sphereppw::rearr {

namespace {

void check_dim(int n) {
  if (n < 2) throw InvalidArgument("dimension n must be >= 2");
}

void check_rho(double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("sphere radius rho must be positive");
}

/// int_0^x sin^k(t) dt for x in [0, pi], by composite Gauss-Legendre.
double sin_power_integral(int k, double x) {
  using GL = boost::math::quadrature::gauss<double, 30>;
  const int panels = 4;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = x * i / panels, b = x * (i + 1) / panels;
    sum += GL::integrate([k](double t) { return std::pow(std::sin(t), k); }, a, b);
  }
  return sum;
}

RearrangedProfile build_profile(const DomainMeasure& dm, bool decreasing) {
  dm.validate();
  std::vector<std::pair<double, double>> e = dm.entries;
  std::sort(e.begin(), e.end(), [decreasing](const auto& a, const auto& b) {
    if (a.first != b.first) return decreasing ? a.first > b.first : a.first < b.first;
    return a.second < b.second;
  });
  RearrangedProfile out;
  out.s_grid.push_back(0.0);
  double s = 0.0;
  for (std::size_t i = 0; i < e.size();) {
    const double v = e[i].first;
    double mu = 0.0;
    for (; i < e.size() && e[i].first == v; ++i) mu += e[i].second;
    s += mu;
    out.values.push_back(v);
    out.s_grid.push_back(s);
  }
  return out;
}

}  // namespace

double unit_ball_volume(int n) {
  check_dim(n);
  return std::pow(std::numbers::pi, 0.5 * n) / boost::math::tgamma(0.5 * n + 1.0);
}

double sphere_volume(int n, double rho) {
  check_dim(n);
  check_rho(rho);
  return 2.0 * std::pow(std::numbers::pi, 0.5 * (n + 1)) / boost::math::tgamma(0.5 * (n + 1)) *
         std::pow(rho, n);
}

double cap_volume(int n, double rho, double r) {
  check_dim(n);
  check_rho(rho);
  if (!(r >= 0.0 && r <= rho * std::numbers::pi * (1 + 1e-15)))
    throw InvalidArgument("cap radius must lie in [0, rho pi]");
  r = std::min(r, rho * std::numbers::pi);
  const double x = r / rho;
  if (n == 2) return 2.0 * std::numbers::pi * rho * rho * (1.0 - std::cos(x));
  return n * unit_ball_volume(n) * std::pow(rho, n) * sin_power_integral(n - 1, x);
}

double cap_boundary(int n, double rho, double r) {
  check_dim(n);
  check_rho(rho);
  if (!(r >= 0.0 && r <= rho * std::numbers::pi * (1 + 1e-15)))
    throw InvalidArgument("cap radius must lie in [0, rho pi]");
  return n * unit_ball_volume(n) * std::pow(rho * std::sin(r / rho), n - 1);
}

double theta_of_volume(int n, double rho, double s) {
  const double total = sphere_volume(n, rho);
  if (!(s >= 0.0 && s <= total * (1 + 1e-14))) throw InvalidArgument("volume outside [0, |S^n|]");
  if (s <= 0.0) return 0.0;
  if (s >= total) return rho * std::numbers::pi;
  if (n == 2) {
    const double c = 1.0 - s / (2.0 * std::numbers::pi * rho * rho);
    return rho * std::acos(std::clamp(c, -1.0, 1.0));
  }
  auto f = [&](double r) { return cap_volume(n, rho, r) - s; };
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      f, 0.0, rho * std::numbers::pi, -s, total - s,
      [](double lo, double hi) { return hi - lo <= 1e-13; }, iters);
  double r = 0.5 * (a + b);
  // Newton polish: A' = L.
  for (int k = 0; k < 2; ++k) {
    const double d = cap_boundary(n, rho, r);
    if (d <= 0.0) break;
    r = std::clamp(r - f(r) / d, a, b);
  }
  return r;
}

void DomainMeasure::add(double value, double measure) {
  entries.emplace_back(value, measure);
  total_measure += measure;
}

void DomainMeasure::validate() const {
  double sum = 0.0;
  for (const auto& [v, mu] : entries) {
    if (!std::isfinite(v)) throw InvalidArgument("domain measure value is not finite");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("domain measure entries need positive measure");
    sum += mu;
  }
  if (std::abs(sum - total_measure) > 1e-12 * std::max(1.0, sum))
    throw InvalidArgument("total_measure does not match the entries");
}

double RearrangedProfile::operator()(double s) const {
  if (values.empty() || s < 0.0 || s >= total()) return 0.0;
  const auto it = std::upper_bound(s_grid.begin(), s_grid.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - s_grid.begin()) - 1;
  return values[std::min(i, values.size() - 1)];
}

double RearrangedProfile::integral_power(double p) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    sum += std::pow(std::abs(values[i]), p) * (s_grid[i + 1] - s_grid[i]);
  return sum;
}

double RearrangedProfile::measure_above(double t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] > t) sum += s_grid[i + 1] - s_grid[i];
  return sum;
}

RearrangedProfile decreasing_rearrangement(const DomainMeasure& dm) { return build_profile(dm, true); }

RearrangedProfile increasing_rearrangement(const DomainMeasure& dm) { return build_profile(dm, false); }

double measure_above(const DomainMeasure& dm, double t) {
  double sum = 0.0;
  for (const auto& [v, mu] : dm.entries)
    if (v > t) sum += mu;
  return sum;
}

double symmetric_value(const RearrangedProfile& sharp, int n, double rho, double r) {
  return sharp(cap_volume(n, rho, r));
}

double integral_product(const RearrangedProfile& a, const RearrangedProfile& b) {
  const double end = std::min(a.total(), b.total());
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  double s = 0.0;
  while (i < a.values.size() && j < b.values.size() && s < end) {
    const double next = std::min({a.s_grid[i + 1], b.s_grid[j + 1], end});
    sum += a.values[i] * b.values[j] * (next - s);
    s = next;
    if (a.s_grid[i + 1] <= s) ++i;
    if (b.s_grid[j + 1] <= s) ++j;
  }
  return sum;
}

IsoperimetricReport isoperimetric_check_s2(const domain::SphericalDomainMesh& mesh) {
  mesh.validate();
  IsoperimetricReport r;
  r.area = domain::spherical_area(mesh);
  r.length = domain::boundary_length(mesh);
  r.defect = r.length * r.length - (4.0 * std::numbers::pi * r.area - r.area * r.area);
  return r;
}

IsoperimetricReport isoperimetric_cap_s2(double radius) {
  if (!(radius >= 0.0 && radius <= std::numbers::pi)) throw InvalidArgument("cap radius must lie in [0, pi]");
  IsoperimetricReport r;
  r.area = cap_volume(2, 1.0, radius);
  r.length = cap_boundary(2, 1.0, radius);
  r.defect = r.length * r.length - (4.0 * std::numbers::pi * r.area - r.area * r.area);
  return r;
}

DomainMeasure read_csv(std::istream& is) {
  DomainMeasure dm;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    double v, mu;
    if (!(ls >> v >> mu)) {
      if (lineno == 1) continue;
      throw InvalidArgument("bad value,measure row at line " + std::to_string(lineno));
    }
    dm.add(v, mu);
  }
  dm.validate();
  return dm;
}

void write_csv(std::ostream& os, const RearrangedProfile& profile) {
  os << "s,value\n";
  os.precision(17);
  for (std::size_t i = 0; i < profile.values.size(); ++i)
    os << profile.s_grid[i] << ',' << profile.values[i] << '\n';
  if (!profile.values.empty()) os << profile.total() << ',' << profile.values.back() << '\n';
}

}  // namespace sphereppw::rearr
