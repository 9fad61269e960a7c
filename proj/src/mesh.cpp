#include "sphereppw/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <locale>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Geometry>

#include "sphereppw/error.hpp"

namespace sphereppw::domain {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Frame {
  Vec3 c, e1, e2;
};

Frame frame_at(const Vec3& center) {
  Frame f;
  f.c = center.normalized();
  // Matches the (sin t cos p, sin t sin p, cos t) convention at the north pole.
  Vec3 seed = std::abs(f.c.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  f.e1 = (seed - seed.dot(f.c) * f.c).normalized();
  f.e2 = f.c.cross(f.e1);
  return f;
}

/// Tangent coordinates of log_c(x).
Eigen::Vector2d log_map(const Frame& f, const Vec3& x) {
  const Vec3 perp = x - x.dot(f.c) * f.c;
  const double pn = perp.norm();
  const double angle = std::atan2(pn, x.dot(f.c));
  if (pn < 1e-300) return Eigen::Vector2d::Zero();
  return angle / pn * Eigen::Vector2d(perp.dot(f.e1), perp.dot(f.e2));
}

Vec3 exp_map(const Frame& f, const Eigen::Vector2d& v) {
  const double r = v.norm();
  if (r < 1e-300) return f.c;
  const Vec3 dir = (v.x() * f.e1 + v.y() * f.e2) / r;
  return (std::cos(r) * f.c + std::sin(r) * dir).normalized();
}

Vec3 slerp(const Vec3& a, const Vec3& b, double s) {
  const double omega = std::atan2(a.cross(b).norm(), a.dot(b));
  if (omega < 1e-15) return a;
  const double so = std::sin(omega);
  return (std::sin((1 - s) * omega) / so * a + std::sin(s * omega) / so * b).normalized();
}

/// Closed boundary curve b(t), t in [0, 1), split into segments whose ends are
/// kept as vertices on every ring.
struct Boundary {
  Frame frame;
  std::vector<double> breaks;  // segment starts, breaks[0] = 0, implicit end 1
  std::function<Vec3(double)> point;
};

double arc(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

Boundary make_boundary(const DomainParams& p) {
  Boundary b;
  switch (p.kind) {
    case DomainKind::Cap:
    case DomainKind::PerturbedCap: {
      const double amp = p.kind == DomainKind::Cap ? 0.0 : p.amplitude;
      if (!(p.theta1 > 0.0 && p.theta1 < std::numbers::pi)) throw InvalidArgument("cap radius must lie in (0, pi)");
      if (p.kind == DomainKind::PerturbedCap && p.wavenumber < 1)
        throw InvalidArgument("perturbation wavenumber must be >= 1");
      if (!(std::abs(amp) < 1.0) || p.theta1 * (1.0 + std::abs(amp)) >= std::numbers::pi)
        throw InvalidArgument("perturbed radius leaves (0, pi)");
      b.frame = frame_at(p.center);
      b.breaks = {0.0};
      const Frame f = b.frame;
      const double th = p.theta1;
      const int k = p.wavenumber;
      b.point = [f, th, amp, k](double t) {
        const double phi = kTwoPi * t;
        const double r = th * (1.0 + amp * std::cos(k * phi));
        return exp_map(f, Eigen::Vector2d(r * std::cos(phi), r * std::sin(phi)));
      };
      return b;
    }
    case DomainKind::GeodesicPolygon: {
      std::vector<Vec3> c;
      for (const Vec3& v : p.corners) {
        if (!(v.norm() > 0.0)) throw MeshError("polygon corner is the zero vector");
        c.push_back(v.normalized());
      }
      if (c.size() < 3) throw MeshError("polygon needs at least 3 corners");
      for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = i + 1; j < c.size(); ++j)
          if (arc(c[i], c[j]) < 1e-9) throw MeshError("polygon has repeated corners");
      }
      Vec3 centre = Vec3::Zero();
      for (const Vec3& v : c) centre += v;
      if (centre.norm() < 1e-9) throw MeshError("polygon corners have no well-defined centre");
      b.frame = frame_at(centre);
      // Counter-clockwise order around the centre.
      double turn = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const auto a = log_map(b.frame, c[i]);
        const auto d = log_map(b.frame, c[(i + 1) % c.size()]);
        turn += a.x() * d.y() - a.y() * d.x();
      }
      if (turn < 0.0) std::reverse(c.begin(), c.end());
      std::vector<double> len(c.size());
      double total = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        len[i] = arc(c[i], c[(i + 1) % c.size()]);
        if (len[i] >= std::numbers::pi - 1e-9) throw MeshError("polygon edge is not a unique geodesic");
        total += len[i];
      }
      std::vector<double> start(c.size());
      double acc = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        start[i] = acc / total;
        acc += len[i];
      }
      b.breaks = start;
      b.point = [c, start](double t) {
        std::size_t i = static_cast<std::size_t>(std::upper_bound(start.begin(), start.end(), t) - start.begin()) - 1;
        const double t0 = start[i];
        const double t1 = i + 1 < start.size() ? start[i + 1] : 1.0;
        return slerp(c[i], c[(i + 1) % c.size()], (t - t0) / (t1 - t0));
      };
      return b;
    }
  }
  throw InvalidArgument("unknown domain kind");
}

double unwrap_step(double d) {
  while (d > std::numbers::pi) d -= kTwoPi;
  while (d < -std::numbers::pi) d += kTwoPi;
  return d;
}

void check_star_shaped(const Boundary& b) {
  const int samples = 4096;
  double prev = 0.0, total = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const auto v = log_map(b.frame, b.point(std::fmod(static_cast<double>(i) / samples, 1.0)));
    if (v.norm() >= std::numbers::pi - 1e-9) throw MeshError("boundary reaches the antipode of the centre");
    if (v.norm() < 1e-9) throw MeshError("boundary passes through its centre");
    const double ang = std::atan2(v.y(), v.x());
    if (i > 0) {
      const double d = unwrap_step(ang - prev);
      if (!(d > 0.0)) throw MeshError("boundary is self-intersecting or not star-shaped about its centre");
      total += d;
    }
    prev = ang;
  }
  if (std::abs(total - kTwoPi) > 1e-6) throw MeshError("boundary does not wind once around its centre");
}

/// Ring parameters: segment ends plus an even split of each segment.
std::vector<double> ring_params(const Boundary& b, double fraction, double h) {
  std::vector<double> out;
  const std::size_t segs = b.breaks.size();
  for (std::size_t s = 0; s < segs; ++s) {
    const double t0 = b.breaks[s];
    const double t1 = s + 1 < segs ? b.breaks[s + 1] : 1.0;
    const int probe = 256;
    double len = 0.0;
    Vec3 prev = exp_map(b.frame, fraction * log_map(b.frame, b.point(t0)));
    for (int i = 1; i <= probe; ++i) {
      const double t = t0 + (t1 - t0) * i / probe;
      const Vec3 x = exp_map(b.frame, fraction * log_map(b.frame, b.point(std::min(t, std::nextafter(1.0, 0.0)))));
      len += arc(prev, x);
      prev = x;
    }
    int pieces = std::max(1, static_cast<int>(std::ceil(len / h - 1e-9)));
    if (segs == 1) pieces = std::max(pieces, 6);
    for (int i = 0; i < pieces; ++i) out.push_back(t0 + (t1 - t0) * i / pieces);
  }
  return out;
}

double flat_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

}  // namespace

std::string kind_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::Cap: return "cap";
    case DomainKind::PerturbedCap: return "perturbed_cap";
    case DomainKind::GeodesicPolygon: return "geodesic_polygon";
  }
  return "?";
}

SphericalDomainMesh make_domain(const DomainParams& p) {
  if (!(p.h > 0.0)) throw InvalidArgument("target edge length h must be positive");
  if (!(p.center.norm() > 0.0)) throw InvalidArgument("domain centre must be nonzero");
  const Boundary b = make_boundary(p);
  check_star_shaped(b);

  double r_max = 0.0;
  for (int i = 0; i < 1024; ++i) r_max = std::max(r_max, log_map(b.frame, b.point(i / 1024.0)).norm());
  const int rings = std::max(2, static_cast<int>(std::ceil(r_max / p.h - 1e-9)));

  SphericalDomainMesh mesh;
  mesh.vertices.push_back(b.frame.c);
  std::vector<int> prev_idx = {0};
  std::vector<double> prev_par = {0.0};

  auto add_tri = [&](int i, int j, int k) {
    const Vec3& a = mesh.vertices[i];
    const Vec3& bb = mesh.vertices[j];
    const Vec3& c = mesh.vertices[k];
    if ((bb - a).cross(c - a).dot(a + bb + c) < 0.0) std::swap(j, k);
    mesh.triangles.push_back({i, j, k});
  };

  for (int k = 1; k <= rings; ++k) {
    const double fraction = static_cast<double>(k) / rings;
    const std::vector<double> par = ring_params(b, fraction, p.h);
    std::vector<int> idx;
    for (double t : par) {
      idx.push_back(static_cast<int>(mesh.vertices.size()));
      mesh.vertices.push_back(exp_map(b.frame, fraction * log_map(b.frame, b.point(t))));
    }
    const std::size_t na = prev_idx.size(), nb = idx.size();
    if (na == 1) {
      for (std::size_t j = 0; j < nb; ++j) add_tri(prev_idx[0], idx[j], idx[(j + 1) % nb]);
    } else {
      std::size_t i = 0, j = 0;
      while (i < na || j < nb) {
        const double a_next = i + 1 < na ? prev_par[i + 1] : 1.0;
        const double b_next = j + 1 < nb ? par[j + 1] : 1.0;
        const bool step_inner = j == nb || (i < na && a_next <= b_next);
        if (step_inner) {
          add_tri(prev_idx[i], prev_idx[(i + 1) % na], idx[j % nb]);
          ++i;
        } else {
          add_tri(prev_idx[i % na], idx[j], idx[(j + 1) % nb]);
          ++j;
        }
      }
    }
    prev_idx = idx;
    prev_par = par;
  }
  mesh.boundary.assign(mesh.vertices.size(), 0);
  for (int i : prev_idx) mesh.boundary[i] = 1;

  std::ostringstream prov;
  prov.imbue(std::locale::classic());
  prov.precision(17);
  prov << kind_name(p.kind) << " h=" << p.h;
  if (p.kind != DomainKind::GeodesicPolygon) prov << " theta1=" << p.theta1;
  if (p.kind == DomainKind::PerturbedCap) prov << " amplitude=" << p.amplitude << " wavenumber=" << p.wavenumber;
  if (p.kind == DomainKind::GeodesicPolygon) prov << " corners=" << p.corners.size();
  prov << " center=(" << p.center.x() << "," << p.center.y() << "," << p.center.z() << ")";
  mesh.provenance = prov.str();

  mesh.validate();
  if (p.require_hemisphere && !in_open_hemisphere(mesh))
    throw MeshError("domain is not contained in an open hemisphere");
  return mesh;
}

void SphericalDomainMesh::validate() const {
  if (vertices.empty() || triangles.empty()) throw MeshError("mesh is empty");
  if (boundary.size() != vertices.size()) throw MeshError("boundary flags do not match the vertex count");
  for (const Vec3& v : vertices)
    if (std::abs(v.norm() - 1.0) > 1e-12) throw MeshError("vertex is not on the unit sphere");
  const int nv = static_cast<int>(vertices.size());
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k)
      if (t[k] < 0 || t[k] >= nv) throw MeshError("triangle index out of range");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw MeshError("triangle repeats a vertex");
    const Vec3& a = vertices[t[0]];
    const Vec3& b = vertices[t[1]];
    const Vec3& c = vertices[t[2]];
    const Vec3 nrm = (b - a).cross(c - a);
    if (nrm.norm() < 1e-300) throw MeshError("degenerate triangle");
    if (nrm.dot(a + b + c) <= 0.0) throw MeshError("triangle orientation is inconsistent");
    for (int k = 0; k < 3; ++k) {
      if (++directed[{t[k], t[(k + 1) % 3]}] > 1) throw MeshError("edge is not manifold");
    }
  }
  std::vector<char> on_boundary(vertices.size(), 0);
  for (const auto& [e, count] : directed) {
    if (!directed.count({e.second, e.first})) {
      on_boundary[e.first] = 1;
      on_boundary[e.second] = 1;
    }
  }
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if ((on_boundary[i] != 0) != (boundary[i] != 0)) throw MeshError("boundary flags disagree with the triangulation");
}

double SphericalDomainMesh::max_edge() const {
  double h = 0.0;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) h = std::max(h, (vertices[t[k]] - vertices[t[(k + 1) % 3]]).norm());
  return h;
}

std::vector<std::array<int, 2>> SphericalDomainMesh::boundary_edges() const {
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) ++directed[{t[k], t[(k + 1) % 3]}];
  std::vector<std::array<int, 2>> out;
  for (const auto& [e, count] : directed)
    if (!directed.count({e.second, e.first})) out.push_back({e.first, e.second});
  return out;
}

double spherical_area(const SphericalDomainMesh& mesh) {
  double sum = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const double triple = a.dot(b.cross(c));
    sum += 2.0 * std::atan2(std::abs(triple), 1.0 + a.dot(b) + b.dot(c) + c.dot(a));
  }
  return sum;
}

double boundary_length(const SphericalDomainMesh& mesh) {
  double sum = 0.0;
  for (const auto& e : mesh.boundary_edges()) sum += arc(mesh.vertices[e[0]], mesh.vertices[e[1]]);
  return sum;
}

double flat_area(const SphericalDomainMesh& mesh) {
  double sum = 0.0;
  for (const auto& t : mesh.triangles)
    sum += flat_triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  return sum;
}

bool in_open_hemisphere(const SphericalDomainMesh& mesh, Vec3* direction) {
  Vec3 mean = Vec3::Zero();
  for (const Vec3& v : mesh.vertices) mean += v;
  std::vector<Vec3> candidates;
  if (mean.norm() > 0.0) candidates.push_back(mean.normalized());
  if (!mesh.vertices.empty()) candidates.push_back(mesh.vertices.front());
  // Push the best candidate away from its worst vertex a few times.
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    Vec3 d = candidates[c];
    for (int iter = 0; iter < 50; ++iter) {
      double worst = INFINITY;
      const Vec3* arg = nullptr;
      for (const Vec3& v : mesh.vertices) {
        const double s = v.dot(d);
        if (s < worst) {
          worst = s;
          arg = &v;
        }
      }
      if (worst > 1e-12) {
        if (direction) *direction = d;
        return true;
      }
      d = (d + 0.1 * *arg).normalized();
    }
  }
  return false;
}

SphericalDomainMesh rotated(const SphericalDomainMesh& mesh, const Eigen::Matrix3d& R) {
  SphericalDomainMesh out = mesh;
  for (Vec3& v : out.vertices) v = (R * v).normalized();
  return out;
}

Eigen::Matrix3d rotation_to_pole(const Vec3& y) {
  const Vec3 z = y.normalized();
  const Vec3 seed = std::abs(z.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = (seed - seed.dot(z) * z).normalized();
  const Vec3 e2 = z.cross(e1);
  Eigen::Matrix3d R;
  R.row(0) = e1.transpose();
  R.row(1) = e2.transpose();
  R.row(2) = z.transpose();
  return R;
}

void write_mesh(std::ostream& os, const SphericalDomainMesh& mesh) {
  os.imbue(std::locale::classic());
  os.precision(17);
  if (!mesh.provenance.empty()) os << "# " << mesh.provenance << '\n';
  for (const Vec3& v : mesh.vertices) os << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles) os << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (std::size_t i = 0; i < mesh.boundary.size(); ++i)
    if (mesh.boundary[i]) os << "b " << i << '\n';
}

SphericalDomainMesh read_mesh(std::istream& is) {
  SphericalDomainMesh mesh;
  std::vector<long> flags;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (mesh.provenance.empty()) mesh.provenance = line.substr(line.find_first_not_of("# ") == std::string::npos ? line.size() : line.find_first_not_of("# "));
      continue;
    }
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    std::string tag;
    ls >> tag;
    bool ok = true;
    if (tag == "v") {
      Vec3 v;
      ok = static_cast<bool>(ls >> v.x() >> v.y() >> v.z());
      mesh.vertices.push_back(v);
    } else if (tag == "t") {
      std::array<int, 3> t{};
      ok = static_cast<bool>(ls >> t[0] >> t[1] >> t[2]);
      mesh.triangles.push_back(t);
    } else if (tag == "b") {
      long i = -1;
      ok = static_cast<bool>(ls >> i);
      flags.push_back(i);
    } else {
      ok = false;
    }
    if (!ok) throw MeshError("cannot parse mesh line " + std::to_string(lineno));
  }
  mesh.boundary.assign(mesh.vertices.size(), 0);
  for (long i : flags) {
    if (i < 0 || static_cast<std::size_t>(i) >= mesh.vertices.size())
      throw MeshError("boundary index out of range");
    mesh.boundary[i] = 1;
  }
  mesh.validate();
  return mesh;
}

}  // namespace sphereppw::domain
