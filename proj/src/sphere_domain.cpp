#include "sphereppw/sphere_domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "sphereppw/ball_spectrum.hpp"
#include "sphereppw/error.hpp"
#include "sphereppw/parallel.hpp"

namespace sphereppw::domain {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Mat = Eigen::MatrixXd;

constexpr int kChunks = 64;  // fixed reduction layout keeps sums thread-count independent

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ua = a.normalized(), ub = b.normalized(), uc = c.normalized();
  const double num = std::abs(ua.dot(ub.cross(uc)));
  const double den = 1.0 + ua.dot(ub) + ub.dot(uc) + uc.dot(ua);
  return 2.0 * std::atan2(num, den);
}

struct Assembly {
  SpMat K, M;
  std::vector<int> dof;  // vertex -> interior index or -1
  int interior = 0;
};

Assembly assemble(const SphericalDomainMesh& mesh) {
  Assembly a;
  const std::size_t nv = mesh.num_vertices();
  a.dof.assign(nv, -1);
  for (std::size_t i = 0; i < nv; ++i)
    if (!mesh.boundary[i]) a.dof[i] = a.interior++;
  if (a.interior == 0) throw MeshError("mesh has no interior vertices");

  const std::size_t nt = mesh.num_triangles();
  std::vector<std::array<double, 9>> ke(nt), me(nt);
  parallel_for(nt, 0, [&](std::size_t t) {
    const auto& tri = mesh.triangles[t];
    const Vec3 p[3] = {mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]};
    // Edge opposite vertex i.
    const Vec3 e[3] = {p[2] - p[1], p[0] - p[2], p[1] - p[0]};
    const double area = 0.5 * e[0].cross(e[1]).norm();
    if (!(area > 0.0)) throw MeshError("degenerate triangle in assembly");
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        ke[t][3 * i + j] = e[i].dot(e[j]) / (4.0 * area);
        me[t][3 * i + j] = area / 12.0 * (i == j ? 2.0 : 1.0);
      }
  });

  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(9 * nt);
  mt.reserve(9 * nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      const int di = a.dof[tri[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = a.dof[tri[j]];
        if (dj < 0) continue;
        kt.emplace_back(di, dj, ke[t][3 * i + j]);
        mt.emplace_back(di, dj, me[t][3 * i + j]);
      }
    }
  }
  a.K.resize(a.interior, a.interior);
  a.M.resize(a.interior, a.interior);
  a.K.setFromTriplets(kt.begin(), kt.end());
  a.M.setFromTriplets(mt.begin(), mt.end());
  return a;
}

struct RitzPairs {
  Eigen::VectorXd values;
  Mat vectors;  // M-orthonormal columns
  int iterations = 0;
};

RitzPairs dense_pairs(const Assembly& a) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(Mat(a.K), Mat(a.M));
  if (es.info() != Eigen::Success) throw NonConvergence("dense generalized eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors(), 1};
}

RitzPairs subspace_iteration(const Assembly& a, int k, const EigenOptions& opts) {
  const int N = a.interior;
  const int p = std::max(k + 2, opts.block);
  if (N <= 2 * p) return dense_pairs(a);

  Eigen::SimplicialLDLT<SpMat> ldlt(a.K);
  if (ldlt.info() != Eigen::Success) throw MeshError("stiffness factorisation failed");
  if ((ldlt.vectorD().array() <= 0.0).any()) throw MeshError("indefinite stiffness matrix");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  Mat X(N, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < N; ++i) X(i, j) = normal(rng);

  RitzPairs out;
  for (int it = 1; it <= opts.max_iter; ++it) {
    const Mat Y = ldlt.solve(a.M * X);
    const Mat KY = a.K * Y;
    const Mat MY = a.M * Y;
    Mat Ar = Y.transpose() * KY;
    Mat Br = Y.transpose() * MY;
    Ar = 0.5 * (Ar + Ar.transpose());
    Br = 0.5 * (Br + Br.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(Ar, Br);
    if (es.info() != Eigen::Success) throw NonConvergence("Rayleigh-Ritz step failed");
    X = Y * es.eigenvectors();
    const Mat KX = KY * es.eigenvectors();
    const Mat MX = MY * es.eigenvectors();
    double worst = 0.0;
    for (int i = 0; i < k; ++i) {
      const double theta = es.eigenvalues()(i);
      const double r = (KX.col(i) - theta * MX.col(i)).norm() / (theta * MX.col(i).norm());
      worst = std::max(worst, r);
    }
    out.values = es.eigenvalues();
    out.vectors = X;
    out.iterations = it;
    if (worst < opts.tol) return out;
  }
  throw NonConvergence("subspace iteration did not reach the residual tolerance after " +
                       std::to_string(opts.max_iter) + " iterations");
}

/// Vertices of an icosphere with `level` subdivisions.
std::vector<Vec3> icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& x : v) x.normalize();
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& tri : f) {
      const int a = midpoint(tri[0], tri[1]), b = midpoint(tri[1], tri[2]), c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  return v;
}

/// Composite Simpson on the profile grid extended by zero end values.
double profile_integral(const gap::GapProfile& gp, const std::vector<double>& f) {
  std::vector<double> y;
  y.reserve(f.size() + 2);
  y.push_back(0.0);
  y.insert(y.end(), f.begin(), f.end());
  y.push_back(0.0);
  const int intervals = static_cast<int>(y.size()) - 1;
  const double h = gp.spec.theta1 / intervals;
  const int simpson = intervals % 2 == 0 ? intervals : intervals - 3;
  double sum = 0.0;
  for (int i = 0; i < simpson; i += 2) sum += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  if (simpson != intervals) {
    const int i = simpson;
    sum += 3.0 * h / 8.0 * (y[i] + 3.0 * y[i + 1] + 3.0 * y[i + 2] + y[i + 3]);
  }
  return sum;
}

ChainLink make_link(std::string name, double lhs, double rhs, double tolerance) {
  ChainLink l{std::move(name), lhs, rhs, tolerance, false};
  l.ok = lhs - rhs <= tolerance;
  return l;
}

}  // namespace

DomainSpectrum solve_dirichlet(const SphericalDomainMesh& mesh, int k, const EigenOptions& opts) {
  mesh.validate();
  if (k < 2) throw InvalidArgument("at least two eigenpairs are required");
  const Assembly a = assemble(mesh);
  if (a.interior < k) throw MeshError("mesh has fewer interior vertices than requested eigenpairs");
  const RitzPairs rp = subspace_iteration(a, k, opts);

  DomainSpectrum out;
  out.eigenvalues.assign(rp.values.data(), rp.values.data() + k);
  out.lambda1 = out.eigenvalues[0];
  out.lambda2 = out.eigenvalues[1];
  out.iterations = rp.iterations;
  out.mesh_h = mesh.max_edge();

  Eigen::VectorXd u = rp.vectors.col(0);
  u /= std::sqrt(u.dot(a.M * u));
  if (u.sum() < 0.0) u = -u;
  out.u1.assign(mesh.num_vertices(), 0.0);
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i)
    if (a.dof[i] >= 0) out.u1[i] = u(a.dof[i]);
  return out;
}

double QuadratureCells::total_measure() const {
  double s = 0.0;
  for (double m : measure) s += m;
  return s;
}

double QuadratureCells::mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * u[i] * measure[i];
  return s;
}

QuadratureCells make_cells(const SphericalDomainMesh& mesh, const std::vector<double>& u1, int k) {
  if (u1.size() != mesh.num_vertices()) throw InvalidArgument("u1 must have one value per vertex");
  if (k < 1) throw InvalidArgument("subdivision count must be >= 1");
  QuadratureCells cells;
  const std::size_t per = static_cast<std::size_t>(k) * k;
  cells.points.resize(per * mesh.num_triangles());
  cells.measure.resize(cells.points.size());
  cells.u.resize(cells.points.size());
  parallel_for(mesh.num_triangles(), 0, [&](std::size_t t) {
    const auto& tri = mesh.triangles[t];
    const Vec3& A = mesh.vertices[tri[0]];
    const Vec3& Bv = mesh.vertices[tri[1]];
    const Vec3& C = mesh.vertices[tri[2]];
    const double ua = u1[tri[0]], ub = u1[tri[1]], uc = u1[tri[2]];
    // Barycentric lattice point (i, j) -> (i/k, j/k, 1 - (i+j)/k).
    auto bary = [&](double i, double j) { return Eigen::Vector3d(i / k, j / k, 1.0 - (i + j) / k); };
    std::size_t slot = t * per;
    auto emit = [&](const Eigen::Vector3d& b0, const Eigen::Vector3d& b1, const Eigen::Vector3d& b2) {
      auto pos = [&](const Eigen::Vector3d& b) { return Vec3(b(0) * A + b(1) * Bv + b(2) * C); };
      const Eigen::Vector3d bc = (b0 + b1 + b2) / 3.0;
      cells.points[slot] = pos(bc).normalized();
      cells.measure[slot] = spherical_triangle_area(pos(b0), pos(b1), pos(b2));
      cells.u[slot] = bc(0) * ua + bc(1) * ub + bc(2) * uc;
      ++slot;
    };
    for (int i = 0; i < k; ++i)
      for (int j = 0; j + i < k; ++j) {
        emit(bary(i, j), bary(i + 1, j), bary(i, j + 1));
        if (i + j + 1 < k) emit(bary(i + 1, j), bary(i + 1, j + 1), bary(i, j + 1));
      }
  });
  // Zero-measure cells only arise from round-off on tiny triangles; drop them.
  QuadratureCells out;
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells.measure[i] > 0.0) {
      out.points.push_back(cells.points[i]);
      out.measure.push_back(cells.measure[i]);
      out.u.push_back(cells.u[i]);
    }
  return out;
}

rearr::DomainMeasure squared_measure(const QuadratureCells& cells) {
  rearr::DomainMeasure dm;
  dm.entries.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) dm.add(cells.u[i] * cells.u[i], cells.measure[i]);
  return dm;
}

rearr::DomainMeasure level_measure(const SphericalDomainMesh& mesh, const std::vector<double>& u, int slabs) {
  if (u.size() != mesh.num_vertices()) throw InvalidArgument("u must have one value per vertex");
  if (slabs < 1) throw InvalidArgument("slab count must be >= 1");
  rearr::DomainMeasure dm;
  dm.entries.reserve(mesh.num_triangles() * (slabs + 1));
  for (const auto& tri : mesh.triangles) {
    const Vec3& A = mesh.vertices[tri[0]];
    const Vec3& Bv = mesh.vertices[tri[1]];
    const Vec3& C = mesh.vertices[tri[2]];
    const double area = spherical_triangle_area(A, Bv, C);
    if (!(area > 0.0)) continue;
    std::array<double, 3> v = {u[tri[0]], u[tri[1]], u[tri[2]]};
    std::sort(v.begin(), v.end());
    const double u0 = v[0], u1 = v[1], u2 = v[2];
    const double span = u2 - u0;
    if (span <= 1e-14 * std::max(1.0, std::abs(u2))) {
      dm.add((u0 + u1 + u2) / 3.0, area);
      continue;
    }
    // Area fraction below level t is piecewise quadratic; its density is linear.
    auto density = [&](double t) {
      if (t <= u1) return u1 > u0 ? 2.0 * (t - u0) / ((u1 - u0) * span) : 0.0;
      return u2 > u1 ? 2.0 * (u2 - t) / ((u2 - u1) * span) : 0.0;
    };
    std::vector<double> cuts;
    for (int k = 0; k <= slabs; ++k) cuts.push_back(u0 + span * k / slabs);
    cuts.back() = u2;
    if (u1 > u0 && u1 < u2) cuts.push_back(u1);
    std::sort(cuts.begin(), cuts.end());
    constexpr double g = 0.5773502691896257;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k], b = cuts[k + 1];
      if (b <= a) continue;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      const double t1 = mid - half * g, t2 = mid + half * g;
      const double mass = half * (density(t1) + density(t2));
      const double first = half * (t1 * density(t1) + t2 * density(t2));
      if (mass > 0.0) dm.add(first / mass, mass * area);
    }
  }
  return dm;
}

Vec3 moment(const QuadratureCells& cells, const RadialWeight& gtilde, const Vec3& y) {
  const std::size_t n = cells.size();
  std::vector<Vec3> part(kChunks, Vec3::Zero());
  parallel_for(kChunks, 0, [&](std::size_t c) {
    const std::size_t lo = n * c / kChunks, hi = n * (c + 1) / kChunks;
    Vec3 s = Vec3::Zero();
    for (std::size_t i = lo; i < hi; ++i) {
      const Vec3& x = cells.points[i];
      s += x * (gtilde(angle_between(x, y)) * cells.u[i] * cells.u[i] * cells.measure[i]);
    }
    part[c] = s;
  });
  Vec3 v = Vec3::Zero();
  for (const auto& s : part) v += s;
  return v;
}

namespace {

Vec3 w_map(const QuadratureCells& cells, const RadialWeight& gtilde, const Vec3& y) {
  const Vec3 v = moment(cells, gtilde, y);
  if (v.norm() < 1e-12) throw VanishingMoment("weighted first moment vanishes; every frame is centred");
  return v.normalized();
}

void finish(CenterOfMassResult& r, const QuadratureCells& cells, const RadialWeight& gtilde) {
  r.rotation = rotation_to_pole(r.y0);
  const Vec3 v = moment(cells, gtilde, r.y0);
  const Vec3 rv = r.rotation * v;
  r.residuals = {rv.x(), rv.y()};
  r.mass = cells.mass();
  r.defect = (v.normalized() - r.y0).norm();
}

struct FixedPointRun {
  Vec3 y;
  double defect;
  int iterations;
  bool converged;
};

FixedPointRun fixed_point(const QuadratureCells& cells, const RadialWeight& gtilde, Vec3 y,
                          const CenterOfMassOptions& opts) {
  FixedPointRun best{y, std::numeric_limits<double>::infinity(), 0, false};
  int since_best = 0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    const Vec3 w = w_map(cells, gtilde, y);
    const double d = (w - y).norm();
    if (d < best.defect) {
      best = {y, d, it, false};
      since_best = 0;
    } else if (++since_best > 200) {
      break;
    }
    if (d < opts.tol) {
      best.converged = true;
      return best;
    }
    y = ((1.0 - opts.alpha) * y + opts.alpha * w).normalized();
  }
  return best;
}

}  // namespace

CenterOfMassResult center_of_mass_grid(const QuadratureCells& cells, const RadialWeight& gtilde,
                                       const CenterOfMassOptions& opts) {
  auto objective = [&](const Vec3& y) {
    const Vec3 w = w_map(cells, gtilde, y);
    return std::min((w - y).norm(), (w + y).norm());
  };
  const auto grid = icosphere(2);
  Vec3 best = grid.front();
  double fbest = std::numeric_limits<double>::infinity();
  for (const auto& y : grid) {
    const double f = objective(y);
    if (f < fbest) fbest = f, best = y;
  }
  double radius = 0.25;
  int evals = static_cast<int>(grid.size());
  while (radius > 1e-11 && fbest > opts.tol && evals < 20000) {
    Vec3 e1 = (std::abs(best.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY());
    e1 = (e1 - e1.dot(best) * best).normalized();
    const Vec3 e2 = best.cross(e1);
    bool moved = false;
    Vec3 cand_best = best;
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j) {
        if (i == 0 && j == 0) continue;
        const Vec3 d = radius * (i * e1 + j * e2);
        const double r = d.norm();
        const Vec3 y = (std::cos(r) * best + std::sin(r) * d / r).normalized();
        const double f = objective(y);
        ++evals;
        if (f < fbest) fbest = f, cand_best = y, moved = true;
      }
    best = cand_best;
    if (!moved) radius *= 0.5;
  }
  CenterOfMassResult r;
  // An anti-fixed point -y of w is a fixed point, since v(-y) = v(y) for symmetric Gtilde.
  r.y0 = w_map(cells, gtilde, best).dot(best) >= 0.0 ? best : Vec3(-best);
  r.iterations = evals;
  r.method = "grid-refine";
  finish(r, cells, gtilde);
  return r;
}

CenterOfMassResult center_of_mass(const QuadratureCells& cells, const RadialWeight& gtilde,
                                  const CenterOfMassOptions& opts) {
  if (cells.size() == 0) throw InvalidArgument("no quadrature cells");
  if (!(opts.alpha > 0.0 && opts.alpha <= 1.0)) throw InvalidArgument("damping alpha must lie in (0, 1]");
  Vec3 start = Vec3::Zero();
  for (std::size_t i = 0; i < cells.size(); ++i)
    start += cells.points[i] * (cells.u[i] * cells.u[i] * cells.measure[i]);
  if (start.norm() < 1e-300) start = Vec3::UnitZ();
  const auto run = fixed_point(cells, gtilde, start.normalized(), opts);

  CenterOfMassResult r;
  if (run.converged) {
    r.y0 = run.y;
    r.iterations = run.iterations;
    r.method = "fixed-point";
    finish(r, cells, gtilde);
  } else {
    r = center_of_mass_grid(cells, gtilde, opts);
    if (r.defect > std::max(opts.tol, 1e-9))
      throw NonConvergence("center of mass search stalled at |w(y) - y| = " + std::to_string(r.defect));
  }

  if (opts.survey) {
    std::vector<Vec3> found = {r.y0};
    for (const auto& s : icosphere(0)) {
      const auto f = fixed_point(cells, gtilde, s, opts);
      if (!f.converged) continue;
      const bool known = std::any_of(found.begin(), found.end(),
                                     [&](const Vec3& y) { return angle_between(y, f.y) < 1e-6; });
      if (!known) found.push_back(f.y);
    }
    r.multiplicity = static_cast<int>(found.size());
  }
  return r;
}

bool GapBoundReport::ok() const {
  return std::all_of(links.begin(), links.end(), [](const ChainLink& l) { return l.ok; });
}

GapBoundReport gap_bound(const SphericalDomainMesh& mesh, const DomainSpectrum& spectrum,
                         const GapBoundOptions& opts) {
  constexpr int n = 2;
  if (!in_open_hemisphere(mesh)) throw MeshError("domain is not contained in an open hemisphere");
  if (spectrum.u1.size() != mesh.num_vertices()) throw InvalidArgument("spectrum does not belong to this mesh");
  if (!(spectrum.lambda1 >= n))
    throw InvalidArgument("lambda1 < n: no ball of radius <= pi/2 has this first eigenvalue");

  GapBoundReport rep;
  rep.lambda1 = spectrum.lambda1;
  rep.lambda2 = spectrum.lambda2;
  rep.theta_ball = std::min(ball::radius_for_lambda1(n, spectrum.lambda1, opts.shoot), std::numbers::pi / 2);
  gap::ProfileOptions po;
  po.shoot = opts.shoot;
  const auto gp = gap::build_profile({n, rep.theta_ball}, po);
  rep.lambda2_ball = gp.lambda2;

  const auto cells = make_cells(mesh, spectrum.u1, opts.subdivisions);
  const RadialWeight gtilde = [&gp](double t) { return gp.gtilde(t); };
  rep.com = center_of_mass(cells, gtilde, opts.com);
  const Eigen::Matrix3d& R = rep.com.rotation;

  // Domain sums before and after transplanting the southern part to its antipode.
  rearr::DomainMeasure u2, bvals, gvals;
  double I0 = 0.0, J0 = 0.0, I1 = 0.0, J1 = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Vec3 x = R * cells.points[i];
    const double w = cells.u[i] * cells.u[i] * cells.measure[i];
    const double t = std::atan2(x.head<2>().norm(), x.z());
    const double tr = x.z() < 0.0 ? std::numbers::pi - t : t;
    const double b0 = gp.B_ext(t), g0 = gp.g_ext(t);
    const double b1 = gp.B_ext(tr), g1 = gp.g_ext(tr);
    I0 += b0 * w;
    J0 += g0 * g0 * w;
    I1 += b1 * w;
    J1 += g1 * g1 * w;
    u2.add(cells.u[i] * cells.u[i], cells.measure[i]);
    bvals.add(b1, cells.measure[i]);
    gvals.add(g1 * g1, cells.measure[i]);
  }
  const auto u_sharp = rearr::decreasing_rearrangement(u2);
  const double I2 = rearr::integral_product(rearr::decreasing_rearrangement(bvals), u_sharp);
  const double J2 = rearr::integral_product(rearr::increasing_rearrangement(gvals), u_sharp);
  const double area = u_sharp.total();
  auto theta_s = [&](double s) { return rearr::theta_of_volume(n, 1.0, std::min(s, area)); };
  const double I3 = rearr::integral_weighted(u_sharp, [&](double s) { return gp.B_ext(theta_s(s)); });
  const double J3 = rearr::integral_weighted(u_sharp, [&](double s) {
    const double g = gp.g_ext(theta_s(s));
    return g * g;
  });

  // Ball side, with v1 scaled to the same L2 mass as u1.
  std::vector<double> fb(gp.size()), fg(gp.size()), f1(gp.size());
  for (std::size_t i = 0; i < gp.size(); ++i) {
    const double s = std::pow(std::sin(gp.grid[i]), n - 1);
    fb[i] = gp.B[i] * gp.y1[i] * gp.y1[i] * s;
    fg[i] = gp.y2[i] * gp.y2[i] * s;
    f1[i] = gp.y1[i] * gp.y1[i] * s;
  }
  const double mass = cells.mass();
  const double norm = profile_integral(gp, f1);
  const double I4 = mass * profile_integral(gp, fb) / norm;
  const double J4 = mass * profile_integral(gp, fg) / norm;

  rep.b_chain = {I0, I1, I2, I3, I4};
  rep.g_chain = {J0, J1, J2, J3, J4};
  rep.numerator = I0;
  rep.denominator = J0;
  rep.bound = spectrum.lambda1 + I0 / J0;
  rep.ball_quotient = I4 / J4;

  const double exact = 1e-12;
  const double tol = opts.link_tolerance;
  rep.links.push_back(make_link("B: reflection", std::abs(I0 - I1), 0.0, exact * std::abs(I0)));
  rep.links.push_back(make_link("B: rearrangement", I1, I2, exact * std::abs(I2)));
  rep.links.push_back(make_link("B: monotonicity", I2, I3, tol * std::abs(I3)));
  rep.links.push_back(make_link("B: comparison", I3, I4, tol * std::abs(I4)));
  rep.links.push_back(make_link("g2: reflection", std::abs(J0 - J1), 0.0, exact * std::abs(J0)));
  rep.links.push_back(make_link("g2: rearrangement", J2, J1, exact * std::abs(J2)));
  rep.links.push_back(make_link("g2: monotonicity", J3, J2, tol * std::abs(J3)));
  rep.links.push_back(make_link("g2: comparison", J4, J3, tol * std::abs(J4)));
  rep.links.push_back(make_link("ball quotient = lambda2 - lambda1", std::abs(rep.ball_quotient -
                                (gp.lambda2 - gp.lambda1)), 0.0, 1e-6 * (gp.lambda2 - gp.lambda1)));
  rep.links.push_back(make_link("lambda2 <= bound", rep.lambda2, rep.bound, tol * rep.bound));
  rep.links.push_back(make_link("bound <= lambda2(ball)", rep.bound, rep.lambda2_ball, tol * rep.lambda2_ball));
  const double orth = 1e-8 * rep.com.mass;
  rep.links.push_back(make_link("orthogonality", std::max(std::abs(rep.com.residuals[0]),
                                std::abs(rep.com.residuals[1])), 0.0, orth));
  return rep;
}

MeshErrorEstimate mesh_error_estimate(const DomainParams& params, const EigenOptions& opts) {
  MeshErrorEstimate e;
  DomainParams p = params;
  e.fine = solve_dirichlet(make_domain(p), 2, opts);
  p.h = 2.0 * params.h;
  e.coarse = solve_dirichlet(make_domain(p), 2, opts);
  p.h = 4.0 * params.h;
  const auto coarsest = solve_dirichlet(make_domain(p), 2, opts);
  const double d1 = e.fine.lambda1 - e.coarse.lambda1;
  const double d2 = e.fine.lambda2 - e.coarse.lambda2;
  e.err1 = std::abs(d1) / 3.0;
  e.err2 = std::abs(d2) / 3.0;
  e.lambda1_extrapolated = e.fine.lambda1 + d1 / 3.0;
  e.lambda2_extrapolated = e.fine.lambda2 + d2 / 3.0;
  const double d1c = e.coarse.lambda1 - coarsest.lambda1;
  e.observed_order = (d1 != 0.0 && d1c != 0.0) ? std::log2(std::abs(d1c / d1))
                                               : std::numeric_limits<double>::quiet_NaN();
  return e;
}

PPWReport ppw_check(const SphericalDomainMesh& mesh, double lambda1, double lambda2, double tolerance,
                    const ball::ShootOptions& shoot) {
  constexpr int n = 2;
  if (!in_open_hemisphere(mesh)) throw MeshError("domain is not contained in an open hemisphere");
  if (!(lambda1 > 0.0 && lambda2 >= lambda1)) throw InvalidArgument("need 0 < lambda1 <= lambda2");
  if (!(lambda1 >= n)) throw InvalidArgument("lambda1 < n: no ball of radius <= pi/2 has this first eigenvalue");
  PPWReport r;
  r.lambda1 = lambda1;
  r.lambda2 = lambda2;
  r.ratio = lambda2 / lambda1;
  r.tolerance = tolerance;
  r.area = spherical_area(mesh);
  r.theta_star = rearr::theta_of_volume(n, 1.0, r.area);
  const auto star = ball::spectral_pair({n, r.theta_star}, shoot);
  r.lambda1_star = star.lambda1;
  r.lambda2_star = star.lambda2;
  r.ratio_star = star.lambda2 / star.lambda1;
  r.theta_ball = std::min(ball::radius_for_lambda1(n, lambda1, shoot), std::numbers::pi / 2);
  r.lambda2_ball = ball::spectral_pair({n, r.theta_ball}, shoot).lambda2;

  r.margin_i1 = r.lambda2_ball - lambda2;
  r.margin_i4 = r.ratio_star - r.ratio;
  r.margin_sperner = lambda1 - r.lambda1_star;
  r.margin_radii = r.theta_star - r.theta_ball;

  // Eigenvalue allowance translated to each quantity.
  const double tol_ratio = tolerance * (1.0 + r.ratio) / lambda1;
  const double tol_theta = 0.5 * r.theta_ball * tolerance / lambda1;
  r.i1_ok = r.margin_i1 >= -tolerance;
  r.i4_ok = r.margin_i4 >= -tol_ratio;
  r.sperner_ok = r.margin_sperner >= -tolerance;
  r.radii_ok = r.margin_radii >= -tol_theta;
  return r;
}

}  // namespace sphereppw::domain
