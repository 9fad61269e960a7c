#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sphereppw/gap_profile.hpp"
#include "sphereppw/mesh.hpp"
#include "sphereppw/rearrangement.hpp"

namespace sphereppw::domain {

struct EigenOptions {
  int block = 8;          // subspace dimension
  int max_iter = 400;
  double tol = 1e-10;     // relative residual of the wanted pairs
  std::uint64_t seed = 7; // start block
};

/// Smallest Dirichlet eigenpairs of the P1 discretisation on flat triangles.
struct DomainSpectrum {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<double> eigenvalues;  // the k requested values
  std::vector<double> u1;           // vertex values, zero on the boundary, u1 > 0 inside, u1' M u1 = 1
  double mesh_h = 0.0;
  int iterations = 0;
};

DomainSpectrum solve_dirichlet(const SphericalDomainMesh& mesh, int k = 2, const EigenOptions& opts = {});

/// Sub-triangle quadrature: every triangle split into k^2 pieces; each piece
/// carries its centroid direction on the sphere, spherical area and the P1 value of u1.
struct QuadratureCells {
  std::vector<Vec3> points;
  std::vector<double> measure;
  std::vector<double> u;

  std::size_t size() const { return points.size(); }
  double total_measure() const;
  double mass() const;  // sum of u^2 * measure
};

QuadratureCells make_cells(const SphericalDomainMesh& mesh, const std::vector<double>& u1, int subdivisions = 3);

/// Cells with u^2 as value: the input to the rearrangement module.
rearr::DomainMeasure squared_measure(const QuadratureCells& cells);

/// Exact distribution of the P1 interpolant of u: every triangle contributes
/// `slabs` level bands (split at the middle vertex value), each carrying the
/// band's mean value of u and its area scaled to the spherical triangle area.
rearr::DomainMeasure level_measure(const SphericalDomainMesh& mesh, const std::vector<double>& u, int slabs = 8);

struct CenterOfMassOptions {
  double alpha = 0.5;     // damping of the fixed-point map
  double tol = 1e-13;     // |w(y) - y| at convergence
  int max_iter = 5000;
  bool survey = false;    // count distinct fixed points from 12 icosahedral starts
};

struct CenterOfMassResult {
  Vec3 y0 = Vec3::UnitZ();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // last row y0
  std::array<double, 2> residuals{};  // int x_i' Gtilde u^2 in the rotated frame
  double mass = 0.0;
  double defect = 0.0;                // |w(y0) - y0|
  int iterations = 0;
  std::string method;                 // "fixed-point" or "grid-refine"
  int multiplicity = 1;
};

using RadialWeight = std::function<double(double)>;

/// v(y) = sum_c x_c Gtilde(angle(x_c, y)) u_c^2 mu_c.
Vec3 moment(const QuadratureCells& cells, const RadialWeight& gtilde, const Vec3& y);

/// Fixed point of w(y) = v(y)/|v(y)| with a grid-refinement fallback.
CenterOfMassResult center_of_mass(const QuadratureCells& cells, const RadialWeight& gtilde,
                                  const CenterOfMassOptions& opts = {});

/// Grid search over an icosphere followed by shrinking local patches,
/// minimising min(|w(y) - y|, |w(y) + y|). Exposed for cross-checks.
CenterOfMassResult center_of_mass_grid(const QuadratureCells& cells, const RadialWeight& gtilde,
                                       const CenterOfMassOptions& opts = {});

struct ChainLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;  // allowed lhs - rhs
  bool ok = false;
};

struct GapBoundOptions {
  int subdivisions = 3;
  double link_tolerance = 0.0;  // relative slack on the inequalities that carry mesh error
  ball::ShootOptions shoot{};
  CenterOfMassOptions com{};
};

struct GapBoundReport {
  double lambda1 = 0.0;        // of the domain
  double lambda2 = 0.0;
  double theta_ball = 0.0;     // radius of B_{lambda1}
  double lambda2_ball = 0.0;   // lambda2(B_{lambda1})
  double numerator = 0.0;      // int B u^2
  double denominator = 0.0;    // int g^2 u^2
  double bound = 0.0;          // lambda1 + numerator / denominator
  double ball_quotient = 0.0;  // int_B B v^2 / int_B g^2 v^2
  std::array<double, 5> b_chain{};  // domain, reflected, rearranged, monotone, ball
  std::array<double, 5> g_chain{};
  std::vector<ChainLink> links;
  CenterOfMassResult com;
  bool ok() const;
};

GapBoundReport gap_bound(const SphericalDomainMesh& mesh, const DomainSpectrum& spectrum,
                         const GapBoundOptions& opts = {});

struct MeshErrorEstimate {
  DomainSpectrum fine;     // at h
  DomainSpectrum coarse;   // at 2h
  double err1 = 0.0;       // |lambda1(h) - lambda1(2h)| / 3
  double err2 = 0.0;
  double lambda1_extrapolated = 0.0;
  double lambda2_extrapolated = 0.0;
  double observed_order = 0.0;  // log2 of successive lambda1 differences over 4h, 2h, h
};

/// Richardson estimate from meshes at h and 2h of the same domain (4h for the order).
MeshErrorEstimate mesh_error_estimate(const DomainParams& params, const EigenOptions& opts = {});

struct PPWReport {
  double area = 0.0;            // |Omega| by spherical excess
  double theta_star = 0.0;      // radius of Omega*
  double theta_ball = 0.0;      // radius of B_{lambda1}
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double ratio = 0.0;
  double lambda1_star = 0.0;
  double lambda2_star = 0.0;
  double ratio_star = 0.0;
  double lambda2_ball = 0.0;
  double margin_i1 = 0.0;       // lambda2(B_{lambda1}) - lambda2(Omega)
  double margin_i4 = 0.0;       // ratio(Omega*) - ratio(Omega)
  double margin_sperner = 0.0;  // lambda1(Omega) - lambda1(Omega*)
  double margin_radii = 0.0;    // theta(Omega*) - theta(B_{lambda1})
  double tolerance = 0.0;       // mesh-error allowance applied to every margin
  bool i1_ok = false;
  bool i4_ok = false;
  bool sperner_ok = false;
  bool radii_ok = false;
  bool ok() const { return i1_ok && i4_ok && sperner_ok && radii_ok; }
};

/// Inequality checks from given eigenvalues; `tolerance` is subtracted from every margin.
PPWReport ppw_check(const SphericalDomainMesh& mesh, double lambda1, double lambda2, double tolerance = 0.0,
                    const ball::ShootOptions& shoot = {});

}  // namespace sphereppw::domain
