#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sphereppw::domain {

using Vec3 = Eigen::Vector3d;

/// Triangulated domain on the unit sphere S^2.
struct SphericalDomainMesh {
  std::vector<Vec3> vertices;                // unit vectors
  std::vector<std::array<int, 3>> triangles; // counter-clockwise seen from outside
  std::vector<char> boundary;                // one flag per vertex
  std::string provenance;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  /// Unit norms, index ranges, non-degenerate triangles, consistent
  /// orientation and edge manifoldness. Throws MeshError.
  void validate() const;
  double max_edge() const;
  /// Edges used by exactly one triangle, oriented as in that triangle.
  std::vector<std::array<int, 2>> boundary_edges() const;
};

enum class DomainKind { Cap, PerturbedCap, GeodesicPolygon };

struct DomainParams {
  DomainKind kind = DomainKind::Cap;
  double theta1 = 1.0;          // cap radius
  double amplitude = 0.0;       // perturbed cap: theta_b = theta1 (1 + amplitude cos(k phi))
  int wavenumber = 3;
  std::vector<Vec3> corners;    // geodesic polygon, counter-clockwise around its centre
  double h = 0.05;              // target edge length
  Vec3 center = Vec3::UnitZ();  // pole the domain is generated around
  bool require_hemisphere = true;
};

/// Concentric-ring triangulation of a domain star-shaped about `center`.
SphericalDomainMesh make_domain(const DomainParams& params);

std::string kind_name(DomainKind kind);

/// Sum of spherical triangle areas (exact spherical excess of each triangle).
double spherical_area(const SphericalDomainMesh& mesh);
/// Sum of great-circle arc lengths of the boundary edges.
double boundary_length(const SphericalDomainMesh& mesh);
/// Area of the flat (chordal) triangles used by the finite elements.
double flat_area(const SphericalDomainMesh& mesh);

/// True when some direction d has x . d > 0 for every vertex; `direction`
/// receives the witness.
bool in_open_hemisphere(const SphericalDomainMesh& mesh, Vec3* direction = nullptr);

/// Mesh with every vertex mapped by the rotation R.
SphericalDomainMesh rotated(const SphericalDomainMesh& mesh, const Eigen::Matrix3d& R);

/// Rotation whose last row is y (so R y = e_z).
Eigen::Matrix3d rotation_to_pole(const Vec3& y);

/// Plain-text format: "v x y z", "t i j k", "b i" lines with 0-based indices;
/// '#' starts a comment.
void write_mesh(std::ostream& os, const SphericalDomainMesh& mesh);
SphericalDomainMesh read_mesh(std::istream& is);

}  // namespace sphereppw::domain
