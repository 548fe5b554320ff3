#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"

namespace isopar::mesh {

/// Boundary edge binding. Local edge e of a triangle joins its local vertices
/// e and (e + 1) % 3, which sit at arc parameters s_a and s_b respectively.
struct BoundaryEdge {
  int triangle = 0;
  int local_edge = 0;
  int arc = 0;
  double s_a = 0.0;
  double s_b = 0.0;

  bool operator==(const BoundaryEdge&) const = default;
};

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary;
  double h = 0.0;  // max triangle diameter

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  /// Recomputes h from the triangles.
  void update_size();
};

struct MeshOptions {
  double max_shape_ratio = 8.0;  // rho_max
  std::uint64_t seed = 42;
  int smoothing_sweeps = 10;
  double jitter = 0.1;  // lattice jitter amplitude as a fraction of the pitch
};

/// Triangle diameter, inradius and signed area.
double triangle_area(const Mesh& m, int t);
double triangle_diameter(const Mesh& m, int t);
double triangle_inradius(const Mesh& m, int t);

/// Builds a quasi-uniform triangulation with boundary vertices on the arcs.
/// Throws ErrorCode::Precondition for h_target >= half the domain diameter
/// and ErrorCode::Quality when the result violates the quality bounds.
Mesh generate(const geometry::CurvilinearPolygon& polygon, double h_target, const MeshOptions& options = {});

struct Violation {
  std::string kind;
  int element = -1;
  std::string detail;
};

struct MeshReport {
  bool ok = true;
  int vertices = 0;
  int triangles = 0;
  int edges = 0;
  int boundary_edges = 0;
  int euler_characteristic = 0;  // V - E + T
  double h_max = 0.0;
  double h_min = 0.0;
  double min_angle_deg = 0.0;
  double max_shape_ratio = 0.0;      // max over triangles of diameter / inradius
  double quasi_uniformity = 0.0;     // max diameter / min inradius over the mesh
  std::vector<Violation> violations;
};

/// Checks every Mesh invariant. Arc binding and corner checks need the polygon.
MeshReport validate(const Mesh& mesh, const geometry::CurvilinearPolygon* polygon = nullptr,
                    double max_shape_ratio = 8.0);

/// Text format: header `meshv1 <nv> <nt> <nb>`, then `x y`, `i j k`, and
/// `t e arc s_a s_b` lines. Numbers are written with 17 significant digits.
void write_mesh(const Mesh& mesh, const std::string& path);
std::string format_mesh(const Mesh& mesh);
Mesh read_mesh(const std::string& path);
Mesh parse_mesh(const std::string& text);

}  // namespace isopar::mesh
