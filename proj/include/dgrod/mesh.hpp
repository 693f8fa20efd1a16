#pragma once

#include "dgrod/geometry.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace dgrod {

inline constexpr int kBoundary = -1;

/// Mesh edge. `left` always exists; `right` is kBoundary on ∂Ω_h. The stored
/// normal points out of `left`; the right element sees its negation.
struct Edge {
  std::array<int, 2> vertices;
  int left;
  int right;
  int left_local;   // local edge index of this edge in `left`
  int right_local;  // local edge index in `right`, or -1
  Point normal;
  double length;

  bool is_boundary() const noexcept { return right == kBoundary; }
};

/// Conforming straight-sided triangulation with connectivity and metrics.
///
/// Local edge i of a triangle joins local vertices i and (i + 1) % 3; its
/// opposite vertex is (i + 2) % 3.
class Triangulation {
 public:
  Triangulation() = default;

  /// Builds connectivity from counterclockwise triangles (orientation is not
  /// repaired; validate() reports non-positive areas). Throws
  /// NonConformingMesh when an edge has more than two triangles.
  static Triangulation build(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles);

  int num_elements() const noexcept { return static_cast<int>(triangles_.size()); }
  int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const noexcept { return triangles_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  Point vertex(int k, int local) const { return vertices_[triangles_[k][local]]; }
  const std::array<int, 3>& element_edges(int k) const { return element_edges_[k]; }

  double diameter(int k) const { return diameter_[k]; }
  double inradius(int k) const { return inradius_[k]; }
  double area(int k) const { return area_[k]; }

  /// Global edge index of the element's edge on ∂Ω_h, -1 for interior elements.
  /// If an element has several boundary edges the first is reported here and
  /// validate() flags the mesh.
  int boundary_edge(int k) const { return boundary_edge_[k]; }
  int boundary_local_edge(int k) const { return boundary_local_edge_[k]; }
  /// Local index of the vertex opposite the boundary edge (O_k), -1 if none.
  int opposite_vertex(int k) const { return opposite_vertex_[k]; }
  int boundary_edge_count(int k) const { return boundary_edge_count_[k]; }

  /// Index set I^B of elements with a boundary edge, ascending.
  const std::vector<int>& boundary_elements() const noexcept { return boundary_elements_; }

  double h() const noexcept { return h_; }
  double total_area() const noexcept;

  /// Replaces vertex coordinates (used for snapping); metrics are recomputed.
  void move_vertex(int v, const Point& p);

  /// Line-oriented debug dump: `v x y` and `t i j k`.
  void dump(std::ostream& out) const;

 private:
  void compute_metrics();

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> element_edges_;
  std::vector<double> diameter_;
  std::vector<double> inradius_;
  std::vector<double> area_;
  std::vector<int> boundary_edge_;
  std::vector<int> boundary_local_edge_;
  std::vector<int> opposite_vertex_;
  std::vector<int> boundary_edge_count_;
  std::vector<int> boundary_elements_;
  double h_ = 0.0;
};

struct MeshQualityReport {
  int K = 0;
  double h = 0.0;
  double rho_ratio_max = 0.0;  // max h_k / rho_k
  double mu_min = 0.0;         // min h_e / h_k over boundary elements
  double boundary_vertex_residual_max = 0.0;
  std::vector<std::string> violations;

  bool passed() const noexcept { return violations.empty(); }
};

/// Checks the mesh invariants against `domain` and measures quality metrics.
/// Never throws; failures are listed in `violations`.
MeshQualityReport validate(const Triangulation& tri, const CurvedDomain& domain);

/// Concentric rings: ring i at radius R i / rings carries 6 i vertices.
Triangulation generate_disk_mesh(const CurvedDomain& domain, int rings);

/// Quad bands between r_I and r_E, max(16, 8 rings) vertices per ring, each
/// quad split in two.
Triangulation generate_annulus_mesh(const CurvedDomain& domain, int rings);

/// Annulus mesh pushed through the rose map (r', theta') -> (R(r', theta'), theta').
Triangulation generate_rose_mesh(const CurvedDomain& domain, int rings);

/// Dispatches on the domain kind.
Triangulation generate_mesh(const CurvedDomain& domain, int rings);

/// Gmsh MSH 2.2 ASCII reader (2-node lines and 3-node triangles). Boundary
/// vertices within 1e-8 h of the physical boundary are snapped onto it.
Triangulation read_gmsh(std::istream& in, const CurvedDomain& domain);

}  // namespace dgrod
