#include "dgrod/mesh.hpp"

#include "dgrod/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <utility>

namespace dgrod {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

std::string format_violation(const char* what, int index, double value) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s (index %d, value %.3e)", what, index, value);
  return buf;
}

}  // namespace

Triangulation Triangulation::build(std::vector<Point> vertices,
                                   std::vector<std::array<int, 3>> triangles) {
  Triangulation tri;
  tri.vertices_ = std::move(vertices);
  tri.triangles_ = std::move(triangles);
  const int nv = tri.num_vertices();
  for (auto& t : tri.triangles_) {
    for (int v : t)
      if (v < 0 || v >= nv) throw Error(ErrorCode::IndexOutOfRange, "triangle vertex index");
  }

  const int K = tri.num_elements();
  tri.element_edges_.assign(K, {-1, -1, -1});
  std::map<std::pair<int, int>, int> edge_index;
  for (int k = 0; k < K; ++k) {
    for (int le = 0; le < 3; ++le) {
      const int a = tri.triangles_[k][le];
      const int b = tri.triangles_[k][(le + 1) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_index.try_emplace({key.first, key.second},
                                                   static_cast<int>(tri.edges_.size()));
      if (inserted) {
        tri.edges_.push_back(Edge{{a, b}, k, kBoundary, le, -1, Point::Zero(), 0.0});
      } else {
        Edge& e = tri.edges_[it->second];
        if (e.right != kBoundary) {
          throw Error(ErrorCode::NonConformingMesh,
                      "edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") shared by more than two triangles");
        }
        e.right = k;
        e.right_local = le;
      }
      tri.element_edges_[k][le] = it->second;
    }
  }
  tri.compute_metrics();
  return tri;
}

void Triangulation::compute_metrics() {
  const int K = num_elements();
  for (Edge& e : edges_) {
    const Point a = vertices_[e.vertices[0]];
    const Point b = vertices_[e.vertices[1]];
    const Point t = b - a;
    e.length = t.norm();
    // Counterclockwise traversal of `left`: outward normal is the tangent rotated clockwise.
    e.normal = Point(t.y(), -t.x()) / e.length;
  }

  diameter_.assign(K, 0.0);
  inradius_.assign(K, 0.0);
  area_.assign(K, 0.0);
  boundary_edge_.assign(K, -1);
  boundary_local_edge_.assign(K, -1);
  opposite_vertex_.assign(K, -1);
  boundary_edge_count_.assign(K, 0);
  boundary_elements_.clear();
  h_ = 0.0;

  for (int k = 0; k < K; ++k) {
    const auto& t = triangles_[k];
    const Point& a = vertices_[t[0]];
    const Point& b = vertices_[t[1]];
    const Point& c = vertices_[t[2]];
    area_[k] = signed_area(a, b, c);
    double perimeter = 0.0;
    for (int le = 0; le < 3; ++le) {
      const Edge& e = edges_[element_edges_[k][le]];
      perimeter += e.length;
      diameter_[k] = std::max(diameter_[k], e.length);
      if (e.is_boundary()) {
        if (boundary_edge_count_[k] == 0) {
          boundary_edge_[k] = element_edges_[k][le];
          boundary_local_edge_[k] = le;
          opposite_vertex_[k] = (le + 2) % 3;
        }
        ++boundary_edge_count_[k];
      }
    }
    inradius_[k] = 2.0 * std::abs(area_[k]) / perimeter;
    h_ = std::max(h_, diameter_[k]);
    if (boundary_edge_count_[k] > 0) boundary_elements_.push_back(k);
  }
}

double Triangulation::total_area() const noexcept {
  double sum = 0.0;
  for (double a : area_) sum += a;
  return sum;
}

void Triangulation::move_vertex(int v, const Point& p) {
  vertices_.at(v) = p;
  compute_metrics();
}

void Triangulation::dump(std::ostream& out) const {
  char buf[96];
  for (const Point& p : vertices_) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", p.x(), p.y());
    out << buf;
  }
  for (const auto& t : triangles_) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

MeshQualityReport validate(const Triangulation& tri, const CurvedDomain& domain) {
  MeshQualityReport report;
  report.K = tri.num_elements();
  report.h = tri.h();
  report.mu_min = report.K > 0 ? 1.0 : 0.0;

  if (report.K == 0) {
    report.violations.emplace_back("empty mesh");
    return report;
  }

  for (int k = 0; k < report.K; ++k) {
    if (!(tri.area(k) > 0.0))
      report.violations.push_back(format_violation("non-positive element area", k, tri.area(k)));
    if (tri.boundary_edge_count(k) > 1) {
      report.violations.push_back(format_violation("element has more than one edge on the boundary",
                                                   k, tri.boundary_edge_count(k)));
    }
    const double ratio = tri.diameter(k) / tri.inradius(k);
    if (std::isfinite(ratio)) report.rho_ratio_max = std::max(report.rho_ratio_max, ratio);
  }

  for (int k : tri.boundary_elements()) {
    for (int le = 0; le < 3; ++le) {
      const double he = tri.edges()[tri.element_edges(k)[le]].length;
      report.mu_min = std::min(report.mu_min, he / tri.diameter(k));
    }
  }

  std::vector<char> on_boundary(tri.num_vertices(), 0);
  for (const Edge& e : tri.edges()) {
    if (e.is_boundary()) on_boundary[e.vertices[0]] = on_boundary[e.vertices[1]] = 1;
    if (!e.is_boundary()) {
      const double len = (tri.vertices()[e.vertices[1]] - tri.vertices()[e.vertices[0]]).norm();
      if (std::abs(len - e.length) > 1e-15 * std::max(1.0, len))
        report.violations.push_back(format_violation("edge length mismatch", e.left, len));
    }
  }

  const double tol = 1e-12 * std::max(tri.h(), 1e-300);
  for (int v = 0; v < tri.num_vertices(); ++v) {
    if (!on_boundary[v]) continue;
    const double residual = domain.distance_to_boundary(tri.vertices()[v]);
    report.boundary_vertex_residual_max = std::max(report.boundary_vertex_residual_max, residual);
    if (residual > tol)
      report.violations.push_back(format_violation("boundary vertex off ∂Ω", v, residual));
  }

  if (!std::isfinite(report.rho_ratio_max)) report.violations.emplace_back("non-finite metrics");
  return report;
}

}  // namespace dgrod
