#include "dgrod/error.hpp"
#include "dgrod/mesh.hpp"

#include <cmath>
#include <numbers>

namespace dgrod {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_rings(int rings) {
  if (rings < 1) throw Error(ErrorCode::InvalidArgument, "rings must be >= 1");
}

void require_kind(const CurvedDomain& domain, DomainKind kind) {
  if (domain.kind() != kind)
    throw Error(ErrorCode::InvalidArgument,
                std::string("generator expects a ") + to_string(kind) + " domain");
}

// Quad bands over the reference annulus; `place` maps (r', theta') to the plane.
template <class Place>
Triangulation banded_annulus(const CurvedDomain& domain, int rings, Place place) {
  const int n = std::max(16, 8 * rings);
  const double ri = domain.inner_radius();
  const double re = domain.outer_radius();
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>((rings + 1) * n));
  for (int j = 0; j <= rings; ++j) {
    // Both extreme rings use the exact radii so they land on the curves.
    const double r = (j == 0) ? ri : (j == rings ? re : ri + (re - ri) * j / rings);
    for (int i = 0; i < n; ++i) vertices.push_back(place(r, kTwoPi * i / n));
  }
  auto id = [n](int j, int i) { return j * n + (i % n); };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<std::size_t>(2 * n * rings));
  for (int j = 0; j < rings; ++j) {
    for (int i = 0; i < n; ++i) {
      triangles.push_back({id(j, i), id(j + 1, i + 1), id(j, i + 1)});
      triangles.push_back({id(j, i), id(j + 1, i), id(j + 1, i + 1)});
    }
  }
  return Triangulation::build(std::move(vertices), std::move(triangles));
}

}  // namespace

Triangulation generate_disk_mesh(const CurvedDomain& domain, int rings) {
  require_kind(domain, DomainKind::disk);
  require_rings(rings);
  const double R = domain.outer_radius();

  std::vector<Point> vertices{Point::Zero()};
  std::vector<int> ring_start{0};
  for (int i = 1; i <= rings; ++i) {
    ring_start.push_back(static_cast<int>(vertices.size()));
    const double r = (i == rings) ? R : R * i / rings;
    for (int j = 0; j < 6 * i; ++j) {
      const double theta = kTwoPi * j / (6 * i);
      vertices.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
  }
  auto ring_vertex = [&](int i, int j) {
    if (i == 0) return 0;
    return ring_start[i] + j % (6 * i);
  };

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<std::size_t>(6 * rings * rings));
  for (int i = 1; i <= rings; ++i) {
    for (int s = 0; s < 6; ++s) {
      // Outer ring contributes i + 1 points to this sector, inner ring i.
      for (int j = 0; j < i; ++j) {
        const int a0 = ring_vertex(i, i * s + j);
        const int a1 = ring_vertex(i, i * s + j + 1);
        const int b0 = ring_vertex(i - 1, (i - 1) * s + j);
        triangles.push_back({a0, a1, b0});
        if (j + 1 < i) {
          const int b1 = ring_vertex(i - 1, (i - 1) * s + j + 1);
          triangles.push_back({b0, a1, b1});
        }
      }
    }
  }
  return Triangulation::build(std::move(vertices), std::move(triangles));
}

Triangulation generate_annulus_mesh(const CurvedDomain& domain, int rings) {
  require_kind(domain, DomainKind::annulus);
  require_rings(rings);
  return banded_annulus(domain, rings, [](double r, double theta) {
    return Point(r * std::cos(theta), r * std::sin(theta));
  });
}

Triangulation generate_rose_mesh(const CurvedDomain& domain, int rings) {
  require_kind(domain, DomainKind::rose);
  require_rings(rings);
  Triangulation tri = banded_annulus(
      domain, rings, [&domain](double r, double theta) { return domain.map_reference(r, theta); });
  for (int k = 0; k < tri.num_elements(); ++k) {
    if (!(tri.area(k) > 0.0))
      throw Error(ErrorCode::InvalidArgument, "rose map produced an inverted element");
  }
  return tri;
}

Triangulation generate_mesh(const CurvedDomain& domain, int rings) {
  switch (domain.kind()) {
    case DomainKind::disk: return generate_disk_mesh(domain, rings);
    case DomainKind::annulus: return generate_annulus_mesh(domain, rings);
    case DomainKind::rose: return generate_rose_mesh(domain, rings);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown domain kind");
}

}  // namespace dgrod
