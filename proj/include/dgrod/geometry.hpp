#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace dgrod {

using Point = Eigen::Vector2d;

enum class CurveId { outer, inner };

const char* to_string(CurveId id);

enum class DomainKind { disk, annulus, rose };

const char* to_string(DomainKind kind);

/// Smooth physical domain whose boundary curves are star-shaped about the
/// origin, so every curve is a polar graph r = R(theta).
///
/// - disk:    one curve, R(theta) = radius.
/// - annulus: outer circle r_E and inner circle r_I (the hole).
/// - rose:    annulus pushed through (r', theta') -> (r'(1 - beta + beta cos(alpha theta')), theta').
class CurvedDomain {
 public:
  static CurvedDomain disk(double radius);
  static CurvedDomain annulus(double inner_radius, double outer_radius);
  static CurvedDomain rose(double inner_radius, double outer_radius, int petals, double magnitude);

  DomainKind kind() const noexcept { return kind_; }
  double inner_radius() const noexcept { return inner_; }
  double outer_radius() const noexcept { return outer_; }
  int petals() const noexcept { return petals_; }
  double magnitude() const noexcept { return magnitude_; }

  /// Largest reference radius; geometric tolerances are relative to it.
  double scale() const noexcept { return outer_; }

  std::vector<CurveId> curves() const;
  bool has_curve(CurveId id) const noexcept;

  /// Radial factor 1 - beta + beta cos(alpha theta); identically 1 for circles.
  double radial_factor(double theta) const noexcept;

  /// Polar radius of curve `id` at angle theta.
  double curve_radius(CurveId id, double theta) const;

  /// Image of the reference polar point (r', theta') under the domain map.
  Point map_reference(double r, double theta) const noexcept;

  Point boundary_point(CurveId id, double theta) const;

  /// |‖p‖ − R(angle(p))| for curve `id`.
  double boundary_residual(CurveId id, const Point& p) const;

  /// Curve with the smallest residual at p.
  CurveId nearest_curve(const Point& p) const;

  /// Minimum residual over all curves.
  double distance_to_boundary(const Point& p) const;

  /// Radially moves p onto curve `id`.
  Point snap(CurveId id, const Point& p) const;

  /// Closed-domain membership; points within 1e-12 * scale of the boundary count.
  bool contains(const Point& p) const;

  double area() const noexcept;

 private:
  CurvedDomain(DomainKind kind, double inner, double outer, int petals, double magnitude);

  DomainKind kind_;
  double inner_;
  double outer_;
  int petals_;
  double magnitude_;
};

struct BoundaryHit {
  Point point;
  double ray_parameter;  // distance from the ray origin
  CurveId curve;
  bool tangent_ambiguity = false;
};

/// Intersection of the ray origin -> through with the boundary that lies
/// nearest to `through`. Throws Error(NoIntersection) when the ray misses.
/// Circles are solved in closed form; rose curves are bracketed on 64 samples
/// over [0.5, 2] times the chord length and bisected to 1e-14 relative.
BoundaryHit ray_boundary_intersect(const CurvedDomain& domain, const Point& origin,
                                   const Point& through);

/// Polar angle in [0, 2pi).
double polar_angle(const Point& p) noexcept;

}  // namespace dgrod
