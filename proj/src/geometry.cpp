#include "dgrod/geometry.hpp"

#include "dgrod/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dgrod {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kBisectionTol = 1e-14;
constexpr double kAmbiguityTol = 1e-10;
constexpr int kRoseSamples = 64;

struct Candidate {
  double t;
  CurveId curve;
};

// Roots t > 0 of |origin + t dir| = radius with dir a unit vector.
void circle_roots(const Point& origin, const Point& dir, double radius, CurveId curve,
                  double t_min, std::vector<Candidate>& out) {
  const double b = origin.dot(dir);
  const double c = origin.squaredNorm() - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  // Stable pairing: q = -(b + sign(b) sq); roots q and c / q.
  const double q = -(b + std::copysign(sq, b));
  double t1 = q;
  double t2 = (q != 0.0) ? c / q : -b;
  if (t1 > t2) std::swap(t1, t2);
  if (t1 > t_min) out.push_back({t1, curve});
  if (t2 > t_min && t2 != t1) out.push_back({t2, curve});
}

double curve_gap(const CurvedDomain& domain, CurveId curve, const Point& p) {
  return p.norm() - domain.curve_radius(curve, polar_angle(p));
}

double bisect(const CurvedDomain& domain, CurveId curve, const Point& origin, const Point& dir,
              double lo, double hi) {
  double g_lo = curve_gap(domain, curve, origin + lo * dir);
  for (int it = 0; it < 200 && (hi - lo) > kBisectionTol * std::max(hi, 1e-300); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = curve_gap(domain, curve, origin + mid * dir);
    if (g_mid == 0.0) return mid;
    if ((g_mid < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Sign changes of the polar gap sampled on [lo, hi].
void bracketed_roots(const CurvedDomain& domain, CurveId curve, const Point& origin,
                     const Point& dir, double lo, double hi, int samples,
                     std::vector<Candidate>& out) {
  double t_prev = lo;
  double g_prev = curve_gap(domain, curve, origin + lo * dir);
  for (int i = 1; i <= samples; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / samples;
    const double g = curve_gap(domain, curve, origin + t * dir);
    if (g_prev == 0.0) {
      out.push_back({t_prev, curve});
    } else if ((g < 0.0) != (g_prev < 0.0) && g != 0.0) {
      out.push_back({bisect(domain, curve, origin, dir, t_prev, t), curve});
    }
    t_prev = t;
    g_prev = g;
  }
  if (g_prev == 0.0) out.push_back({t_prev, curve});
}

}  // namespace

const char* to_string(CurveId id) {
  return id == CurveId::outer ? "outer" : "inner";
}

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::disk: return "disk";
    case DomainKind::annulus: return "annulus";
    case DomainKind::rose: return "rose";
  }
  return "?";
}

CurvedDomain::CurvedDomain(DomainKind kind, double inner, double outer, int petals,
                           double magnitude)
    : kind_(kind), inner_(inner), outer_(outer), petals_(petals), magnitude_(magnitude) {}

CurvedDomain CurvedDomain::disk(double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "disk radius must be > 0");
  return CurvedDomain(DomainKind::disk, 0.0, radius, 0, 0.0);
}

CurvedDomain CurvedDomain::annulus(double inner_radius, double outer_radius) {
  if (!(inner_radius > 0.0 && inner_radius < outer_radius))
    throw Error(ErrorCode::InvalidArgument, "annulus requires 0 < r_I < r_E");
  return CurvedDomain(DomainKind::annulus, inner_radius, outer_radius, 0, 0.0);
}

CurvedDomain CurvedDomain::rose(double inner_radius, double outer_radius, int petals,
                                double magnitude) {
  if (!(inner_radius > 0.0 && inner_radius < outer_radius))
    throw Error(ErrorCode::InvalidArgument, "rose requires 0 < r_I < r_E");
  if (petals < 1) throw Error(ErrorCode::InvalidArgument, "rose requires alpha >= 1");
  if (!(magnitude >= 0.0 && magnitude < 0.5))
    throw Error(ErrorCode::InvalidArgument, "rose requires 0 <= beta < 1/2");
  return CurvedDomain(DomainKind::rose, inner_radius, outer_radius, petals, magnitude);
}

std::vector<CurveId> CurvedDomain::curves() const {
  if (kind_ == DomainKind::disk) return {CurveId::outer};
  return {CurveId::outer, CurveId::inner};
}

bool CurvedDomain::has_curve(CurveId id) const noexcept {
  return id == CurveId::outer || kind_ != DomainKind::disk;
}

double CurvedDomain::radial_factor(double theta) const noexcept {
  if (kind_ != DomainKind::rose) return 1.0;
  return 1.0 - magnitude_ + magnitude_ * std::cos(petals_ * theta);
}

double CurvedDomain::curve_radius(CurveId id, double theta) const {
  if (!has_curve(id)) throw Error(ErrorCode::UnknownCurve, "domain has no inner curve");
  const double base = (id == CurveId::outer) ? outer_ : inner_;
  return base * radial_factor(theta);
}

Point CurvedDomain::map_reference(double r, double theta) const noexcept {
  const double radius = r * radial_factor(theta);
  return {radius * std::cos(theta), radius * std::sin(theta)};
}

Point CurvedDomain::boundary_point(CurveId id, double theta) const {
  const double radius = curve_radius(id, theta);
  return {radius * std::cos(theta), radius * std::sin(theta)};
}

double CurvedDomain::boundary_residual(CurveId id, const Point& p) const {
  return std::abs(p.norm() - curve_radius(id, polar_angle(p)));
}

CurveId CurvedDomain::nearest_curve(const Point& p) const {
  if (kind_ == DomainKind::disk) return CurveId::outer;
  return boundary_residual(CurveId::outer, p) <= boundary_residual(CurveId::inner, p)
             ? CurveId::outer
             : CurveId::inner;
}

double CurvedDomain::distance_to_boundary(const Point& p) const {
  return boundary_residual(nearest_curve(p), p);
}

Point CurvedDomain::snap(CurveId id, const Point& p) const {
  const double theta = polar_angle(p);
  return boundary_point(id, theta);
}

bool CurvedDomain::contains(const Point& p) const {
  const double tol = kBoundaryTol * scale();
  const double theta = polar_angle(p);
  const double r = p.norm();
  if (r > curve_radius(CurveId::outer, theta) + tol) return false;
  if (kind_ != DomainKind::disk && r < curve_radius(CurveId::inner, theta) - tol) return false;
  return true;
}

double CurvedDomain::area() const noexcept {
  const double pi = std::numbers::pi;
  if (kind_ == DomainKind::disk) return pi * outer_ * outer_;
  // (1/2) ∫ R(theta)^2 dtheta with R = r (1 - beta + beta cos(alpha theta)).
  const double f = (1.0 - magnitude_) * (1.0 - magnitude_) + 0.5 * magnitude_ * magnitude_;
  return pi * (outer_ * outer_ - inner_ * inner_) * f;
}

double polar_angle(const Point& p) noexcept {
  double theta = std::atan2(p.y(), p.x());
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  if (theta >= 2.0 * std::numbers::pi) theta = 0.0;
  return theta;
}

BoundaryHit ray_boundary_intersect(const CurvedDomain& domain, const Point& origin,
                                   const Point& through) {
  const Point delta = through - origin;
  const double chord = delta.norm();
  if (!(chord > 0.0)) throw Error(ErrorCode::InvalidArgument, "ray origin equals through point");
  const Point dir = delta / chord;
  const double t_min = 1e-14 * std::max(chord, domain.scale());

  std::vector<Candidate> candidates;
  if (domain.kind() != DomainKind::rose) {
    for (CurveId id : domain.curves()) {
      const double radius = domain.curve_radius(id, 0.0);
      circle_roots(origin, dir, radius, id, t_min, candidates);
    }
  } else {
    for (CurveId id : domain.curves())
      bracketed_roots(domain, id, origin, dir, 0.5 * chord, 2.0 * chord, kRoseSamples, candidates);
    if (candidates.empty()) {
      // `through` far from the hit: scan the whole ray inside the bounding circle.
      const double exit = origin.norm() + domain.scale() * 1.000001;
      const int samples = kRoseSamples * std::max(1, domain.petals()) * 4;
      for (CurveId id : domain.curves())
        bracketed_roots(domain, id, origin, dir, t_min, exit, samples, candidates);
    }
  }
  if (candidates.empty())
    throw Error(ErrorCode::NoIntersection, "ray misses the physical boundary");

  std::sort(candidates.begin(), candidates.end(), [chord](const Candidate& a, const Candidate& b) {
    const double da = std::abs(a.t - chord);
    const double db = std::abs(b.t - chord);
    if (da != db) return da < db;
    return a.t < b.t;
  });

  Candidate best = candidates.front();
  bool ambiguous = false;
  if (candidates.size() > 1) {
    const Candidate& second = candidates[1];
    const double gap = std::abs(best.t - second.t);
    const bool tie = std::abs(std::abs(best.t - chord) - std::abs(second.t - chord)) <=
                     kAmbiguityTol * chord;
    if (gap < kAmbiguityTol * chord || tie) {
      ambiguous = true;
      if (second.t < best.t) best = second;
    }
  }

  BoundaryHit hit{origin + best.t * dir, best.t, best.curve, ambiguous};
  if (domain.kind() == DomainKind::rose) {
    // Bisection leaves the hit a few ulps off; pull it onto the curve radially.
    hit.point = domain.snap(best.curve, hit.point);
  }
  return hit;
}

}  // namespace dgrod
