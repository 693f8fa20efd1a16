#pragma once

#include <Eigen/Core>

namespace dgrod {

/// Points are rows of `points` in reference coordinates: (xi, eta) on the unit
/// triangle, or t in column 0 for the edge [0, 1].
struct QuadratureRule {
  Eigen::MatrixX2d points;
  Eigen::VectorXd weights;
  int exactness_degree = 0;

  int size() const noexcept { return static_cast<int>(weights.size()); }
};

inline constexpr int kMaxVolumeDegree = 12;
inline constexpr int kMaxEdgePoints = 10;

/// Symmetric rule on the unit triangle exact for total degree <= `degree`
/// (1..12). All weights are positive and all points interior; degrees whose
/// classical rule has a negative weight or an exterior point are served by the
/// next higher positive rule. Weights sum to 1/2.
const QuadratureRule& volume_quadrature(int degree);

/// Gauss–Legendre on [0, 1] with n points (1..10), exact to degree 2n - 1.
const QuadratureRule& edge_quadrature(int n);

}  // namespace dgrod
