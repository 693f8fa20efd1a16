#pragma once

#include "dgrod/geometry.hpp"
#include "dgrod/quadrature.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <array>
#include <vector>

namespace dgrod {

inline constexpr int kMaxDegree = 4;

/// Values and reference derivatives of every basis function at a set of
/// points; row q holds point q.
struct BasisTable {
  Eigen::MatrixXd values;  // nq x Np
  Eigen::MatrixXd d_xi;    // nq x Np
  Eigen::MatrixXd d_eta;   // nq x Np
};

/// Lagrange P_N basis on the unit triangle with equispaced nodes. Evaluation
/// goes through a Dubiner modal basis and the inverse generalized Vandermonde
/// matrix, so it is exact (and defined) anywhere in the plane.
class NodalBasis {
 public:
  explicit NodalBasis(int degree);

  int degree() const noexcept { return degree_; }
  int num_nodes() const noexcept { return num_nodes_; }

  /// Node coordinates, one row per node: (i/N, j/N) for j = 0..N, i = 0..N-j.
  const Eigen::MatrixX2d& nodes() const noexcept { return nodes_; }

  /// Nodes on local edge `e`, ordered from local vertex e to vertex (e+1)%3.
  const std::vector<int>& edge_nodes(int e) const { return edge_nodes_[e]; }

  /// Node index of local vertex v.
  int vertex_node(int v) const { return vertex_nodes_[v]; }

  Eigen::VectorXd eval(const Point& ref) const;
  Eigen::MatrixX2d eval_grad(const Point& ref) const;
  /// Columns (d_xixi, d_xieta, d_etaeta).
  Eigen::MatrixX3d eval_hess(const Point& ref) const;

  BasisTable tabulate(const Eigen::MatrixX2d& points) const;

  /// Cached table at the points of volume_quadrature(degree).
  const BasisTable& volume_table(int quadrature_degree) const;

 private:
  int node_index(int i, int j) const noexcept;

  int degree_;
  int num_nodes_;
  Eigen::MatrixX2d nodes_;
  std::array<std::vector<int>, 3> edge_nodes_;
  std::array<int, 3> vertex_nodes_{};
  Eigen::MatrixXd transform_;  // nodal = transform_ * modal
  std::array<BasisTable, kMaxVolumeDegree> volume_tables_;
};

/// x = v0 + J (xi, eta) with J = [v1 - v0, v2 - v0].
class AffineMap {
 public:
  AffineMap(const Point& v0, const Point& v1, const Point& v2);

  Point to_physical(const Point& ref) const { return origin_ + jacobian_ * ref; }
  Point to_reference(const Point& x) const { return inverse_ * (x - origin_); }

  const Eigen::Matrix2d& jacobian() const noexcept { return jacobian_; }
  const Eigen::Matrix2d& inverse_jacobian() const noexcept { return inverse_; }
  double determinant() const noexcept { return det_; }

  /// Physical gradients from reference ones (rows are functions).
  Eigen::MatrixX2d physical_gradients(const Eigen::MatrixX2d& ref_grad) const {
    return ref_grad * inverse_;
  }

  /// Physical Hessians (xx, xy, yy) from reference ones: J^-T H J^-1.
  Eigen::MatrixX3d physical_hessians(const Eigen::MatrixX3d& ref_hess) const;

 private:
  Point origin_;
  Eigen::Matrix2d jacobian_;
  Eigen::Matrix2d inverse_;
  double det_;
};

/// M_ij = ∫_T l_i l_j with volume_quadrature(2N).
Eigen::MatrixXd element_mass_matrix(const NodalBasis& basis, const AffineMap& map);

}  // namespace dgrod
