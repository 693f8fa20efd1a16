#include "dgrod/rodspace.hpp"

#include "dgrod/error.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cstdio>
#include <limits>

namespace dgrod {

namespace {

AffineMap element_map(const Triangulation& tri, int k) {
  return AffineMap(tri.vertex(k, 0), tri.vertex(k, 1), tri.vertex(k, 2));
}

void require_boundary_element(const Triangulation& tri, int k) {
  if (k < 0 || k >= tri.num_elements() || tri.boundary_edge(k) < 0)
    throw Error(ErrorCode::InvalidArgument,
                "element " + std::to_string(k) + " has no boundary edge");
}

}  // namespace

std::vector<int> constrained_edge_nodes(const Triangulation& tri, const NodalBasis& basis, int k) {
  require_boundary_element(tri, k);
  const std::vector<int>& along = basis.edge_nodes(tri.boundary_local_edge(k));
  std::vector<int> out(along.begin() + 1, along.end() - 1);
  out.push_back(along.front());
  out.push_back(along.back());
  return out;
}

std::vector<int> free_nodes(const Triangulation& tri, const NodalBasis& basis, int k) {
  std::vector<int> edge = constrained_edge_nodes(tri, basis, k);
  std::sort(edge.begin(), edge.end());
  std::vector<int> out;
  for (int i = 0; i < basis.num_nodes(); ++i)
    if (!std::binary_search(edge.begin(), edge.end(), i)) out.push_back(i);
  return out;
}

std::vector<Point> projected_points(const Triangulation& tri, const CurvedDomain& domain,
                                    const NodalBasis& basis, int k, bool* ambiguous) {
  if (ambiguous) *ambiguous = false;
  const std::vector<int> edge = constrained_edge_nodes(tri, basis, k);
  const AffineMap map = element_map(tri, k);
  const Point apex = tri.vertex(k, tri.opposite_vertex(k));
  const int N = basis.degree();
  std::vector<Point> points;
  points.reserve(edge.size());
  for (int r = 0; r < N - 1; ++r) {
    const Point node = map.to_physical(basis.nodes().row(edge[r]).transpose());
    const BoundaryHit hit = ray_boundary_intersect(domain, apex, node);
    if (ambiguous && hit.tangent_ambiguity) *ambiguous = true;
    points.push_back(hit.point);
  }
  points.push_back(map.to_physical(basis.nodes().row(edge[N - 1]).transpose()));
  points.push_back(map.to_physical(basis.nodes().row(edge[N]).transpose()));
  return points;
}

Eigen::MatrixXd constraint_matrix(std::span<const Point> points, const NodalBasis& basis,
                                  const AffineMap& map) {
  Eigen::MatrixXd C(static_cast<Eigen::Index>(points.size()), basis.num_nodes());
  for (std::size_t r = 0; r < points.size(); ++r)
    C.row(static_cast<Eigen::Index>(r)) = basis.eval(map.to_reference(points[r])).transpose();
  return C;
}

Eigen::VectorXd rod_reconstruct(const Eigen::VectorXd& u, const Eigen::MatrixXd& C,
                                const Eigen::VectorXd& d) {
  if (C.cols() != u.size() || C.rows() != d.size())
    throw Error(ErrorCode::InvalidArgument, "reconstruction dimensions disagree");
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(C.transpose());
  if (qr.rank() < C.rows())
    throw Error(ErrorCode::RankDeficientConstraints,
                "constraint matrix rank " + std::to_string(qr.rank()) + " < " +
                    std::to_string(C.rows()));
  // C^T = Q R P^T, so C C^T = P R^T R P^T.
  const Eigen::VectorXd residual = C * u - d;
  const auto R = qr.matrixR().topLeftCorner(C.rows(), C.rows()).triangularView<Eigen::Upper>();
  Eigen::VectorXd y = qr.colsPermutation().transpose() * residual;
  R.transpose().solveInPlace(y);
  R.solveInPlace(y);
  const Eigen::VectorXd lambda = qr.colsPermutation() * y;
  return u - C.transpose() * lambda;
}

EliminationMap elimination_map(const Eigen::MatrixXd& C, const Eigen::VectorXd& d,
                               std::span<const int> edge, std::span<const int> free,
                               int element) {
  const auto ne = static_cast<Eigen::Index>(edge.size());
  const auto nf = static_cast<Eigen::Index>(free.size());
  Eigen::MatrixXd cee(C.rows(), ne);
  Eigen::MatrixXd cei(C.rows(), nf);
  for (Eigen::Index j = 0; j < ne; ++j) cee.col(j) = C.col(edge[j]);
  for (Eigen::Index j = 0; j < nf; ++j) cei.col(j) = C.col(free[j]);

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(cee);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxConstraintCondition)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "element %d: cond(C_EE) = %.3e", element, cond);
    throw Error(ErrorCode::IllConditionedConstraintBlock, buf);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(cee);
  EliminationMap out;
  out.G = -lu.solve(cei);
  out.g0 = lu.solve(d);
  out.condition = cond;
  return out;
}

BoundaryConstraint make_constraint(const Triangulation& tri, const NodalBasis& basis, int k,
                                   std::vector<Point> points, const ScalarField& boundary_data) {
  BoundaryConstraint bc;
  bc.element = k;
  bc.edge = constrained_edge_nodes(tri, basis, k);
  bc.free = free_nodes(tri, basis, k);
  bc.points = std::move(points);
  bc.C = constraint_matrix(bc.points, basis, element_map(tri, k));
  bc.d.resize(static_cast<Eigen::Index>(bc.points.size()));
  for (std::size_t r = 0; r < bc.points.size(); ++r)
    bc.d(static_cast<Eigen::Index>(r)) = boundary_data(bc.points[r]);
  bc.elimination = elimination_map(bc.C, bc.d, bc.edge, bc.free, k);
  return bc;
}

BoundaryConstraintSet build_constraints(const Triangulation& tri, const CurvedDomain& domain,
                                        const NodalBasis& basis, const ScalarField& boundary_data) {
  BoundaryConstraintSet set;
  set.degree = basis.degree();
  set.slot.assign(tri.num_elements(), -1);
  set.constraints.reserve(tri.boundary_elements().size());
  for (int k : tri.boundary_elements()) {
    set.slot[k] = static_cast<int>(set.constraints.size());
    bool ambiguous = false;
    auto points = projected_points(tri, domain, basis, k, &ambiguous);
    set.constraints.push_back(make_constraint(tri, basis, k, std::move(points), boundary_data));
    set.constraints.back().tangent_warning = ambiguous;
  }
  return set;
}

}  // namespace dgrod
