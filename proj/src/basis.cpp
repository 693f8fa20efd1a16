#include "dgrod/basis.hpp"

#include "dgrod/error.hpp"
#include "dgrod/jet.hpp"
#include "dgrod/polynomials.hpp"

#include <string>

namespace dgrod {

namespace {

using Jet = Jet2<double>;

std::vector<Jet> modal_jets(int N, const Point& ref) {
  return dubiner_basis(N, Jet::variable(ref.x(), 0), Jet::variable(ref.y(), 1));
}

}  // namespace

NodalBasis::NodalBasis(int degree) : degree_(degree) {
  if (degree < 1 || degree > kMaxDegree)
    throw Error(ErrorCode::InvalidArgument,
                "basis degree " + std::to_string(degree) + " out of range 1..4");
  const int N = degree;
  num_nodes_ = (N + 1) * (N + 2) / 2;

  nodes_.resize(num_nodes_, 2);
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N - j; ++i)
      nodes_.row(node_index(i, j)) << static_cast<double>(i) / N, static_cast<double>(j) / N;

  for (int i = 0; i <= N; ++i) edge_nodes_[0].push_back(node_index(i, 0));
  for (int j = 0; j <= N; ++j) edge_nodes_[1].push_back(node_index(N - j, j));
  for (int j = N; j >= 0; --j) edge_nodes_[2].push_back(node_index(0, j));
  vertex_nodes_ = {node_index(0, 0), node_index(N, 0), node_index(0, N)};

  Eigen::MatrixXd vandermonde(num_nodes_, num_nodes_);
  for (int r = 0; r < num_nodes_; ++r) {
    const auto modal = dubiner_basis(N, nodes_(r, 0), nodes_(r, 1));
    for (int m = 0; m < num_nodes_; ++m) vandermonde(r, m) = modal[m];
  }
  // l_i(p) = sum_m psi_m(p) (V^-1)_{m i}
  transform_ = vandermonde.fullPivLu().inverse().transpose();

  for (int d = 1; d <= kMaxVolumeDegree; ++d)
    volume_tables_[d - 1] = tabulate(volume_quadrature(d).points);
}

int NodalBasis::node_index(int i, int j) const noexcept {
  return j * (degree_ + 1) - j * (j - 1) / 2 + i;
}

Eigen::VectorXd NodalBasis::eval(const Point& ref) const {
  const auto modal = dubiner_basis(degree_, ref.x(), ref.y());
  return transform_ * Eigen::Map<const Eigen::VectorXd>(modal.data(), num_nodes_);
}

Eigen::MatrixX2d NodalBasis::eval_grad(const Point& ref) const {
  const auto jets = modal_jets(degree_, ref);
  Eigen::MatrixX2d modal(num_nodes_, 2);
  for (int m = 0; m < num_nodes_; ++m) modal.row(m) = jets[m].g.transpose();
  return transform_ * modal;
}

Eigen::MatrixX3d NodalBasis::eval_hess(const Point& ref) const {
  const auto jets = modal_jets(degree_, ref);
  Eigen::MatrixX3d modal(num_nodes_, 3);
  for (int m = 0; m < num_nodes_; ++m) modal.row(m) = jets[m].h.transpose();
  return transform_ * modal;
}

BasisTable NodalBasis::tabulate(const Eigen::MatrixX2d& points) const {
  const auto nq = points.rows();
  BasisTable table;
  table.values.resize(nq, num_nodes_);
  table.d_xi.resize(nq, num_nodes_);
  table.d_eta.resize(nq, num_nodes_);
  Eigen::MatrixXd modal(num_nodes_, 3);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const auto jets = modal_jets(degree_, Point(points(q, 0), points(q, 1)));
    for (int m = 0; m < num_nodes_; ++m) modal.row(m) << jets[m].v, jets[m].g[0], jets[m].g[1];
    const Eigen::MatrixXd nodal = transform_ * modal;
    table.values.row(q) = nodal.col(0).transpose();
    table.d_xi.row(q) = nodal.col(1).transpose();
    table.d_eta.row(q) = nodal.col(2).transpose();
  }
  return table;
}

const BasisTable& NodalBasis::volume_table(int quadrature_degree) const {
  if (quadrature_degree < 1 || quadrature_degree > kMaxVolumeDegree)
    throw Error(ErrorCode::InvalidArgument, "quadrature degree out of range");
  return volume_tables_[quadrature_degree - 1];
}

AffineMap::AffineMap(const Point& v0, const Point& v1, const Point& v2) : origin_(v0) {
  jacobian_.col(0) = v1 - v0;
  jacobian_.col(1) = v2 - v0;
  det_ = jacobian_.determinant();
  if (!(det_ != 0.0)) throw Error(ErrorCode::InvalidArgument, "degenerate element");
  inverse_ = jacobian_.inverse();
}

Eigen::MatrixX3d AffineMap::physical_hessians(const Eigen::MatrixX3d& ref_hess) const {
  Eigen::MatrixX3d out(ref_hess.rows(), 3);
  for (Eigen::Index i = 0; i < ref_hess.rows(); ++i) {
    Eigen::Matrix2d h;
    h << ref_hess(i, 0), ref_hess(i, 1), ref_hess(i, 1), ref_hess(i, 2);
    const Eigen::Matrix2d p = inverse_.transpose() * h * inverse_;
    out.row(i) << p(0, 0), p(0, 1), p(1, 1);
  }
  return out;
}

Eigen::MatrixXd element_mass_matrix(const NodalBasis& basis, const AffineMap& map) {
  const int degree = 2 * basis.degree();
  const QuadratureRule& rule = volume_quadrature(degree);
  const BasisTable& table = basis.volume_table(degree);
  const Eigen::VectorXd w = rule.weights * std::abs(map.determinant());
  return table.values.transpose() * w.asDiagonal() * table.values;
}

}  // namespace dgrod
