#include "dgrod/linsolve.hpp"

#include "dgrod/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace dgrod {

namespace {

constexpr double kPrune = 1e-300;

/// b - A x accumulated in extended precision, so that the measured residual
/// is not dominated by the rounding of the product itself.
Eigen::VectorXd residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  Eigen::VectorXd r(A.rows());
  for (int i = 0; i < A.outerSize(); ++i) {
    long double acc = b(i);
    for (SparseMatrix::InnerIterator it(A, i); it; ++it)
      acc -= static_cast<long double>(it.value()) * x(it.col());
    r(i) = static_cast<double>(acc);
  }
  return r;
}

double relative_norm(const Eigen::VectorXd& r, const Eigen::VectorXd& b) {
  const double scale = b.norm();
  return scale > 0.0 ? r.norm() / scale : r.norm();
}

}  // namespace

SparseMatrix to_compressed(const TripletList& triplets, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative matrix dimension");
  std::vector<Triplet> sorted(triplets);
  for (const Triplet& t : sorted)
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw Error(ErrorCode::IndexOutOfRange, "triplet (" + std::to_string(t.row) + ", " +
                                                  std::to_string(t.col) + ") outside " +
                                                  std::to_string(n));
  // Sorting on the value too makes the summation order a function of the
  // multiset of triplets alone.
  std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return a.value < b.value;
  });

  std::vector<Eigen::Triplet<double, int>> merged;
  merged.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < sorted.size() && sorted[j].row == sorted[i].row && sorted[j].col == sorted[i].col)
      sum += sorted[j++].value;
    if (std::abs(sum) >= kPrune) merged.emplace_back(sorted[i].row, sorted[i].col, sum);
    i = j;
  }
  SparseMatrix A(n, n);
  A.setFromTriplets(merged.begin(), merged.end());
  A.makeCompressed();
  return A;
}

LinearSolver::LinearSolver(const SparseMatrix& A, const SolveOptions& options)
    : matrix_(A), options_(options) {
  if (A.rows() != A.cols()) throw Error(ErrorCode::InvalidArgument, "solve: matrix is not square");
  if (A.rows() == 0) return;
  colmajor_ = A;
  if (A.rows() <= options.direct_limit) {
    lu_ = std::make_unique<Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>>>();
    lu_->compute(colmajor_);
    colmajor_.resize(0, 0);
    if (lu_->info() != Eigen::Success)
      throw Error(ErrorCode::SingularMatrix, "sparse LU failed: " + lu_->lastErrorMessage());
  } else {
    krylov_ = std::make_unique<Eigen::BiCGSTAB<ColMajor, Eigen::IncompleteLUT<double, int>>>();
    krylov_->setTolerance(options.tol);
    krylov_->setMaxIterations(options.max_iterations);
    krylov_->compute(colmajor_);
    if (krylov_->info() != Eigen::Success)
      throw Error(ErrorCode::SingularMatrix, "incomplete LU preconditioner failed");
  }
}

SolveResult LinearSolver::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != matrix_.rows()) throw Error(ErrorCode::InvalidArgument, "solve: dimension mismatch");
  SolveResult out;
  if (rhs.size() == 0) return out;
  if (!rhs.allFinite()) throw Error(ErrorCode::InvalidArgument, "solve: non-finite right-hand side");
  if (rhs.squaredNorm() == 0.0) {
    out.x = Eigen::VectorXd::Zero(rhs.size());
    out.direct = lu_ != nullptr;
    return out;
  }
  if (lu_) {
    out.x = lu_->solve(rhs);
    Eigen::VectorXd r = residual(matrix_, out.x, rhs);
    out.relative_residual = relative_norm(r, rhs);
    // Iterative refinement against the extended-precision residual.
    for (int step = 0; step < 3 && out.relative_residual > options_.tol; ++step) {
      out.x += lu_->solve(r);
      r = residual(matrix_, out.x, rhs);
      out.relative_residual = relative_norm(r, rhs);
    }
  } else {
    out.x = krylov_->solve(rhs);
    out.direct = false;
    out.relative_residual = relative_norm(residual(matrix_, out.x, rhs), rhs);
  }
  if (!out.x.allFinite()) throw Error(ErrorCode::SingularMatrix, "solution is not finite");
  if (!(out.relative_residual <= options_.tol)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "relative residual %.3e > %.3e", out.relative_residual,
                  options_.tol);
    throw Error(ErrorCode::DidNotConverge, buf);
  }
  return out;
}

SolveResult solve(const SparseMatrix& A, const Eigen::VectorXd& rhs, const SolveOptions& options) {
  if (A.rows() != rhs.size()) throw Error(ErrorCode::InvalidArgument, "solve: dimension mismatch");
  return LinearSolver(A, options).solve(rhs);
}

void dump_matrix(const SparseMatrix& A, std::ostream& out) {
  char buf[64];
  for (int i = 0; i < A.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(A, i); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, static_cast<int>(it.col()), it.value());
      out << buf;
    }
}

}  // namespace dgrod
