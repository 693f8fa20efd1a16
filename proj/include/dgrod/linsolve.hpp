#pragma once

#include <Eigen/Core>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <iosfwd>
#include <memory>
#include <vector>

namespace dgrod {

struct Triplet {
  int row;
  int col;
  double value;
};

using TripletList = std::vector<Triplet>;

/// Square compressed-row matrix with sorted column indices and no stored
/// entries below 1e-300 in magnitude.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Sums duplicates in a fixed (row, col) order, so the result does not depend
/// on the order of `triplets`. Throws IndexOutOfRange.
SparseMatrix to_compressed(const TripletList& triplets, int n);

struct SolveOptions {
  double tol = 1e-12;               // relative residual ‖Ax - b‖ / ‖b‖
  int direct_limit = 300000;        // sparse LU up to this dimension
  int max_iterations = 5000;        // Krylov fallback only
};

struct SolveResult {
  Eigen::VectorXd x;
  double relative_residual = 0.0;
  bool direct = true;
};

/// Factors once and solves for many right-hand sides: sparse LU up to
/// options.direct_limit unknowns, BiCGSTAB with an incomplete LU
/// preconditioner above. Throws SingularMatrix.
class LinearSolver {
 public:
  explicit LinearSolver(const SparseMatrix& A, const SolveOptions& options = {});

  /// Throws SingularMatrix, or DidNotConverge with the achieved residual.
  SolveResult solve(const Eigen::VectorXd& rhs) const;

  int size() const noexcept { return static_cast<int>(matrix_.rows()); }

 private:
  using ColMajor = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

  SparseMatrix matrix_;
  SolveOptions options_;
  ColMajor colmajor_;  // the Krylov solver keeps a reference to it
  std::unique_ptr<Eigen::SparseLU<ColMajor, Eigen::COLAMDOrdering<int>>> lu_;
  std::unique_ptr<Eigen::BiCGSTAB<ColMajor, Eigen::IncompleteLUT<double, int>>> krylov_;
};

/// One-shot LinearSolver(A, options).solve(rhs).
SolveResult solve(const SparseMatrix& A, const Eigen::VectorXd& rhs, const SolveOptions& options = {});

/// `i j value` per stored entry, zero-based.
void dump_matrix(const SparseMatrix& A, std::ostream& out);

}  // namespace dgrod
