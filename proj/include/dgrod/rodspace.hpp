#pragma once

#include "dgrod/basis.hpp"
#include "dgrod/geometry.hpp"
#include "dgrod/mesh.hpp"
#include "dgrod/problems.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace dgrod {

inline constexpr double kMaxConstraintCondition = 1e8;

/// Nodes of boundary element k on its boundary edge, in constraint order: the
/// N-1 interior edge nodes first, then the two edge vertices (so rows N-1 and
/// N of the constraint matrix belong to the vertices).
std::vector<int> constrained_edge_nodes(const Triangulation& tri, const NodalBasis& basis, int k);

/// Complement of constrained_edge_nodes, ascending; m_N = N(N+1)/2 entries.
std::vector<int> free_nodes(const Triangulation& tri, const NodalBasis& basis, int k);

/// Physical-boundary points P_1..P_{N+1} of boundary element k: each interior
/// edge node is pushed along the line from the opposite vertex O_k to its
/// nearest boundary intersection; the edge vertices are kept. `ambiguous`, if
/// given, is set when any ray hit was flagged as a near-tangent tie.
std::vector<Point> projected_points(const Triangulation& tri, const CurvedDomain& domain,
                                    const NodalBasis& basis, int k, bool* ambiguous = nullptr);

/// C_{r,j} = l_j(P_r) with the element basis pulled back through `map`
/// (points outside the element are evaluated by polynomial extrapolation).
Eigen::MatrixXd constraint_matrix(std::span<const Point> points, const NodalBasis& basis,
                                  const AffineMap& map);

/// Closest vector to u (Euclidean) satisfying C a = d:
/// a = u - C^T (C C^T)^{-1} (C u - d). Throws RankDeficientConstraints.
Eigen::VectorXd rod_reconstruct(const Eigen::VectorXd& u, const Eigen::MatrixXd& C,
                                const Eigen::VectorXd& d);

/// a_E = G a_I + g0 solves C_EE a_E + C_EI a_I = d.
struct EliminationMap {
  Eigen::MatrixXd G;
  Eigen::VectorXd g0;
  double condition = 1.0;  // 2-norm condition number of C_EE
};

/// Throws IllConditionedConstraintBlock when cond(C_EE) exceeds 1e8.
EliminationMap elimination_map(const Eigen::MatrixXd& C, const Eigen::VectorXd& d,
                               std::span<const int> edge, std::span<const int> free,
                               int element = -1);

struct BoundaryConstraint {
  int element = -1;
  std::vector<int> edge;  // E, aligned with the rows of C
  std::vector<int> free;  // I
  std::vector<Point> points;
  Eigen::MatrixXd C;
  Eigen::VectorXd d;
  EliminationMap elimination;
  bool tangent_warning = false;
};

struct BoundaryConstraintSet {
  int degree = 0;
  std::vector<BoundaryConstraint> constraints;  // ordered as tri.boundary_elements()
  std::vector<int> slot;                        // element -> index into constraints, -1 if none

  const BoundaryConstraint* find(int element) const {
    const int s = slot.at(element);
    return s < 0 ? nullptr : &constraints[s];
  }
};

/// Builds the constraint for one element from given boundary points.
BoundaryConstraint make_constraint(const Triangulation& tri, const NodalBasis& basis, int k,
                                   std::vector<Point> points, const ScalarField& boundary_data);

/// Constraints for every element of I^B with d_r = u_D(P_r).
BoundaryConstraintSet build_constraints(const Triangulation& tri, const CurvedDomain& domain,
                                        const NodalBasis& basis, const ScalarField& boundary_data);

}  // namespace dgrod
