#pragma once

#include "dgrod/basis.hpp"
#include "dgrod/error.hpp"
#include "dgrod/geometry.hpp"
#include "dgrod/linsolve.hpp"
#include "dgrod/mesh.hpp"
#include "dgrod/problems.hpp"
#include "dgrod/rodspace.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace dgrod {

enum class Method { classical, rod_global, rod_iterative };

const char* to_string(Method m);
/// Throws InvalidArgument for unknown names.
Method parse_method(const std::string& name);

struct DGSystemSpec {
  int degree = 2;
  double eta0 = 10.0;  // η = eta0 (N + 1)^2
  Method method = Method::rod_global;
  int volume_degree = 0;  // 0 selects min(2N + 3, 12)
  int edge_points = 0;    // 0 selects N + 2
  int max_iter = 50;
  double stop_tol = 1e-12;
  double solver_tol = 1e-10;  // relative residual of each linear solve

  double penalty() const noexcept { return eta0 * (degree + 1) * (degree + 1); }
  int volume_quadrature_degree() const noexcept;
  int edge_quadrature_points() const noexcept;

  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

/// Global index of local node i of element k.
inline int dof(int k, int i, int num_nodes) noexcept { return k * num_nodes + i; }

struct AssembledSystem {
  int n = 0;
  TripletList triplets;
  Eigen::VectorXd load;
};

/// Volume terms (∇u, ∇v) - (b u, ∇v) + (c u, v) and the load (f, v).
AssembledSystem assemble_volume(const ManufacturedProblem& problem, const Triangulation& tri,
                                const NodalBasis& basis, const DGSystemSpec& spec);

/// Same volume blocks with an explicit source term.
AssembledSystem assemble_volume(const Coefficients& coeffs, const ScalarField& source,
                                const Triangulation& tri, const NodalBasis& basis,
                                const DGSystemSpec& spec);

/// SIP and upwind coupling on every interior edge. Throws TraceMismatch when
/// the two element parameterizations of an edge disagree at a quadrature point.
TripletList assemble_interior_faces(const Triangulation& tri, const NodalBasis& basis,
                                    const DGSystemSpec& spec, const VectorField& b);

/// Nodal boundary data per element: entry k holds the N + 1 values on the
/// boundary edge of k ordered along basis.edge_nodes(tri.boundary_local_edge(k)),
/// and is empty for elements off the boundary.
using BoundaryValues = std::vector<Eigen::VectorXd>;

/// u_D at the ray-projected image of every boundary-edge node; vertices are
/// evaluated in place.
BoundaryValues classical_boundary_values(const ScalarField& dirichlet, const Triangulation& tri,
                                         const CurvedDomain& domain, const NodalBasis& basis);

/// Boundary-edge SIP terms on the left-hand side and the g_D load terms.
AssembledSystem assemble_boundary_faces_classical(const Triangulation& tri, const NodalBasis& basis,
                                                  const DGSystemSpec& spec, const BoundaryValues& g,
                                                  const VectorField& b);

/// Square system over the free degrees of freedom, with u = trial_map x + lift.
struct ReducedSystem {
  SparseMatrix matrix;
  Eigen::VectorXd load;
  SparseMatrix trial_map;        // n x n_red
  Eigen::VectorXd lift;          // n
  std::vector<int> kept;         // global dofs kept as test rows and unknowns

  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const { return trial_map * reduced + lift; }
};

/// Petrov-Galerkin reduction of a volume plus interior-face system: rows of
/// the constrained edge nodes are dropped and those unknowns are eliminated
/// through each element's elimination map.
ReducedSystem build_rod_global_system(const AssembledSystem& system,
                                      const BoundaryConstraintSet& constraints,
                                      const NodalBasis& basis);

/// Thrown when the iterative variant exhausts max_iter.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> trace)
      : Error(ErrorCode::NonConvergence, what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

struct DGSolution {
  Eigen::VectorXd u;           // K * N_p nodal values
  int system_size = 0;
  double relative_residual = 0.0;
  int iterations = 0;          // rod_iterative only
  std::vector<double> trace;   // max boundary-data change per iteration
  int tangent_warnings = 0;    // boundary elements with an ambiguous ray hit
};

/// Alternates classical solves and reconstruction of the boundary data,
/// starting from `initial`, until the largest nodal change is <= stop_tol.
DGSolution solve_rod_iterative(const AssembledSystem& volume_and_faces, const Triangulation& tri,
                               const NodalBasis& basis, const DGSystemSpec& spec,
                               const VectorField& b, const BoundaryConstraintSet& constraints,
                               BoundaryValues initial);

/// Assembles and solves with spec.method.
DGSolution solve_dg(const ManufacturedProblem& problem, const Triangulation& tri,
                    const CurvedDomain& domain, const NodalBasis& basis, const DGSystemSpec& spec);

}  // namespace dgrod
