#include "dgrod/assembly.hpp"

#include "dgrod/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace dgrod {

namespace {

const std::array<Point, 3> kReferenceVertices = {Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};

/// Basis tables at the Gauss points of every local edge, traversed forward
/// (vertex e to e + 1) or backward.
struct EdgeTables {
  const QuadratureRule* rule = nullptr;
  std::array<std::array<BasisTable, 2>, 3> table;

  EdgeTables(const NodalBasis& basis, int points) : rule(&edge_quadrature(points)) {
    for (int e = 0; e < 3; ++e)
      for (int flip = 0; flip < 2; ++flip) table[e][flip] = basis.tabulate(reference_points(e, flip));
  }

  Eigen::MatrixX2d reference_points(int e, int flip) const {
    const Point a = kReferenceVertices[e];
    const Point b = kReferenceVertices[(e + 1) % 3];
    Eigen::MatrixX2d ref(rule->size(), 2);
    for (int q = 0; q < rule->size(); ++q) {
      const double s = rule->points(q, 0);
      ref.row(q) = (a + (flip ? 1.0 - s : s) * (b - a)).transpose();
    }
    return ref;
  }
};

AffineMap element_map(const Triangulation& tri, int k) {
  return AffineMap(tri.vertex(k, 0), tri.vertex(k, 1), tri.vertex(k, 2));
}

/// Values and normal derivatives of the element basis at edge point q.
struct TraceSample {
  Eigen::VectorXd value;
  Eigen::VectorXd normal_derivative;
};

TraceSample trace_sample(const BasisTable& table, int q, const AffineMap& map, const Point& normal) {
  // Physical gradient of l_i is J^{-T} (d_xi, d_eta)_i, so n·∇l_i = (J^{-1} n)·(d_xi, d_eta)_i.
  const Eigen::Vector2d m = map.inverse_jacobian() * normal;
  TraceSample s;
  s.value = table.values.row(q).transpose();
  s.normal_derivative = m.x() * table.d_xi.row(q).transpose() + m.y() * table.d_eta.row(q).transpose();
  return s;
}

void scatter(TripletList& out, const Eigen::MatrixXd& block, int row_element, int col_element, int np) {
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j)
      out.push_back({dof(row_element, i, np), dof(col_element, j, np), block(i, j)});
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::classical: return "classical";
    case Method::rod_global: return "rod_global";
    case Method::rod_iterative: return "rod_iterative";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "classical") return Method::classical;
  if (name == "rod_global") return Method::rod_global;
  if (name == "rod_iterative") return Method::rod_iterative;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + name + "'");
}

int DGSystemSpec::volume_quadrature_degree() const noexcept {
  return volume_degree > 0 ? volume_degree : std::min(2 * degree + 3, kMaxVolumeDegree);
}

int DGSystemSpec::edge_quadrature_points() const noexcept {
  return edge_points > 0 ? edge_points : degree + 2;
}

void DGSystemSpec::validate() const {
  if (degree < 1 || degree > kMaxDegree)
    throw Error(ErrorCode::InvalidArgument, "degree must be in 1..4");
  if (!(eta0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta0 must be positive");
  if (volume_quadrature_degree() < 1 || volume_quadrature_degree() > kMaxVolumeDegree)
    throw Error(ErrorCode::InvalidArgument, "volume quadrature degree must be in 1..12");
  if (edge_quadrature_points() < 1 || edge_quadrature_points() > kMaxEdgePoints)
    throw Error(ErrorCode::InvalidArgument, "edge quadrature points must be in 1..10");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  if (!(stop_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "stop_tol must be positive");
  if (!(solver_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver_tol must be positive");
}

AssembledSystem assemble_volume(const ManufacturedProblem& problem, const Triangulation& tri,
                                const NodalBasis& basis, const DGSystemSpec& spec) {
  return assemble_volume(problem.coeffs, [&](const Point& x) { return source_term(problem, x); },
                         tri, basis, spec);
}

AssembledSystem assemble_volume(const Coefficients& coeffs, const ScalarField& source,
                                const Triangulation& tri, const NodalBasis& basis,
                                const DGSystemSpec& spec) {
  const int np = basis.num_nodes();
  const int degree = spec.volume_quadrature_degree();
  const QuadratureRule& rule = volume_quadrature(degree);
  const BasisTable& table = basis.volume_table(degree);

  AssembledSystem sys;
  sys.n = tri.num_elements() * np;
  sys.load = Eigen::VectorXd::Zero(sys.n);
  sys.triplets.reserve(static_cast<std::size_t>(tri.num_elements()) * np * np);

  Eigen::MatrixXd block(np, np);
  Eigen::MatrixX2d grads(np, 2);
  for (int k = 0; k < tri.num_elements(); ++k) {
    const AffineMap map = element_map(tri, k);
    const double jac = std::abs(map.determinant());
    block.setZero();
    auto load = sys.load.segment(dof(k, 0, np), np);
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = map.to_physical(rule.points.row(q).transpose());
      const double w = rule.weights(q) * jac;
      grads.col(0) = table.d_xi.row(q).transpose();
      grads.col(1) = table.d_eta.row(q).transpose();
      grads = map.physical_gradients(grads);
      const Eigen::VectorXd phi = table.values.row(q).transpose();
      const Eigen::VectorXd b_grad = grads * coeffs.b(x);
      block.noalias() += w * (grads * grads.transpose());
      block.noalias() -= w * (b_grad * phi.transpose());
      block.noalias() += (w * coeffs.c(x)) * (phi * phi.transpose());
      load += (w * source(x)) * phi;
    }
    scatter(sys.triplets, block, k, k, np);
  }
  return sys;
}

TripletList assemble_interior_faces(const Triangulation& tri, const NodalBasis& basis,
                                    const DGSystemSpec& spec, const VectorField& b) {
  const int np = basis.num_nodes();
  const EdgeTables tables(basis, spec.edge_quadrature_points());
  const QuadratureRule& rule = *tables.rule;
  const double eta = spec.penalty();

  TripletList out;
  std::array<std::array<Eigen::MatrixXd, 2>, 2> block;
  for (auto& row : block)
    for (auto& m : row) m.resize(np, np);

  for (const Edge& e : tri.edges()) {
    if (e.is_boundary()) continue;
    const int side[2] = {e.left, e.right};
    const double sign[2] = {1.0, -1.0};
    // Both traces are evaluated at the left element's parameterization; the
    // right element runs its local edge the other way on a consistent mesh.
    const int right_start = tri.triangles()[e.right][e.right_local];
    const int flip_right = right_start == e.vertices[1] ? 1 : 0;
    const int flip[2] = {0, flip_right};
    const int local[2] = {e.left_local, e.right_local};
    const AffineMap maps[2] = {element_map(tri, e.left), element_map(tri, e.right)};

    const Point a = tri.vertices()[e.vertices[0]];
    const Point c = tri.vertices()[e.vertices[1]];
    const Eigen::MatrixX2d right_ref = tables.reference_points(local[1], flip[1]);
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = a + rule.points(q, 0) * (c - a);
      const Point xr = maps[1].to_physical(right_ref.row(q).transpose());
      if ((x - xr).norm() > 1e-12 * (1.0 + x.norm())) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "edge (%d,%d): traces of elements %d and %d differ by %.3e",
                      e.vertices[0], e.vertices[1], e.left, e.right, (x - xr).norm());
        throw Error(ErrorCode::TraceMismatch, buf);
      }
    }

    for (auto& row : block)
      for (auto& m : row) m.setZero();
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = a + rule.points(q, 0) * (c - a);
      const double w = rule.weights(q) * e.length;
      const double bn = b(x).dot(e.normal);
      const double jump_coeff = eta / e.length + 0.5 * std::abs(bn);
      TraceSample s[2];
      for (int t = 0; t < 2; ++t)
        s[t] = trace_sample(tables.table[local[t]][flip[t]], q, maps[t], e.normal);
      for (int t = 0; t < 2; ++t) {    // test side
        for (int r = 0; r < 2; ++r) {  // trial side
          Eigen::MatrixXd& B = block[t][r];
          B.noalias() -= (0.5 * w * sign[r]) * (s[t].normal_derivative * s[r].value.transpose());
          B.noalias() -= (0.5 * w * sign[t]) * (s[t].value * s[r].normal_derivative.transpose());
          B.noalias() += (w * (jump_coeff * sign[t] * sign[r] + 0.5 * bn * sign[t])) *
                         (s[t].value * s[r].value.transpose());
        }
      }
    }
    for (int t = 0; t < 2; ++t)
      for (int r = 0; r < 2; ++r) scatter(out, block[t][r], side[t], side[r], np);
  }
  return out;
}

BoundaryValues classical_boundary_values(const ScalarField& dirichlet, const Triangulation& tri,
                                         const CurvedDomain& domain, const NodalBasis& basis) {
  const int N = basis.degree();
  BoundaryValues g(tri.num_elements());
  for (int k : tri.boundary_elements()) {
    // projected_points orders the interior edge nodes first, then the start
    // and end vertices; reorder to run along the edge.
    const std::vector<Point> p = projected_points(tri, domain, basis, k);
    Eigen::VectorXd values(N + 1);
    values(0) = dirichlet(p[N - 1]);
    for (int r = 0; r + 1 < N; ++r) values(r + 1) = dirichlet(p[r]);
    values(N) = dirichlet(p[N]);
    g[k] = std::move(values);
  }
  return g;
}

AssembledSystem assemble_boundary_faces_classical(const Triangulation& tri, const NodalBasis& basis,
                                                  const DGSystemSpec& spec, const BoundaryValues& g,
                                                  const VectorField& b) {
  const int np = basis.num_nodes();
  const EdgeTables tables(basis, spec.edge_quadrature_points());
  const QuadratureRule& rule = *tables.rule;
  const double eta = spec.penalty();

  AssembledSystem sys;
  sys.n = tri.num_elements() * np;
  sys.load = Eigen::VectorXd::Zero(sys.n);
  Eigen::MatrixXd block(np, np);
  for (const Edge& e : tri.edges()) {
    if (!e.is_boundary()) continue;
    const int k = e.left;
    const int le = e.left_local;
    const std::vector<int>& along = basis.edge_nodes(le);
    const bool has_data = static_cast<std::size_t>(k) < g.size() && g[k].size() > 0;
    if (has_data && g[k].size() != static_cast<Eigen::Index>(along.size()))
      throw Error(ErrorCode::InvalidArgument, "boundary data size differs from N + 1");

    const AffineMap map = element_map(tri, k);
    const BasisTable& table = tables.table[le][0];
    const Point a = tri.vertices()[e.vertices[0]];
    const Point c = tri.vertices()[e.vertices[1]];
    const double sigma = eta / e.length;
    block.setZero();
    auto load = sys.load.segment(dof(k, 0, np), np);
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = a + rule.points(q, 0) * (c - a);
      const double w = rule.weights(q) * e.length;
      const TraceSample s = trace_sample(table, q, map, e.normal);
      block.noalias() -= w * (s.normal_derivative * s.value.transpose());
      block.noalias() -= w * (s.value * s.normal_derivative.transpose());
      block.noalias() += (w * sigma) * (s.value * s.value.transpose());
      if (!has_data) continue;
      double gq = 0.0;
      for (std::size_t r = 0; r < along.size(); ++r) gq += g[k](static_cast<Eigen::Index>(r)) * s.value(along[r]);
      const double bn = b(x).dot(e.normal);
      load += (w * gq) * (-s.normal_derivative + (sigma - bn) * s.value);
    }
    scatter(sys.triplets, block, k, k, np);
  }
  return sys;
}

ReducedSystem build_rod_global_system(const AssembledSystem& system,
                                      const BoundaryConstraintSet& constraints,
                                      const NodalBasis& basis) {
  const int np = basis.num_nodes();
  const int n = system.n;
  std::vector<char> constrained(n, 0);
  for (const BoundaryConstraint& bc : constraints.constraints)
    for (int i : bc.edge) constrained[dof(bc.element, i, np)] = 1;

  ReducedSystem red;
  std::vector<int> reduced_index(n, -1);
  for (int d = 0; d < n; ++d) {
    if (constrained[d]) continue;
    reduced_index[d] = static_cast<int>(red.kept.size());
    red.kept.push_back(d);
  }
  const int m = static_cast<int>(red.kept.size());

  std::vector<Eigen::Triplet<double, int>> trial;
  trial.reserve(static_cast<std::size_t>(m) + constraints.constraints.size() * np * np);
  for (int i = 0; i < m; ++i) trial.emplace_back(red.kept[i], i, 1.0);
  red.lift = Eigen::VectorXd::Zero(n);
  for (const BoundaryConstraint& bc : constraints.constraints) {
    const EliminationMap& em = bc.elimination;
    for (std::size_t r = 0; r < bc.edge.size(); ++r) {
      const int row = dof(bc.element, bc.edge[r], np);
      red.lift(row) = em.g0(static_cast<Eigen::Index>(r));
      for (std::size_t j = 0; j < bc.free.size(); ++j)
        trial.emplace_back(row, reduced_index[dof(bc.element, bc.free[j], np)],
                           em.G(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)));
    }
  }
  red.trial_map.resize(n, m);
  red.trial_map.setFromTriplets(trial.begin(), trial.end());

  std::vector<Eigen::Triplet<double, int>> select;
  select.reserve(m);
  for (int i = 0; i < m; ++i) select.emplace_back(i, red.kept[i], 1.0);
  SparseMatrix test(m, n);
  test.setFromTriplets(select.begin(), select.end());

  const SparseMatrix A = to_compressed(system.triplets, n);
  red.matrix = test * A * red.trial_map;
  red.matrix.prune(1.0, 1e-300);
  red.load = test * (system.load - A * red.lift);
  return red;
}

DGSolution solve_rod_iterative(const AssembledSystem& volume_and_faces, const Triangulation& tri,
                               const NodalBasis& basis, const DGSystemSpec& spec,
                               const VectorField& b, const BoundaryConstraintSet& constraints,
                               BoundaryValues g) {
  const int np = basis.num_nodes();
  const AssembledSystem boundary = assemble_boundary_faces_classical(tri, basis, spec, g, b);
  TripletList triplets = volume_and_faces.triplets;
  triplets.insert(triplets.end(), boundary.triplets.begin(), boundary.triplets.end());
  const LinearSolver solver(to_compressed(triplets, volume_and_faces.n), SolveOptions{spec.solver_tol});

  DGSolution sol;
  sol.system_size = volume_and_faces.n;
  Eigen::VectorXd load = volume_and_faces.load + boundary.load;
  for (int m = 1; m <= spec.max_iter; ++m) {
    const SolveResult res = solver.solve(load);
    sol.u = res.x;
    sol.relative_residual = res.relative_residual;
    sol.iterations = m;

    double change = 0.0;
    for (const BoundaryConstraint& bc : constraints.constraints) {
      const int k = bc.element;
      const Eigen::VectorXd a = rod_reconstruct(sol.u.segment(dof(k, 0, np), np), bc.C, bc.d);
      const std::vector<int>& along = basis.edge_nodes(tri.boundary_local_edge(k));
      Eigen::VectorXd& gk = g[k];
      for (std::size_t r = 0; r < along.size(); ++r) {
        const double next = a(along[r]);
        change = std::max(change, std::abs(next - gk(static_cast<Eigen::Index>(r))));
        gk(static_cast<Eigen::Index>(r)) = next;
      }
    }
    sol.trace.push_back(change);
    if (change <= spec.stop_tol) return sol;
    load = volume_and_faces.load + assemble_boundary_faces_classical(tri, basis, spec, g, b).load;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "boundary data change %.3e > %.3e after %d iterations",
                sol.trace.back(), spec.stop_tol, spec.max_iter);
  throw NonConvergenceError(buf, sol.trace);
}

DGSolution solve_dg(const ManufacturedProblem& problem, const Triangulation& tri,
                    const CurvedDomain& domain, const NodalBasis& basis, const DGSystemSpec& spec) {
  spec.validate();
  if (basis.degree() != spec.degree)
    throw Error(ErrorCode::InvalidArgument, "basis degree differs from spec.degree");
  const VectorField& b = problem.coeffs.b;

  AssembledSystem sys = assemble_volume(problem, tri, basis, spec);
  const TripletList faces = assemble_interior_faces(tri, basis, spec, b);
  sys.triplets.insert(sys.triplets.end(), faces.begin(), faces.end());

  const SolveOptions options{spec.solver_tol};
  DGSolution sol;
  switch (spec.method) {
    case Method::classical: {
      const BoundaryValues g = classical_boundary_values(problem.u, tri, domain, basis);
      const AssembledSystem boundary = assemble_boundary_faces_classical(tri, basis, spec, g, b);
      sys.triplets.insert(sys.triplets.end(), boundary.triplets.begin(), boundary.triplets.end());
      const SolveResult res = solve(to_compressed(sys.triplets, sys.n), sys.load + boundary.load, options);
      sol.u = res.x;
      sol.system_size = sys.n;
      sol.relative_residual = res.relative_residual;
      break;
    }
    case Method::rod_global: {
      const BoundaryConstraintSet constraints = build_constraints(tri, domain, basis, problem.u);
      const ReducedSystem red = build_rod_global_system(sys, constraints, basis);
      const SolveResult res = solve(red.matrix, red.load, options);
      sol.u = red.expand(res.x);
      sol.system_size = static_cast<int>(red.kept.size());
      sol.relative_residual = res.relative_residual;
      for (const auto& bc : constraints.constraints) sol.tangent_warnings += bc.tangent_warning;
      break;
    }
    case Method::rod_iterative: {
      const BoundaryConstraintSet constraints = build_constraints(tri, domain, basis, problem.u);
      sol = solve_rod_iterative(sys, tri, basis, spec, b, constraints,
                                classical_boundary_values(problem.u, tri, domain, basis));
      for (const auto& bc : constraints.constraints) sol.tangent_warnings += bc.tangent_warning;
      break;
    }
  }
  return sol;
}

}  // namespace dgrod
