#include "dgrod/analysis.hpp"
#include "dgrod/assembly.hpp"
#include "dgrod/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

using namespace dgrod;

namespace {

Eigen::MatrixXd dense(const TripletList& t, int n) { return Eigen::MatrixXd(to_compressed(t, n)); }

Coefficients no_advection(double c) {
  return {[](const Point&) { return Eigen::Vector2d::Zero().eval(); }, [](const Point&) { return 0.0; },
          [c](const Point&) { return c; }};
}

const VectorField kZeroB = [](const Point&) { return Eigen::Vector2d::Zero().eval(); };
const ScalarField kZero = [](const Point&) { return 0.0; };

double asymmetry(const Eigen::MatrixXd& A) { return (A - A.transpose()).cwiseAbs().maxCoeff() / A.cwiseAbs().maxCoeff(); }

Triangulation reference_triangle() { return Triangulation::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}); }

// Nodal interpolant of a global function on every element.
Eigen::VectorXd interpolate(const ScalarField& f, const Triangulation& tri, const NodalBasis& basis) {
  const int np = basis.num_nodes();
  Eigen::VectorXd u(tri.num_elements() * np);
  for (int k = 0; k < tri.num_elements(); ++k) {
    const AffineMap map(tri.vertex(k, 0), tri.vertex(k, 1), tri.vertex(k, 2));
    for (int i = 0; i < np; ++i) u(dof(k, i, np)) = f(map.to_physical(basis.nodes().row(i).transpose()));
  }
  return u;
}

// Constraints at the edge nodes themselves: the polygon Ω_h is treated as the domain.
BoundaryConstraintSet straight_constraints(const Triangulation& tri, const NodalBasis& basis,
                                           const ScalarField& data) {
  BoundaryConstraintSet set;
  set.degree = basis.degree();
  set.slot.assign(tri.num_elements(), -1);
  for (int k : tri.boundary_elements()) {
    const AffineMap map(tri.vertex(k, 0), tri.vertex(k, 1), tri.vertex(k, 2));
    std::vector<Point> pts;
    for (int i : constrained_edge_nodes(tri, basis, k)) pts.push_back(map.to_physical(basis.nodes().row(i).transpose()));
    set.slot[k] = static_cast<int>(set.constraints.size());
    set.constraints.push_back(make_constraint(tri, basis, k, std::move(pts), data));
  }
  return set;
}

// Boundary values of `data` at the edge nodes, ordered along the edge.
BoundaryValues straight_values(const ScalarField& data, const Triangulation& tri, const NodalBasis& basis) {
  BoundaryValues g(tri.num_elements());
  for (int k : tri.boundary_elements()) {
    const AffineMap map(tri.vertex(k, 0), tri.vertex(k, 1), tri.vertex(k, 2));
    const auto& along = basis.edge_nodes(tri.boundary_local_edge(k));
    g[k].resize(static_cast<Eigen::Index>(along.size()));
    for (std::size_t r = 0; r < along.size(); ++r)
      g[k](static_cast<Eigen::Index>(r)) = data(map.to_physical(basis.nodes().row(along[r]).transpose()));
  }
  return g;
}

AssembledSystem volume_and_faces(const Coefficients& coeffs, const ScalarField& f, const Triangulation& tri,
                                 const NodalBasis& basis, const DGSystemSpec& spec) {
  AssembledSystem sys = assemble_volume(coeffs, f, tri, basis, spec);
  const auto faces = assemble_interior_faces(tri, basis, spec, coeffs.b);
  sys.triplets.insert(sys.triplets.end(), faces.begin(), faces.end());
  return sys;
}

DGSystemSpec spec_for(int N, Method m = Method::classical) {
  DGSystemSpec s;
  s.degree = N;
  s.method = m;
  return s;
}

const CurvedDomain kDisk = CurvedDomain::disk(1.0);

}  // namespace

TEST(Volume, ReactionBlockIsMassMatrix) {
  const auto tri = reference_triangle();
  for (int N = 1; N <= 4; ++N) {
    const NodalBasis basis(N);
    const auto spec = spec_for(N);
    const Eigen::MatrixXd with_c = dense(assemble_volume(no_advection(1.0), kZero, tri, basis, spec).triplets, basis.num_nodes());
    const Eigen::MatrixXd without = dense(assemble_volume(no_advection(0.0), kZero, tri, basis, spec).triplets, basis.num_nodes());
    const Eigen::MatrixXd mass = element_mass_matrix(basis, AffineMap({0, 0}, {1, 0}, {0, 1}));
    EXPECT_NEAR((with_c - without - mass).cwiseAbs().maxCoeff(), 0.0, 1e-14);
    if (N == 1) {
      Eigen::Matrix3d expected;
      expected << 2, 1, 1, 1, 2, 1, 1, 1, 2;
      EXPECT_NEAR((with_c - without - expected / 24.0).norm(), 0.0, 1e-15);
    }
  }
}

TEST(Volume, SymmetricWithoutAdvectionAndConstantsGiveArea) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(3);
  const Coefficients coeffs{kZeroB, kZero, [](const Point& p) { return std::exp(p.x()); }};
  const auto sys = assemble_volume(coeffs, kZero, tri, basis, spec_for(3));
  EXPECT_LE(asymmetry(dense(sys.triplets, sys.n)), 1e-13);
  const auto unit = assemble_volume(no_advection(1.0), kZero, tri, basis, spec_for(3));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(unit.n);
  EXPECT_NEAR(ones.dot(dense(unit.triplets, unit.n) * ones), tri.total_area(), 1e-12);
}

TEST(Volume, LoadIsSourceAgainstBasis) {
  const auto tri = reference_triangle();
  const NodalBasis basis(1);
  const auto sys = assemble_volume(no_advection(0.0), [](const Point&) { return 1.0; }, tri, basis, spec_for(1));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(sys.load(i), 1.0 / 6.0, 1e-15);
}

TEST(InteriorFaces, ContinuousFunctionsSeeNoCoupling) {
  const auto tri = generate_mesh(kDisk, 3);
  const auto b = make_coefficients(3).b;
  for (int N = 1; N <= 4; ++N) {
    const NodalBasis basis(N);
    const int n = tri.num_elements() * basis.num_nodes();
    const Eigen::MatrixXd F = dense(assemble_interior_faces(tri, basis, spec_for(N), b), n);
    const Eigen::VectorXd u = interpolate([](const Point& p) { return 1.0 + p.x() - 0.5 * p.x() * p.y(); }, tri, basis);
    const Eigen::VectorXd v = interpolate([](const Point& p) { return p.y() * p.y() - 2.0 * p.x(); }, tri, basis);
    EXPECT_NEAR(v.dot(F * u), 0.0, 1e-12 * F.norm());
  }
}

TEST(InteriorFaces, SymmetricWithoutAdvection) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(3);
  const Eigen::MatrixXd F = dense(assemble_interior_faces(tri, basis, spec_for(3), kZeroB), tri.num_elements() * 10);
  EXPECT_LE(asymmetry(F), 1e-13);
}

TEST(InteriorFaces, PenaltyIsLinearInEta) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(2);
  const int n = tri.num_elements() * basis.num_nodes();
  const auto b = make_coefficients(1).b;
  auto faces = [&](double eta0) {
    DGSystemSpec s = spec_for(2);
    s.eta0 = eta0;
    return dense(assemble_interior_faces(tri, basis, s, b), n);
  };
  const Eigen::MatrixXd penalty = faces(20.0) - faces(10.0);
  const Eigen::MatrixXd doubled = faces(40.0) - faces(20.0);
  EXPECT_NEAR((doubled - 2.0 * penalty).cwiseAbs().maxCoeff(), 0.0, 1e-10);
  EXPECT_LE(asymmetry(penalty), 1e-13);
}

TEST(InteriorFaces, GalerkinConsistencyAwayFromBoundary) {
  // A global quadratic with polynomial data satisfies the volume plus face
  // equations exactly on every element without a boundary edge.
  const auto tri = generate_mesh(kDisk, 6);
  const NodalBasis basis(2);
  const auto problem = make_problem(ExactSolution::quadratic, 1);
  const auto sys = volume_and_faces(problem.coeffs, [&](const Point& x) { return source_term(problem, x); }, tri, basis,
                                    spec_for(2));
  const Eigen::VectorXd u = interpolate(problem.u, tri, basis);
  const Eigen::VectorXd residual = to_compressed(sys.triplets, sys.n) * u - sys.load;
  const int np = basis.num_nodes();
  for (int k = 0; k < tri.num_elements(); ++k)
    if (tri.boundary_edge(k) < 0) EXPECT_LE(residual.segment(k * np, np).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ClassicalBoundary, Values) {
  const NodalBasis basis(3);
  const auto disk_tri = generate_mesh(kDisk, 3);
  const auto disk_problem = make_case(DomainKind::disk, 1);
  for (const auto& g : classical_boundary_values(disk_problem.u, disk_tri, kDisk, basis))
    if (g.size()) EXPECT_LE(g.cwiseAbs().maxCoeff(), 1e-15);

  const auto annulus = CurvedDomain::annulus(0.5, 1.0);
  const auto tri = generate_mesh(annulus, 2);
  const auto problem = make_case(DomainKind::annulus, 1);
  const auto g = classical_boundary_values(problem.u, tri, annulus, basis);
  for (int k : tri.boundary_elements()) {
    ASSERT_EQ(g[k].size(), 4);
    const Point mid = 0.5 * (tri.vertex(k, tri.boundary_local_edge(k)) + tri.vertex(k, (tri.boundary_local_edge(k) + 1) % 3));
    const double expected = mid.norm() < 0.75 ? std::log(0.25) : 0.0;
    EXPECT_LE((g[k].array() - expected).abs().maxCoeff(), 1e-14);
  }
}

TEST(ClassicalBoundary, ZeroDataAndSymmetry) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(2);
  const BoundaryValues g = classical_boundary_values(kZero, tri, kDisk, basis);
  const auto sys = assemble_boundary_faces_classical(tri, basis, spec_for(2), g, make_coefficients(1).b);
  EXPECT_EQ(sys.load.norm(), 0.0);
  EXPECT_FALSE(sys.triplets.empty());
  const auto sym = assemble_boundary_faces_classical(tri, basis, spec_for(2), g, kZeroB);
  EXPECT_LE(asymmetry(dense(sym.triplets, sym.n)), 1e-13);
}

TEST(ClassicalBoundary, ConstantDataCancelsPenalty) {
  const auto tri = Triangulation::build({{1, 0}, {0.5, std::sqrt(0.75)}, {0, 0}}, {{0, 1, 2}});
  for (int N = 1; N <= 4; ++N) {
    const NodalBasis basis(N);
    BoundaryValues g(1, Eigen::VectorXd::Constant(N + 1, 1.0));
    const auto sys = assemble_boundary_faces_classical(tri, basis, spec_for(N), g, kZeroB);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.n);
    EXPECT_LE((dense(sys.triplets, sys.n) * ones - sys.load).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Classical, FullMatrixSymmetricWithoutAdvection) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(3);
  auto sys = volume_and_faces(no_advection(1.0), kZero, tri, basis, spec_for(3));
  const auto bnd = assemble_boundary_faces_classical(tri, basis, spec_for(3), classical_boundary_values(kZero, tri, kDisk, basis), kZeroB);
  sys.triplets.insert(sys.triplets.end(), bnd.triplets.begin(), bnd.triplets.end());
  const Eigen::MatrixXd A = dense(sys.triplets, sys.n);
  EXPECT_LE(asymmetry(A), 1e-12);
  EXPECT_TRUE(A.allFinite());
}

TEST(RodGlobal, DimensionAndZeroData) {
  const auto tri = generate_mesh(kDisk, 3);
  for (int N = 1; N <= 4; ++N) {
    const NodalBasis basis(N);
    const auto problem = make_problem(ExactSolution::zero, 1);
    const auto sol = solve_dg(problem, tri, kDisk, basis, spec_for(N, Method::rod_global));
    const int expected = tri.num_elements() * basis.num_nodes() -
                         static_cast<int>(tri.boundary_elements().size()) * (N + 1);
    EXPECT_EQ(sol.system_size, expected);
    EXPECT_EQ(sol.u.size(), tri.num_elements() * basis.num_nodes());
    EXPECT_EQ(sol.u.norm(), 0.0);
  }
}

TEST(RodGlobal, ReducedSystemSatisfiesConstraints) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(3);
  const auto problem = make_case(DomainKind::disk, 2);
  const auto sys = volume_and_faces(problem.coeffs, [&](const Point& x) { return source_term(problem, x); }, tri,
                                    basis, spec_for(3));
  const auto constraints = build_constraints(tri, kDisk, basis, [](const Point& p) { return p.x() * p.y(); });
  const ReducedSystem red = build_rod_global_system(sys, constraints, basis);
  ASSERT_EQ(red.matrix.rows(), red.matrix.cols());
  ASSERT_EQ(static_cast<int>(red.kept.size()), red.matrix.rows());
  const Eigen::VectorXd u = red.expand(solve(red.matrix, red.load).x);
  const int np = basis.num_nodes();
  for (const auto& bc : constraints.constraints)
    EXPECT_LE((bc.C * u.segment(bc.element * np, np) - bc.d).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(RodGlobal, StraightBoundaryIsStrongNodalImposition) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(2);
  const int np = basis.num_nodes();
  const auto problem = make_case(DomainKind::disk, 1);
  const auto sys = volume_and_faces(problem.coeffs, [&](const Point& x) { return source_term(problem, x); }, tri,
                                    basis, spec_for(2));
  const ScalarField data = [](const Point& p) { return 0.3 + p.x() - p.y(); };
  const ReducedSystem red = build_rod_global_system(sys, straight_constraints(tri, basis, data), basis);

  // Oracle: delete the edge-node rows, move the known edge values to the right-hand side.
  std::set<int> fixed;
  Eigen::VectorXd known = Eigen::VectorXd::Zero(sys.n);
  const auto g = straight_values(data, tri, basis);
  for (int k : tri.boundary_elements()) {
    const auto& along = basis.edge_nodes(tri.boundary_local_edge(k));
    for (std::size_t r = 0; r < along.size(); ++r) {
      fixed.insert(dof(k, along[r], np));
      known(dof(k, along[r], np)) = g[k](static_cast<Eigen::Index>(r));
    }
  }
  std::vector<int> kept;
  for (int i = 0; i < sys.n; ++i)
    if (!fixed.count(i)) kept.push_back(i);
  ASSERT_EQ(kept, red.kept);
  const Eigen::MatrixXd A = dense(sys.triplets, sys.n);
  const Eigen::VectorXd F = sys.load - A * known;
  const Eigen::MatrixXd A_red(red.matrix);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    EXPECT_NEAR(red.load(static_cast<Eigen::Index>(i)), F(kept[i]), 1e-12);
    for (std::size_t j = 0; j < kept.size(); ++j)
      ASSERT_NEAR(A_red(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), A(kept[i], kept[j]), 1e-12);
  }
  EXPECT_NEAR((red.lift - known).norm(), 0.0, 1e-12);
}

TEST(RodGlobal, StabilityProxy) {
  const auto tri = generate_mesh(kDisk, 6);
  std::mt19937_64 rng(29);
  std::normal_distribution<double> gauss;
  for (int N = 1; N <= 4; ++N) {
    const NodalBasis basis(N);
    const auto sys = volume_and_faces(no_advection(1.0), kZero, tri, basis, spec_for(N));
    const ReducedSystem red = build_rod_global_system(sys, build_constraints(tri, kDisk, basis, kZero), basis);
    const Eigen::MatrixXd A(red.matrix);
    const Eigen::MatrixXd sym = 0.5 * (A + A.transpose());
    for (int t = 0; t < 20; ++t) {
      Eigen::VectorXd v(A.rows());
      for (auto& x : v) x = gauss(rng);
      EXPECT_GT(v.dot(sym * v), 0.0);
    }
  }
}

TEST(RodGlobal, Superposition) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(2);
  const auto coeffs = make_coefficients(2);
  const ScalarField f1 = [](const Point& p) { return std::cos(p.x()); };
  const ScalarField f2 = [](const Point& p) { return p.y(); };
  const ScalarField d1 = [](const Point& p) { return p.x() * p.x(); };
  const ScalarField d2 = [](const Point& p) { return 1.0 - p.y(); };
  auto run = [&](const ScalarField& f, const ScalarField& d) {
    const auto sys = volume_and_faces(coeffs, f, tri, basis, spec_for(2));
    const ReducedSystem red = build_rod_global_system(sys, build_constraints(tri, kDisk, basis, d), basis);
    return Eigen::VectorXd(red.expand(solve(red.matrix, red.load).x));
  };
  const Eigen::VectorXd sum = run([&](const Point& p) { return f1(p) + f2(p); }, [&](const Point& p) { return d1(p) + d2(p); });
  const Eigen::VectorXd parts = run(f1, d1) + run(f2, d2);
  EXPECT_LE((sum - parts).norm(), 1e-12 * sum.norm());
}

TEST(RodIterative, StraightBoundaryConvergesInOneIteration) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(3);
  const auto problem = make_case(DomainKind::disk, 1);
  const auto sys = volume_and_faces(problem.coeffs, [&](const Point& x) { return source_term(problem, x); }, tri,
                                    basis, spec_for(3));
  const ScalarField data = [](const Point& p) { return p.x() - 2.0 * p.y(); };
  const auto sol = solve_rod_iterative(sys, tri, basis, spec_for(3, Method::rod_iterative), problem.coeffs.b,
                                       straight_constraints(tri, basis, data), straight_values(data, tri, basis));
  EXPECT_EQ(sol.iterations, 1);
  EXPECT_LE(sol.trace.front(), 1e-14);
}

TEST(RodIterative, PatchTestMatchesGlobal) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(2);
  const auto problem = make_problem(ExactSolution::quadratic, 1);
  const auto global = solve_dg(problem, tri, kDisk, basis, spec_for(2, Method::rod_global));
  const double e_global = l2_error(global.u, problem.u, tri, basis);
  EXPECT_LE(e_global, 1e-12);

  // The default stop_tol leaves an iterate error of the order of the last change.
  const auto loose = solve_dg(problem, tri, kDisk, basis, spec_for(2, Method::rod_iterative));
  EXPECT_GT(loose.iterations, 1);
  EXPECT_LE(l2_error(loose.u, problem.u, tri, basis), 10.0 * spec_for(2).stop_tol);

  DGSystemSpec tight = spec_for(2, Method::rod_iterative);
  tight.stop_tol = 1e-14;
  const auto iter = solve_dg(problem, tri, kDisk, basis, tight);
  const double e_iter = l2_error(iter.u, problem.u, tri, basis);
  EXPECT_LE(e_iter, 10.0 * std::max(e_global, kExactThreshold)) << e_iter << " vs " << e_global;
  EXPECT_LE((iter.u - global.u).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RodIterative, TighterStopTolNeverIncreasesFinalChange) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(2);
  const auto problem = make_case(DomainKind::disk, 1);
  double previous = std::numeric_limits<double>::infinity();
  for (double tol : {1e-4, 1e-7, 1e-10, 1e-12}) {
    DGSystemSpec spec = spec_for(2, Method::rod_iterative);
    spec.stop_tol = tol;
    const auto sol = solve_dg(problem, tri, kDisk, basis, spec);
    EXPECT_LE(sol.trace.back(), tol);
    EXPECT_LE(sol.trace.back(), previous);
    previous = sol.trace.back();
  }
}

TEST(RodIterative, ExhaustedIterationsReportTrace) {
  const auto tri = generate_mesh(kDisk, 3);
  const NodalBasis basis(2);
  DGSystemSpec spec = spec_for(2, Method::rod_iterative);
  spec.max_iter = 2;
  try {
    solve_dg(make_case(DomainKind::disk, 1), tri, kDisk, basis, spec);
    FAIL();
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonConvergence);
    EXPECT_EQ(e.trace().size(), 2u);
    EXPECT_GT(e.trace().back(), spec.stop_tol);
  }
}

TEST(DGSystemSpec, Validation) {
  DGSystemSpec s;
  EXPECT_NO_THROW(s.validate());
  EXPECT_DOUBLE_EQ(s.penalty(), 90.0);
  EXPECT_EQ(s.volume_quadrature_degree(), 7);
  EXPECT_EQ(s.edge_quadrature_points(), 4);
  s.eta0 = 0.0;
  EXPECT_THROW(s.validate(), Error);
  s = DGSystemSpec{};
  s.volume_degree = 13;
  EXPECT_THROW(s.validate(), Error);
  EXPECT_EQ(parse_method("rod_iterative"), Method::rod_iterative);
  EXPECT_THROW(parse_method("nitsche"), Error);
}
