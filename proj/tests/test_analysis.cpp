#include "dgrod/analysis.hpp"
#include "dgrod/error.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dgrod;

namespace {

Eigen::VectorXd interpolate(const ScalarField& f, const Triangulation& tri, const NodalBasis& basis) {
  const int np = basis.num_nodes();
  Eigen::VectorXd u(tri.num_elements() * np);
  for (int k = 0; k < tri.num_elements(); ++k) {
    const AffineMap map(tri.vertex(k, 0), tri.vertex(k, 1), tri.vertex(k, 2));
    for (int i = 0; i < np; ++i) u(k * np + i) = f(map.to_physical(basis.nodes().row(i).transpose()));
  }
  return u;
}

Triangulation unit_square() { return Triangulation::build({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}}); }

// Composite Simpson on [0, 1] with 200 panels.
template <class F>
double simpson(F&& f) {
  const int n = 400;
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(static_cast<double>(i) / n);
  return s / (3.0 * n);
}

ConvergenceReport report_with(std::vector<std::pair<double, double>> h_and_e) {
  ConvergenceReport r;
  r.domain = "disk";
  r.degree = 2;
  r.method = "rod_global";
  r.coeff_case = 1;
  int K = 10;
  for (auto [h, e] : h_and_e) {
    LevelResult l;
    l.K = K;
    K *= 4;
    l.h = h;
    l.E2 = e;
    r.levels.push_back(l);
  }
  return r;
}

}  // namespace

TEST(L2Error, Examples) {
  const auto square = unit_square();
  const NodalBasis basis(2);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2 * basis.num_nodes());
  EXPECT_EQ(l2_error(zero, [](const Point&) { return 0.0; }, square, basis), 0.0);
  EXPECT_NEAR(l2_error(zero, [](const Point&) { return 1.0; }, square, basis), 1.0, 1e-14);
  // ∫_0^1∫_0^1 x^2 y^2 = 1/9.
  EXPECT_NEAR(l2_error(zero, [](const Point& p) { return p.x() * p.y(); }, square, basis), 1.0 / 3.0, 1e-14);
}

TEST(L2Error, InterpolantErrorDecreasesAtOrderNPlusOne) {
  for (const auto& domain : {CurvedDomain::disk(1.0), CurvedDomain::annulus(0.5, 1.0), CurvedDomain::rose(0.5, 1.0, 8, 0.1)}) {
    const auto problem = make_case(domain.kind(), 1);
    const std::vector<int> rings = domain.kind() == DomainKind::disk ? std::vector{3, 6, 12} : std::vector{2, 4, 8};
    for (int N = 1; N <= 4; ++N) {
      const NodalBasis basis(N);
      std::vector<double> e, h;
      for (int r : rings) {
        const auto tri = generate_mesh(domain, r);
        e.push_back(l2_error(interpolate(problem.u, tri, basis), problem.u, tri, basis));
        h.push_back(tri.h());
      }
      EXPECT_LT(e[1], e[0]);
      EXPECT_LT(e[2], e[1]);
      if (N == 4 && domain.kind() == DomainKind::disk)
        EXPECT_GT(convergence_order(e[1], e[2], h[1], h[2]), 4.5);
    }
  }
}

TEST(DGNorm, ExactInterpolantHasZeroError) {
  const auto disk = CurvedDomain::disk(1.0);
  const auto tri = generate_mesh(disk, 3);
  const NodalBasis basis(2);
  const auto problem = make_problem(ExactSolution::quadratic, 1);
  const auto d = dg_norm_error(interpolate(problem.u, tri, basis), problem, tri, basis);
  EXPECT_NEAR(d.l2, 0.0, 1e-24);
  EXPECT_NEAR(d.h1_semi, 0.0, 1e-22);
  EXPECT_NEAR(d.h2_weighted, 0.0, 1e-20);
  EXPECT_NEAR(d.jump_star, 0.0, 1e-22);
  EXPECT_NEAR(d.jump_b, 0.0, 1e-22);
}

TEST(DGNorm, ContinuousInputOnlyJumpsOnBoundary) {
  const auto disk = CurvedDomain::disk(1.0);
  const auto tri = generate_mesh(disk, 3);
  const NodalBasis basis(2);
  auto problem = make_case(DomainKind::disk, 1);
  const Eigen::VectorXd u_h = interpolate(problem.u, tri, basis);
  const auto d = dg_norm_error(u_h, problem, tri, basis);
  double boundary = 0.0, boundary_b = 0.0;
  const int np = basis.num_nodes();
  for (const Edge& e : tri.edges()) {
    if (!e.is_boundary()) continue;
    const Point a = tri.vertices()[e.vertices[0]], c = tri.vertices()[e.vertices[1]];
    const AffineMap map(tri.vertex(e.left, 0), tri.vertex(e.left, 1), tri.vertex(e.left, 2));
    auto jump = [&](double t) {
      const Point x = a + t * (c - a);
      return problem.u(x) - basis.eval(map.to_reference(x)).dot(u_h.segment(e.left * np, np));
    };
    boundary += simpson([&](double t) { return std::pow(jump(t), 2); });
    boundary_b += 0.5 * e.length * simpson([&](double t) {
      const Point x = a + t * (c - a);
      return std::abs(problem.coeffs.b(x).dot(e.normal)) * std::pow(jump(t), 2);
    });
  }
  EXPECT_NEAR(d.jump_star, boundary, 1e-8 * boundary);
  EXPECT_NEAR(d.jump_b, boundary_b, 1e-8 * boundary_b);

  problem.coeffs.b = [](const Point&) { return Eigen::Vector2d::Zero().eval(); };
  EXPECT_EQ(dg_norm_error(u_h, problem, tri, basis).jump_b, 0.0);
}

TEST(DGNorm, ComponentsOrdered) {
  const auto disk = CurvedDomain::disk(1.0);
  const auto tri = generate_mesh(disk, 3);
  const NodalBasis basis(1);
  const auto problem = make_case(DomainKind::disk, 3);
  const auto d = dg_norm_error(Eigen::VectorXd::Zero(tri.num_elements() * 3), problem, tri, basis);
  for (double c : {d.l2, d.h1_semi, d.h2_weighted, d.jump_star, d.jump_b}) EXPECT_GE(c, 0.0);
  EXPECT_GE(d.total(), std::sqrt(d.l2 + d.h1_semi));
  EXPECT_GE(std::sqrt(d.l2 + d.h1_semi), std::sqrt(d.l2));
  EXPECT_NEAR(d.l2, std::pow(l2_error(Eigen::VectorXd::Zero(tri.num_elements() * 3), problem.u, tri, basis), 2), 1e-14);
}

TEST(DGNorm, MissingDerivatives) {
  auto problem = make_case(DomainKind::disk, 1);
  problem.hess_u = nullptr;
  const auto tri = generate_mesh(CurvedDomain::disk(1.0), 3);
  const NodalBasis basis(1);
  try {
    dg_norm_error(Eigen::VectorXd::Zero(tri.num_elements() * 3), problem, tri, basis);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingDerivatives);
  }
}

TEST(ConvergenceOrder, Examples) {
  EXPECT_NEAR(convergence_order(8e-3, 1e-3, 0.2, 0.1), 3.0, 1e-12);
  EXPECT_NEAR(convergence_order(2.53e-2, 5.02e-3, 4.48e-1, 2.38e-1), 2.557, 5e-4);
  EXPECT_EQ(convergence_order(1e-6, 1e-6, 0.2, 0.1), 0.0);
}

TEST(ConvergenceOrder, DegenerateLevels) {
  for (auto [ec, ef, hc, hf] : {std::array{1e-3, 1e-4, 0.1, 0.1}, std::array{1e-3, 0.0, 0.2, 0.1},
                                std::array{1e-3, 1e-4, 0.1, 0.2}}) {
    try {
      convergence_order(ec, ef, hc, hf);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DegenerateLevels);
    }
  }
}

TEST(ConvergenceOrder, ScaleInvariant) {
  for (double s : {1e-5, 0.3, 7.0, 1e4})
    EXPECT_NEAR(convergence_order(s * 3.1e-2, s * 4.4e-3, 0.31, 0.17), convergence_order(3.1e-2, 4.4e-3, 0.31, 0.17),
                1e-12);
}

TEST(Report, CsvFormatting) {
  const auto single = report_with({{0.5, 1.13e-6}});
  EXPECT_EQ(emit_report(single, ReportFormat::csv), "K,h,E2,O2\n10,5.00E-01,1.13E-06,---\n");
  const auto cubic = report_with({{0.2, 8e-3}, {0.1, 1e-3}});
  EXPECT_EQ(emit_report(cubic, ReportFormat::csv), "K,h,E2,O2\n10,2.00E-01,8.00E-03,---\n40,1.00E-01,1.00E-03,3.0\n");
  ASSERT_TRUE(cubic.finest_order());
  EXPECT_NEAR(*cubic.finest_order(), 3.0, 1e-12);
}

TEST(Report, ExactErrorsSuppressOrders) {
  const auto r = report_with({{0.2, 1e-10}, {0.1, 1e-16}});
  EXPECT_EQ(emit_report(r, ReportFormat::csv), "K,h,E2,O2\n10,2.00E-01,1.00E-10,---\n40,1.00E-01,exact,---\n");
  EXPECT_FALSE(r.finest_order());
}

TEST(Report, DgNormColumnAndMarkdown) {
  auto r = report_with({{0.2, 8e-3}, {0.1, 1e-3}});
  r.levels[1].dg_norm = 2.5e-2;
  EXPECT_EQ(emit_report(r, ReportFormat::csv),
            "K,h,E2,O2,DGnorm\n10,2.00E-01,8.00E-03,---,---\n40,1.00E-01,1.00E-03,3.0,2.50E-02\n");
  const std::string md = emit_report(r, ReportFormat::markdown);
  EXPECT_NE(md.find("| K | h | E2 | O2 | DG norm |"), std::string::npos);
  EXPECT_NE(md.find("| 40 | 1.00E-01 | 1.00E-03 | 3.0 | 2.50E-02 |"), std::string::npos);
  EXPECT_NE(md.find("rod_global, disk, N = 2, case 1"), std::string::npos);
}

TEST(ErrorQuadrature, Degrees) {
  EXPECT_EQ(error_quadrature_degree(1), 10);
  EXPECT_EQ(error_quadrature_degree(3), 10);
  EXPECT_EQ(error_quadrature_degree(4), 12);
}
