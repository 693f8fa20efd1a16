#include "dgrod/analysis.hpp"

#include "dgrod/error.hpp"
#include "dgrod/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dgrod {

namespace {

AffineMap element_map(const Triangulation& tri, int k) {
  return AffineMap(tri.vertex(k, 0), tri.vertex(k, 1), tri.vertex(k, 2));
}

std::string format_error(double e) {
  if (e < kExactThreshold) return "exact";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2E", e);
  return buf;
}

std::string format_order(const std::optional<double>& o) {
  if (!o) return "---";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *o);
  return buf;
}

}  // namespace

int error_quadrature_degree(int degree) noexcept {
  return std::min(std::max(2 * degree + 4, 10), kMaxVolumeDegree);
}

double l2_error(const Eigen::VectorXd& u_h, const ScalarField& u, const Triangulation& tri,
                const NodalBasis& basis) {
  const int np = basis.num_nodes();
  if (u_h.size() != static_cast<Eigen::Index>(tri.num_elements()) * np)
    throw Error(ErrorCode::InvalidArgument, "solution size differs from K * N_p");
  const int degree = error_quadrature_degree(basis.degree());
  const QuadratureRule& rule = volume_quadrature(degree);
  const BasisTable& table = basis.volume_table(degree);
  double sum = 0.0;
  for (int k = 0; k < tri.num_elements(); ++k) {
    const AffineMap map = element_map(tri, k);
    const double jac = std::abs(map.determinant());
    const Eigen::VectorXd uh_q = table.values * u_h.segment(static_cast<Eigen::Index>(k) * np, np);
    for (int q = 0; q < rule.size(); ++q) {
      const double diff = u(map.to_physical(rule.points.row(q).transpose())) - uh_q(q);
      sum += rule.weights(q) * jac * diff * diff;
    }
  }
  return std::sqrt(sum);
}

double DGNormBreakdown::total() const {
  return std::sqrt(l2 + h1_semi + h2_weighted + jump_star + jump_b);
}

DGNormBreakdown dg_norm_error(const Eigen::VectorXd& u_h, const ManufacturedProblem& problem,
                              const Triangulation& tri, const NodalBasis& basis) {
  if (!problem.grad_u || !problem.has_hessian())
    throw Error(ErrorCode::MissingDerivatives, "DG norm needs the exact gradient and Hessian");
  const int np = basis.num_nodes();
  if (u_h.size() != static_cast<Eigen::Index>(tri.num_elements()) * np)
    throw Error(ErrorCode::InvalidArgument, "solution size differs from K * N_p");

  const int degree = error_quadrature_degree(basis.degree());
  const QuadratureRule& rule = volume_quadrature(degree);
  const BasisTable& table = basis.volume_table(degree);
  std::vector<Eigen::MatrixX3d> ref_hess(rule.size());
  for (int q = 0; q < rule.size(); ++q) ref_hess[q] = basis.eval_hess(rule.points.row(q).transpose());

  DGNormBreakdown out;
  Eigen::MatrixX2d grads(np, 2);
  for (int k = 0; k < tri.num_elements(); ++k) {
    const AffineMap map = element_map(tri, k);
    const double jac = std::abs(map.determinant());
    const double hk = tri.diameter(k);
    const auto coeffs = u_h.segment(static_cast<Eigen::Index>(k) * np, np);
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = map.to_physical(rule.points.row(q).transpose());
      const double w = rule.weights(q) * jac;
      grads.col(0) = table.d_xi.row(q).transpose();
      grads.col(1) = table.d_eta.row(q).transpose();
      const Eigen::Vector2d grad_h = map.physical_gradients(grads).transpose() * coeffs;
      const Eigen::Vector3d hess_h = map.physical_hessians(ref_hess[q]).transpose() * coeffs;
      const double e = problem.u(x) - table.values.row(q).dot(coeffs);
      const Eigen::Vector2d ge = problem.grad_u(x) - grad_h;
      const Eigen::Vector3d he = problem.hess_u(x) - hess_h;
      out.l2 += w * e * e;
      out.h1_semi += w * ge.squaredNorm();
      out.h2_weighted += w * hk * hk * (he(0) * he(0) + 2.0 * he(1) * he(1) + he(2) * he(2));
    }
  }

  const QuadratureRule& line = edge_quadrature(kMaxEdgePoints);
  for (const Edge& e : tri.edges()) {
    const Point a = tri.vertices()[e.vertices[0]];
    const Point c = tri.vertices()[e.vertices[1]];
    const AffineMap left = element_map(tri, e.left);
    const auto left_coeffs = u_h.segment(static_cast<Eigen::Index>(e.left) * np, np);
    for (int q = 0; q < line.size(); ++q) {
      const Point x = a + line.points(q, 0) * (c - a);
      const double w = line.weights(q) * e.length;
      const double uh_left = basis.eval(left.to_reference(x)).dot(left_coeffs);
      double jump;
      if (e.is_boundary()) {
        jump = problem.u(x) - uh_left;
      } else {
        const AffineMap right = element_map(tri, e.right);
        const double uh_right =
            basis.eval(right.to_reference(x)).dot(u_h.segment(static_cast<Eigen::Index>(e.right) * np, np));
        jump = uh_right - uh_left;
      }
      out.jump_star += w * jump * jump / e.length;
      out.jump_b += 0.5 * w * std::abs(problem.coeffs.b(x).dot(e.normal)) * jump * jump;
    }
  }
  return out;
}

double convergence_order(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (!(h_coarse > h_fine) || !(h_fine > 0.0))
    throw Error(ErrorCode::DegenerateLevels, "mesh sizes must satisfy h_coarse > h_fine > 0");
  if (!(e_coarse > 0.0) || !(e_fine > 0.0))
    throw Error(ErrorCode::DegenerateLevels, "errors must be positive");
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

std::optional<double> ConvergenceReport::order(std::size_t i) const {
  if (i == 0 || i >= levels.size()) return std::nullopt;
  const LevelResult& c = levels[i - 1];
  const LevelResult& f = levels[i];
  if (c.E2 < kExactThreshold || f.E2 < kExactThreshold || !(c.h > f.h)) return std::nullopt;
  return convergence_order(c.E2, f.E2, c.h, f.h);
}

std::optional<double> ConvergenceReport::finest_order() const {
  return levels.size() < 2 ? std::nullopt : order(levels.size() - 1);
}

std::string emit_report(const ConvergenceReport& report, ReportFormat format) {
  const bool dg = std::any_of(report.levels.begin(), report.levels.end(),
                              [](const LevelResult& l) { return l.dg_norm.has_value(); });
  std::ostringstream out;
  char h[32];
  if (format == ReportFormat::csv) {
    out << "K,h,E2,O2" << (dg ? ",DGnorm" : "") << '\n';
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
      const LevelResult& l = report.levels[i];
      std::snprintf(h, sizeof h, "%.2E", l.h);
      out << l.K << ',' << h << ',' << format_error(l.E2) << ',' << format_order(report.order(i));
      if (dg) out << ',' << (l.dg_norm ? format_error(*l.dg_norm) : std::string("---"));
      out << '\n';
    }
    return out.str();
  }

  out << "### " << report.method << ", " << report.domain << ", N = " << report.degree
      << ", case " << report.coeff_case << "\n\n";
  out << "| K | h | E2 | O2 |" << (dg ? " DG norm |" : "") << '\n';
  out << "|---:|---:|---:|---:|" << (dg ? "---:|" : "") << '\n';
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const LevelResult& l = report.levels[i];
    std::snprintf(h, sizeof h, "%.2E", l.h);
    out << "| " << l.K << " | " << h << " | " << format_error(l.E2) << " | "
        << format_order(report.order(i)) << " |";
    if (dg) out << ' ' << (l.dg_norm ? format_error(*l.dg_norm) : std::string("---")) << " |";
    out << '\n';
  }
  char meta[160];
  std::snprintf(meta, sizeof meta,
                "\neta0 = %g, volume quadrature degree %d, edge points %d, wall time %.2f s\n",
                report.eta0, report.volume_quadrature, report.edge_quadrature, report.wall_time);
  out << meta;
  return out.str();
}

}  // namespace dgrod
