#include "dgrod/problems.hpp"

#include "dgrod/error.hpp"

#include <cmath>
#include <limits>

namespace dgrod {

const char* to_string(ExactSolution s) {
  switch (s) {
    case ExactSolution::disk_xsin: return "x*sin(1-x^2-y^2)";
    case ExactSolution::log_radius: return "log(x^2+y^2)";
    case ExactSolution::quadratic: return "1-x^2-y^2";
    case ExactSolution::zero: return "0";
  }
  return "?";
}

Coefficients make_coefficients(int coeff_case) {
  switch (coeff_case) {
    case 1:
      return {[](const Point&) { return Eigen::Vector2d(1.0, 1.0); },
              [](const Point&) { return 0.0; }, [](const Point&) { return 1.0; }};
    case 2:
      return {[](const Point& p) { return Eigen::Vector2d(std::exp(p.x()), 0.0); },
              [](const Point& p) { return std::exp(p.x()); },
              [](const Point& p) { return 0.5 * std::exp(p.x()); }};
    case 3:
      return {[](const Point& p) {
                return Eigen::Vector2d(2.0 - p.y() * p.y(), 2.0 - p.x());
              },
              [](const Point&) { return 0.0; },
              [](const Point& p) {
                const double t = 1.0 + p.y();
                return 1.0 + (1.0 + p.x()) * t * t;
              }};
    default:
      throw Error(ErrorCode::InvalidArgument,
                  "coefficient case must be 1, 2 or 3, got " + std::to_string(coeff_case));
  }
}

ManufacturedProblem make_problem(ExactSolution solution, int coeff_case) {
  ManufacturedProblem p;
  p.name = to_string(solution);
  p.coeffs = make_coefficients(coeff_case);
  switch (solution) {
    case ExactSolution::disk_xsin:
      p.u = [](const Point& x) { return x.x() * std::sin(1.0 - x.squaredNorm()); };
      p.grad_u = [](const Point& x) {
        const double s = std::sin(1.0 - x.squaredNorm());
        const double c = std::cos(1.0 - x.squaredNorm());
        return Eigen::Vector2d(s - 2.0 * x.x() * x.x() * c, -2.0 * x.x() * x.y() * c);
      };
      p.hess_u = [](const Point& x) {
        const double s = std::sin(1.0 - x.squaredNorm());
        const double c = std::cos(1.0 - x.squaredNorm());
        const double a = x.x(), b = x.y();
        return Eigen::Vector3d(-6.0 * a * c - 4.0 * a * a * a * s,
                               -2.0 * b * c - 4.0 * a * a * b * s,
                               -2.0 * a * c - 4.0 * a * b * b * s);
      };
      break;
    case ExactSolution::log_radius:
      p.u = [](const Point& x) { return std::log(x.squaredNorm()); };
      p.grad_u = [](const Point& x) { return Eigen::Vector2d(2.0 * x / x.squaredNorm()); };
      p.hess_u = [](const Point& x) {
        const double r2 = x.squaredNorm();
        const double r4 = r2 * r2;
        const double a = x.x(), b = x.y();
        return Eigen::Vector3d(2.0 * (b * b - a * a) / r4, -4.0 * a * b / r4,
                               2.0 * (a * a - b * b) / r4);
      };
      break;
    case ExactSolution::quadratic:
      p.u = [](const Point& x) { return 1.0 - x.squaredNorm(); };
      p.grad_u = [](const Point& x) { return Eigen::Vector2d(-2.0 * x); };
      p.hess_u = [](const Point&) { return Eigen::Vector3d(-2.0, 0.0, -2.0); };
      break;
    case ExactSolution::zero:
      p.u = [](const Point&) { return 0.0; };
      p.grad_u = [](const Point&) { return Eigen::Vector2d::Zero().eval(); };
      p.hess_u = [](const Point&) { return Eigen::Vector3d::Zero().eval(); };
      break;
  }
  return p;
}

ManufacturedProblem make_case(DomainKind domain_kind, int coeff_case) {
  return make_problem(
      domain_kind == DomainKind::disk ? ExactSolution::disk_xsin : ExactSolution::log_radius,
      coeff_case);
}

double source_term(const ManufacturedProblem& problem, const Point& x) {
  if (!problem.has_hessian())
    throw Error(ErrorCode::MissingDerivatives, "source term needs the Hessian of u");
  const double u = problem.u(x);
  return -problem.laplacian(x) + problem.coeffs.b(x).dot(problem.grad_u(x)) +
         problem.coeffs.div_b(x) * u + problem.coeffs.c(x) * u;
}

double check_wellposedness(const ManufacturedProblem& problem, const CurvedDomain& domain,
                           int grid_n) {
  if (grid_n < 2) throw Error(ErrorCode::InvalidArgument, "grid_n must be >= 2");
  const double r = domain.scale();
  double minimum = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const Point p(-r + 2.0 * r * i / (grid_n - 1), -r + 2.0 * r * j / (grid_n - 1));
      if (!domain.contains(p)) continue;
      minimum = std::min(minimum, problem.coeffs.c(p) + 0.5 * problem.coeffs.div_b(p));
    }
  }
  return minimum;
}

}  // namespace dgrod
