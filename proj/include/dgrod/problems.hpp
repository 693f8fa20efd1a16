#pragma once

#include "dgrod/geometry.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>

namespace dgrod {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Eigen::Vector2d(const Point&)>;
/// Hessian entries (xx, xy, yy).
using HessianField = std::function<Eigen::Vector3d(const Point&)>;

enum class ExactSolution {
  disk_xsin,    // x sin(1 - x^2 - y^2)
  log_radius,   // log(x^2 + y^2)
  quadratic,    // 1 - x^2 - y^2
  zero,
};

const char* to_string(ExactSolution s);

/// Coefficient pairs (b, c) of the benchmark tables.
///  1: b = (1, 1),            c = 1
///  2: b = (e^x, 0),          c = e^x / 2
///  3: b = (2 - y^2, 2 - x),  c = 1 + (1 + x)(1 + y)^2
struct Coefficients {
  VectorField b;
  ScalarField div_b;
  ScalarField c;
};

Coefficients make_coefficients(int coeff_case);

/// Manufactured solution of -Δu + ∇·(b u) + c u = f with u = u_D on ∂Ω.
struct ManufacturedProblem {
  std::string name;
  ScalarField u;
  VectorField grad_u;
  HessianField hess_u;  // may be empty
  Coefficients coeffs;

  double laplacian(const Point& x) const {
    const Eigen::Vector3d h = hess_u(x);
    return h[0] + h[2];
  }
  double dirichlet(const Point& x) const { return u(x); }
  bool has_hessian() const noexcept { return static_cast<bool>(hess_u); }
};

ManufacturedProblem make_problem(ExactSolution solution, int coeff_case);

/// Benchmark pairing: disk -> x sin(1 - r^2), annulus/rose -> log r^2.
ManufacturedProblem make_case(DomainKind domain_kind, int coeff_case);

/// f = -Δu + b·∇u + (∇·b) u + c u from the closed-form derivatives.
double source_term(const ManufacturedProblem& problem, const Point& x);

/// Minimum of c + (∇·b)/2 over a grid_n x grid_n bounding-box grid clipped to Ω.
double check_wellposedness(const ManufacturedProblem& problem, const CurvedDomain& domain,
                           int grid_n);

}  // namespace dgrod
