#pragma once

#include "dgrod/basis.hpp"
#include "dgrod/mesh.hpp"
#include "dgrod/problems.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace dgrod {

/// Quadrature degree used for error integrals at polynomial degree N.
int error_quadrature_degree(int degree) noexcept;

/// sqrt(Σ_k ∫_{T^k} (u - u_h)^2), integrated over the mesh elements only.
double l2_error(const Eigen::VectorXd& u_h, const ScalarField& u, const Triangulation& tri,
                const NodalBasis& basis);

/// Squared contributions to the DG-norm error.
struct DGNormBreakdown {
  double l2 = 0.0;          // Σ_k ‖e‖²_{L²(T^k)}
  double h1_semi = 0.0;     // Σ_k |e|²_{H¹(T^k)}
  double h2_weighted = 0.0; // Σ_k h_k² |e|²_{H²(T^k)}
  double jump_star = 0.0;   // Σ_e h_e⁻¹ ‖⟦e⟧‖²
  double jump_b = 0.0;      // Σ_e ½ ‖|b·n|^{1/2} ⟦e⟧‖²

  double total() const;     // square root of the sum
};

/// Needs the exact gradient and Hessian; throws MissingDerivatives otherwise.
DGNormBreakdown dg_norm_error(const Eigen::VectorXd& u_h, const ManufacturedProblem& problem,
                              const Triangulation& tri, const NodalBasis& basis);

/// Errors below this are reported as exact.
inline constexpr double kExactThreshold = 1e-14;

/// log(E_c / E_f) / log(h_c / h_f). Throws DegenerateLevels for h_c <= h_f or
/// non-positive errors.
double convergence_order(double e_coarse, double e_fine, double h_coarse, double h_fine);

struct LevelResult {
  int K = 0;
  double h = 0.0;
  double E2 = 0.0;
  std::optional<double> dg_norm;
  std::optional<DGNormBreakdown> dg_components;
  int system_size = 0;
  double solver_residual = 0.0;
  int iterations = 0;
};

struct ConvergenceReport {
  std::string domain;
  int degree = 0;
  std::string method;
  int coeff_case = 0;
  double eta0 = 0.0;
  int volume_quadrature = 0;
  int edge_quadrature = 0;
  double wall_time = 0.0;  // seconds, markdown only
  std::vector<LevelResult> levels;  // decreasing h

  /// O2 between levels i-1 and i; empty for i == 0 and for exact errors.
  std::optional<double> order(std::size_t i) const;
  /// Order between the two finest levels.
  std::optional<double> finest_order() const;
};

enum class ReportFormat { csv, markdown };

/// CSV `K,h,E2,O2[,DGnorm]` or a markdown table; errors as %.2E, orders with
/// one decimal, "---" where no order exists.
std::string emit_report(const ConvergenceReport& report, ReportFormat format);

}  // namespace dgrod
