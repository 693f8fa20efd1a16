#pragma once

#include "dgrod/analysis.hpp"
#include "dgrod/assembly.hpp"
#include "dgrod/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dgrod {

struct DomainConfig {
  DomainKind kind = DomainKind::disk;
  double radius = 1.0;        // disk
  double inner_radius = 0.5;  // annulus, rose
  double outer_radius = 1.0;  // annulus, rose
  int petals = 8;             // rose
  double magnitude = 0.1;     // rose

  CurvedDomain make() const;
};

/// One convergence study. Serialized as JSON; every field is optional in the
/// file and defaults to the values below.
struct RunConfig {
  std::string name = "study";
  DomainConfig domain;
  int degree = 2;
  Method method = Method::rod_global;
  int coeff_case = 1;
  /// "benchmark" (x sin(1 - r^2) on the disk, log r^2 otherwise), "quadratic" or "zero".
  std::string solution = "benchmark";
  std::vector<int> levels = {3, 6, 12, 24};  // ring counts of the builtin meshes
  std::vector<std::string> mesh_files;       // MSH 2.2 files; replace `levels` when given
  double eta0 = 10.0;
  int volume_quadrature = 0;  // 0: automatic
  int edge_points = 0;        // 0: automatic
  double solver_tol = 1e-10;
  int max_iter = 50;
  double stop_tol = 1e-12;
  bool dg_norm = false;
  std::string output_dir = "out";
  std::string format = "both";  // csv | md | both
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
  DGSystemSpec system_spec() const;
  ManufacturedProblem problem() const;
};

/// Throws ConfigError on malformed text or unknown values.
RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& config);

/// Builds or reads each mesh, solves with config.method and records E2 (and
/// the DG norm when requested). Rows are sorted by decreasing h. Errors are
/// rethrown with the level prepended to the message.
ConvergenceReport run_convergence_study(const RunConfig& config);

/// Study with u = 1 - x^2 - y^2 on the disk, which lies in the constrained
/// trial space and must be reproduced to round-off. Requires degree >= 2.
ConvergenceReport run_patch_test(RunConfig config);

/// Writes <dir>/<name>/{report.csv, report.md, config_echo} per config.format
/// and returns the run directory. The CSV starts with the config as comments.
std::filesystem::path write_outputs(const RunConfig& config, const ConvergenceReport& report,
                                    const std::filesystem::path& dir);

}  // namespace dgrod
