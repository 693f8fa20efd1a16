// Runs a mesh-refinement convergence study and writes its report.
//
//   dgrod-study --config study.json --out out --format both
//
// Exit status: 0 on success, 2 for configuration errors, 3 for numerical failures.

#include "dgrod/error.hpp"
#include "dgrod/study.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dgrod::Error(dgrod::ErrorCode::ConfigError, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DG and DG-ROD convergence studies on curved domains"};
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::string method;
  std::vector<int> levels;
  int degree = 0;
  bool patch = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--format", format, "csv, md or both")->check(CLI::IsMember({"csv", "md", "both"}));
  app.add_option("--method", method, "classical, rod_global or rod_iterative")
      ->check(CLI::IsMember({"classical", "rod_global", "rod_iterative"}));
  app.add_option("--levels", levels, "ring counts of the builtin meshes")->delimiter(',');
  app.add_option("--degree", degree, "polynomial degree N")->check(CLI::Range(1, 4));
  app.add_flag("--patch-test", patch, "solve u = 1 - x^2 - y^2 instead of the benchmark");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  dgrod::RunConfig config;
  try {
    if (!config_path.empty()) config = dgrod::parse_config(read_file(config_path));
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (!format.empty()) config.format = format;
    if (!method.empty()) config.method = dgrod::parse_method(method);
    if (!levels.empty()) {
      config.levels = levels;
      config.mesh_files.clear();
    }
    if (degree != 0) config.degree = degree;
    config.validate();
  } catch (const dgrod::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const dgrod::ConvergenceReport report =
        patch ? dgrod::run_patch_test(config) : dgrod::run_convergence_study(config);
    const auto dir = dgrod::write_outputs(config, report, config.output_dir);
    std::cout << dgrod::emit_report(report, dgrod::ReportFormat::markdown);
    std::cout << "written to " << dir.string() << '\n';
  } catch (const dgrod::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == dgrod::ErrorCode::ConfigError ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
