#include "dgrod/study.hpp"

#include "dgrod/error.hpp"
#include "dgrod/mesh.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

namespace dgrod {

namespace {

using nlohmann::json;

DomainKind parse_domain_kind(const std::string& s) {
  if (s == "disk") return DomainKind::disk;
  if (s == "annulus") return DomainKind::annulus;
  if (s == "rose") return DomainKind::rose;
  throw Error(ErrorCode::ConfigError, "unknown domain kind '" + s + "'");
}

template <class T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

json to_json(const RunConfig& c) {
  json d = {{"kind", to_string(c.domain.kind)}};
  switch (c.domain.kind) {
    case DomainKind::disk: d["radius"] = c.domain.radius; break;
    case DomainKind::rose:
      d["petals"] = c.domain.petals;
      d["magnitude"] = c.domain.magnitude;
      [[fallthrough]];
    case DomainKind::annulus:
      d["inner_radius"] = c.domain.inner_radius;
      d["outer_radius"] = c.domain.outer_radius;
      break;
  }
  return json{{"name", c.name},
              {"domain", d},
              {"degree", c.degree},
              {"method", to_string(c.method)},
              {"coeff_case", c.coeff_case},
              {"solution", c.solution},
              {"levels", c.levels},
              {"mesh_files", c.mesh_files},
              {"eta0", c.eta0},
              {"volume_quadrature", c.volume_quadrature},
              {"edge_points", c.edge_points},
              {"solver_tol", c.solver_tol},
              {"max_iter", c.max_iter},
              {"stop_tol", c.stop_tol},
              {"dg_norm", c.dg_norm},
              {"output_dir", c.output_dir},
              {"format", c.format},
              {"seed", c.seed}};
}

Triangulation level_mesh(const RunConfig& config, const CurvedDomain& domain, std::size_t i) {
  if (config.mesh_files.empty()) return generate_mesh(domain, config.levels[i]);
  std::ifstream in(config.mesh_files[i]);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open mesh file " + config.mesh_files[i]);
  return read_gmsh(in, domain);
}

std::string level_label(const RunConfig& config, std::size_t i) {
  return config.mesh_files.empty() ? "level " + std::to_string(i) + " (rings " +
                                         std::to_string(config.levels[i]) + ")"
                                   : "level " + std::to_string(i) + " (" + config.mesh_files[i] + ")";
}

}  // namespace

CurvedDomain DomainConfig::make() const {
  switch (kind) {
    case DomainKind::disk: return CurvedDomain::disk(radius);
    case DomainKind::annulus: return CurvedDomain::annulus(inner_radius, outer_radius);
    case DomainKind::rose:
      return CurvedDomain::rose(inner_radius, outer_radius, petals, magnitude);
  }
  throw Error(ErrorCode::ConfigError, "unknown domain kind");
}

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ConfigError, what); };
  if (name.empty() || name.find_first_of("/\\") != std::string::npos)
    fail("name must be a non-empty file name");
  if (degree < 1 || degree > kMaxDegree) fail("degree must be in 1..4");
  if (coeff_case < 1 || coeff_case > 3) fail("coeff_case must be 1, 2 or 3");
  if (solution != "benchmark" && solution != "quadratic" && solution != "zero")
    fail("solution must be benchmark, quadratic or zero");
  if (mesh_files.empty() && levels.empty()) fail("at least one mesh level is required");
  for (int r : levels)
    if (r < 1) fail("ring counts must be >= 1");
  if (format != "csv" && format != "md" && format != "both") fail("format must be csv, md or both");
  try {
    system_spec().validate();
    (void)domain.make();
  } catch (const Error& e) {
    fail(e.what());
  }
}

DGSystemSpec RunConfig::system_spec() const {
  DGSystemSpec s;
  s.degree = degree;
  s.eta0 = eta0;
  s.method = method;
  s.volume_degree = volume_quadrature;
  s.edge_points = edge_points;
  s.max_iter = max_iter;
  s.stop_tol = stop_tol;
  s.solver_tol = solver_tol;
  return s;
}

ManufacturedProblem RunConfig::problem() const {
  if (solution == "quadratic") return make_problem(ExactSolution::quadratic, coeff_case);
  if (solution == "zero") return make_problem(ExactSolution::zero, coeff_case);
  return make_case(domain.kind, coeff_case);
}

RunConfig parse_config(const std::string& json_text) {
  RunConfig c;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
    static const char* known[] = {"name", "domain", "degree", "method", "coeff_case", "solution",
                                  "levels", "mesh_files", "eta0", "volume_quadrature",
                                  "edge_points", "solver_tol", "max_iter", "stop_tol", "dg_norm",
                                  "output_dir", "format", "seed"};
    for (const auto& item : j.items())
      if (std::find_if(std::begin(known), std::end(known),
                       [&](const char* k) { return item.key() == k; }) == std::end(known))
        throw Error(ErrorCode::ConfigError, "unknown config key '" + item.key() + "'");
    read(j, "name", c.name);
    if (j.contains("domain")) {
      const json& d = j.at("domain");
      c.domain.kind = parse_domain_kind(d.value("kind", std::string("disk")));
      read(d, "radius", c.domain.radius);
      read(d, "inner_radius", c.domain.inner_radius);
      read(d, "outer_radius", c.domain.outer_radius);
      read(d, "petals", c.domain.petals);
      read(d, "magnitude", c.domain.magnitude);
    }
    read(j, "degree", c.degree);
    if (j.contains("method")) {
      try {
        c.method = parse_method(j.at("method").get<std::string>());
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, e.what());
      }
    }
    read(j, "coeff_case", c.coeff_case);
    read(j, "solution", c.solution);
    read(j, "levels", c.levels);
    read(j, "mesh_files", c.mesh_files);
    read(j, "eta0", c.eta0);
    read(j, "volume_quadrature", c.volume_quadrature);
    read(j, "edge_points", c.edge_points);
    read(j, "solver_tol", c.solver_tol);
    read(j, "max_iter", c.max_iter);
    read(j, "stop_tol", c.stop_tol);
    read(j, "dg_norm", c.dg_norm);
    read(j, "output_dir", c.output_dir);
    read(j, "format", c.format);
    read(j, "seed", c.seed);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return c;
}

std::string serialize_config(const RunConfig& config) { return to_json(config).dump(2); }

ConvergenceReport run_convergence_study(const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const CurvedDomain domain = config.domain.make();
  const DGSystemSpec spec = config.system_spec();
  const ManufacturedProblem problem = config.problem();
  const NodalBasis basis(config.degree);

  ConvergenceReport report;
  report.domain = to_string(config.domain.kind);
  report.degree = config.degree;
  report.method = to_string(config.method);
  report.coeff_case = config.coeff_case;
  report.eta0 = config.eta0;
  report.volume_quadrature = spec.volume_quadrature_degree();
  report.edge_quadrature = spec.edge_quadrature_points();

  const std::size_t count = config.mesh_files.empty() ? config.levels.size() : config.mesh_files.size();
  for (std::size_t i = 0; i < count; ++i) {
    try {
      const Triangulation tri = level_mesh(config, domain, i);
      const MeshQualityReport quality = validate(tri, domain);
      if (!quality.passed()) {
        std::string msg = "mesh check failed:";
        for (const auto& v : quality.violations) msg += " " + v + ";";
        throw Error(ErrorCode::InvalidArgument, msg);
      }
      const DGSolution sol = solve_dg(problem, tri, domain, basis, spec);
      LevelResult row;
      row.K = tri.num_elements();
      row.h = tri.h();
      row.E2 = l2_error(sol.u, problem.u, tri, basis);
      row.system_size = sol.system_size;
      row.solver_residual = sol.relative_residual;
      row.iterations = sol.iterations;
      if (config.dg_norm) {
        row.dg_components = dg_norm_error(sol.u, problem, tri, basis);
        row.dg_norm = row.dg_components->total();
      }
      report.levels.push_back(row);
    } catch (const Error& e) {
      throw Error(e.code(), level_label(config, i) + ": " + e.what());
    }
  }
  std::stable_sort(report.levels.begin(), report.levels.end(),
                   [](const LevelResult& a, const LevelResult& b) { return a.h > b.h; });
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ConvergenceReport run_patch_test(RunConfig config) {
  if (config.degree < 2) throw Error(ErrorCode::ConfigError, "patch test needs degree >= 2");
  if (config.domain.kind != DomainKind::disk)
    throw Error(ErrorCode::ConfigError, "patch test runs on the disk");
  config.solution = "quadratic";
  return run_convergence_study(config);
}

std::filesystem::path write_outputs(const RunConfig& config, const ConvergenceReport& report,
                                    const std::filesystem::path& dir) {
  const std::filesystem::path run = dir / config.name;
  std::filesystem::create_directories(run);
  const std::string echo = serialize_config(config);
  auto write = [&](const std::string& file, const std::string& text) {
    std::ofstream out(run / file, std::ios::binary);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + (run / file).string());
    out << text;
  };
  write("config_echo", echo + "\n");
  if (config.format != "md") {
    std::ostringstream csv;
    std::istringstream lines(echo);
    for (std::string line; std::getline(lines, line);) csv << "# " << line << '\n';
    csv << emit_report(report, ReportFormat::csv);
    write("report.csv", csv.str());
  }
  if (config.format != "csv") write("report.md", emit_report(report, ReportFormat::markdown));
  return run;
}

}  // namespace dgrod
