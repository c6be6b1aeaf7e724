#include "curvlab/commands.hpp"
#include "curvlab/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

using namespace curvlab;

namespace {

struct Flags {
  std::optional<std::string> config_file;
  std::optional<std::uint64_t> seed;
  std::optional<double> r_max;
  std::optional<int> grid_points;
  std::optional<long long> frame_budget;
  std::optional<int> grid_refinements;
  std::optional<int> matrix_starts;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_file, "Flat key = value config file");
  app->add_option("--seed", f.seed, "Base RNG seed");
  app->add_option("--r-max", f.r_max, "Half-width of the r grid");
  app->add_option("--grid-points", f.grid_points, "Number of r grid points");
  app->add_option("--frame-budget", f.frame_budget, "Random frames per grid point");
  app->add_option("--grid-refinements", f.grid_refinements, "Midpoint refinement passes");
  app->add_option("--matrix-starts", f.matrix_starts, "Multi-start count for matrix descent");
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

// defaults < config file < CURVLAB_SEED < flags
RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (f.config_file) apply_config_file(c, *f.config_file);
  apply_environment(c);
  if (f.seed) c.seed = *f.seed;
  if (f.r_max) c.r_max = *f.r_max;
  if (f.grid_points) c.grid_points = *f.grid_points;
  if (f.frame_budget) c.frame_budget = *f.frame_budget;
  if (f.grid_refinements) c.grid_refinements = *f.grid_refinements;
  if (f.matrix_starts) c.matrix_starts = *f.matrix_starts;
  if (f.out) c.output_dir = *f.out;
  if (f.format) c.format = *f.format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvlab: numerical checks for m-intermediate curvature on warped products"};
  app.require_subcommand(1);

  Flags flags;
  int n = 0;
  int m = 0;
  double lambda = 1.0;
  std::optional<double> epsilon;
  std::optional<std::string> metric_path;
  bool no_model = false;
  GraphResolution resolution;

  auto* verify = app.add_subcommand("verify-examples", "Verify the warped-product examples");
  verify->add_option("--n", n, "Total dimension")->required();
  verify->add_option("--m", m, "Curvature index")->required();
  verify->add_option("--lambda", lambda, "Target lower bound");
  verify->add_option("--epsilon", epsilon, "Sphere scale; searched when omitted");
  add_common(verify, flags);

  auto* scan = app.add_subcommand("scan-algebra", "Exact rational sweeps");
  add_common(scan, flags);

  auto* matrix = app.add_subcommand("matrix-inequalities", "Minimize the matrix functionals");
  matrix->add_option("--n", n)->required();
  matrix->add_option("--m", m)->required();
  add_common(matrix, flags);

  auto* diam = app.add_subcommand("diameter", "Diameter bounds and model check");
  diam->add_option("--n", n)->required();
  diam->add_option("--m", m)->required();
  diam->add_option("--lambda", lambda);
  diam->add_flag("--no-model", no_model, "Skip the rotational model diameter");
  diam->add_option("--radial", resolution.radial, "Graph nodes along r");
  diam->add_option("--angular", resolution.angular, "Graph nodes around the circle");
  diam->add_option("--stencil", resolution.stencil, "Neighbor offset radius");
  add_common(diam, flags);

  double report_epsilon = 0.125;
  auto* curv = app.add_subcommand("curvature-report", "Dump curvature tables on the r grid");
  curv->add_option("--n", n);
  curv->add_option("--m", m);
  curv->add_option("--lambda", lambda);
  curv->add_option("--epsilon", report_epsilon);
  curv->add_option("--metric", metric_path, "Metric JSON export to read instead");
  add_common(curv, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  RunConfig config;
  try {
    config = resolve(flags);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (verify->parsed())
    return cmd_verify_examples(config, n, m, lambda, epsilon, std::cout, std::cerr);
  if (scan->parsed()) return cmd_scan_algebra(config, std::cout, std::cerr);
  if (matrix->parsed()) return cmd_matrix_inequalities(config, n, m, std::cout, std::cerr);
  if (diam->parsed())
    return cmd_diameter(config, n, m, lambda, !no_model, resolution, std::cout, std::cerr);
  if (!metric_path && (n == 0 || m == 0)) {
    std::cerr << "error: curvature-report needs --n and --m, or --metric\n";
    return kExitUsage;
  }
  std::optional<std::filesystem::path> path;
  if (metric_path) path = *metric_path;
  return cmd_curvature_report(config, n, m, lambda, report_epsilon, path, std::cout, std::cerr);
}
