#pragma once

#include "curvlab/diameter.hpp"
#include "curvlab/report.hpp"

#include <filesystem>
#include <optional>
#include <ostream>

namespace curvlab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

// Each command writes its report under config.output_dir, prints the report
// path on `out` and diagnostics on `err`, and returns an exit code.

int cmd_verify_examples(const RunConfig& config, int n, int m, double lambda,
                        std::optional<double> epsilon, std::ostream& out, std::ostream& err);

int cmd_scan_algebra(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_matrix_inequalities(const RunConfig& config, int n, int m, std::ostream& out,
                            std::ostream& err);

/// The model check runs when m = n - 2 and `run_model` is set.
int cmd_diameter(const RunConfig& config, int n, int m, double lambda, bool run_model,
                 const GraphResolution& resolution, std::ostream& out, std::ostream& err);

/// Curvature tables on the r grid, for either the warped example (n, m,
/// lambda, epsilon) or a metric read from `metric_path`.
int cmd_curvature_report(const RunConfig& config, int n, int m, double lambda, double epsilon,
                         const std::optional<std::filesystem::path>& metric_path,
                         std::ostream& out, std::ostream& err);

}  // namespace curvlab
