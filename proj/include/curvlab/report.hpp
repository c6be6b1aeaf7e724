#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace curvlab {

enum class OutputFormat { Json, Csv };

struct RunConfig {
  std::uint64_t seed = 20240607;
  double r_max = 10.0;
  int grid_points = 121;
  long long frame_budget = 100000;
  int grid_refinements = 4;
  int matrix_starts = 64;
  std::filesystem::path output_dir = "curvlab-out";
  OutputFormat format = OutputFormat::Json;

  /// Throws ParameterError unless every numeric field is positive.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);

/// Applies `key = value` lines ('#' starts a comment) on top of `config`.
/// Unknown keys and malformed values throw ParameterError.
void apply_config_text(RunConfig& config, const std::string& text);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Overrides the seed from CURVLAB_SEED when set.
void apply_environment(RunConfig& config);

/// RFC-4180 table: CRLF line endings, fields quoted when they contain a
/// comma, quote, CR or LF.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row);
  std::string str() const;
  void write(const std::filesystem::path& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

/// Suite result written as <output_dir>/<suite>.json (or .csv). The document
/// holds {suite, pass, config, seed_derivation, witnesses}. Wall-clock timing
/// goes to a separate <suite>.timing.json so reports stay byte-identical
/// across reruns.
struct VerificationReport {
  std::string suite;
  bool pass = false;
  nlohmann::json witnesses = nlohmann::json::object();
  double seconds = 0.0;

  nlohmann::json document(const RunConfig& config) const;
  /// Writes the report and returns its path.
  std::filesystem::path write(const RunConfig& config) const;
};

/// Flattens nested JSON into (dotted.key, value) rows.
CsvTable flatten(const nlohmann::json& j);

}  // namespace curvlab
