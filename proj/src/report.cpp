#include "curvlab/report.hpp"

#include "curvlab/error.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace curvlab {

void RunConfig::validate() const {
  if (!(r_max > 0.0)) throw ParameterError("config: r_max must be positive");
  if (grid_points < 1) throw ParameterError("config: grid_points must be positive");
  if (frame_budget < 1) throw ParameterError("config: frame_budget must be positive");
  if (grid_refinements < 0) throw ParameterError("config: grid_refinements must be nonnegative");
  if (matrix_starts < 1) throw ParameterError("config: matrix_starts must be positive");
}

nlohmann::json to_json(const RunConfig& config) {
  return {
      {"seed", config.seed},
      {"r_max", config.r_max},
      {"grid_points", config.grid_points},
      {"frame_budget", config.frame_budget},
      {"grid_refinements", config.grid_refinements},
      {"matrix_starts", config.matrix_starts},
      {"output_dir", config.output_dir.string()},
      {"format", config.format == OutputFormat::Json ? "json" : "csv"},
  };
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ParameterError("config: invalid value '" + text + "' for " + key);
  return value;
}

}  // namespace

void apply_config_text(RunConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "seed") {
      config.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "r_max") {
      config.r_max = parse_number<double>(key, value);
    } else if (key == "grid_points") {
      config.grid_points = parse_number<int>(key, value);
    } else if (key == "frame_budget") {
      config.frame_budget = parse_number<long long>(key, value);
    } else if (key == "grid_refinements") {
      config.grid_refinements = parse_number<int>(key, value);
    } else if (key == "matrix_starts") {
      config.matrix_starts = parse_number<int>(key, value);
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else if (key == "format") {
      if (value == "json") config.format = OutputFormat::Json;
      else if (value == "csv") config.format = OutputFormat::Csv;
      else throw ParameterError("config: format must be json or csv");
    } else {
      throw ParameterError("config: unknown key '" + key + "'");
    }
  }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("config: cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(config, text.str());
}

void apply_environment(RunConfig& config) {
  if (const char* s = std::getenv("CURVLAB_SEED"); s != nullptr && *s != '\0')
    config.seed = parse_number<std::uint64_t>("CURVLAB_SEED", s);
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw InputError("csv: row width does not match header");
  rows_.push_back(std::move(row));
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_line(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  csv_line(out, header_);
  for (const auto& row : rows_) csv_line(out, row);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << str();
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

nlohmann::json VerificationReport::document(const RunConfig& config) const {
  return {
      {"suite", suite},
      {"pass", pass},
      {"config", to_json(config)},
      {"seed_derivation", "task_seed = splitmix64(seed ^ splitmix64(task_index + 1))"},
      {"witnesses", witnesses},
  };
}

namespace {

void flatten_into(const nlohmann::json& j, const std::string& prefix, CsvTable& table) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten_into(value, prefix.empty() ? key : prefix + "." + key, table);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten_into(j[i], prefix + "[" + std::to_string(i) + "]", table);
  } else if (j.is_string()) {
    table.add_row({prefix, j.get<std::string>()});
  } else if (j.is_number_float()) {
    table.add_row({prefix, format_double(j.get<double>())});
  } else {
    table.add_row({prefix, j.dump()});
  }
}

}  // namespace

CsvTable flatten(const nlohmann::json& j) {
  CsvTable table({"key", "value"});
  flatten_into(j, "", table);
  return table;
}

std::filesystem::path VerificationReport::write(const RunConfig& config) const {
  std::filesystem::create_directories(config.output_dir);
  const nlohmann::json doc = document(config);
  std::filesystem::path path;
  if (config.format == OutputFormat::Json) {
    path = config.output_dir / (suite + ".json");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << doc.dump(2) << "\n";
  } else {
    path = config.output_dir / (suite + ".csv");
    flatten(doc).write(path);
  }
  std::ofstream timing(config.output_dir / (suite + ".timing.json"), std::ios::binary);
  timing << nlohmann::json{{"suite", suite}, {"seconds", seconds}}.dump(2) << "\n";
  return path;
}

}  // namespace curvlab
