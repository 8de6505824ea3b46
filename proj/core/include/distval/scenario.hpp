#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "distval/serialize.hpp"

namespace distval {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitDiverged = 3;

std::string_view tool_version();

struct SchemaViolation {
  std::string pointer;
  std::string message;
};

// The JSON-Schema subset used by the shipped schemas: local $ref, type,
// enum, const, properties, required, additionalProperties (boolean), items,
// minItems, maxItems, minimum, maximum, exclusiveMinimum, minLength, oneOf,
// anyOf. Annotations are ignored. Reports the first violation found.
std::optional<SchemaViolation> validate_schema(const Json& instance, const Json& schema);

// docs/scenario.schema.json and docs/report.schema.json, compiled in.
const Json& scenario_schema();
const Json& report_schema();

struct ScenarioError : std::runtime_error {
  ScenarioError(const std::string& message, std::string pointer, std::optional<std::size_t> byte_offset = {});
  std::string pointer;
  std::optional<std::size_t> byte_offset;  // malformed JSON only
};

// Parses and validates; throws ScenarioError.
Json parse_scenario(std::string_view text);

// Command-line overrides. Set fields take precedence over the scenario.
struct RunOptions {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_max;      // caps every sequence length
  std::optional<std::size_t> budget;     // probe ladder pairings
  std::optional<int> grid_depth;         // probe ladder levels
  std::optional<int> max_depth;          // quadrature bisection depth
  bool oracle = false;                   // tighter quadrature everywhere
  unsigned threads = 0;                  // 0: DISTVAL_THREADS or hardware
};

struct CsvRow {
  std::string series;
  double param = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct Report {
  std::string name;
  Json body;
  std::vector<CsvRow> rows;
  int exit_code = kExitOk;
};

// Body layout shared by scenario runs and reproduce targets. Throws
// std::logic_error when the result does not match the report schema.
Report make_report(std::string name, std::string task, std::uint64_t seed, Json scenario, Json options,
                   std::string verdict, Json result, std::vector<CsvRow> rows, int exit_code,
                   std::optional<Json> checks = std::nullopt);

// Effective numerical options of a run, as echoed in reports.
struct EffectiveOptions {
  double tol = 1e-4;
  std::uint64_t seed = 42;
  bool oracle = false;
  PairingOptions pairing;
  std::optional<std::size_t> n_max;
  std::optional<std::size_t> budget;
  std::optional<int> grid_depth;
  unsigned threads = 0;
  bool seed_forced = false;  // set on the command line, wins over task seeds

  LimitOptions limit() const;
  Json json() const;
  std::size_t cap(std::size_t n) const { return n_max ? std::min(n, *n_max) : n; }
};

EffectiveOptions effective_options(const RunOptions& opt, std::optional<double> scenario_tol,
                                   std::optional<std::uint64_t> scenario_seed);

// Runs a validated scenario. Errors in field content throw ScenarioError
// with the pointer of the offending field.
Report run_scenario(const Json& scenario, std::string name, const RunOptions& opt = {});

std::string report_json_text(const Report& r);
// Header "series,param,value,error".
std::string report_csv_text(const Report& r);

// <dir>/<name>.json, <dir>/<name>.csv and <dir>/<name>.timing.json; only the
// last one carries wall-clock data.
void write_report(const Report& r, const std::filesystem::path& dir, double wall_seconds, unsigned threads);

}  // namespace distval
