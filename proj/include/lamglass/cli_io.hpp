#pragma once

// Scenario configuration, CSV output and the table reproduction driver.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lamglass/model.hpp"
#include "lamglass/solver.hpp"

namespace lamglass {

enum class LoadKind { Ramp, Points };

struct ScenarioConfig {
  std::string preset;  // informational; explicit keys override it
  LaminateGeometry geometry;
  std::size_t elements = 500;
  Materials materials;
  double temperature = 25.0;  // [C]

  LoadKind load_kind = LoadKind::Ramp;
  double intensity = 10.0;   // [N/m], ramp only
  double ramp_time = 1e-5;   // [s], ramp only
  double end_time = 1e5;     // [s], ramp only
  std::vector<std::pair<double, double>> load_points;  // points only
  /// Empty means the default ramp grid (one step, 6 and 24 log steps).
  std::vector<GridSegment> grid;

  Kinematics kinematics = Kinematics::VonKarman;
  SolverConfig solver;

  std::string csv_path;  // empty: no file

  LoadHistory load_history() const;
  TimeGrid time_grid() const;
  LaminateModel build() const;
};

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

/// Names accepted by the `preset` key.
std::vector<std::string> preset_names();
/// Defaults for a named preset. Throws ConfigError for unknown names.
ScenarioConfig preset_config(std::string_view name);

/// Parses the sectioned key-value format. Throws ConfigError naming the field.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Writes every field explicitly; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

inline constexpr int kCsvSchemaVersion = 1;
std::vector<std::string> csv_columns();
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const StepRecord& r);
void write_csv(std::ostream& out, const std::vector<StepRecord>& records);

/// Runs the scenario; writes the CSV when csv_path is set.
HistoryResult run_scenario(const ScenarioConfig& config);

// ---------------------------------------------------------------------------
// Table reproduction

struct TableRow {
  std::string label;
  std::string quantity;
  double computed = 0.0;
  double target = 0.0;
  double tolerance = 0.0;  // relative
  bool checked = true;     // false: reported only
  double relative_error() const noexcept;
  bool pass() const noexcept;
};

struct TableReport {
  std::string name;
  std::vector<TableRow> rows;
  bool all_pass() const noexcept;
  std::string format() const;
};

std::vector<std::string> table_names();

struct TableOptions {
  std::filesystem::path fixtures;  // targets file
  std::size_t elements = 500;
  std::size_t threads = 0;  // 0: hardware concurrency
};

/// Default location of the targets file (set at build time).
std::filesystem::path default_fixtures_path();

/// Runs the scenario matrix of a named table. Throws ArgumentError for unknown names.
TableReport reproduce_table(std::string_view name, const TableOptions& options = {});

/// Runs jobs on up to `threads` workers; results keep the job order.
template <class Result>
std::vector<Result> run_parallel(const std::vector<std::function<Result()>>& jobs,
                                 std::size_t threads);

}  // namespace lamglass

#include "lamglass/detail/parallel.hpp"
