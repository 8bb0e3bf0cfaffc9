#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lamglass/cli_io.hpp"
#include "lamglass/errors.hpp"

using namespace lamglass;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

const char* kMinimal = R"(
[geometry]
support = simple
span_m = 1
width_m = 0.1
thickness_mm = 4, 0.38, 8
elements = 20
)";

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0, 1e5, 72e9}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("presets") {
  for (const auto& name : preset_names()) {
    const ScenarioConfig c = preset_config(name);
    CHECK(c.preset == name);
    CHECK_NOTHROW(c.build());
  }
  CHECK_THROWS_AS(preset_config("nope"), ConfigError);
  const auto v3 = preset_config("validation-3");
  CHECK(v3.geometry.support == SupportType::TwoSpanContinuous);
  CHECK(v3.temperature == 17.8);
}

TEST_CASE("minimal configuration") {
  const ScenarioConfig c = parse_config(kMinimal);
  CHECK(c.geometry.support == SupportType::SimplySupported);
  CHECK(c.geometry.thickness[2] == doctest::Approx(0.008));
  CHECK(c.elements == 20);
  CHECK(c.kinematics == Kinematics::VonKarman);
  CHECK(c.time_grid().steps() == 31);
  CHECK(c.build().dof_count() == 3 * 3 * 21);
}

TEST_CASE("serialize then parse is the identity") {
  for (const auto& name : preset_names()) {
    ScenarioConfig c = preset_config(name);
    CHECK(parse_config(serialize_config(c)) == c);
  }
  ScenarioConfig c = parse_config(kMinimal);
  c.materials.closure = ConstantBulk{2.1e9};
  c.materials.chain = PronyChain(1.1e5, {{1e6, 0.3}, {2e5, 7.0}});
  c.kinematics = Kinematics::FiniteStrain;
  c.temperature = 1.0 / 3.0;
  c.solver.eps1 = 3e-7;
  c.csv_path = "out.csv";
  const std::string text = serialize_config(c);
  CHECK(parse_config(text) == c);
  CHECK(serialize_config(parse_config(text)) == text);

  ScenarioConfig p = parse_config(kMinimal);
  p.load_kind = LoadKind::Points;
  p.load_points = {{0, 0}, {1, 0}, {1, 5}, {10, 5}};
  p.grid = {{1, 1, Spacing::Linear}, {1.00001, 1, Spacing::Linear}, {10, 4, Spacing::Log}};
  CHECK(parse_config(serialize_config(p)) == p);
}

TEST_CASE("configuration errors name the field") {
  const std::string base = kMinimal;
  CHECK(field_of(base + "[load]\nfoo = 1\n") == "load.foo");
  CHECK(field_of(base + "[bogus]\nx = 1\n") == "bogus");
  CHECK(field_of("[geometry]\nsupport = simple\nspan_m = 1\nwidth_m = 0.1\nthickness_mm = 4, -0.38, 8\n") ==
        "geometry.thickness_mm[2]");
  CHECK(field_of("[geometry]\nsupport = simple\nwidth_m = 0.1\nthickness_mm = 4,1,4\n") == "geometry.span_m");
  CHECK(field_of("[geometry]\npreset = geometry-I\nspan_m = -3\n") == "geometry.span_m");
  CHECK(field_of("[geometry]\npreset = geometry-I\nelements = 501\n") == "geometry.elements");
  CHECK(field_of(base + "[material]\nglass_poisson = 0.6\n") == "material.glass_poisson");
  CHECK(field_of(base + "[material]\nclosure = q\n") == "material.closure");
  CHECK(field_of(base + "[material]\ninterlayer_bulk_Pa = 2e9\n") == "material.interlayer_bulk_Pa");
  CHECK(field_of(base + "[material]\nprony_g_inf_Pa = 1e5\nprony_units = 1:1e6, 1:2e6\n") ==
        "material.prony_units");
  CHECK(field_of(base + "[load]\ntemperature_C = -60\n") == "load.temperature_C");
  CHECK(field_of(base + "[load]\nramp_s = 10\nend_s = 5\n") == "load.end_s");
  CHECK(field_of(base + "[load]\nhistory = points\npoints = 0:0, 0.5:1, 2:1\ngrid = 1:3:linear\n") == "load.grid");
  CHECK(field_of(base + "[load]\nhistory = points\npoints = 0:1, 2:1\ngrid = 2:2:linear\n") == "load.points");
  CHECK(field_of(base + "[solver]\nkinematics = fs\ngeometric = linear\n") == "solver.geometric");
  CHECK(field_of(base + "[solver]\neps1 = 0\n") == "solver.eps1");
  CHECK(field_of(base + "[solver]\nmax_iterations = abc\n") == "solver.max_iterations");
  CHECK(field_of(base + "[load]\nintensity_N_per_m = -5\n") == "<none>");
}

TEST_CASE("shipped configurations parse") {
  for (const auto& entry : std::filesystem::directory_iterator(LAMGLASS_CONFIGS_DIR))
    if (entry.path().extension() == ".ini") CHECK_NOTHROW(load_config(entry.path()));
  CHECK_THROWS_AS(load_config("/nonexistent/x.ini"), ConfigError);
}

TEST_CASE("csv output") {
  ScenarioConfig c = parse_config(std::string(kMinimal) + "[load]\nintensity_N_per_m = 0\n");
  const auto r = run_scenario(c);
  std::ostringstream out;
  write_csv(out, r.records);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# lamglass results schema 1");
  std::getline(in, line);
  std::string header;
  for (const auto& col : csv_columns()) header += (header.empty() ? "" : ",") + col;
  CHECK(line == header);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(cells, cell, ',')) {
      if (col >= 3 && col <= 9) CHECK(std::stod(cell) == 0.0);
      ++col;
    }
    CHECK(col == csv_columns().size());
  }
  CHECK(rows == r.records.size());
  CHECK(out.str().find('\r') == std::string::npos);
}

TEST_CASE("scenario output is deterministic") {
  const auto dir = std::filesystem::temp_directory_path() / "lamglass_cli_io_test";
  std::filesystem::create_directories(dir);
  ScenarioConfig c = parse_config(std::string(kMinimal) + "[load]\nintensity_N_per_m = 40\n");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  c.csv_path = (dir / "a.csv").string();
  run_scenario(c);
  c.csv_path = (dir / "b.csv").string();
  run_scenario(c);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(!slurp(dir / "a.csv").empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("closures agree on a scenario") {
  ScenarioConfig c = parse_config(std::string(kMinimal) + "[load]\nintensity_N_per_m = 40\n");
  const double nu = run_scenario(c).records.back().deflection;
  c.materials.closure = ConstantBulk{2e9};
  c.kinematics = Kinematics::FiniteStrain;
  const double k = run_scenario(c).records.back().deflection;
  CHECK(std::abs(k / nu - 1.0) < 1e-3);
}

TEST_CASE("table rows") {
  TableRow row{"x", "w", 1.01, 1.0, 0.01, true};
  CHECK(row.relative_error() == doctest::Approx(0.01));
  row.computed = 1.02;
  CHECK(!row.pass());
  row.checked = false;
  CHECK(row.pass());
  TableRow zero{"z", "w", 1e-3, 0.0, 0.01, true};
  CHECK(zero.relative_error() == doctest::Approx(1e-3));
  CHECK_THROWS_AS(reproduce_table("nosuch"), ArgumentError);
  CHECK(table_names().size() == 3);
  CHECK(std::filesystem::exists(default_fixtures_path()));
}

TEST_CASE("parallel runner keeps job order and propagates errors") {
  std::vector<std::function<int()>> jobs;
  for (int i = 0; i < 20; ++i) jobs.push_back([i] { return i * i; });
  const auto out = run_parallel(jobs, 4);
  for (int i = 0; i < 20; ++i) CHECK(out[static_cast<std::size_t>(i)] == i * i);
  jobs.push_back([]() -> int { throw ConfigError("x", "boom"); });
  CHECK_THROWS_AS(run_parallel(jobs, 3), ConfigError);
}
