// Command-line driver: solve, tables, limits, sweep.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "lamglass/cli_io.hpp"
#include "lamglass/reference.hpp"

namespace {

enum Exit { kOk = 0, kTolerance = 1, kConfig = 2, kNonconvergence = 3 };

void print_final(std::ostream& out, const std::string& label, const lamglass::StepRecord& r) {
  out << std::setprecision(6) << label << ": t = " << r.time << " s, w = " << 1e3 * r.deflection
      << " mm, sigma(output) = " << 1e-6 * r.sigma_output()
      << " MPa, sigma(max) = " << 1e-6 * r.sigma_max << " MPa\n";
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

int cmd_solve(const std::string& config_path, const std::string& csv) {
  lamglass::ScenarioConfig c = lamglass::load_config(config_path);
  if (!csv.empty()) c.csv_path = csv;
  const auto result = lamglass::run_scenario(c);
  if (c.csv_path.empty()) lamglass::write_csv(std::cout, result.records);
  print_final(std::cerr, "final", result.records.back());
  return kOk;
}

int cmd_tables(const std::vector<std::string>& names, const lamglass::TableOptions& options) {
  bool ok = true;
  for (const auto& name : names) {
    const auto report = lamglass::reproduce_table(name, options);
    std::cout << report.format() << "\n";
    ok = ok && report.all_pass();
  }
  return ok ? kOk : kTolerance;
}

int cmd_limits(const std::string& config_path, const std::string& kinematics) {
  const lamglass::ScenarioConfig c = lamglass::load_config(config_path);
  double q = c.intensity;
  if (c.load_kind == lamglass::LoadKind::Points) {
    q = 0.0;
    for (const auto& p : c.load_points) q = std::max(q, std::abs(p.second));
  }
  lamglass::ReferenceOptions opt;
  opt.elements = c.elements;
  opt.solver = c.solver;
  if (kinematics == "vk") opt.kinematics = lamglass::Kinematics::VonKarman;
  if (kinematics == "fs") opt.kinematics = lamglass::Kinematics::FiniteStrain;
  const auto mon = lamglass::monolithic_limit(c.geometry, c.materials, q, opt);
  const auto lay = lamglass::layered_limit(c.geometry, c.materials, q, opt);
  std::cout << std::setprecision(6) << "load = " << q << " N/m, kinematics = " << kinematics << "\n";
  for (const auto& [name, r] : {std::pair{"monolithic", mon}, std::pair{"layered", lay}})
    std::cout << name << ": w = " << 1e3 * r.deflection
              << " mm, sigma(output) = " << 1e-6 * r.sigma_output
              << " MPa, sigma(max) = " << 1e-6 * r.sigma_max << " MPa\n";
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& temperatures,
              std::size_t threads) {
  const lamglass::ScenarioConfig base = lamglass::load_config(config_path);
  std::vector<std::function<lamglass::StepRecord()>> jobs;
  for (double t : temperatures) {
    lamglass::ScenarioConfig c = base;
    c.temperature = t;
    if (!c.csv_path.empty()) c.csv_path = with_suffix(c.csv_path, "_T" + lamglass::format_double(t));
    jobs.push_back([c] { return lamglass::run_scenario(c).records.back(); });
  }
  const auto finals = lamglass::run_parallel(jobs, threads);
  for (std::size_t i = 0; i < finals.size(); ++i)
    print_final(std::cout, "T = " + lamglass::format_double(temperatures[i]) + " C", finals[i]);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layerwise viscoelastic laminated glass beam solver"};
  app.require_subcommand(1);

  std::string config_path, csv, kinematics = "linear";
  std::vector<std::string> tables;
  std::vector<double> temperatures;
  lamglass::TableOptions topt;
  std::string fixtures;

  auto* solve = app.add_subcommand("solve", "Run a scenario and write its CSV");
  solve->add_option("config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  solve->add_option("--csv", csv, "Output CSV (overrides [output] csv)");

  auto* tab = app.add_subcommand("tables", "Reproduce reference tables");
  tab->add_option("name", tables, "formulations, validation, temperature or all")->required();
  tab->add_option("--fixtures", fixtures, "Targets file")->check(CLI::ExistingFile);
  tab->add_option("--elements", topt.elements, "Elements per layer");
  tab->add_option("--threads", topt.threads, "Worker threads (0: all cores)");

  auto* lim = app.add_subcommand("limits", "Monolithic and layered limits of a scenario");
  lim->add_option("config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  lim->add_option("--kinematics", kinematics, "linear, vk or fs")
      ->check(CLI::IsMember({"linear", "vk", "fs"}));

  auto* sweep = app.add_subcommand("sweep", "Run a scenario at several temperatures");
  sweep->add_option("config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--temperatures", temperatures, "Temperatures [C]")->required()->delimiter(',');
  sweep->add_option("--threads", topt.threads, "Worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*solve) return cmd_solve(config_path, csv);
    if (*tab) {
      if (!fixtures.empty()) topt.fixtures = fixtures;
      if (tables.size() == 1 && tables[0] == "all") tables = lamglass::table_names();
      return cmd_tables(tables, topt);
    }
    if (*lim) return cmd_limits(config_path, kinematics);
    if (*sweep) return cmd_sweep(config_path, temperatures, topt.threads);
  } catch (const lamglass::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const lamglass::NonconvergenceError& e) {
    std::cerr << "solver did not converge: " << e.what() << "\n";
    for (std::size_t i = 0; i < e.trace().size(); ++i)
      std::cerr << "  iteration " << i << ": eta1 = " << e.trace()[i].eta1
                << ", eta2 = " << e.trace()[i].eta2 << "\n";
    return kNonconvergence;
  } catch (const lamglass::LinearSolverError& e) {
    std::cerr << "linear solver failure: " << e.what() << "\n";
    return kNonconvergence;
  } catch (const lamglass::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
