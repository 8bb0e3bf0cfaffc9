#include "lamglass/cli_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lamglass/reference.hpp"

#ifndef LAMGLASS_FIXTURES_DIR
#define LAMGLASS_FIXTURES_DIR "fixtures"
#endif

namespace lamglass {

namespace pt = boost::property_tree;

// ---------------------------------------------------------------------------
// Scenario helpers

LoadHistory ScenarioConfig::load_history() const {
  if (load_kind == LoadKind::Ramp) return LoadHistory::ramp_and_hold(intensity, ramp_time, end_time);
  return LoadHistory(load_points);
}

TimeGrid ScenarioConfig::time_grid() const {
  if (!grid.empty()) return TimeGrid::from_segments(grid);
  return TimeGrid::ramp_grid(ramp_time / 10.0, ramp_time, end_time);
}

LaminateModel ScenarioConfig::build() const {
  return build_model(geometry, materials, elements, kinematics);
}

namespace {

bool same_chain(const PronyChain& a, const PronyChain& b) {
  if (a.g_inf() != b.g_inf() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.units()[i].modulus != b.units()[i].modulus ||
        a.units()[i].relaxation_time != b.units()[i].relaxation_time)
      return false;
  }
  return true;
}

bool same_closure(const ConstitutiveClosure& a, const ConstitutiveClosure& b) {
  if (a.index() != b.index()) return false;
  if (const auto* k = std::get_if<ConstantBulk>(&a))
    return k->bulk_modulus == std::get<ConstantBulk>(b).bulk_modulus;
  return std::get<ConstantPoisson>(a).poisson == std::get<ConstantPoisson>(b).poisson;
}

}  // namespace

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  const auto& ga = a.geometry;
  const auto& gb = b.geometry;
  const auto& ma = a.materials;
  const auto& mb = b.materials;
  auto same_grid = [](const std::vector<GridSegment>& x, const std::vector<GridSegment>& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(), [](const auto& p, const auto& q) {
      return p.t_end == q.t_end && p.steps == q.steps && p.spacing == q.spacing;
    });
  };
  return a.preset == b.preset && ga.span == gb.span && ga.width == gb.width &&
         ga.thickness == gb.thickness && ga.support == gb.support &&
         ga.first_span == gb.first_span && a.elements == b.elements &&
         ma.glass.young == mb.glass.young && ma.glass.poisson == mb.glass.poisson &&
         same_chain(ma.chain, mb.chain) && ma.wlf.c1 == mb.wlf.c1 && ma.wlf.c2 == mb.wlf.c2 &&
         ma.wlf.t_ref == mb.wlf.t_ref && same_closure(ma.closure, mb.closure) &&
         a.temperature == b.temperature && a.load_kind == b.load_kind &&
         a.intensity == b.intensity && a.ramp_time == b.ramp_time &&
         a.end_time == b.end_time && a.load_points == b.load_points && same_grid(a.grid, b.grid) &&
         a.kinematics == b.kinematics && a.solver.eps1 == b.solver.eps1 &&
         a.solver.eps2 == b.solver.eps2 && a.solver.max_iterations == b.solver.max_iterations &&
         a.solver.divergence_factor == b.solver.divergence_factor &&
         a.solver.pivot_threshold == b.solver.pivot_threshold && a.csv_path == b.csv_path;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

struct Preset {
  const char* name;
  SupportType support;
  double span, first_span, width;
  std::vector<double> thickness;
  double temperature, intensity, end_time;
};

const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = {
      {"geometry-I", SupportType::FixedEnd, 3.0, 0.0, 0.15, {0.003, 0.00076, 0.003}, 25.0, 10.0, 1e5},
      {"geometry-II", SupportType::SimplySupported, 3.0, 0.0, 0.15, {0.006, 0.00076, 0.006}, 25.0,
       10.0, 1e5},
      {"validation-1", SupportType::SimplySupported, 1.0, 0.0, 0.1, {0.004, 0.00038, 0.008}, 17.4,
       38.25, 36000.0},
      {"validation-2", SupportType::SimplySupported, 1.0, 0.0, 0.1, {0.004, 0.00076, 0.008}, 18.3,
       38.25, 36000.0},
      {"validation-3", SupportType::TwoSpanContinuous, 1.4, 0.7, 0.1, {0.004, 0.00038, 0.004}, 17.8,
       94.22, 36000.0},
  };
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : presets()) out.emplace_back(p.name);
  return out;
}

ScenarioConfig preset_config(std::string_view name) {
  for (const auto& p : presets()) {
    if (name != p.name) continue;
    ScenarioConfig c;
    c.preset = p.name;
    c.geometry = {p.span, p.width, p.thickness, p.support, p.first_span};
    c.temperature = p.temperature;
    c.intensity = p.intensity;
    c.end_time = p.end_time;
    return c;
  }
  throw ConfigError("geometry.preset", "unknown preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Formatting

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& field, const std::string& text) {
  double v = 0.0;
  const std::string s = trim(text);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(field, "expected a number, got '" + s + "'");
  return v;
}

std::size_t to_count(const std::string& field, const std::string& text) {
  std::size_t v = 0;
  const std::string s = trim(text);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError(field, "expected a non-negative integer, got '" + s + "'");
  return v;
}

double positive(const std::string& field, double v) {
  if (!(v > 0.0)) throw ConfigError(field, "must be positive");
  return v;
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& field, const std::string& s) {
  std::vector<std::pair<double, double>> out;
  for (const auto& item : split(s, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw ConfigError(field, "expected 'a:b' pairs, got '" + item + "'");
    out.emplace_back(to_double(field, parts[0]), to_double(field, parts[1]));
  }
  return out;
}

const char* to_string(Spacing s) { return s == Spacing::Log ? "log" : "linear"; }

std::string closure_name(const ConstitutiveClosure& c) {
  return std::holds_alternative<ConstantBulk>(c) ? "k" : "nu";
}

SupportType parse_support(const std::string& field, const std::string& s) {
  for (SupportType t : {SupportType::FixedEnd, SupportType::SimplySupported,
                        SupportType::TwoSpanContinuous})
    if (s == to_string(t)) return t;
  throw ConfigError(field, "expected fixed, simple or two-span, got '" + s + "'");
}

// Keys per section; anything else is rejected.
const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"geometry",
       {"preset", "support", "span_m", "first_span_m", "width_m", "thickness_m", "thickness_mm",
        "elements"}},
      {"material",
       {"glass_young_Pa", "glass_poisson", "closure", "interlayer_poisson", "interlayer_bulk_Pa",
        "prony_g_inf_Pa", "prony_units", "wlf_c1", "wlf_c2", "wlf_t_ref_C"}},
      {"load",
       {"temperature_C", "history", "intensity_N_per_m", "ramp_s", "end_s", "points", "grid"}},
      {"solver",
       {"kinematics", "geometric", "eps1", "eps2", "max_iterations", "divergence_factor",
        "pivot_threshold"}},
      {"output", {"csv"}},
  };
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing

ScenarioConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", std::string("malformed configuration: ") + e.message() + " (line " +
                              std::to_string(e.line()) + ")");
  }

  std::map<std::string, std::string> kv;  // "section.key" -> value
  for (const auto& [section, node] : tree) {
    if (node.empty()) throw ConfigError(section, "key outside of any section or empty section");
    const auto known = known_keys().find(section);
    if (known == known_keys().end()) throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : node) {
      if (!known->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
      kv[section + "." + key] = trim(value.data());
    }
  }
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto number = [&](const std::string& k, double& target) {
    if (const auto* v = get(k)) target = to_double(k, *v);
  };
  auto positive_number = [&](const std::string& k, double& target) {
    if (const auto* v = get(k)) target = positive(k, to_double(k, *v));
  };

  ScenarioConfig c;
  if (const auto* p = get("geometry.preset")) {
    c = preset_config(*p);
  } else {
    for (const char* k : {"geometry.support", "geometry.span_m", "geometry.width_m"})
      if (!get(k)) throw ConfigError(k, "required when no preset is given");
    if (!get("geometry.thickness_m") && !get("geometry.thickness_mm"))
      throw ConfigError("geometry.thickness_m", "required when no preset is given");
  }

  // [geometry]
  if (const auto* v = get("geometry.support")) c.geometry.support = parse_support("geometry.support", *v);
  positive_number("geometry.span_m", c.geometry.span);
  positive_number("geometry.width_m", c.geometry.width);
  positive_number("geometry.first_span_m", c.geometry.first_span);
  if (get("geometry.thickness_m") && get("geometry.thickness_mm"))
    throw ConfigError("geometry.thickness_mm", "give either thickness_m or thickness_mm");
  for (const auto& [key, scale] : {std::pair{"geometry.thickness_m", 1.0},
                                   std::pair{"geometry.thickness_mm", 1e-3}}) {
    const auto* v = get(key);
    if (!v) continue;
    c.geometry.thickness.clear();
    const auto items = split(*v, ',');
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string field = std::string(key) + "[" + std::to_string(i + 1) + "]";
      c.geometry.thickness.push_back(scale * positive(field, to_double(field, items[i])));
    }
    if (c.geometry.thickness.size() != 3)
      throw ConfigError(key, "expected three thicknesses (glass, interlayer, glass)");
  }
  if (const auto* v = get("geometry.elements")) {
    c.elements = to_count("geometry.elements", *v);
    if (c.elements < 2) throw ConfigError("geometry.elements", "must be at least 2");
  }
  if (c.geometry.support == SupportType::TwoSpanContinuous && !(c.geometry.first_span > 0.0))
    throw ConfigError("geometry.first_span_m", "required for a two-span beam");

  // [material]
  positive_number("material.glass_young_Pa", c.materials.glass.young);
  number("material.glass_poisson", c.materials.glass.poisson);
  if (!(c.materials.glass.poisson >= 0.0 && c.materials.glass.poisson < 0.5))
    throw ConfigError("material.glass_poisson", "must lie in [0, 0.5)");
  {
    std::string closure = closure_name(c.materials.closure);
    if (const auto* v = get("material.closure")) closure = *v;
    if (closure == "nu") {
      double nu = 0.49;
      number("material.interlayer_poisson", nu);
      if (!(nu >= 0.0 && nu < 0.5))
        throw ConfigError("material.interlayer_poisson", "must lie in [0, 0.5)");
      if (get("material.interlayer_bulk_Pa"))
        throw ConfigError("material.interlayer_bulk_Pa", "only valid with closure = k");
      c.materials.closure = ConstantPoisson{nu};
    } else if (closure == "k") {
      double k = 2e9;
      positive_number("material.interlayer_bulk_Pa", k);
      if (get("material.interlayer_poisson"))
        throw ConfigError("material.interlayer_poisson", "only valid with closure = nu");
      c.materials.closure = ConstantBulk{k};
    } else {
      throw ConfigError("material.closure", "expected k or nu, got '" + closure + "'");
    }
  }
  if (get("material.prony_g_inf_Pa") || get("material.prony_units")) {
    if (!get("material.prony_g_inf_Pa") || !get("material.prony_units"))
      throw ConfigError("material.prony_units", "prony_g_inf_Pa and prony_units go together");
    const double g_inf =
        positive("material.prony_g_inf_Pa", to_double("material.prony_g_inf_Pa",
                                                      *get("material.prony_g_inf_Pa")));
    std::vector<MaxwellUnit> units;
    if (!get("material.prony_units")->empty()) {
      for (const auto& [theta, g] : parse_pairs("material.prony_units", *get("material.prony_units"))) {
        positive("material.prony_units", theta);
        positive("material.prony_units", g);
        units.push_back({g, theta});
      }
    }
    try {
      c.materials.chain = PronyChain(g_inf, std::move(units));
    } catch (const ArgumentError& e) {
      throw ConfigError("material.prony_units", e.what());
    }
  }
  number("material.wlf_c1", c.materials.wlf.c1);
  number("material.wlf_c2", c.materials.wlf.c2);
  number("material.wlf_t_ref_C", c.materials.wlf.t_ref);

  // [load]
  number("load.temperature_C", c.temperature);
  try {
    shift_factor(c.temperature, c.materials.wlf);
  } catch (const DomainError& e) {
    throw ConfigError("load.temperature_C", e.what());
  }
  if (const auto* v = get("load.history")) {
    if (*v == "ramp") c.load_kind = LoadKind::Ramp;
    else if (*v == "points") c.load_kind = LoadKind::Points;
    else throw ConfigError("load.history", "expected ramp or points, got '" + *v + "'");
  }
  number("load.intensity_N_per_m", c.intensity);
  positive_number("load.ramp_s", c.ramp_time);
  positive_number("load.end_s", c.end_time);
  if (c.load_kind == LoadKind::Ramp) {
    if (get("load.points")) throw ConfigError("load.points", "only valid with history = points");
    if (!(c.end_time > c.ramp_time)) throw ConfigError("load.end_s", "must exceed ramp_s");
  } else {
    for (const char* k : {"load.intensity_N_per_m", "load.ramp_s", "load.end_s"})
      if (get(k)) throw ConfigError(k, "only valid with history = ramp");
    if (!get("load.points")) throw ConfigError("load.points", "required with history = points");
    if (!get("load.grid")) throw ConfigError("load.grid", "required with history = points");
    c.load_points = parse_pairs("load.points", *get("load.points"));
    try {
      (void)LoadHistory(c.load_points);
    } catch (const ArgumentError& e) {
      throw ConfigError("load.points", e.what());
    }
  }
  if (const auto* v = get("load.grid")) {
    c.grid.clear();
    for (const auto& item : split(*v, ',')) {
      const auto parts = split(item, ':');
      if (parts.size() != 3)
        throw ConfigError("load.grid", "expected 't_end:steps:linear|log' items, got '" + item + "'");
      GridSegment seg{positive("load.grid", to_double("load.grid", parts[0])),
                      to_count("load.grid", parts[1]), Spacing::Linear};
      if (parts[2] == "log") seg.spacing = Spacing::Log;
      else if (parts[2] != "linear") throw ConfigError("load.grid", "unknown spacing '" + parts[2] + "'");
      c.grid.push_back(seg);
    }
  }

  // [solver]
  {
    std::string kin = c.kinematics == Kinematics::FiniteStrain ? "fs" : "vk";
    std::string geometric = c.kinematics == Kinematics::Linear ? "linear" : "nonlinear";
    if (const auto* v = get("solver.kinematics")) kin = *v;
    if (const auto* v = get("solver.geometric")) geometric = *v;
    if (kin != "vk" && kin != "fs") throw ConfigError("solver.kinematics", "expected vk or fs");
    if (geometric != "linear" && geometric != "nonlinear")
      throw ConfigError("solver.geometric", "expected linear or nonlinear");
    if (geometric == "linear" && kin == "fs")
      throw ConfigError("solver.geometric", "the linear variant uses vk kinematics");
    c.kinematics = geometric == "linear" ? Kinematics::Linear
                   : kin == "fs"         ? Kinematics::FiniteStrain
                                         : Kinematics::VonKarman;
  }
  positive_number("solver.eps1", c.solver.eps1);
  positive_number("solver.eps2", c.solver.eps2);
  if (const auto* v = get("solver.max_iterations")) {
    const std::size_t n = to_count("solver.max_iterations", *v);
    if (n < 1 || n > 100000) throw ConfigError("solver.max_iterations", "must lie in [1, 100000]");
    c.solver.max_iterations = static_cast<int>(n);
  }
  positive_number("solver.divergence_factor", c.solver.divergence_factor);
  number("solver.pivot_threshold", c.solver.pivot_threshold);
  if (!(c.solver.pivot_threshold >= 0.0 && c.solver.pivot_threshold <= 1.0))
    throw ConfigError("solver.pivot_threshold", "must lie in [0, 1]");

  // [output]
  if (const auto* v = get("output.csv")) c.csv_path = *v;

  // Parseable implies buildable.
  try {
    (void)c.build();
    const TimeGrid grid = c.time_grid();
    if (c.load_kind == LoadKind::Points) {
      for (const auto& [t, q] : c.load_history().points())
        if (t <= grid.times().back() &&
            std::none_of(grid.times().begin(), grid.times().end(),
                         [t = t](double g) { return std::abs(g - t) <= 1e-9 * std::max(t, 1e-300); }))
          throw ConfigError("load.grid", "load breakpoint t = " + format_double(t) +
                                             " s is not a grid node");
      if (c.load_history().intensity(0.0) != 0.0)
        throw ConfigError("load.points", "the history must start from zero load");
    }
  } catch (const ConfigError& e) {
    if (e.field().find('.') != std::string::npos) throw;
    throw ConfigError("geometry." + e.field(), e.what());
  } catch (const ArgumentError& e) {
    throw ConfigError("load.grid", e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open configuration file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream out;
  auto join = [](const auto& items, auto fmt) {
    std::string s;
    for (const auto& it : items) s += (s.empty() ? "" : ", ") + fmt(it);
    return s;
  };
  auto pair_fmt = [](const auto& p) { return format_double(p.first) + ":" + format_double(p.second); };

  out << "[geometry]\n";
  if (!c.preset.empty()) out << "preset = " << c.preset << "\n";
  out << "support = " << to_string(c.geometry.support) << "\n"
      << "span_m = " << format_double(c.geometry.span) << "\n";
  if (c.geometry.first_span > 0.0) out << "first_span_m = " << format_double(c.geometry.first_span) << "\n";
  out << "width_m = " << format_double(c.geometry.width) << "\n"
      << "thickness_m = " << join(c.geometry.thickness, format_double) << "\n"
      << "elements = " << c.elements << "\n\n";

  const Materials& m = c.materials;
  out << "[material]\n"
      << "glass_young_Pa = " << format_double(m.glass.young) << "\n"
      << "glass_poisson = " << format_double(m.glass.poisson) << "\n"
      << "closure = " << closure_name(m.closure) << "\n";
  if (const auto* k = std::get_if<ConstantBulk>(&m.closure))
    out << "interlayer_bulk_Pa = " << format_double(k->bulk_modulus) << "\n";
  else
    out << "interlayer_poisson = " << format_double(std::get<ConstantPoisson>(m.closure).poisson) << "\n";
  out << "prony_g_inf_Pa = " << format_double(m.chain.g_inf()) << "\n"
      << "prony_units = "
      << join(m.chain.units(),
              [](const MaxwellUnit& u) {
                return format_double(u.relaxation_time) + ":" + format_double(u.modulus);
              })
      << "\n"
      << "wlf_c1 = " << format_double(m.wlf.c1) << "\n"
      << "wlf_c2 = " << format_double(m.wlf.c2) << "\n"
      << "wlf_t_ref_C = " << format_double(m.wlf.t_ref) << "\n\n";

  out << "[load]\n"
      << "temperature_C = " << format_double(c.temperature) << "\n";
  if (c.load_kind == LoadKind::Ramp) {
    out << "history = ramp\n"
        << "intensity_N_per_m = " << format_double(c.intensity) << "\n"
        << "ramp_s = " << format_double(c.ramp_time) << "\n"
        << "end_s = " << format_double(c.end_time) << "\n";
  } else {
    out << "history = points\n"
        << "points = " << join(c.load_points, pair_fmt) << "\n";
  }
  if (!c.grid.empty())
    out << "grid = "
        << join(c.grid,
                [](const GridSegment& g) {
                  return format_double(g.t_end) + ":" + std::to_string(g.steps) + ":" +
                         to_string(g.spacing);
                })
        << "\n";
  out << "\n";

  out << "[solver]\n"
      << "kinematics = " << (c.kinematics == Kinematics::FiniteStrain ? "fs" : "vk") << "\n"
      << "geometric = " << (c.kinematics == Kinematics::Linear ? "linear" : "nonlinear") << "\n"
      << "eps1 = " << format_double(c.solver.eps1) << "\n"
      << "eps2 = " << format_double(c.solver.eps2) << "\n"
      << "max_iterations = " << c.solver.max_iterations << "\n"
      << "divergence_factor = " << format_double(c.solver.divergence_factor) << "\n"
      << "pivot_threshold = " << format_double(c.solver.pivot_threshold) << "\n";

  if (!c.csv_path.empty()) out << "\n[output]\ncsv = " << c.csv_path << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// CSV

std::vector<std::string> csv_columns() {
  return {"time_s",          "adjusted_time_s",   "load_N_per_m",     "deflection_m",
          "sigma_ply1_Pa",   "sigma_ply2_Pa",     "sigma_max_Pa",     "interlayer_N_N",
          "interlayer_V_N",  "interlayer_M_Nm",   "eta1",             "eta2",
          "iterations"};
}

void write_csv_header(std::ostream& out) {
  out << "# lamglass results schema " << kCsvSchemaVersion << "\n";
  const auto cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
}

void write_csv_row(std::ostream& out, const StepRecord& r) {
  for (double v : {r.time, r.adjusted_time, r.load, r.deflection, r.sigma_top_ply,
                   r.sigma_bottom_ply, r.sigma_max, r.interlayer_n, r.interlayer_v,
                   r.interlayer_m, r.eta1, r.eta2})
    out << format_double(v) << ",";
  out << r.iterations << "\n";
}

void write_csv(std::ostream& out, const std::vector<StepRecord>& records) {
  write_csv_header(out);
  for (const auto& r : records) write_csv_row(out, r);
}

HistoryResult run_scenario(const ScenarioConfig& config) {
  const LaminateModel model = config.build();
  HistoryResult result =
      run_history(model, config.load_history(), config.temperature, config.time_grid(), config.solver);
  if (!config.csv_path.empty()) {
    std::ofstream out(config.csv_path, std::ios::binary);
    if (!out) throw ConfigError("output.csv", "cannot write " + config.csv_path);
    write_csv(out, result.records);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Tables

double TableRow::relative_error() const noexcept {
  if (target == 0.0) return computed;
  return (computed - target) / std::abs(target);
}

bool TableRow::pass() const noexcept {
  return !checked || std::abs(relative_error()) <= tolerance;
}

bool TableReport::all_pass() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const TableRow& r) { return r.pass(); });
}

std::string TableReport::format() const {
  std::ostringstream out;
  out << "table " << name << "\n";
  out << std::left << std::setw(40) << "case" << std::setw(24) << "quantity" << std::right
      << std::setw(14) << "computed" << std::setw(14) << "target" << std::setw(11) << "error"
      << std::setw(10) << "tol" << "  status\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(40) << r.label << std::setw(24) << r.quantity << std::right
        << std::setprecision(6) << std::setw(14) << r.computed << std::setw(14) << r.target
        << std::fixed << std::setprecision(3) << std::setw(10) << 100.0 * r.relative_error() << "%"
        << std::setw(9) << 100.0 * r.tolerance << "%" << std::defaultfloat << "  "
        << (!r.checked ? "info" : r.pass() ? "PASS" : "FAIL") << "\n";
  }
  out << (all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
  return out.str();
}

std::vector<std::string> table_names() { return {"formulations", "validation", "temperature"}; }

std::filesystem::path default_fixtures_path() {
  return std::filesystem::path(LAMGLASS_FIXTURES_DIR) / "paper_targets.json";
}

namespace {

using nlohmann::json;

json load_targets(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("fixtures", "cannot open targets file " + path.string());
  return json::parse(in, nullptr, true, true);
}

struct Final {
  double deflection = 0.0;    // [mm]
  double sigma_output = 0.0;  // [MPa]
  double sigma_max = 0.0;     // [MPa]
};

Final final_of(const HistoryResult& h) {
  const StepRecord& r = h.records.back();
  return {1e3 * r.deflection, 1e-6 * r.sigma_output(), 1e-6 * r.sigma_max};
}

Final final_of(const ReferenceResult& r) {
  return {1e3 * r.deflection, 1e-6 * r.sigma_output, 1e-6 * r.sigma_max};
}

ScenarioConfig scenario(const std::string& preset, double temperature, double q, Kinematics kin,
                        std::size_t elements) {
  ScenarioConfig c = preset_config(preset);
  c.temperature = temperature;
  c.intensity = q;
  c.kinematics = kin;
  c.elements = elements;
  return c;
}

std::function<Final()> history_job(ScenarioConfig c) {
  return [c = std::move(c)] { return final_of(run_scenario(c)); };
}

TableRow row(std::string label, std::string quantity, double computed, double target,
             double tolerance, bool checked = true) {
  return {std::move(label), std::move(quantity), computed, target, tolerance, checked};
}

TableReport temperature_table(const json& t, const TableOptions& o) {
  const double tol = t.at("tolerance");
  const double secant_tol = t.at("secant_tolerance");
  std::vector<std::function<Final()>> jobs;
  for (const auto& cs : t.at("cases")) {
    const double temp = cs.at("temperature_C");
    jobs.push_back(history_job(scenario("geometry-I", temp, 10.0, Kinematics::VonKarman, o.elements)));
    jobs.push_back(history_job(scenario("geometry-I", temp, 10.0, Kinematics::Linear, o.elements)));
    jobs.push_back([temp, o] {
      const ScenarioConfig c = scenario("geometry-I", temp, 10.0, Kinematics::VonKarman, o.elements);
      return final_of(elastic_secant(c.build(), c.intensity, c.end_time, temp));
    });
  }
  const auto res = run_parallel(jobs, o.threads);

  TableReport rep{"temperature", {}};
  std::size_t i = 0;
  for (const auto& cs : t.at("cases")) {
    const std::string label = "fixed-end, T = " + format_double(cs.at("temperature_C")) + " C";
    const Final& vk = res[i++];
    const Final& lin = res[i++];
    const Final& sec = res[i++];
    rep.rows.push_back(row(label, "vk deflection [mm]", vk.deflection, cs.at("vk").at("deflection_mm"), tol));
    rep.rows.push_back(row(label, "vk stress [MPa]", vk.sigma_output, cs.at("vk").at("stress_MPa"), tol));
    rep.rows.push_back(row(label, "linear deflection [mm]", lin.deflection, cs.at("linear").at("deflection_mm"), tol));
    rep.rows.push_back(row(label, "linear stress [MPa]", lin.sigma_output, cs.at("linear").at("stress_MPa"), tol));
    rep.rows.push_back(row(label, "secant deflection [mm]", sec.deflection, cs.at("secant").at("deflection_mm"), secant_tol));
    rep.rows.push_back(row(label, "secant stress [MPa]", sec.sigma_output, cs.at("secant").at("stress_MPa"), secant_tol));
  }
  return rep;
}

TableReport validation_table(const json& t, const TableOptions& o) {
  const double tol = t.at("tolerance");
  std::vector<std::function<Final()>> jobs;
  for (const auto& cs : t.at("cases")) {
    ScenarioConfig c = preset_config(std::string(cs.at("preset")));
    c.elements = o.elements;
    ReferenceOptions ro;
    ro.elements = o.elements;
    jobs.push_back(history_job(c));
    jobs.push_back([c, ro] {
      return final_of(monolithic_limit(c.geometry, c.materials, c.intensity, ro));
    });
    jobs.push_back([c, ro] {
      return final_of(layered_limit(c.geometry, c.materials, c.intensity, ro));
    });
  }
  const auto res = run_parallel(jobs, o.threads);

  TableReport rep{"validation", {}};
  std::size_t i = 0;
  for (const auto& cs : t.at("cases")) {
    const std::string label = cs.at("label");
    const Final& vk = res[i++];
    const Final& mon = res[i++];
    const Final& lay = res[i++];
    rep.rows.push_back(row(label, "vk deflection [mm]", vk.deflection, cs.at("vk").at("deflection_mm"), tol));
    rep.rows.push_back(row(label, "vk stress [MPa]", vk.sigma_output, cs.at("vk").at("stress_MPa"), tol));
    rep.rows.push_back(row(label, "monolithic deflection [mm]", mon.deflection, cs.at("monolithic").at("deflection_mm"), tol));
    rep.rows.push_back(row(label, "layered deflection [mm]", lay.deflection, cs.at("layered").at("deflection_mm"), tol));
    rep.rows.push_back(row(label, "monolithic stress [MPa]", mon.sigma_output, cs.at("monolithic").at("stress_MPa"), tol, false));
    rep.rows.push_back(row(label, "layered stress [MPa]", lay.sigma_output, cs.at("layered").at("stress_MPa"), tol, false));
  }
  return rep;
}

TableReport formulations_table(const json& t, const TableOptions& o) {
  const double tol = t.at("tolerance");
  const double dw_tol = t.at("fs_vk_deflection_tolerance");
  const double ds_tol = t.at("fs_vk_stress_tolerance");
  const double ds_load = t.at("fs_vk_stress_checked_at_N_per_m");
  std::vector<std::function<Final()>> jobs;
  for (const auto& cs : t.at("cases")) {
    const double q = cs.at("load_N_per_m");
    jobs.push_back(history_job(scenario("geometry-I", 25.0, q, Kinematics::VonKarman, o.elements)));
    jobs.push_back(history_job(scenario("geometry-I", 25.0, q, Kinematics::FiniteStrain, o.elements)));
  }
  const auto res = run_parallel(jobs, o.threads);

  TableReport rep{"formulations", {}};
  std::size_t i = 0;
  for (const auto& cs : t.at("cases")) {
    const double q = cs.at("load_N_per_m");
    const std::string label = "fixed-end, q = " + format_double(q) + " N/m";
    const Final& vk = res[i++];
    const Final& fs = res[i++];
    rep.rows.push_back(row(label, "vk deflection [mm]", vk.deflection, cs.at("vk").at("deflection_mm"), tol));
    rep.rows.push_back(row(label, "fs deflection [mm]", fs.deflection, cs.at("fs").at("deflection_mm"), tol, false));
    rep.rows.push_back(row(label, "vk stress [MPa]", vk.sigma_max, cs.at("vk").at("stress_MPa"), tol, false));
    rep.rows.push_back(row(label, "fs stress [MPa]", fs.sigma_max, cs.at("fs").at("stress_MPa"), tol, false));
    rep.rows.push_back(row(label, "|fs-vk|/vk deflection", std::abs(fs.deflection - vk.deflection) / vk.deflection,
                           0.0, dw_tol));
    rep.rows.push_back(row(label, "|fs-vk|/vk stress", std::abs(fs.sigma_max - vk.sigma_max) / vk.sigma_max,
                           0.0, ds_tol, q == ds_load));
  }
  return rep;
}

}  // namespace

TableReport reproduce_table(std::string_view name, const TableOptions& options) {
  const auto names = table_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ArgumentError("unknown table '" + std::string(name) + "'");
  const json targets =
      load_targets(options.fixtures.empty() ? default_fixtures_path() : options.fixtures);
  const json& t = targets.at(std::string(name));
  if (name == "temperature") return temperature_table(t, options);
  if (name == "validation") return validation_table(t, options);
  return formulations_table(t, options);
}

}  // namespace lamglass
