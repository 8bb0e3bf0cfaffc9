#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lamglass/cli_io.hpp"
#include "lamglass/reference.hpp"

namespace py = pybind11;
using namespace lamglass;

namespace {

// Column name -> array, same order as the CSV.
py::dict records_to_columns(const std::vector<StepRecord>& records) {
  const auto cols = csv_columns();
  std::vector<py::array_t<double>> arrays;
  for (std::size_t c = 0; c < cols.size(); ++c)
    arrays.emplace_back(static_cast<py::ssize_t>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const StepRecord& r = records[i];
    const double row[] = {r.time,          r.adjusted_time,    r.load,         r.deflection,
                          r.sigma_top_ply, r.sigma_bottom_ply, r.sigma_max,    r.interlayer_n,
                          r.interlayer_v,  r.interlayer_m,     r.eta1,         r.eta2,
                          static_cast<double>(r.iterations)};
    for (std::size_t c = 0; c < cols.size(); ++c)
      arrays[c].mutable_at(static_cast<py::ssize_t>(i)) = row[c];
  }
  py::dict out;
  for (std::size_t c = 0; c < cols.size(); ++c) out[py::str(cols[c])] = arrays[c];
  return out;
}

py::dict reference_dict(const ReferenceResult& r) {
  py::dict d;
  d["deflection"] = r.deflection;
  d["sigma_output"] = r.sigma_output;
  d["sigma_max"] = r.sigma_max;
  d["iterations"] = r.iterations;
  return d;
}

ReferenceOptions reference_options(const ScenarioConfig& c, const std::string& kinematics) {
  ReferenceOptions opt;
  opt.elements = c.elements;
  opt.solver = c.solver;
  if (kinematics == "vk") opt.kinematics = Kinematics::VonKarman;
  else if (kinematics == "fs") opt.kinematics = Kinematics::FiniteStrain;
  else if (kinematics != "linear") throw ArgumentError("kinematics must be linear, vk or fs");
  return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Layerwise viscoelastic laminated glass beam solver";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<NonconvergenceError>(m, "NonconvergenceError", base.ptr());
  py::register_exception<LinearSolverError>(m, "LinearSolverError", base.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());

  m.def(
      "shift_factor",
      [](double t, double c1, double c2, double t_ref) { return shift_factor(t, {c1, c2, t_ref}); },
      py::arg("temperature"), py::arg("c1") = 12.6, py::arg("c2") = 74.46, py::arg("t_ref") = 20.0,
      "WLF shift factor a_T.");
  m.def(
      "pvb_relaxation_modulus",
      [](double t) { return relaxation_modulus(t, PronyChain::pvb()); }, py::arg("t"),
      "Shear relaxation modulus of the built-in PVB chain [Pa] at adjusted time t [s].");

  py::class_<ScenarioConfig>(m, "Scenario")
      .def_readwrite("preset", &ScenarioConfig::preset)
      .def_readwrite("elements", &ScenarioConfig::elements)
      .def_readwrite("temperature", &ScenarioConfig::temperature)
      .def_readwrite("intensity", &ScenarioConfig::intensity)
      .def_readwrite("ramp_time", &ScenarioConfig::ramp_time)
      .def_readwrite("end_time", &ScenarioConfig::end_time)
      .def_readwrite("csv_path", &ScenarioConfig::csv_path)
      .def_property(
          "kinematics",
          [](const ScenarioConfig& c) {
            return c.kinematics == Kinematics::Linear ? "linear" : c.kinematics == Kinematics::FiniteStrain ? "fs" : "vk";
          },
          [](ScenarioConfig& c, const std::string& k) {
            if (k == "vk") c.kinematics = Kinematics::VonKarman;
            else if (k == "fs") c.kinematics = Kinematics::FiniteStrain;
            else if (k == "linear") c.kinematics = Kinematics::Linear;
            else throw ArgumentError("kinematics must be vk, fs or linear");
          })
      .def_property(
          "closure",
          [](const ScenarioConfig& c) {
            return std::holds_alternative<ConstantBulk>(c.materials.closure) ? "k" : "nu";
          },
          [](ScenarioConfig& c, const std::string& k) {
            if (k == "k") c.materials.closure = ConstantBulk{2e9};
            else if (k == "nu") c.materials.closure = ConstantPoisson{0.49};
            else throw ArgumentError("closure must be k or nu");
          })
      .def("to_ini", &serialize_config)
      .def("__eq__", [](const ScenarioConfig& a, const ScenarioConfig& b) { return a == b; })
      .def("__repr__", [](const ScenarioConfig& c) {
        return "<Scenario preset='" + c.preset + "' T=" + format_double(c.temperature) +
               " q=" + format_double(c.intensity) + ">";
      });

  m.def("preset_names", &preset_names);
  m.def("preset", [](const std::string& name) { return preset_config(name); }, py::arg("name"));
  m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));

  m.def(
      "run",
      [](const ScenarioConfig& c) {
        std::vector<StepRecord> records;
        {
          py::gil_scoped_release release;
          records = run_scenario(c).records;
        }
        return records_to_columns(records);
      },
      py::arg("scenario"), "Runs the scenario; returns a dict of column arrays.");

  m.def(
      "limits",
      [](const ScenarioConfig& c, const std::string& kinematics) {
        const ReferenceOptions opt = reference_options(c, kinematics);
        py::dict out;
        out["monolithic"] = reference_dict(monolithic_limit(c.geometry, c.materials, c.intensity, opt));
        out["layered"] = reference_dict(layered_limit(c.geometry, c.materials, c.intensity, opt));
        return out;
      },
      py::arg("scenario"), py::arg("kinematics") = "linear");

  m.def(
      "reproduce_table",
      [](const std::string& name, std::size_t elements) {
        TableOptions opt;
        opt.elements = elements;
        TableReport report;
        {
          py::gil_scoped_release release;
          report = reproduce_table(name, opt);
        }
        py::list rows;
        for (const auto& r : report.rows) {
          py::dict d;
          d["label"] = r.label;
          d["quantity"] = r.quantity;
          d["computed"] = r.computed;
          d["target"] = r.target;
          d["tolerance"] = r.tolerance;
          d["checked"] = r.checked;
          d["pass"] = r.pass();
          rows.append(d);
        }
        return rows;
      },
      py::arg("name"), py::arg("elements") = 500);

  m.attr("csv_columns") = csv_columns();
  m.attr("csv_schema_version") = kCsvSchemaVersion;
}
