#include "lamglass/reference.hpp"

#include <cmath>
#include <numeric>

namespace lamglass {

const char* to_string(ReferenceKind k) noexcept {
  switch (k) {
    case ReferenceKind::MonolithicLimit: return "monolithic";
    case ReferenceKind::LayeredLimit: return "layered";
    case ReferenceKind::ElasticSecant: return "secant";
    case ReferenceKind::GeometricallyLinear: return "linear";
  }
  return "?";
}

namespace {

ModelDefinition base_definition(const LaminateGeometry& g, const Materials& m,
                                std::size_t elements, Kinematics kin) {
  if (g.thickness.empty() || g.thickness.size() % 2 == 0)
    throw ConfigError("thickness", "expected an odd number of layers starting with glass");
  ModelDefinition def;
  def.span = g.span;
  def.width = g.width;
  def.support = g.support;
  def.first_span = g.first_span;
  def.elements = elements;
  def.kinematics = kin;
  def.materials = m;
  return def;
}

std::size_t default_steps(const ReferenceOptions& o) {
  if (o.load_steps > 0) return o.load_steps;
  return o.kinematics == Kinematics::Linear ? 1 : 10;
}

}  // namespace

ModelDefinition layered_definition(const LaminateGeometry& geometry, const Materials& materials,
                                   std::size_t elements, Kinematics kinematics) {
  ModelDefinition def = base_definition(geometry, materials, elements, kinematics);
  for (std::size_t i = 0; i < geometry.thickness.size(); i += 2)
    def.layers.push_back({geometry.thickness[i], LayerKind::Glass});
  def.interfaces.assign(def.layers.size() - 1, InterfaceKind::VerticalOnly);
  return def;
}

ModelDefinition monolithic_definition(const LaminateGeometry& geometry, const Materials& materials,
                                      std::size_t elements, Kinematics kinematics) {
  ModelDefinition def = base_definition(geometry, materials, elements, kinematics);
  const double total = std::accumulate(geometry.thickness.begin(), geometry.thickness.end(), 0.0);
  def.layers = {{total, LayerKind::Glass}};
  return def;
}

ReferenceResult elastic_solve(const LaminateModel& model, double q, std::size_t load_steps,
                              const SolverConfig& config) {
  if (load_steps == 0) throw ArgumentError("load_steps must be positive");
  NewtonSolver solver(model, config);
  SystemState state = solver.initial_state();
  ReferenceResult out;
  for (std::size_t k = 1; k <= load_steps; ++k) {
    const double qk = q * static_cast<double>(k) / static_cast<double>(load_steps);
    // The time step is irrelevant without Maxwell units; any positive value works.
    state = solver.step(state, model.external_load(qk), 1.0);
    out.iterations += state.iterations;
  }
  const StepRecord r = solver.record(state, 0.0, 0.0, q);
  out.deflection = r.deflection;
  out.sigma_output = r.sigma_output();
  out.sigma_max = r.sigma_max;
  return out;
}

ReferenceResult monolithic_limit(const LaminateGeometry& geometry, const Materials& materials,
                                 double q, const ReferenceOptions& options) {
  const LaminateModel model(
      monolithic_definition(geometry, materials, options.elements, options.kinematics));
  return elastic_solve(model, q, default_steps(options), options.solver);
}

ReferenceResult layered_limit(const LaminateGeometry& geometry, const Materials& materials,
                              double q, const ReferenceOptions& options) {
  const LaminateModel model(
      layered_definition(geometry, materials, options.elements, options.kinematics));
  return elastic_solve(model, q, default_steps(options), options.solver);
}

ReferenceResult elastic_secant(const LaminateModel& model, double q, double duration,
                               double temperature, std::optional<Kinematics> kinematics,
                               std::size_t load_steps, const SolverConfig& config) {
  if (!(duration > 0.0)) throw ArgumentError("secant duration must be positive");
  ModelDefinition def = model.definition();
  const Materials& m = def.materials;
  const double g = relaxation_modulus(duration / shift_factor(temperature, m.wlf), m.chain);
  def.materials.chain = PronyChain(g, {});
  if (kinematics) def.kinematics = *kinematics;
  const LaminateModel secant(std::move(def));
  return elastic_solve(secant, q, load_steps, config);
}

LaminateModel linear_model(const LaminateModel& model) {
  ModelDefinition def = model.definition();
  def.kinematics = Kinematics::Linear;
  return LaminateModel(std::move(def));
}

HistoryResult linear_variant(const LaminateModel& model, const LoadHistory& load,
                             double temperature, const TimeGrid& grid,
                             const SolverConfig& config) {
  const LaminateModel lin = linear_model(model);
  return run_history(lin, load, temperature, grid, config);
}

}  // namespace lamglass
