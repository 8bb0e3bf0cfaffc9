#pragma once

// Reference models: monolithic and layered elastic limits, the elastic secant
// model and the geometrically linear viscoelastic variant.

#include <optional>

#include "lamglass/model.hpp"
#include "lamglass/solver.hpp"

namespace lamglass {

enum class ReferenceKind { MonolithicLimit, LayeredLimit, ElasticSecant, GeometricallyLinear };

const char* to_string(ReferenceKind k) noexcept;

/// Response of a single elastic solve.
struct ReferenceResult {
  double deflection = 0.0;    // at the output node [m]
  double sigma_output = 0.0;  // extreme |sigma| at the output node [Pa]
  double sigma_max = 0.0;     // extreme |sigma| over the glass [Pa]
  int iterations = 0;
};

struct ReferenceOptions {
  std::size_t elements = 500;
  Kinematics kinematics = Kinematics::Linear;
  /// Load increments of the elastic solve; 0 picks 1 for linear and 10 otherwise.
  std::size_t load_steps = 0;
  SolverConfig solver;
};

/// Glass layers only, tied in transverse displacement (summed bending stiffness).
/// Every even-indexed thickness is a glass ply.
ModelDefinition layered_definition(const LaminateGeometry& geometry, const Materials& materials,
                                   std::size_t elements, Kinematics kinematics);
/// One glass layer with the total laminate thickness.
ModelDefinition monolithic_definition(const LaminateGeometry& geometry, const Materials& materials,
                                      std::size_t elements, Kinematics kinematics);

ReferenceResult monolithic_limit(const LaminateGeometry& geometry, const Materials& materials,
                                 double q, const ReferenceOptions& options = {});
ReferenceResult layered_limit(const LaminateGeometry& geometry, const Materials& materials,
                              double q, const ReferenceOptions& options = {});

/// Elastic solve of a model under load q, applied in equal increments.
ReferenceResult elastic_solve(const LaminateModel& model, double q, std::size_t load_steps = 1,
                              const SolverConfig& config = {});

/// Interlayer frozen at G(duration / a_T). Finite-strain kinematics unless overridden.
ReferenceResult elastic_secant(const LaminateModel& model, double q, double duration,
                               double temperature,
                               std::optional<Kinematics> kinematics = Kinematics::FiniteStrain,
                               std::size_t load_steps = 10, const SolverConfig& config = {});

/// Copy of a model definition with geometrically linear kernels.
LaminateModel linear_model(const LaminateModel& model);

/// Viscoelastic history with the geometrically linear kernels.
HistoryResult linear_variant(const LaminateModel& model, const LoadHistory& load,
                             double temperature, const TimeGrid& grid,
                             const SolverConfig& config = {});

}  // namespace lamglass
