#pragma once

// Layerwise structural model: shared mesh, layer-major dof numbering, nodal
// inter-layer compatibility, supports, lumped loads and block-diagonal assembly.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lamglass/elements.hpp"
#include "lamglass/material.hpp"

namespace lamglass {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class SupportType { FixedEnd, SimplySupported, TwoSpanContinuous };
enum class LayerKind { Glass, Interlayer };
/// Full ties both axial and transverse displacement; VerticalOnly ties w alone.
enum class InterfaceKind { Full, VerticalOnly };
enum class Component { U = 0, W = 1, Phi = 2 };

const char* to_string(SupportType s) noexcept;

/// Three-layer laminate geometry, SI units. Layer 2 is the interlayer.
struct LaminateGeometry {
  double span = 3.0;
  double width = 0.15;
  std::vector<double> thickness{0.003, 0.00076, 0.003};
  SupportType support = SupportType::FixedEnd;
  /// Length of the first span; only used for TwoSpanContinuous (span = total length).
  double first_span = 0.0;
};

struct Materials {
  GlassElastic glass;
  PronyChain chain = PronyChain::pvb();
  WlfParams wlf;
  ConstitutiveClosure closure = ConstantPoisson{0.49};
};

struct LayerSpec {
  double thickness = 0.0;
  LayerKind kind = LayerKind::Glass;
};

/// General layer stack used by the laminate and by the reference models.
struct ModelDefinition {
  double span = 0.0;
  double width = 0.0;
  std::vector<LayerSpec> layers;
  std::vector<InterfaceKind> interfaces;  // layers.size() - 1 entries
  SupportType support = SupportType::FixedEnd;
  double first_span = 0.0;
  std::size_t elements = 500;
  Kinematics kinematics = Kinematics::VonKarman;
  Materials materials;
};

struct Layer {
  LayerKind kind;
  SectionProperties props;
};

struct ConstraintRow {
  std::size_t interface;  // between layers interface and interface + 1
  std::size_t node;
  bool axial;  // axial (u) row, otherwise vertical (w) row
};

/// Nodal resultant extremes of the glass plies.
struct GlassStress {
  double top = 0.0;     // fiber z = -h/2
  double bottom = 0.0;  // fiber z = +h/2
};

class LaminateModel {
 public:
  explicit LaminateModel(ModelDefinition def);

  const ModelDefinition& definition() const noexcept { return def_; }
  Kinematics kinematics() const noexcept { return def_.kinematics; }
  const Materials& materials() const noexcept { return def_.materials; }

  std::size_t elements() const noexcept { return def_.elements; }
  std::size_t nodes() const noexcept { return def_.elements + 1; }
  double element_length() const noexcept { return le_; }
  double node_x(std::size_t node) const noexcept { return le_ * static_cast<double>(node); }
  std::span<const Layer> layers() const noexcept { return layers_; }
  double min_thickness() const noexcept;

  std::size_t dof(std::size_t layer, std::size_t node, Component c) const noexcept {
    return layer * 3 * nodes() + 3 * node + static_cast<std::size_t>(c);
  }
  std::size_t dof_count() const noexcept { return 3 * nodes() * layers_.size(); }
  Vector6 element_dofs(const Eigen::VectorXd& d, std::size_t layer, std::size_t element) const;

  std::span<const ConstraintRow> constraints() const noexcept { return rows_; }
  std::size_t constraint_count() const noexcept { return rows_.size(); }

  /// Restrained dofs (true = prescribed zero).
  const std::vector<bool>& fixed() const noexcept { return fixed_; }
  std::size_t free_dof_count() const noexcept;

  /// Layer receiving the distributed load.
  std::size_t load_layer() const noexcept { return 0; }
  /// Node where deflection and stresses are reported.
  std::size_t output_node() const noexcept { return output_node_; }
  /// Interlayer elements in assembly order: (layer, element) pairs.
  std::size_t interlayer_element_count() const noexcept;
  /// Index of the (single) viscoelastic layer, if any.
  std::optional<std::size_t> interlayer_index() const noexcept;

  /// Residual c(d) and Jacobian C(d) of the compatibility rows.
  void compatibility(const Eigen::VectorXd& d, Eigen::VectorXd& c, SparseMatrix& jac) const;
  /// Second-derivative contribution sum_r lambda_r * grad^2 c_r (zero unless FS).
  SparseMatrix multiplier_stiffness(const Eigen::VectorXd& d, const Eigen::VectorXd& lambda) const;

  /// Lumped transverse nodal forces for a uniform load q [N/m] on the load layer.
  Eigen::VectorXd external_load(double q) const;

  /// Global internal forces and tangent stiffness. Interlayer elements use the
  /// given effective rigidities and per-element history offsets.
  void assemble(const Eigen::VectorXd& d, const SectionStiffness& interlayer,
                std::span<const HistoryOffsets> offsets, Eigen::VectorXd* f_int,
                SparseMatrix* k) const;

  /// Generalized strains of every interlayer element, in assembly order.
  std::vector<GeneralizedStrains> interlayer_strains(const Eigen::VectorXd& d) const;

  /// Extreme-fiber stresses of a glass layer, L2-projected onto the nodes.
  std::vector<GlassStress> glass_stress(const Eigen::VectorXd& d, std::size_t layer) const;

  /// Mean transverse displacement of all layers at the output node.
  double output_deflection(const Eigen::VectorXd& d) const;

  SectionStiffness glass_stiffness(std::size_t layer) const;

 private:
  void build_supports();
  void build_constraints();

  ModelDefinition def_;
  double le_ = 0.0;
  std::vector<Layer> layers_;
  std::vector<ConstraintRow> rows_;
  std::vector<bool> fixed_;
  std::size_t output_node_ = 0;
};

/// Three-layer glass/interlayer/glass laminate.
LaminateModel build_model(const LaminateGeometry& geometry, const Materials& materials,
                          std::size_t elements = 500,
                          Kinematics kinematics = Kinematics::VonKarman);

}  // namespace lamglass
