#include "lamglass/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lamglass/errors.hpp"

namespace lamglass {

const char* to_string(SupportType s) noexcept {
  switch (s) {
    case SupportType::FixedEnd: return "fixed";
    case SupportType::SimplySupported: return "simple";
    case SupportType::TwoSpanContinuous: return "two-span";
  }
  return "?";
}

namespace {

bool is_integer_ratio(double a, double b, std::size_t* out) {
  const double r = a / b;
  const double rounded = std::round(r);
  if (std::abs(r - rounded) > 1e-6) return false;
  *out = static_cast<std::size_t>(rounded);
  return true;
}

}  // namespace

LaminateModel::LaminateModel(ModelDefinition def) : def_(std::move(def)) {
  if (!(def_.span > 0.0)) throw ConfigError("span", "must be positive");
  if (!(def_.width > 0.0)) throw ConfigError("width", "must be positive");
  if (def_.layers.empty()) throw ConfigError("layers", "at least one layer is required");
  if (def_.interfaces.size() + 1 != def_.layers.size())
    throw ConfigError("interfaces", "expected one interface between consecutive layers");
  if (def_.elements < 2) throw ConfigError("elements", "at least 2 elements per layer are required");
  validate(def_.materials.closure);
  if (!(def_.materials.glass.young > 0.0)) throw ConfigError("glass_young", "must be positive");
  if (!(def_.materials.glass.poisson >= 0.0 && def_.materials.glass.poisson < 0.5))
    throw ConfigError("glass_poisson", "must lie in [0, 0.5)");

  le_ = def_.span / static_cast<double>(def_.elements);
  for (std::size_t i = 0; i < def_.layers.size(); ++i) {
    const LayerSpec& spec = def_.layers[i];
    if (!(spec.thickness > 0.0))
      throw ConfigError("thickness[" + std::to_string(i + 1) + "]", "must be positive");
    layers_.push_back({spec.kind, spec.kind == LayerKind::Glass
                                      ? SectionProperties::glass(def_.width, spec.thickness)
                                      : SectionProperties::interlayer(def_.width, spec.thickness)});
  }

  if (std::count_if(layers_.begin(), layers_.end(),
                    [](const Layer& l) { return l.kind == LayerKind::Interlayer; }) > 1)
    throw ConfigError("layers", "at most one viscoelastic interlayer is supported");

  if (def_.elements % 2 != 0)
    throw ConfigError("elements", "must be even so that the mid-span is a node");
  output_node_ = def_.elements / 2;
  if (def_.support == SupportType::TwoSpanContinuous) {
    std::size_t support_node = 0;
    if (!(def_.first_span > 0.0 && def_.first_span < def_.span))
      throw ConfigError("first_span", "must lie strictly inside the beam");
    if (!is_integer_ratio(def_.first_span, 2.0 * le_, &output_node_) ||
        !is_integer_ratio(def_.first_span, le_, &support_node))
      throw ConfigError("first_span", "interior support and span midpoint must fall on nodes");
  }
  build_supports();
  build_constraints();
}

double LaminateModel::min_thickness() const noexcept {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& l : layers_) h = std::min(h, l.props.thickness);
  return h;
}

std::size_t LaminateModel::free_dof_count() const noexcept {
  return static_cast<std::size_t>(std::count(fixed_.begin(), fixed_.end(), false));
}

std::size_t LaminateModel::interlayer_element_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers_)
    if (l.kind == LayerKind::Interlayer) n += elements();
  return n;
}

std::optional<std::size_t> LaminateModel::interlayer_index() const noexcept {
  for (std::size_t l = 0; l < layers_.size(); ++l)
    if (layers_[l].kind == LayerKind::Interlayer) return l;
  return std::nullopt;
}

Vector6 LaminateModel::element_dofs(const Eigen::VectorXd& d, std::size_t layer,
                                    std::size_t element) const {
  return d.segment<6>(static_cast<Eigen::Index>(dof(layer, element, Component::U)));
}

SectionStiffness LaminateModel::glass_stiffness(std::size_t layer) const {
  return SectionStiffness::of(layers_[layer].props, def_.materials.glass);
}

// Supports:
//  - fixed ends clamp u, w, phi of every layer at both ends;
//  - simple supports restrain w of the support layer at both ends and u of one
//    layer per axially connected group at the centre node;
//  - a two-span beam additionally restrains w of the support layer at the
//    interior support.
// Transverse displacements of the other layers follow from the compatibility rows.
void LaminateModel::build_supports() {
  fixed_.assign(dof_count(), false);
  const std::size_t last = elements();
  const std::size_t support_layer = layers_.size() / 2;

  if (def_.support == SupportType::FixedEnd) {
    for (std::size_t l = 0; l < layers_.size(); ++l)
      for (std::size_t node : {std::size_t{0}, last})
        for (Component c : {Component::U, Component::W, Component::Phi})
          fixed_[dof(l, node, c)] = true;
    return;
  }

  fixed_[dof(support_layer, 0, Component::W)] = true;
  fixed_[dof(support_layer, last, Component::W)] = true;
  if (def_.support == SupportType::TwoSpanContinuous) {
    const auto node = static_cast<std::size_t>(std::round(def_.first_span / le_));
    fixed_[dof(support_layer, node, Component::W)] = true;
  }

  // Axially connected groups: layers joined by full interfaces.
  const std::size_t centre = elements() / 2;
  std::size_t group_start = 0;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const bool group_ends =
        l + 1 == layers_.size() || def_.interfaces[l] != InterfaceKind::Full;
    if (!group_ends) continue;
    const std::size_t anchor =
        (support_layer >= group_start && support_layer <= l) ? support_layer : group_start;
    fixed_[dof(anchor, centre, Component::U)] = true;
    group_start = l + 1;
  }
}

void LaminateModel::build_constraints() {
  rows_.clear();
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
    for (std::size_t j = 0; j < nodes(); ++j) {
      if (def_.interfaces[i] == InterfaceKind::Full) rows_.push_back({i, j, true});
      rows_.push_back({i, j, false});
    }
  }
}

void LaminateModel::compatibility(const Eigen::VectorXd& d, Eigen::VectorXd& c,
                                  SparseMatrix& jac) const {
  const auto m = static_cast<Eigen::Index>(rows_.size());
  c.setZero(m);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(rows_.size() * 4);
  const bool finite = def_.kinematics == Kinematics::FiniteStrain;

  for (Eigen::Index r = 0; r < m; ++r) {
    const ConstraintRow& row = rows_[static_cast<std::size_t>(r)];
    const std::size_t a = row.interface;
    const std::size_t b = a + 1;
    const double ha = 0.5 * layers_[a].props.thickness;
    const double hb = 0.5 * layers_[b].props.thickness;
    const std::size_t ua = dof(a, row.node, Component::U), ub = dof(b, row.node, Component::U);
    const std::size_t wa = dof(a, row.node, Component::W), wb = dof(b, row.node, Component::W);
    const std::size_t pa = dof(a, row.node, Component::Phi), pb = dof(b, row.node, Component::Phi);
    const double phia = d[static_cast<Eigen::Index>(pa)];
    const double phib = d[static_cast<Eigen::Index>(pb)];
    auto add = [&](std::size_t col, double v) {
      t.emplace_back(static_cast<int>(r), static_cast<int>(col), v);
    };

    if (row.axial) {
      add(ua, 1.0);
      add(ub, -1.0);
      if (finite) {
        c[r] = d[ua] - d[ub] + ha * std::sin(phia) + hb * std::sin(phib);
        add(pa, ha * std::cos(phia));
        add(pb, hb * std::cos(phib));
      } else {
        c[r] = d[ua] - d[ub] + ha * phia + hb * phib;
        add(pa, ha);
        add(pb, hb);
      }
    } else {
      add(wa, 1.0);
      add(wb, -1.0);
      if (finite) {
        c[r] = d[wa] - d[wb] + ha * std::cos(phia) + hb * std::cos(phib) - ha - hb;
        add(pa, -ha * std::sin(phia));
        add(pb, -hb * std::sin(phib));
      } else {
        c[r] = d[wa] - d[wb];
        // Keep the sparsity pattern identical to the finite-strain case.
        add(pa, 0.0);
        add(pb, 0.0);
      }
    }
  }
  jac.resize(m, static_cast<Eigen::Index>(dof_count()));
  jac.setFromTriplets(t.begin(), t.end());
}

SparseMatrix LaminateModel::multiplier_stiffness(const Eigen::VectorXd& d,
                                                 const Eigen::VectorXd& lambda) const {
  const auto n = static_cast<Eigen::Index>(dof_count());
  SparseMatrix k(n, n);
  if (def_.kinematics != Kinematics::FiniteStrain || lambda.size() == 0) return k;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(rows_.size() * 2);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const ConstraintRow& row = rows_[r];
    const double lam = lambda[static_cast<Eigen::Index>(r)];
    for (std::size_t layer : {row.interface, row.interface + 1}) {
      const std::size_t p = dof(layer, row.node, Component::Phi);
      const double h = 0.5 * layers_[layer].props.thickness;
      const double phi = d[static_cast<Eigen::Index>(p)];
      const double second = row.axial ? -h * std::sin(phi) : -h * std::cos(phi);
      t.emplace_back(static_cast<int>(p), static_cast<int>(p), lam * second);
    }
  }
  k.setFromTriplets(t.begin(), t.end());
  return k;
}

Eigen::VectorXd LaminateModel::external_load(double q) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dof_count()));
  for (std::size_t j = 0; j < nodes(); ++j) {
    const double share = (j == 0 || j + 1 == nodes()) ? 0.5 : 1.0;
    f[static_cast<Eigen::Index>(dof(load_layer(), j, Component::W))] = q * le_ * share;
  }
  return f;
}

void LaminateModel::assemble(const Eigen::VectorXd& d, const SectionStiffness& interlayer,
                             std::span<const HistoryOffsets> offsets, Eigen::VectorXd* f_int,
                             SparseMatrix* k) const {
  const auto n = static_cast<Eigen::Index>(dof_count());
  if (f_int != nullptr) f_int->setZero(n);
  std::vector<Eigen::Triplet<double>> t;
  if (k != nullptr) t.reserve(36 * elements() * layers_.size());

  std::size_t history_index = 0;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const bool soft = layers_[l].kind == LayerKind::Interlayer;
    const SectionStiffness stiff = soft ? interlayer : glass_stiffness(l);
    for (std::size_t e = 0; e < elements(); ++e) {
      HistoryOffsets off;
      if (soft) {
        if (history_index < offsets.size()) off = offsets[history_index];
        ++history_index;
      }
      const Vector6 de = element_dofs(d, l, e);
      const auto base = static_cast<Eigen::Index>(dof(l, e, Component::U));
      if (f_int != nullptr)
        f_int->segment<6>(base) += element_forces(def_.kinematics, de, le_, stiff, off);
      if (k != nullptr) {
        const Matrix6 ke = tangent_stiffness(def_.kinematics, de, le_, stiff, off);
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 6; ++j)
            t.emplace_back(static_cast<int>(base + i), static_cast<int>(base + j), ke(i, j));
      }
    }
  }
  if (k != nullptr) {
    k->resize(n, n);
    k->setFromTriplets(t.begin(), t.end());
  }
}

std::vector<GeneralizedStrains> LaminateModel::interlayer_strains(const Eigen::VectorXd& d) const {
  std::vector<GeneralizedStrains> out;
  out.reserve(interlayer_element_count());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].kind != LayerKind::Interlayer) continue;
    for (std::size_t e = 0; e < elements(); ++e)
      out.push_back(element_strains(def_.kinematics, element_dofs(d, l, e), le_));
  }
  return out;
}

// Continuous piecewise-linear L2 projection of the element stresses. The
// consistent mass matrix (Le/6)[2 1; 1 2] is tridiagonal; solved by the Thomas
// algorithm for both fibers at once.
std::vector<GlassStress> LaminateModel::glass_stress(const Eigen::VectorXd& d,
                                                     std::size_t layer) const {
  const double young = def_.materials.glass.young;
  const double half = 0.5 * layers_[layer].props.thickness;
  const std::size_t n = nodes();
  std::vector<double> diag(n, 0.0), off(n, 1.0);  // off[j] couples j and j + 1
  std::vector<GlassStress> rhs(n);
  for (std::size_t e = 0; e < elements(); ++e) {
    const GeneralizedStrains s = element_strains(def_.kinematics, element_dofs(d, layer, e), le_);
    const GlassStress es{young * (s.eps0 - s.kappa * half), young * (s.eps0 + s.kappa * half)};
    for (std::size_t node : {e, e + 1}) {
      diag[node] += 2.0;
      rhs[node].top += 3.0 * es.top;
      rhs[node].bottom += 3.0 * es.bottom;
    }
  }
  for (std::size_t j = 1; j < n; ++j) {
    const double f = off[j - 1] / diag[j - 1];
    diag[j] -= f * off[j - 1];
    rhs[j].top -= f * rhs[j - 1].top;
    rhs[j].bottom -= f * rhs[j - 1].bottom;
  }
  std::vector<GlassStress> nodal(n);
  for (std::size_t j = n; j-- > 0;) {
    const GlassStress next = j + 1 < n ? nodal[j + 1] : GlassStress{};
    const double c = j + 1 < n ? off[j] : 0.0;
    nodal[j].top = (rhs[j].top - c * next.top) / diag[j];
    nodal[j].bottom = (rhs[j].bottom - c * next.bottom) / diag[j];
  }
  return nodal;
}

double LaminateModel::output_deflection(const Eigen::VectorXd& d) const {
  double sum = 0.0;
  for (std::size_t l = 0; l < layers_.size(); ++l)
    sum += d[static_cast<Eigen::Index>(dof(l, output_node_, Component::W))];
  return sum / static_cast<double>(layers_.size());
}

LaminateModel build_model(const LaminateGeometry& geometry, const Materials& materials,
                          std::size_t elements, Kinematics kinematics) {
  if (geometry.thickness.size() != 3)
    throw ConfigError("thickness", "a laminate needs exactly three layer thicknesses");
  ModelDefinition def;
  def.span = geometry.span;
  def.width = geometry.width;
  def.layers = {{geometry.thickness[0], LayerKind::Glass},
                {geometry.thickness[1], LayerKind::Interlayer},
                {geometry.thickness[2], LayerKind::Glass}};
  def.interfaces = {InterfaceKind::Full, InterfaceKind::Full};
  def.support = geometry.support;
  def.first_span = geometry.first_span;
  def.elements = elements;
  def.kinematics = kinematics;
  def.materials = materials;
  return LaminateModel(std::move(def));
}

}  // namespace lamglass
