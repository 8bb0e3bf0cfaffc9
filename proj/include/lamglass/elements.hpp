#pragma once

// Two-node layer elements with linear interpolation and one-point (midpoint)
// quadrature. Dof order per element: (u1, w1, phi1, u2, w2, phi2).

#include <Eigen/Dense>

#include "lamglass/material.hpp"

namespace lamglass {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

/// Layer kinematics. Linear drops the quadratic slope term of von Karman.
enum class Kinematics { VonKarman, FiniteStrain, Linear };

const char* to_string(Kinematics k) noexcept;

struct GlassElastic {
  double young = 72e9;
  double poisson = 0.23;
  double shear() const noexcept { return young / (2.0 * (1.0 + poisson)); }
};

/// Cross-section rigidities EA, G A_s and EI.
struct SectionStiffness {
  double axial = 0.0;
  double shear = 0.0;
  double bending = 0.0;

  static SectionStiffness of(const SectionProperties& props, const GlassElastic& glass);
  static SectionStiffness of(const SectionProperties& props, const EffectiveModuli& eff);
};

/// Constant force offsets of the incremental interlayer energy.
struct HistoryOffsets {
  double dn = 0.0;
  double dv = 0.0;
  double dm = 0.0;
};

/// delta = F(t_n) + relaxation increment - rigidity * strain(t_n).
HistoryOffsets history_offsets(const SectionForces& forces_n, const SectionForces& relaxation,
                               const GeneralizedStrains& strains_n, const SectionStiffness& stiff);

GeneralizedStrains vk_strains(const Vector6& d, double le);
GeneralizedStrains fs_strains(const Vector6& d, double le);
GeneralizedStrains linear_strains(const Vector6& d, double le);
GeneralizedStrains element_strains(Kinematics kin, const Vector6& d, double le);

Vector6 vk_internal_forces(const Vector6& d, double le, const SectionStiffness& stiff);
Vector6 vk_history_forces(const Vector6& d, double le, const HistoryOffsets& offsets);
Vector6 fs_internal_forces(const Vector6& d, double le, const SectionStiffness& stiff);
Vector6 fs_history_forces(const Vector6& d, double le, const HistoryOffsets& offsets);
Vector6 linear_internal_forces(const Vector6& d, double le, const SectionStiffness& stiff);
Vector6 linear_history_forces(const Vector6& d, double le, const HistoryOffsets& offsets);

/// Elastic plus history nodal forces.
Vector6 element_forces(Kinematics kin, const Vector6& d, double le, const SectionStiffness& stiff,
                       const HistoryOffsets& offsets = {});

/// Jacobian of element_forces with respect to d.
Matrix6 tangent_stiffness(Kinematics kin, const Vector6& d, double le,
                          const SectionStiffness& stiff, const HistoryOffsets& offsets = {});

/// Element energy Le * (1/2 sum D eps^2 + delta . eps) at the midpoint.
double element_energy(Kinematics kin, const Vector6& d, double le, const SectionStiffness& stiff,
                      const HistoryOffsets& offsets = {});

/// Resultants carried by the element: rigidity * strain + offsets.
SectionForces element_resultants(const GeneralizedStrains& e, const SectionStiffness& stiff,
                                 const HistoryOffsets& offsets = {});

}  // namespace lamglass
