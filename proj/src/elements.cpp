#include "lamglass/elements.hpp"

#include <cmath>

namespace lamglass {

const char* to_string(Kinematics k) noexcept {
  switch (k) {
    case Kinematics::VonKarman: return "vk";
    case Kinematics::FiniteStrain: return "fs";
    case Kinematics::Linear: return "linear";
  }
  return "?";
}

SectionStiffness SectionStiffness::of(const SectionProperties& props, const GlassElastic& glass) {
  return {glass.young * props.area, glass.shear() * props.shear_area,
          glass.young * props.second_moment};
}

SectionStiffness SectionStiffness::of(const SectionProperties& props, const EffectiveModuli& eff) {
  return {eff.e_hat * props.area, eff.g_hat * props.shear_area, eff.e_hat * props.second_moment};
}

HistoryOffsets history_offsets(const SectionForces& forces_n, const SectionForces& relaxation,
                               const GeneralizedStrains& strains_n, const SectionStiffness& stiff) {
  return {forces_n.n + relaxation.n - stiff.axial * strains_n.eps0,
          forces_n.v + relaxation.v - stiff.shear * strains_n.gamma,
          forces_n.m + relaxation.m - stiff.bending * strains_n.kappa};
}

SectionForces element_resultants(const GeneralizedStrains& e, const SectionStiffness& stiff,
                                 const HistoryOffsets& offsets) {
  return {stiff.axial * e.eps0 + offsets.dn, stiff.shear * e.gamma + offsets.dv,
          stiff.bending * e.kappa + offsets.dm};
}

// ---------------------------------------------------------------------------
// Strains

GeneralizedStrains vk_strains(const Vector6& d, double le) {
  const double slope = (d[4] - d[1]) / le;
  return {(d[3] - d[0]) / le + 0.5 * slope * slope, (d[5] - d[2]) / le,
          0.5 * (d[2] + d[5]) + slope};
}

GeneralizedStrains fs_strains(const Vector6& d, double le) {
  const double beta = 0.5 * (d[2] + d[5]);
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const double stretch = 1.0 + (d[3] - d[0]) / le;
  const double slope = (d[4] - d[1]) / le;
  return {c * stretch - s * slope - 1.0, (d[5] - d[2]) / le, s * stretch + c * slope};
}

GeneralizedStrains linear_strains(const Vector6& d, double le) {
  return {(d[3] - d[0]) / le, (d[5] - d[2]) / le, 0.5 * (d[2] + d[5]) + (d[4] - d[1]) / le};
}

GeneralizedStrains element_strains(Kinematics kin, const Vector6& d, double le) {
  switch (kin) {
    case Kinematics::VonKarman: return vk_strains(d, le);
    case Kinematics::FiniteStrain: return fs_strains(d, le);
    case Kinematics::Linear: return linear_strains(d, le);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Forces. Every kernel maps resultants (N, V, M) to nodal forces; the elastic
// and history variants only differ in where the resultants come from.

namespace {

Vector6 vk_resultant_forces(const Vector6& d, double le, const SectionForces& r) {
  Vector6 f;
  f[0] = -r.n;
  f[1] = f[0] * (d[4] - d[1]) / le - r.v;
  f[2] = r.v * le / 2.0 - r.m;
  f[3] = -f[0];
  f[4] = -f[1];
  f[5] = f[2] + 2.0 * r.m;
  return f;
}

Vector6 linear_resultant_forces(double le, const SectionForces& r) {
  Vector6 f;
  f[0] = -r.n;
  f[1] = -r.v;
  f[2] = r.v * le / 2.0 - r.m;
  f[3] = -f[0];
  f[4] = -f[1];
  f[5] = f[2] + 2.0 * r.m;
  return f;
}

Vector6 fs_resultant_forces(const Vector6& d, double le, const SectionForces& r) {
  const double beta = 0.5 * (d[2] + d[5]);
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  Vector6 f;
  f[0] = -r.n * c - r.v * s;
  f[1] = r.n * s - r.v * c;
  f[2] = -0.5 * (le + d[3] - d[0]) * f[1] + 0.5 * (d[4] - d[1]) * f[0] - r.m;
  f[3] = -f[0];
  f[4] = -f[1];
  f[5] = f[2] + 2.0 * r.m;
  return f;
}

SectionForces as_forces(const HistoryOffsets& o) { return {o.dn, o.dv, o.dm}; }

}  // namespace

Vector6 vk_internal_forces(const Vector6& d, double le, const SectionStiffness& stiff) {
  return vk_resultant_forces(d, le, element_resultants(vk_strains(d, le), stiff));
}

Vector6 vk_history_forces(const Vector6& d, double le, const HistoryOffsets& offsets) {
  return vk_resultant_forces(d, le, as_forces(offsets));
}

Vector6 fs_internal_forces(const Vector6& d, double le, const SectionStiffness& stiff) {
  return fs_resultant_forces(d, le, element_resultants(fs_strains(d, le), stiff));
}

Vector6 fs_history_forces(const Vector6& d, double le, const HistoryOffsets& offsets) {
  return fs_resultant_forces(d, le, as_forces(offsets));
}

Vector6 linear_internal_forces(const Vector6& d, double le, const SectionStiffness& stiff) {
  return linear_resultant_forces(le, element_resultants(linear_strains(d, le), stiff));
}

Vector6 linear_history_forces(const Vector6&, double le, const HistoryOffsets& offsets) {
  return linear_resultant_forces(le, as_forces(offsets));
}

Vector6 element_forces(Kinematics kin, const Vector6& d, double le, const SectionStiffness& stiff,
                       const HistoryOffsets& offsets) {
  switch (kin) {
    case Kinematics::VonKarman:
      return vk_internal_forces(d, le, stiff) + vk_history_forces(d, le, offsets);
    case Kinematics::FiniteStrain:
      return fs_internal_forces(d, le, stiff) + fs_history_forces(d, le, offsets);
    case Kinematics::Linear:
      return linear_internal_forces(d, le, stiff) + linear_history_forces(d, le, offsets);
  }
  return Vector6::Zero();
}

// ---------------------------------------------------------------------------
// Stiffness

namespace {

Matrix6 vk_tangent(const Vector6& d, double le, const SectionStiffness& stiff,
                   const HistoryOffsets& offsets, bool geometric) {
  const double dw = d[4] - d[1];
  const GeneralizedStrains e = geometric ? vk_strains(d, le) : linear_strains(d, le);
  const double k11 = stiff.axial / le;
  const double k12 = geometric ? stiff.axial * dw / (le * le) : 0.0;
  const double k22 = (geometric ? k11 * e.eps0 + k12 * dw / le : 0.0) + stiff.shear / le;
  const double k23 = -0.5 * stiff.shear;
  const double k33 = 0.25 * stiff.shear * le + stiff.bending / le;
  const double k36 = k33 - 2.0 * stiff.bending / le;

  Matrix6 k;
  // clang-format off
  k <<  k11,  k12,  0.0, -k11, -k12,  0.0,
        k12,  k22,  k23, -k12, -k22,  k23,
        0.0,  k23,  k33,  0.0, -k23,  k36,
       -k11, -k12,  0.0,  k11,  k12,  0.0,
       -k12, -k22, -k23,  k12,  k22, -k23,
        0.0,  k23,  k36,  0.0, -k23,  k33;
  // clang-format on

  if (geometric) {
    const double h22 = offsets.dn / le;
    k(1, 1) += h22;
    k(4, 4) += h22;
    k(1, 4) -= h22;
    k(4, 1) -= h22;
  }
  return k;
}

// Pattern of the rotated geometric terms, shared by the elastic resultants and
// the history offsets (they enter the Hessian identically).
Matrix6 fs_geometric(const Vector6& d, double le, double n, double v) {
  const double beta = 0.5 * (d[2] + d[5]);
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const double k13 = 0.5 * (n * s - v * c);
  const double k23 = 0.5 * (n * c + v * s);
  const double k33 = 0.5 * (-(le + d[3] - d[0]) * k23 + (d[4] - d[1]) * k13);

  Matrix6 k;
  // clang-format off
  k <<  0.0,  0.0,  k13,  0.0,  0.0,  k13,
        0.0,  0.0,  k23,  0.0,  0.0,  k23,
        k13,  k23,  k33, -k13, -k23,  k33,
        0.0,  0.0, -k13,  0.0,  0.0, -k13,
        0.0,  0.0, -k23,  0.0,  0.0, -k23,
        k13,  k23,  k33, -k13, -k23,  k33;
  // clang-format on
  return k;
}

Matrix6 fs_tangent(const Vector6& d, double le, const SectionStiffness& stiff,
                   const HistoryOffsets& offsets) {
  const double beta = 0.5 * (d[2] + d[5]);
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const double a = le + d[3] - d[0];
  const double b = d[4] - d[1];

  // Le times the strain gradients.
  Vector6 g_eps, g_gam, g_kap;
  const double de_dbeta = -0.5 * (s * a + c * b);
  const double dg_dbeta = 0.5 * (c * a - s * b);
  g_eps << -c, s, de_dbeta, c, -s, de_dbeta;
  g_gam << -s, -c, dg_dbeta, s, c, dg_dbeta;
  g_kap << 0.0, 0.0, -1.0, 0.0, 0.0, 1.0;

  Matrix6 k = (stiff.axial * g_eps * g_eps.transpose() + stiff.shear * g_gam * g_gam.transpose() +
               stiff.bending * g_kap * g_kap.transpose()) /
              le;

  const SectionForces r = element_resultants(fs_strains(d, le), stiff, offsets);
  k += fs_geometric(d, le, r.n, r.v);
  return k;
}

}  // namespace

Matrix6 tangent_stiffness(Kinematics kin, const Vector6& d, double le,
                          const SectionStiffness& stiff, const HistoryOffsets& offsets) {
  switch (kin) {
    case Kinematics::VonKarman: return vk_tangent(d, le, stiff, offsets, true);
    case Kinematics::FiniteStrain: return fs_tangent(d, le, stiff, offsets);
    case Kinematics::Linear: return vk_tangent(d, le, stiff, offsets, false);
  }
  return Matrix6::Zero();
}

double element_energy(Kinematics kin, const Vector6& d, double le, const SectionStiffness& stiff,
                      const HistoryOffsets& offsets) {
  const GeneralizedStrains e = element_strains(kin, d, le);
  const double quadratic = stiff.axial * e.eps0 * e.eps0 + stiff.shear * e.gamma * e.gamma +
                           stiff.bending * e.kappa * e.kappa;
  const double linear = offsets.dn * e.eps0 + offsets.dv * e.gamma + offsets.dm * e.kappa;
  return le * (0.5 * quadratic + linear);
}

}  // namespace lamglass
