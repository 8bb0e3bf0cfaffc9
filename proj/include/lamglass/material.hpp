#pragma once

// Viscoelastic interlayer: Prony relaxation, WLF time-temperature shift and the
// one-step exponential update carried out on cross-section resultants.

#include <span>
#include <variant>
#include <vector>

namespace lamglass {

/// Williams-Landel-Ferry constants. Temperatures in degrees Celsius.
struct WlfParams {
  double c1 = 12.6;
  double c2 = 74.46;
  double t_ref = 20.0;
};

/// Shift factor a_T; adjusted time = true time / a_T.
/// Throws DomainError when C2 + T - T0 <= 0.
double shift_factor(double temperature, const WlfParams& wlf);

struct MaxwellUnit {
  double modulus;          // [Pa]
  double relaxation_time;  // [s]
};

/// Shear relaxation spectrum of a generalized Maxwell chain.
///
/// Units are kept sorted by strictly increasing relaxation time. A chain with no
/// units is a purely elastic solid with modulus g_inf.
class PronyChain {
 public:
  PronyChain(double g_inf, std::vector<MaxwellUnit> units);

  double g_inf() const noexcept { return g_inf_; }
  /// Instantaneous modulus G_0 = G_inf + sum of unit moduli.
  double g0() const noexcept { return g0_; }
  std::span<const MaxwellUnit> units() const noexcept { return units_; }
  std::size_t size() const noexcept { return units_.size(); }

  /// PVB interlayer, 13 units plus long-term spring (SI units).
  static PronyChain pvb();

 private:
  double g_inf_;
  double g0_;
  std::vector<MaxwellUnit> units_;
};

/// G(t) for adjusted time t >= 0.
double relaxation_modulus(double t, const PronyChain& chain);

struct ConstantBulk {
  double bulk_modulus;  // [Pa]
};

struct ConstantPoisson {
  double poisson;
};

using ConstitutiveClosure = std::variant<ConstantBulk, ConstantPoisson>;

/// Throws ArgumentError if K <= 0 or nu outside [0, 0.5).
void validate(const ConstitutiveClosure& closure);

/// Interval-averaged moduli of one adjusted time step.
struct EffectiveModuli {
  double dt = 0.0;
  double g_hat = 0.0;
  double e_hat = 0.0;
  double nu_hat = 0.0;
  /// Per-unit weights G_p (theta_p/dt)(1 - exp(-dt/theta_p)).
  std::vector<double> g_hat_units;
  /// Per-unit relaxation fractions 1 - exp(-dt/theta_p).
  std::vector<double> decay;
};

/// Young modulus and Poisson ratio implied by shear modulus g under a closure.
double young_from_shear(double g, const ConstitutiveClosure& closure);
double poisson_from_shear(double g, const ConstitutiveClosure& closure);

/// (theta/dt)(1 - exp(-dt/theta)) evaluated without cancellation.
double averaged_decay_weight(double dt_over_theta);

EffectiveModuli effective_step_moduli(double dt, const PronyChain& chain,
                                      const ConstitutiveClosure& closure);

/// Elastic modulus set for an interlayer frozen at shear modulus g (no history).
EffectiveModuli elastic_moduli(double g, const ConstitutiveClosure& closure);

struct SectionProperties {
  double width = 0.0;
  double thickness = 0.0;
  double area = 0.0;
  double shear_area = 0.0;
  double second_moment = 0.0;

  /// Rectangular glass ply, shear area 5/6 A.
  static SectionProperties glass(double width, double thickness);
  /// Interlayer foil, constant shear: shear area = A.
  static SectionProperties interlayer(double width, double thickness);
};

/// Generalized strains of a cross-section.
struct GeneralizedStrains {
  double eps0 = 0.0;   // centerline strain
  double kappa = 0.0;  // pseudo-curvature [1/m]
  double gamma = 0.0;  // transverse shear
};

/// Normal force, shear force and bending moment.
struct SectionForces {
  double n = 0.0;
  double v = 0.0;
  double m = 0.0;
};

/// Stress state of one Maxwell unit: affine normal stress (a_n + a_m z) and
/// constant shear t_v. Deviatoric for ConstantBulk, total for ConstantPoisson.
struct UnitStress {
  double a_n = 0.0;  // [Pa]
  double a_m = 0.0;  // [Pa/m]
  double t_v = 0.0;  // [Pa]
};

/// Interlayer history of one element.
struct SectionState {
  SectionForces forces;
  std::vector<UnitStress> units;

  static SectionState zero(std::size_t unit_count) {
    return SectionState{{}, std::vector<UnitStress>(unit_count)};
  }
};

/// Relaxation resultants (dN^, dV^, dM^) released over the step at zero strain increment.
SectionForces relaxation_force_increments(const SectionState& state, const SectionProperties& props,
                                          const EffectiveModuli& eff,
                                          const ConstitutiveClosure& closure);

/// (dN, dV, dM) for generalized strain increments over the step.
SectionForces section_force_increments(const GeneralizedStrains& dstrains,
                                       const SectionState& state, const SectionProperties& props,
                                       const EffectiveModuli& eff,
                                       const ConstitutiveClosure& closure);

/// State at t_{n+1}: resultants advanced and Maxwell unit stresses updated.
SectionState update_state(const GeneralizedStrains& dstrains, const SectionState& state,
                          const SectionProperties& props, const EffectiveModuli& eff,
                          const ConstitutiveClosure& closure);

}  // namespace lamglass
