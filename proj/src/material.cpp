#include "lamglass/material.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lamglass/errors.hpp"

namespace lamglass {

double shift_factor(double temperature, const WlfParams& wlf) {
  const double denom = wlf.c2 + temperature - wlf.t_ref;
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg << "temperature " << temperature << " C is outside the WLF validity range (C2 + T - T0 = "
        << denom << " <= 0)";
    throw DomainError(msg.str());
  }
  return std::pow(10.0, -wlf.c1 * (temperature - wlf.t_ref) / denom);
}

PronyChain::PronyChain(double g_inf, std::vector<MaxwellUnit> units)
    : g_inf_(g_inf), g0_(g_inf), units_(std::move(units)) {
  if (!(g_inf > 0.0)) throw ArgumentError("long-term shear modulus must be positive");
  for (const auto& u : units_) {
    if (!(u.modulus > 0.0)) throw ArgumentError("Maxwell unit modulus must be positive");
    if (!(u.relaxation_time > 0.0)) throw ArgumentError("relaxation time must be positive");
  }
  std::sort(units_.begin(), units_.end(), [](const MaxwellUnit& a, const MaxwellUnit& b) {
    return a.relaxation_time < b.relaxation_time;
  });
  for (std::size_t p = 1; p < units_.size(); ++p) {
    if (units_[p].relaxation_time == units_[p - 1].relaxation_time)
      throw ArgumentError("relaxation times must be distinct");
  }
  for (const auto& u : units_) g0_ += u.modulus;
}

PronyChain PronyChain::pvb() {
  constexpr double gpa = 1e9;
  return PronyChain(1.9454e-4 * gpa, {
                                         {9.9482e-2 * gpa, 2.3660e-7},
                                         {9.0802e-2 * gpa, 2.2643e-6},
                                         {7.4140e-2 * gpa, 2.1667e-5},
                                         {5.0772e-2 * gpa, 2.0733e-4},
                                         {5.7856e-2 * gpa, 1.9839e-3},
                                         {2.9055e-2 * gpa, 1.8984e-2},
                                         {1.7601e-2 * gpa, 1.8165e-1},
                                         {3.0802e-3 * gpa, 1.7382e0},
                                         {1.2001e-3 * gpa, 1.6633e1},
                                         {1.1523e-4 * gpa, 1.5916e2},
                                         {1.8237e-4 * gpa, 1.5230e3},
                                         {4.1645e-5 * gpa, 1.4573e4},
                                         {2.2405e-4 * gpa, 1.3945e5},
                                     });
}

double relaxation_modulus(double t, const PronyChain& chain) {
  if (!(t >= 0.0)) throw ArgumentError("relaxation modulus requires t >= 0");
  double g = chain.g_inf();
  for (const auto& u : chain.units()) g += u.modulus * std::exp(-t / u.relaxation_time);
  return g;
}

void validate(const ConstitutiveClosure& closure) {
  if (const auto* k = std::get_if<ConstantBulk>(&closure)) {
    if (!(k->bulk_modulus > 0.0)) throw ArgumentError("bulk modulus must be positive");
  } else {
    const double nu = std::get<ConstantPoisson>(closure).poisson;
    if (!(nu >= 0.0 && nu < 0.5)) throw ArgumentError("Poisson ratio must lie in [0, 0.5)");
  }
}

double young_from_shear(double g, const ConstitutiveClosure& closure) {
  if (const auto* k = std::get_if<ConstantBulk>(&closure)) {
    const double bulk = k->bulk_modulus;
    return 9.0 * bulk * g / (g + 3.0 * bulk);
  }
  return 2.0 * (1.0 + std::get<ConstantPoisson>(closure).poisson) * g;
}

double poisson_from_shear(double g, const ConstitutiveClosure& closure) {
  if (const auto* k = std::get_if<ConstantBulk>(&closure)) {
    const double bulk = k->bulk_modulus;
    return (3.0 * bulk - 2.0 * g) / (2.0 * (3.0 * bulk + g));
  }
  return std::get<ConstantPoisson>(closure).poisson;
}

double averaged_decay_weight(double x) {
  if (x < 1e-8) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}

EffectiveModuli effective_step_moduli(double dt, const PronyChain& chain,
                                      const ConstitutiveClosure& closure) {
  if (!(dt > 0.0)) throw ArgumentError("time step must be positive");
  EffectiveModuli eff;
  eff.dt = dt;
  eff.g_hat = chain.g_inf();
  eff.g_hat_units.reserve(chain.size());
  eff.decay.reserve(chain.size());
  for (const auto& u : chain.units()) {
    const double x = dt / u.relaxation_time;
    const double gp = u.modulus * averaged_decay_weight(x);
    eff.g_hat_units.push_back(gp);
    eff.decay.push_back(-std::expm1(-x));
    eff.g_hat += gp;
  }
  eff.e_hat = young_from_shear(eff.g_hat, closure);
  eff.nu_hat = poisson_from_shear(eff.g_hat, closure);
  return eff;
}

EffectiveModuli elastic_moduli(double g, const ConstitutiveClosure& closure) {
  EffectiveModuli eff;
  eff.g_hat = g;
  eff.e_hat = young_from_shear(g, closure);
  eff.nu_hat = poisson_from_shear(g, closure);
  return eff;
}

SectionProperties SectionProperties::glass(double width, double thickness) {
  SectionProperties p;
  p.width = width;
  p.thickness = thickness;
  p.area = width * thickness;
  p.shear_area = 5.0 / 6.0 * p.area;
  p.second_moment = width * thickness * thickness * thickness / 12.0;
  return p;
}

SectionProperties SectionProperties::interlayer(double width, double thickness) {
  SectionProperties p = glass(width, thickness);
  p.shear_area = p.area;
  return p;
}

namespace {

struct RelaxedStress {
  double s_n = 0.0;
  double s_m = 0.0;
  double t_v = 0.0;
};

void check_sizes(const SectionState& state, const EffectiveModuli& eff) {
  if (state.units.size() != eff.decay.size())
    throw ArgumentError("section state does not match the Maxwell chain");
}

// Summed stress relaxation of all units over the step.
RelaxedStress relaxed_stress(const SectionState& state, const EffectiveModuli& eff) {
  RelaxedStress r;
  for (std::size_t p = 0; p < state.units.size(); ++p) {
    r.s_n -= state.units[p].a_n * eff.decay[p];
    r.s_m -= state.units[p].a_m * eff.decay[p];
    r.t_v -= state.units[p].t_v * eff.decay[p];
  }
  return r;
}

}  // namespace

SectionForces relaxation_force_increments(const SectionState& state, const SectionProperties& props,
                                          const EffectiveModuli& eff,
                                          const ConstitutiveClosure& closure) {
  check_sizes(state, eff);
  const RelaxedStress r = relaxed_stress(state, eff);
  const double factor =
      std::holds_alternative<ConstantBulk>(closure) ? 1.0 + eff.nu_hat : 1.0;
  return SectionForces{factor * props.area * r.s_n, props.shear_area * r.t_v,
                       factor * props.second_moment * r.s_m};
}

SectionForces section_force_increments(const GeneralizedStrains& dstrains,
                                       const SectionState& state, const SectionProperties& props,
                                       const EffectiveModuli& eff,
                                       const ConstitutiveClosure& closure) {
  const SectionForces relax = relaxation_force_increments(state, props, eff, closure);
  return SectionForces{eff.e_hat * props.area * dstrains.eps0 + relax.n,
                       eff.g_hat * props.shear_area * dstrains.gamma + relax.v,
                       eff.e_hat * props.second_moment * dstrains.kappa + relax.m};
}

SectionState update_state(const GeneralizedStrains& dstrains, const SectionState& state,
                          const SectionProperties& props, const EffectiveModuli& eff,
                          const ConstitutiveClosure& closure) {
  const SectionForces df = section_force_increments(dstrains, state, props, eff, closure);
  SectionState next = state;
  next.forces.n += df.n;
  next.forces.v += df.v;
  next.forces.m += df.m;

  const RelaxedStress total = relaxed_stress(state, eff);
  const auto* bulk = std::get_if<ConstantBulk>(&closure);
  for (std::size_t p = 0; p < state.units.size(); ++p) {
    const UnitStress& old = state.units[p];
    const double gp = eff.g_hat_units[p];
    const double q = eff.decay[p];
    UnitStress& u = next.units[p];
    if (bulk != nullptr) {
      const double stiff = 4.0 / 3.0 * (1.0 + eff.nu_hat) * gp;
      const double coupling = 2.0 / 9.0 * gp * (1.0 + eff.nu_hat) / bulk->bulk_modulus;
      u.a_n += stiff * dstrains.eps0 - old.a_n * q - coupling * total.s_n;
      u.a_m += stiff * dstrains.kappa - old.a_m * q - coupling * total.s_m;
    } else {
      const double stiff = 2.0 * (1.0 + std::get<ConstantPoisson>(closure).poisson) * gp;
      u.a_n += stiff * dstrains.eps0 - old.a_n * q;
      u.a_m += stiff * dstrains.kappa - old.a_m * q;
    }
    u.t_v += gp * dstrains.gamma - old.t_v * q;
  }
  return next;
}

}  // namespace lamglass
