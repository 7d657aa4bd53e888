#include "core/device.hpp"

#include <cmath>

namespace sqkd {

EffectiveParams effective_params(const PhysicalJunctionParams& p) {
  if (p.capacitance <= 0.0 || p.inductance <= 0.0) {
    fail(ErrorCode::InvalidArgument, "effective_params: capacitance and inductance must be positive");
  }
  if (p.josephson < 0.0 || p.charge <= 0.0 || p.drive_flux < 0.0) {
    fail(ErrorCode::InvalidArgument, "effective_params: negative junction parameter");
  }
  EffectiveParams eff;
  const double e2 = p.charge * p.charge;
  eff.omega = std::sqrt(1.0 / (p.capacitance * p.inductance) +
                        4.0 * e2 * p.josephson / p.capacitance);
  const double wc = eff.omega * p.capacitance;
  eff.nu = 2.0 * p.josephson * e2 * e2 / (3.0 * wc * wc);
  eff.omega_eff = eff.omega - eff.nu;
  eff.mu = p.drive_flux / (p.inductance * std::sqrt(2.0 * eff.omega * p.capacitance));

  if (eff.nu <= 0.0) {
    fail(ErrorCode::RegimeViolation, "effective_params: no anharmonic term (E_J = 0)");
  }
  if (eff.omega_eff / eff.nu < 20.0) {
    fail(ErrorCode::RegimeViolation, "effective_params: Omega/nu below 20");
  }
  if (eff.mu / eff.omega_eff < 100.0) {
    fail(ErrorCode::RegimeViolation, "effective_params: mu/Omega below 100 during drive");
  }
  return eff;
}

std::vector<PreparationPulse> preparation_schedule(double phi, double v,
                                                   const EffectiveParams& eff) {
  if (eff.mu <= 0.0 || eff.omega_eff <= 0.0) {
    fail(ErrorCode::InvalidArgument, "preparation_schedule: effective rates must be positive");
  }
  const double root2 = std::sqrt(2.0);
  // First pulse writes phi onto <V>; the quarter turn moves it to <Phi>.
  const double lam1 = phi / root2;
  const double lam2 = v / root2;
  std::vector<PreparationPulse> pulses;
  pulses.push_back({PreparationPulse::Kind::Displace, std::abs(lam1) / eff.mu,
                    lam1 >= 0.0 ? eff.mu : -eff.mu});
  pulses.push_back({PreparationPulse::Kind::Rotate, M_PI / (2.0 * eff.omega_eff), eff.omega_eff});
  pulses.push_back({PreparationPulse::Kind::Displace, std::abs(lam2) / eff.mu,
                    lam2 >= 0.0 ? eff.mu : -eff.mu});
  return pulses;
}

FockVector prepare_state(double phi, double v, const EffectiveParams& eff,
                         const PrepareOptions& opts) {
  const Complex target = label_to_alpha(phi, v);
  const int dim = opts.dim > 0 ? opts.dim : recommended_dim(target) + 8;
  FockVector s = coherent_state(Complex(0.0, 0.0), dim);
  for (const PreparationPulse& pulse : preparation_schedule(phi, v, eff)) {
    if (pulse.kind == PreparationPulse::Kind::Displace) {
      s = apply_displacement(s, pulse.strength * pulse.duration);
    } else if (opts.exact_rotation_phase) {
      // Keep the n^2 term on during the quarter turn; the infidelity this
      // introduces shrinks as nu/Omega.
      s = kerr_evolve(s, eff.omega_eff, eff.nu, pulse.duration);
    } else {
      s = apply_rotation(s, pulse.strength * pulse.duration);
    }
  }
  return s;
}

}  // namespace sqkd
