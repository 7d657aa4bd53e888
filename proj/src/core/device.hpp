#pragma once

#include <vector>

#include "core/fock.hpp"

namespace sqkd {

// Circuit parameters of the driven junction loop, in the natural units used
// throughout (hbar = 1, frequencies in rad/s).
struct PhysicalJunctionParams {
  double capacitance = 0.0;   // C
  double inductance = 0.0;    // L
  double josephson = 0.0;     // E_J
  double charge = 1.0;        // e, kept explicit so unit systems stay visible
  double drive_flux = 0.0;    // phi_x, external flux amplitude while driving
};

struct EffectiveParams {
  double omega = 0.0;      // bare oscillator frequency
  double omega_eff = 0.0;  // harmonic part Omega = omega - nu
  double nu = 0.0;         // anharmonic (n^2) strength
  double mu = 0.0;         // displacement drive rate while the flux is on
};

// omega = sqrt(1/(C L) + 4 e^2 E_J / C), nu = 2 E_J e^4 / (3 (omega C)^2),
// mu = phi_x / (L sqrt(2 omega C)), Omega = omega - nu. The operating regime
// mu >> Omega >> nu is enforced as mu/Omega >= 100 and Omega/nu >= 20.
EffectiveParams effective_params(const PhysicalJunctionParams& p);

struct PreparationPulse {
  enum class Kind { Displace, Rotate };
  Kind kind;
  double duration;
  double strength;  // displacement rate (signed mu) or rotation rate Omega
};

// Pulse program realising T(phi_A, v_A): displace onto the V axis, rotate a
// quarter turn, displace again. Fixed drive amplitude, variable duration.
std::vector<PreparationPulse> preparation_schedule(double phi, double v,
                                                   const EffectiveParams& eff);

struct PrepareOptions {
  int dim = 0;                      // 0 = auto from the target label
  bool exact_rotation_phase = false;  // include the n^2 phase during rotation
};

// Runs the schedule through the truncated-basis operations. With ideal
// rotations the prepared state is |(phi + i v)/sqrt2> up to a global phase.
FockVector prepare_state(double phi, double v, const EffectiveParams& eff,
                         const PrepareOptions& opts = {});

}  // namespace sqkd
