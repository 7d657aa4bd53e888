#pragma once

#include <complex>
#include <vector>

#include "core/error.hpp"

namespace sqkd {

using Complex = std::complex<double>;

// Quadrature conventions used throughout:
//   Phi = (b + b^dag)/sqrt(2),  V = i(b^dag - b)/sqrt(2),  N0 = 1/2.
// A coherent state labelled (phi, v) has amplitude alpha = (phi + i v)/sqrt(2),
// so <Phi> = phi and <V> = v with vacuum variance 1/2 in both quadratures.
enum class Quadrature { Phi, V };

constexpr double kVacuumNoise = 0.5;

inline Complex label_to_alpha(double phi, double v) {
  return Complex(phi, v) / std::sqrt(2.0);
}

// Normalized state in a truncated number basis; amps[n] multiplies |n>.
struct FockVector {
  std::vector<Complex> amps;

  int dim() const { return static_cast<int>(amps.size()); }
  double norm() const;
  // Probability weight in the top five basis states; a state is considered
  // well truncated when this stays below 1e-12.
  double tail_mass() const;
};

struct QuadratureMoments {
  double mean;
  double variance;
};

// Smallest dimension that keeps coherent amplitudes of size |alpha|
// comfortably inside the truncation (Poisson mean + 10 sigma + margin).
int recommended_dim(Complex alpha);

FockVector coherent_state(Complex alpha, int dim);
inline FockVector coherent_state(double phi, double v, int dim) {
  return coherent_state(label_to_alpha(phi, v), dim);
}

// exp(i lambda (b + b^dag)) applied through a scaled matrix-exponential
// action on the truncated operator, so truncation error is visible rather
// than hidden by a closed-form relabelling. Sends |alpha> to |alpha + i lambda>
// up to a global phase: it displaces <V> and leaves <Phi> fixed.
FockVector apply_displacement(const FockVector& state, double lambda);

// exp(-i theta n) phase per number state; rotates coherent labels by -theta.
FockVector apply_rotation(const FockVector& state, double theta);

// Free evolution amps[n] *= exp(-i Omega n t) * exp(+i nu n^2 t).
FockVector kerr_evolve(const FockVector& state, double omega_eff, double nu, double t);

QuadratureMoments quadrature_moments(const FockVector& state, Quadrature q);

// <a|b> over the common (equal) dimension.
Complex overlap(const FockVector& a, const FockVector& b);

}  // namespace sqkd
