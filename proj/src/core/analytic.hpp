#pragma once

#include <vector>

#include "core/fock.hpp"

namespace sqkd {

// Closed-form results for a coherent state with labels (phi_A, v_A) evolving
// under H = Omega*n - nu*n^2 (phases exp(-i Omega n t) exp(+i nu n^2 t)).
// All formulas share the shorthands
//   alpha = (phi + i v)/sqrt2,  beta = (v + i phi)/sqrt2,
//   gamma = e^{2 i nu t},       xi = Omega - 2 nu,  zeta = Omega - nu.

// Exact quadrature variance of the evolved state.
double variance_closed_form(double phi, double v, double omega_eff, double nu, double t,
                            Quadrature q);

// Parity of the frequency ratio Omega/nu, which decides which branch the
// half-period superposition lands on.
enum class RatioParity { Even, Odd };

// Variance of the two-component superposition at a quarter of the revival
// period. Even ratio: var(Phi) = 1/2 + phi^2 - e^{-2(phi^2+v^2)} v^2 and
// var(V) with phi/v swapped; odd ratio swaps the quadrature roles.
double cat_variance(double phi, double v, RatioParity parity, Quadrature q);

struct CatComponent {
  Complex coeff;
  Complex alpha;
};

// Multi-component decomposition at t = pi p / (nu q): the evolved state
// equals sum_l coeff_l |alpha_l> exactly (global phase included). The number
// of components is q when at most one of p, q is odd and 2q when both are.
std::vector<CatComponent> cat_decomposition(int p, int q, double omega_over_nu,
                                            Complex alpha);

// Mean squared error <(X_B - X_A)^2> between Alice's encoded value and the
// measured quadrature of the evolved state, in closed form.
double noise_cab(double phi, double v, double omega_eff, double nu, double t, Quadrature q);

// The same noise averaged over the Gaussian encoding ensemble
// (labels ~ N(0, 1/2) per quadrature); equals 1/2 at t = 0 and 5/2 at the
// half period for even ratios.
double ensemble_noise(double omega_eff, double nu, double t);

// Time average of ensemble_noise over one revival period, evaluated with
// adaptive Gauss-Kronrod quadrature (relative tolerance 1e-8). Approaches
// 3/2 once Omega dominates nu; the ratio must be at least 20.
double time_avg_noise(double omega_eff, double nu);

}  // namespace sqkd
