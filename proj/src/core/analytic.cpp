#include "core/analytic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numeric>

namespace sqkd {

namespace {

struct PhaseContext {
  Complex alpha, beta;
  double aa;  // |alpha|^2
  Complex g, ginv;
  double xi, zeta, t;

  PhaseContext(double phi, double v, double omega_eff, double nu, double t_in)
      : alpha(label_to_alpha(phi, v)),
        beta(label_to_alpha(v, phi)),
        aa(std::norm(alpha)),
        g(std::polar(1.0, 2.0 * nu * t_in)),
        ginv(std::polar(1.0, -2.0 * nu * t_in)),
        xi(omega_eff - 2.0 * nu),
        zeta(omega_eff - nu),
        t(t_in) {}

  Complex alpha_term() const { return alpha * alpha * std::exp(aa * (g * g - 1.0) - Complex(0, 2.0 * t * xi)); }
  Complex beta_term() const { return beta * beta * std::exp(aa * (ginv * ginv - 1.0) + Complex(0, 2.0 * t * xi)); }
  Complex u_conj() const { return std::conj(beta) * std::exp(aa * (g - 1.0)); }
  Complex u_plain() const { return beta * std::exp(aa * (ginv - 1.0) + Complex(0, 2.0 * t * zeta)); }
};

double take_real(Complex z, const char* what) {
  if (std::abs(z.imag()) > 1e-9 * std::max(1.0, std::abs(z.real()))) {
    fail(ErrorCode::NonRealResult,
         std::string(what) + ": imaginary remainder " + std::to_string(z.imag()));
  }
  return z.real();
}

}  // namespace

double variance_closed_form(double phi, double v, double omega_eff, double nu, double t,
                            Quadrature q) {
  const PhaseContext c(phi, v, omega_eff, nu, t);
  const Complex zrot = std::polar(1.0, -2.0 * t * c.zeta);
  Complex val;
  if (q == Quadrature::Phi) {
    const Complex u = c.u_conj() - c.u_plain();
    val = 0.5 * (1.0 + 2.0 * c.aa + c.alpha_term() - c.beta_term() + zrot * u * u);
  } else {
    const Complex u = c.u_conj() + c.u_plain();
    val = 0.5 * (1.0 + 2.0 * c.aa - c.alpha_term() + c.beta_term() - zrot * u * u);
  }
  return take_real(val, "variance_closed_form");
}

double cat_variance(double phi, double v, RatioParity parity, Quadrature q) {
  const double damp = std::exp(-2.0 * (phi * phi + v * v));
  const bool phi_branch = (q == Quadrature::Phi) == (parity == RatioParity::Even);
  if (phi_branch) return 0.5 + phi * phi - damp * v * v;
  return 0.5 + v * v - damp * phi * phi;
}

std::vector<CatComponent> cat_decomposition(int p, int q, double omega_over_nu,
                                            Complex alpha) {
  if (p < 1 || q < 1 || p > q) {
    fail(ErrorCode::InvalidArgument, "cat_decomposition: need 1 <= p <= q");
  }
  if (std::gcd(p, q) != 1) {
    fail(ErrorCode::NotCoprime, "cat_decomposition: p/q must be in lowest terms");
  }
  const bool both_odd = (p % 2 == 1) && (q % 2 == 1);
  const int m = both_odd ? 2 * q : q;
  std::vector<CatComponent> out(m);
  for (int l = 0; l < m; ++l) {
    Complex c = 0.0;
    for (int r = 0; r < m; ++r) {
      const double arg = M_PI * r *
                         (static_cast<double>(p) * r / q - 2.0 * static_cast<double>(l) / m);
      c += std::polar(1.0, arg);
    }
    out[l].coeff = c / static_cast<double>(m);
    const double rot = M_PI * (omega_over_nu * p / q - 2.0 * static_cast<double>(l) / m);
    out[l].alpha = alpha * std::polar(1.0, -rot);
  }
  return out;
}

double noise_cab(double phi, double v, double omega_eff, double nu, double t, Quadrature q) {
  const PhaseContext c(phi, v, omega_eff, nu, t);
  const Complex zrot = std::polar(1.0, -1.0 * t * c.zeta);
  Complex val;
  if (q == Quadrature::Phi) {
    const Complex inner = c.alpha * std::exp(c.aa * (c.g - 1.0)) +
                          std::conj(c.alpha) *
                              std::exp(c.aa * (c.ginv - 1.0) + Complex(0, 2.0 * t * c.zeta));
    val = 0.5 * (1.0 + 2.0 * c.aa + 4.0 * c.alpha.real() * c.alpha.real() -
                 4.0 * c.alpha.real() * zrot * inner + c.alpha_term() - c.beta_term());
  } else {
    const Complex inner = c.beta * std::exp(c.aa * (c.ginv - 1.0) + Complex(0, 2.0 * t * c.zeta)) +
                          std::conj(c.beta) * std::exp(c.aa * (c.g - 1.0));
    val = 0.5 * (1.0 + 2.0 * c.aa + 4.0 * c.alpha.imag() * c.alpha.imag() -
                 4.0 * c.alpha.imag() * zrot * inner - c.alpha_term() + c.beta_term());
  }
  return take_real(val, "noise_cab");
}

double ensemble_noise(double omega_eff, double nu, double t) {
  const double num = 9.0 * std::cos(t * (nu - omega_eff)) - 6.0 * std::cos(t * (nu + omega_eff)) +
                     std::cos(t * (3.0 * nu + omega_eff));
  const double den = 5.0 - 3.0 * std::cos(2.0 * nu * t);
  return 1.5 - num / (den * den);
}

double time_avg_noise(double omega_eff, double nu) {
  if (nu <= 0.0 || omega_eff / nu < 20.0) {
    fail(ErrorCode::InvalidArgument, "time_avg_noise: requires omega_eff/nu >= 20");
  }
  const double period = 2.0 * M_PI / nu;
  const auto f = [&](double t) { return ensemble_noise(omega_eff, nu, t); };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, 0.0, period, 18, 1e-8);
  return integral / period;
}

}  // namespace sqkd
