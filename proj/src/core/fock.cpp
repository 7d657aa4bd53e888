#include "core/fock.hpp"

#include <algorithm>
#include <cmath>

namespace sqkd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kWellTruncated = 1e-12;

// Unit phase from a possibly large angle; long-double reduction keeps the
// error of Omega*n*t arguments near machine precision.
Complex unit_phase(double angle) {
  long double r = std::remainder(static_cast<long double>(angle), static_cast<long double>(kTwoPi));
  return Complex(std::cos(static_cast<double>(r)), std::sin(static_cast<double>(r)));
}

// Action of i*lambda*(b + b^dag) on v.
void ladder_action(double lambda, const std::vector<Complex>& v, std::vector<Complex>& out) {
  const int dim = static_cast<int>(v.size());
  const Complex il(0.0, lambda);
  for (int n = 0; n < dim; ++n) {
    Complex acc = 0.0;
    if (n + 1 < dim) acc += std::sqrt(static_cast<double>(n + 1)) * v[n + 1];
    if (n > 0) acc += std::sqrt(static_cast<double>(n)) * v[n - 1];
    out[n] = il * acc;
  }
}

}  // namespace

double FockVector::norm() const {
  double s = 0.0;
  for (const Complex& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

double FockVector::tail_mass() const {
  double s = 0.0;
  const int d = dim();
  for (int n = std::max(0, d - 5); n < d; ++n) s += std::norm(amps[n]);
  return s;
}

int recommended_dim(Complex alpha) {
  const double a2 = std::norm(alpha);
  return static_cast<int>(std::ceil(a2 + 10.0 * std::sqrt(a2 + 1.0) + 20.0));
}

FockVector coherent_state(Complex alpha, int dim) {
  const double a2 = std::norm(alpha);
  if (dim < 1) fail(ErrorCode::InvalidArgument, "coherent_state: dim must be positive");
  if (static_cast<double>(dim) < a2 + 10.0 * std::sqrt(a2 + 1.0)) {
    fail(ErrorCode::TruncationTooSmall,
         "coherent_state: dim " + std::to_string(dim) + " too small for |alpha|^2 = " +
             std::to_string(a2));
  }
  FockVector s;
  s.amps.resize(dim);
  s.amps[0] = std::exp(-0.5 * a2);
  for (int n = 1; n < dim; ++n) s.amps[n] = s.amps[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return s;
}

FockVector apply_displacement(const FockVector& state, double lambda) {
  const int dim = state.dim();
  if (dim < 1) fail(ErrorCode::InvalidArgument, "apply_displacement: empty state");

  // Scale so each Taylor application sees ||A|| <= ~1/2, then apply the
  // short series 2^s times. ||i lambda (b+b^dag)||_2 <= 2 |lambda| sqrt(dim).
  const double op_norm = 2.0 * std::abs(lambda) * std::sqrt(static_cast<double>(dim));
  int s = 0;
  while (op_norm / static_cast<double>(1ULL << s) > 0.5 && s < 62) ++s;
  const double lam_scaled = lambda / static_cast<double>(1ULL << s);

  FockVector out = state;
  std::vector<Complex> term(dim), next(dim);
  for (std::uint64_t rep = 0; rep < (1ULL << s); ++rep) {
    term = out.amps;
    double term_scale = 1.0;
    for (int k = 1; k <= 24; ++k) {
      ladder_action(lam_scaled, term, next);
      std::swap(term, next);
      for (int n = 0; n < dim; ++n) {
        term[n] /= static_cast<double>(k);
        out.amps[n] += term[n];
      }
      term_scale = 0.0;
      for (int n = 0; n < dim; ++n) term_scale += std::norm(term[n]);
      if (term_scale < 1e-34) break;
    }
  }

  if (out.tail_mass() > kWellTruncated) {
    fail(ErrorCode::TruncationTooSmall,
         "apply_displacement: displaced state is not well truncated (tail mass " +
             std::to_string(out.tail_mass()) + ")");
  }
  return out;
}

FockVector apply_rotation(const FockVector& state, double theta) {
  FockVector out = state;
  for (int n = 0; n < out.dim(); ++n) {
    out.amps[n] *= unit_phase(-theta * static_cast<double>(n));
  }
  return out;
}

FockVector kerr_evolve(const FockVector& state, double omega_eff, double nu, double t) {
  FockVector out = state;
  for (int n = 0; n < out.dim(); ++n) {
    const double dn = static_cast<double>(n);
    out.amps[n] *= unit_phase(-omega_eff * dn * t) * unit_phase(nu * dn * dn * t);
  }
  return out;
}

QuadratureMoments quadrature_moments(const FockVector& state, Quadrature q) {
  const int dim = state.dim();
  if (dim < 1) fail(ErrorCode::InvalidArgument, "quadrature_moments: empty state");
  Complex eb = 0.0, eb2 = 0.0;
  double en = 0.0;
  const auto& a = state.amps;
  for (int n = 0; n < dim; ++n) {
    const double dn = static_cast<double>(n);
    en += dn * std::norm(a[n]);
    if (n + 1 < dim) eb += std::conj(a[n]) * std::sqrt(dn + 1.0) * a[n + 1];
    if (n + 2 < dim) eb2 += std::conj(a[n]) * std::sqrt((dn + 1.0) * (dn + 2.0)) * a[n + 2];
  }
  QuadratureMoments m;
  if (q == Quadrature::Phi) {
    m.mean = std::sqrt(2.0) * eb.real();
    m.variance = eb2.real() + en + 0.5 - m.mean * m.mean;
  } else {
    m.mean = std::sqrt(2.0) * eb.imag();
    m.variance = -eb2.real() + en + 0.5 - m.mean * m.mean;
  }
  return m;
}

Complex overlap(const FockVector& a, const FockVector& b) {
  if (a.dim() != b.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "overlap: dimensions differ (" + std::to_string(a.dim()) + " vs " +
             std::to_string(b.dim()) + ")");
  }
  Complex s = 0.0;
  for (int n = 0; n < a.dim(); ++n) s += std::conj(a.amps[n]) * b.amps[n];
  return s;
}

}  // namespace sqkd
