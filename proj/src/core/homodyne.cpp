#include "core/homodyne.hpp"

#include <algorithm>
#include <cmath>

namespace sqkd {

namespace {

constexpr double kQuarterRootPi = 0.75112554446494248285870300477623;  // pi^{-1/4}

// psi_0(x) = pi^{-1/4} e^{-x^2/2}; upward recurrence
// psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}.
double wave_sum_sq(const std::vector<Complex>& amps, double x) {
  const int dim = static_cast<int>(amps.size());
  double psi_prev = 0.0;
  double psi = kQuarterRootPi * std::exp(-0.5 * x * x);
  Complex acc = amps[0] * psi;
  for (int n = 1; n < dim; ++n) {
    const double dn = static_cast<double>(n);
    const double psi_next =
        std::sqrt(2.0 / dn) * x * psi - std::sqrt((dn - 1.0) / dn) * psi_prev;
    psi_prev = psi;
    psi = psi_next;
    acc += amps[n] * psi;
  }
  return std::norm(acc);
}

std::vector<Complex> rotated_amps(const FockVector& state, Quadrature q) {
  if (q == Quadrature::Phi) return state.amps;
  std::vector<Complex> amps = state.amps;
  // e^{-i (pi/2) n} cycles through 1, -i, -1, i.
  static const Complex cycle[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  for (size_t n = 0; n < amps.size(); ++n) amps[n] *= cycle[n % 4];
  return amps;
}

}  // namespace

std::vector<double> quadrature_pdf(const FockVector& state, Quadrature q,
                                   const std::vector<double>& grid) {
  if (grid.size() < 2) fail(ErrorCode::InvalidArgument, "quadrature_pdf: grid too short");
  const QuadratureMoments m = quadrature_moments(state, q);
  const double sigma = std::sqrt(std::max(m.variance, 0.0));
  if (grid.front() > m.mean - 8.0 * sigma || grid.back() < m.mean + 8.0 * sigma) {
    fail(ErrorCode::GridTooNarrow, "quadrature_pdf: grid must span mean +- 8 sigma");
  }
  const std::vector<Complex> amps = rotated_amps(state, q);
  std::vector<double> pdf(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) pdf[i] = wave_sum_sq(amps, grid[i]);

  double mass = 0.0;
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    mass += 0.5 * (pdf[i] + pdf[i + 1]) * (grid[i + 1] - grid[i]);
  }
  if (std::abs(mass - 1.0) > 1e-6) {
    fail(ErrorCode::GridTooNarrow,
         "quadrature_pdf: density integrates to " + std::to_string(mass));
  }
  return pdf;
}

HomodyneSampler::HomodyneSampler(const FockVector& state, Quadrature q, int grid_points,
                                 double span_sigmas) {
  if (grid_points < 16) fail(ErrorCode::InvalidArgument, "HomodyneSampler: grid too coarse");
  const QuadratureMoments m = quadrature_moments(state, q);
  const double sigma = std::sqrt(std::max(m.variance, 1e-12));
  const double lo = m.mean - span_sigmas * sigma;
  const double hi = m.mean + span_sigmas * sigma;
  grid_.resize(grid_points);
  const double h = (hi - lo) / static_cast<double>(grid_points - 1);
  for (int i = 0; i < grid_points; ++i) grid_[i] = lo + h * i;

  const std::vector<Complex> amps = rotated_amps(state, q);
  pdf_.resize(grid_points);
  for (int i = 0; i < grid_points; ++i) pdf_[i] = wave_sum_sq(amps, grid_[i]);

  cdf_.assign(grid_points, 0.0);
  for (int i = 1; i < grid_points; ++i) {
    cdf_[i] = cdf_[i - 1] + 0.5 * (pdf_[i - 1] + pdf_[i]) * (grid_[i] - grid_[i - 1]);
  }
  const double mass = cdf_.back();
  if (mass < 1.0 - 1e-4) {
    fail(ErrorCode::GridTooNarrow,
         "HomodyneSampler: grid captures only " + std::to_string(mass) + " of the density");
  }
  // Normalize density and CDF together so segment inversion stays exact.
  for (double& p : pdf_) p /= mass;
  for (double& c : cdf_) c /= mass;
}

double HomodyneSampler::sample(Rng& rng) const {
  const double u = rng.u01();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  size_t k = static_cast<size_t>(std::distance(cdf_.begin(), it));
  if (k == 0) return grid_.front();
  if (k >= cdf_.size()) k = cdf_.size() - 1;
  // Density is linear within a segment, so the CDF segment is quadratic:
  // du = p0 x + ((p1-p0)/(2h)) x^2 for x in [0, h].
  const double h = grid_[k] - grid_[k - 1];
  const double du = u - cdf_[k - 1];
  const double p0 = pdf_[k - 1];
  const double p1 = pdf_[k];
  const double a = 0.5 * (p1 - p0) / h;
  double x;
  if (std::abs(a) < 1e-300) {
    x = (p0 > 0.0) ? du / p0 : 0.5 * h;
  } else {
    const double disc = p0 * p0 + 4.0 * a * du;
    x = (std::sqrt(std::max(disc, 0.0)) - p0) / (2.0 * a);
  }
  x = std::clamp(x, 0.0, h);
  return grid_[k - 1] + x;
}

double HomodyneSampler::cdf_at(double x) const {
  if (x <= grid_.front()) return 0.0;
  if (x >= grid_.back()) return 1.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const size_t k = static_cast<size_t>(std::distance(grid_.begin(), it));
  const double h = grid_[k] - grid_[k - 1];
  const double dx = x - grid_[k - 1];
  const double p0 = pdf_[k - 1];
  const double slope = (pdf_[k] - p0) / h;
  return cdf_[k - 1] + p0 * dx + 0.5 * slope * dx * dx;
}

}  // namespace sqkd
