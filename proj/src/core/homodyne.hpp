#pragma once

#include <vector>

#include "core/fock.hpp"
#include "core/rng.hpp"

namespace sqkd {

// Position-space density of a quadrature: p(x) = |sum_n amps'[n] psi_n(x)|^2
// with unit-variance-1/2 oscillator eigenfunctions (vacuum density is
// N(0, 1/2)). For V the amplitudes are rotated by pi/2 first.
std::vector<double> quadrature_pdf(const FockVector& state, Quadrature q,
                                   const std::vector<double>& grid);

// Inverse-CDF sampler over a fixed grid. The grid spans mean +- span_sigmas
// standard deviations of the requested quadrature; the trapezoid CDF is
// checked against unit mass before use.
class HomodyneSampler {
 public:
  HomodyneSampler(const FockVector& state, Quadrature q, int grid_points = 4096,
                  double span_sigmas = 10.0);

  double sample(Rng& rng) const;
  double cdf_at(double x) const;

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& density() const { return pdf_; }

 private:
  std::vector<double> grid_;
  std::vector<double> pdf_;
  std::vector<double> cdf_;  // normalized trapezoid CDF, cdf_[0] = 0
};

inline double homodyne_sample(const FockVector& state, Quadrature q, Rng& rng,
                              int grid_points = 4096) {
  return HomodyneSampler(state, q, grid_points).sample(rng);
}

}  // namespace sqkd
