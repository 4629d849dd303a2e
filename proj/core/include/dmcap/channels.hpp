#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dmcap/prob.hpp"

namespace dmcap {

// Additive noise (1-p)*N(0, sigma_b^2) + p*N(0, sigma_b^2 + sigma_g^2):
// a Gaussian background with occasional wideband impulses. Defaults are the
// canonical 10x40 test configuration.
struct BernoulliGaussianParams {
  double p_impulse = 0.3;
  double sigma_b = 0.01;
  double sigma_g = 1.0;
  std::size_t input_levels = 10;
  std::size_t output_levels = 40;
  std::pair<double, double> input_range{-1.0, 1.0};
  // Defaults to [lo - 4*sigma_max, hi + 4*sigma_max] around the input range,
  // sigma_max = sqrt(sigma_b^2 + sigma_g^2).
  std::optional<std::pair<double, double>> output_range;
};

// Validates and renormalizes: rectangular, entries >= 0, row sums within
// 1e-9 of 1.
TransitionMatrix from_matrix(const std::vector<std::vector<double>>& rows);

// [[1-eps, eps], [eps, 1-eps]].
TransitionMatrix bsc(double epsilon);

// Phi(x / sigma), computed as erfc(-x / (sigma*sqrt(2))) / 2; absolute
// error well below 1e-12.
double gaussian_cdf(double x, double sigma);

// Rows: uniform input grid over input_range (endpoints included).
// Columns: uniform output bins over output_range, the two extreme bins
// absorbing the tails to +-infinity so each row keeps its full mass.
TransitionMatrix bernoulli_gaussian_channel(const BernoulliGaussianParams& params);

}  // namespace dmcap
