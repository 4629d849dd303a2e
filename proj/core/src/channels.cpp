#include "dmcap/channels.hpp"

#include <cmath>
#include <string>

namespace dmcap {

TransitionMatrix from_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) {
    throw DimensionError("channel matrix needs at least 2 rows");
  }
  const std::size_t cols = rows.front().size();
  std::vector<ProbVec> built;
  built.reserve(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto& row = rows[j];
    if (row.size() != cols) {
      throw DimensionError("channel matrix rows have unequal lengths");
    }
    double sum = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) {
        throw ValidationError("channel matrix entry negative or NaN in row " +
                              std::to_string(j));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ValidationError("row " + std::to_string(j) + " sums to " +
                            std::to_string(sum) + ", not 1 within 1e-9");
    }
    std::vector<double> scaled(row);
    // Same threshold as ProbVec: rows already within 1e-13 stay untouched,
    // so re-reading a dumped matrix is the identity bit for bit.
    if (std::abs(sum - 1.0) > 1e-13) {
      for (double& v : scaled) v /= sum;
    }
    built.emplace_back(std::move(scaled));
  }
  return TransitionMatrix(std::move(built));
}

TransitionMatrix bsc(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ValidationError("crossover probability must lie in [0, 1]");
  }
  std::vector<ProbVec> rows;
  rows.emplace_back(std::vector<double>{1.0 - epsilon, epsilon});
  rows.emplace_back(std::vector<double>{epsilon, 1.0 - epsilon});
  return TransitionMatrix(std::move(rows));
}

double gaussian_cdf(double x, double sigma) {
  if (!(sigma > 0.0)) {
    throw ValidationError("gaussian_cdf requires sigma > 0");
  }
  return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0)));
}

TransitionMatrix bernoulli_gaussian_channel(const BernoulliGaussianParams& params) {
  if (!(params.p_impulse >= 0.0 && params.p_impulse <= 1.0)) {
    throw ValidationError("p_impulse must lie in [0, 1]");
  }
  if (!(params.sigma_b > 0.0) || !(params.sigma_g > 0.0)) {
    throw ValidationError("sigma_b and sigma_g must be positive");
  }
  if (params.sigma_b > params.sigma_g) {
    throw ValidationError("sigma_b must not exceed sigma_g");
  }
  if (params.input_levels < 2 || params.output_levels < 2) {
    throw ValidationError("need at least 2 input and 2 output levels");
  }
  const auto [in_lo, in_hi] = params.input_range;
  if (!(in_lo < in_hi)) {
    throw ValidationError("input_range must satisfy lo < hi");
  }
  const double sigma_mix =
      std::sqrt(params.sigma_b * params.sigma_b + params.sigma_g * params.sigma_g);
  double out_lo = in_lo - 4.0 * sigma_mix;
  double out_hi = in_hi + 4.0 * sigma_mix;
  if (params.output_range) {
    out_lo = params.output_range->first;
    out_hi = params.output_range->second;
    if (!(out_lo < out_hi)) {
      throw ValidationError("output_range must satisfy lo < hi");
    }
  }

  const std::size_t m = params.input_levels;
  const std::size_t n = params.output_levels;
  const double p = params.p_impulse;

  std::vector<ProbVec> rows;
  rows.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double x =
        in_lo + (in_hi - in_lo) * static_cast<double>(j) / static_cast<double>(m - 1);
    std::vector<double> row(n);
    // Running CDFs at the left bin edge; the extreme bins take the tails, so
    // the row sums to 1 exactly up to the rounding of two subtractions.
    double cdf_b_lo = 0.0;
    double cdf_m_lo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double cdf_b_hi = 1.0;
      double cdf_m_hi = 1.0;
      if (i + 1 < n) {
        const double u =
            out_lo + (out_hi - out_lo) * static_cast<double>(i + 1) / static_cast<double>(n);
        cdf_b_hi = gaussian_cdf(u - x, params.sigma_b);
        cdf_m_hi = gaussian_cdf(u - x, sigma_mix);
      }
      row[i] = (1.0 - p) * (cdf_b_hi - cdf_b_lo) + p * (cdf_m_hi - cdf_m_lo);
      cdf_b_lo = cdf_b_hi;
      cdf_m_lo = cdf_m_hi;
    }
    rows.emplace_back(std::move(row));
  }
  return TransitionMatrix(std::move(rows));
}

}  // namespace dmcap
