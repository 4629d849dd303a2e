#include "doctest.h"

#include <cmath>
#include <vector>

#include "dmcap/channels.hpp"
#include "dmcap/prob.hpp"

namespace {

// Single mixture-CDF bin mass in extended precision, independent of the
// running-CDF scheme used by the builder.
long double bg_entry_reference(double x, double lo, double hi, double p,
                               double sigma_b, double sigma_mix) {
  auto cdf = [](long double t, long double s) {
    return erfcl(-t / (s * sqrtl(2.0L))) / 2.0L;
  };
  long double b = cdf(hi - x, sigma_b) - cdf(lo - x, sigma_b);
  long double m = cdf(hi - x, sigma_mix) - cdf(lo - x, sigma_mix);
  return (1.0L - (long double)p) * b + (long double)p * m;
}

}  // namespace

TEST_CASE("from_matrix accepts valid rows and leaves them untouched") {
  dmcap::TransitionMatrix W = dmcap::from_matrix({{0.7, 0.2, 0.1},
                                                  {0.1, 0.2, 0.7}});
  CHECK(W.input_size() == 2);
  CHECK(W.output_size() == 3);
  CHECK(W.row(0)[0] == 0.7);
  CHECK(W.row(1)[2] == 0.7);
}

TEST_CASE("from_matrix renormalizes sums within 1e-9 and rejects beyond") {
  dmcap::TransitionMatrix W =
      dmcap::from_matrix({{0.5, 0.5 + 5e-10}, {0.5, 0.5}});
  double sum = W.row(0)[0] + W.row(0)[1];
  CHECK(std::fabs(sum - 1.0) < 1e-15);

  CHECK_THROWS_AS((void)dmcap::from_matrix({{0.5, 0.5 + 2e-9}, {0.5, 0.5}}),
                  dmcap::ValidationError);
}

TEST_CASE("from_matrix rejects malformed input") {
  CHECK_THROWS_AS((void)dmcap::from_matrix({{0.5, 0.5}}),
                  dmcap::DimensionError);
  CHECK_THROWS_AS((void)dmcap::from_matrix({{0.5, 0.5}, {0.3, 0.3, 0.4}}),
                  dmcap::DimensionError);
  CHECK_THROWS_AS((void)dmcap::from_matrix({{0.5, 0.5}, {-0.1, 1.1}}),
                  dmcap::ValidationError);
}

TEST_CASE("bsc entries are exact") {
  dmcap::TransitionMatrix W = dmcap::bsc(0.1);
  CHECK(W.row(0)[0] == 0.9);
  CHECK(W.row(0)[1] == 0.1);
  CHECK(W.row(1)[0] == 0.1);
  CHECK(W.row(1)[1] == 0.9);

  CHECK_THROWS_AS((void)dmcap::bsc(-0.01), dmcap::ValidationError);
  CHECK_THROWS_AS((void)dmcap::bsc(1.01), dmcap::ValidationError);
}

TEST_CASE("gaussian_cdf matches the erf closed form") {
  CHECK(dmcap::gaussian_cdf(0.0, 1.0) == 0.5);
  CHECK(dmcap::gaussian_cdf(1.0, 1.0) ==
        doctest::Approx(0.8413447460685429).epsilon(1e-15));
  for (double x : {-3.0, -0.7, 0.3, 2.5}) {
    double want = 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
    CHECK(dmcap::gaussian_cdf(x, 1.0) == doctest::Approx(want).epsilon(1e-14));
    // Scale covariance: Phi(x; sigma) = Phi(x/sigma; 1).
    CHECK(dmcap::gaussian_cdf(2.0 * x, 2.0) ==
          doctest::Approx(dmcap::gaussian_cdf(x, 1.0)).epsilon(1e-15));
    // Symmetry around zero.
    CHECK(dmcap::gaussian_cdf(x, 1.0) + dmcap::gaussian_cdf(-x, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS((void)dmcap::gaussian_cdf(0.0, 0.0), dmcap::ValidationError);
  CHECK_THROWS_AS((void)dmcap::gaussian_cdf(0.0, -1.0),
                  dmcap::ValidationError);
}

TEST_CASE("bernoulli_gaussian_channel default shape and mass") {
  dmcap::TransitionMatrix W =
      dmcap::bernoulli_gaussian_channel(dmcap::BernoulliGaussianParams{});
  REQUIRE(W.input_size() == 10);
  REQUIRE(W.output_size() == 40);
  for (std::size_t j = 0; j < W.input_size(); ++j) {
    double sum = 0.0;
    for (double v : W.row(j)) {
      CHECK(v >= 0.0);
      sum += v;
    }
    // Tail bins absorb everything; only accumulation rounding remains.
    CHECK(std::fabs(sum - 1.0) <= 2e-15);
  }
}

TEST_CASE("bernoulli_gaussian_channel is linear in the impulse probability") {
  dmcap::BernoulliGaussianParams base{};
  dmcap::BernoulliGaussianParams quiet = base;
  quiet.p_impulse = 0.0;
  dmcap::BernoulliGaussianParams loud = base;
  loud.p_impulse = 1.0;

  dmcap::TransitionMatrix Wp = dmcap::bernoulli_gaussian_channel(base);
  dmcap::TransitionMatrix W0 = dmcap::bernoulli_gaussian_channel(quiet);
  dmcap::TransitionMatrix W1 = dmcap::bernoulli_gaussian_channel(loud);

  for (std::size_t j = 0; j < Wp.input_size(); ++j) {
    for (std::size_t i = 0; i < Wp.output_size(); ++i) {
      double mix = (1.0 - base.p_impulse) * W0.row(j)[i] +
                   base.p_impulse * W1.row(j)[i];
      CHECK(Wp.row(j)[i] == doctest::Approx(mix).epsilon(1e-12));
    }
  }
}

TEST_CASE("bernoulli_gaussian_channel has the double-flip symmetry") {
  // Symmetric input grid and symmetric noise: W(j, i) = W(m-1-j, n-1-i).
  dmcap::TransitionMatrix W =
      dmcap::bernoulli_gaussian_channel(dmcap::BernoulliGaussianParams{});
  std::size_t m = W.input_size();
  std::size_t n = W.output_size();
  double worst = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double d = std::fabs(W.row(j)[i] - W.row(m - 1 - j)[n - 1 - i]);
      if (d > worst) worst = d;
    }
  }
  CHECK(worst <= 1e-14);
}

TEST_CASE("bernoulli_gaussian_channel entry matches a direct mixture CDF") {
  dmcap::BernoulliGaussianParams prm{};
  dmcap::TransitionMatrix W = dmcap::bernoulli_gaussian_channel(prm);
  double sigma_mix =
      std::sqrt(prm.sigma_b * prm.sigma_b + prm.sigma_g * prm.sigma_g);
  double out_lo = prm.input_range.first - 4.0 * sigma_mix;
  double out_hi = prm.input_range.second + 4.0 * sigma_mix;
  double span = prm.input_range.second - prm.input_range.first;

  // Interior bin (12) and an edge-adjacent bin (1) for input level 3.
  std::size_t j = 3;
  double x = prm.input_range.first + span * (double)j / 9.0;
  double w = (out_hi - out_lo) / 40.0;
  for (std::size_t i : {std::size_t(1), std::size_t(12)}) {
    double lo = out_lo + w * (double)i;
    double hi = out_lo + w * (double)(i + 1);
    long double want = bg_entry_reference(x, lo, hi, prm.p_impulse,
                                          prm.sigma_b, sigma_mix);
    CHECK(W.row(j)[i] == doctest::Approx((double)want).epsilon(1e-12));
  }
}

TEST_CASE("bernoulli_gaussian_channel narrow output range absorbs tails") {
  dmcap::BernoulliGaussianParams prm{};
  prm.output_range = std::make_pair(-0.5, 0.5);
  dmcap::TransitionMatrix W = dmcap::bernoulli_gaussian_channel(prm);
  for (std::size_t j = 0; j < W.input_size(); ++j) {
    double sum = 0.0;
    for (double v : W.row(j)) sum += v;
    CHECK(std::fabs(sum - 1.0) <= 2e-15);
  }
  // An input at +1 dumps most of its mass into the top absorbing bin.
  CHECK(W.row(9)[39] > 0.5);
}

TEST_CASE("bernoulli_gaussian_channel validates parameters") {
  auto with = [](auto mutate) {
    dmcap::BernoulliGaussianParams prm{};
    mutate(prm);
    return prm;
  };
  CHECK_THROWS_AS((void)dmcap::bernoulli_gaussian_channel(
                      with([](auto& p) { p.p_impulse = -0.1; })),
                  dmcap::ValidationError);
  CHECK_THROWS_AS((void)dmcap::bernoulli_gaussian_channel(
                      with([](auto& p) { p.p_impulse = 1.1; })),
                  dmcap::ValidationError);
  CHECK_THROWS_AS((void)dmcap::bernoulli_gaussian_channel(
                      with([](auto& p) { p.sigma_b = 0.0; })),
                  dmcap::ValidationError);
  CHECK_THROWS_AS((void)dmcap::bernoulli_gaussian_channel(
                      with([](auto& p) { p.sigma_g = -1.0; })),
                  dmcap::ValidationError);
  CHECK_THROWS_AS((void)dmcap::bernoulli_gaussian_channel(with([](auto& p) {
                    p.sigma_b = 2.0;  // background wider than the impulse
                  })),
                  dmcap::ValidationError);
  CHECK_THROWS_AS((void)dmcap::bernoulli_gaussian_channel(
                      with([](auto& p) { p.input_levels = 1; })),
                  dmcap::ValidationError);
  CHECK_THROWS_AS((void)dmcap::bernoulli_gaussian_channel(
                      with([](auto& p) { p.output_levels = 1; })),
                  dmcap::ValidationError);
  CHECK_THROWS_AS((void)dmcap::bernoulli_gaussian_channel(
                      with([](auto& p) { p.input_range = {1.0, -1.0}; })),
                  dmcap::ValidationError);
  CHECK_THROWS_AS((void)dmcap::bernoulli_gaussian_channel(with([](auto& p) {
                    p.output_range = std::make_pair(0.5, -0.5);
                  })),
                  dmcap::ValidationError);
}
