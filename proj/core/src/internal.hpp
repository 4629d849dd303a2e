#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dmcap/prob.hpp"

// Shared numeric kernels. All divergence sums accumulate a*log1p((a-b)/b)
// rather than a*log(a/b): the absolute rounding error then scales with
// |a-b| instead of staying at machine epsilon, which keeps sub-1e-11
// capacity gaps and tiny step penalties resolvable.

namespace dmcap::detail {

// (1+x)*log1p(x) - x; nonnegative, ~x^2/2 near zero. Integrand of the KL
// divergence with the linear term removed.
double g_kl(double x);

// sum_i a_i*log1p((a_i-b_i)/b_i), skipping a_i = 0; +infinity when some
// a_i > 0 meets b_i = 0.
double kl_sum(const std::vector<double>& a, const std::vector<double>& b);

// sum_i b_i*g((a_i-b_i)/b_i), skipping a_i = b_i = 0. Equals D(a||b) minus
// the linear term sum(a-b); exact relative accuracy at any step size.
double kl_quadratic(const std::vector<double>& a, const std::vector<double>& b);

std::vector<double> marginal(const std::vector<double>& p, const TransitionMatrix& W);

// Entry j = D(row_j || q); entries may be +infinity (caller decides).
std::vector<double> surprisal(const TransitionMatrix& W, const std::vector<double>& q);

double dot(const std::vector<double>& a, const std::vector<double>& b);

// p_j * exp(e_j - max e) / Z. The shift guards overflow for any exponent
// scale; underflow to exact zero is allowed.
std::vector<double> scaled_exp_normalize(const std::vector<double>& p,
                                         const std::vector<double>& e);

// D(p_next||p) - D(q_next||q) for marginals q = pW, q_next = p_next W.
// The linear terms cancel exactly through row-stochasticity, so only the
// quadratic parts are summed.
double penalty_given_marginals(const std::vector<double>& p_next,
                               const std::vector<double>& p,
                               const std::vector<double>& q_next,
                               const std::vector<double>& q);

// 17 significant digits; round-trips any finite double.
std::string format_double(double x);

}  // namespace dmcap::detail
