#include "dmcap/prob.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "internal.hpp"

namespace dmcap {

namespace detail {

double g_kl(double x) {
  if (x <= -1.0) return 1.0;  // limit at x = -1 (entry vanishes); (1+x)log1p(x) -> 0
  return (1.0 + x) * std::log1p(x) - x;
}

double kl_sum(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 0.0) {
      if (b[i] <= 0.0) return std::numeric_limits<double>::infinity();
      s += a[i] * std::log1p((a[i] - b[i]) / b[i]);
    }
  }
  return s;
}

double kl_quadratic(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] > 0.0) {
      s += b[i] * g_kl((a[i] - b[i]) / b[i]);
    } else if (a[i] > 0.0) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return s;
}

std::vector<double> marginal(const std::vector<double>& p, const TransitionMatrix& W) {
  std::vector<double> q(W.output_size(), 0.0);
  for (std::size_t j = 0; j < W.input_size(); ++j) {
    const double pj = p[j];
    const std::vector<double>& row = W.row(j).values();
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += pj * row[i];
  }
  return q;
}

std::vector<double> surprisal(const TransitionMatrix& W, const std::vector<double>& q) {
  std::vector<double> d(W.input_size());
  for (std::size_t j = 0; j < W.input_size(); ++j) d[j] = kl_sum(W.row(j).values(), q);
  return d;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> scaled_exp_normalize(const std::vector<double>& p,
                                         const std::vector<double>& e) {
  const double shift = *std::max_element(e.begin(), e.end());
  std::vector<double> w(p.size());
  double z = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    w[j] = p[j] * std::exp(e[j] - shift);
    z += w[j];
  }
  for (double& x : w) x /= z;
  return w;
}

double penalty_given_marginals(const std::vector<double>& p_next,
                               const std::vector<double>& p,
                               const std::vector<double>& q_next,
                               const std::vector<double>& q) {
  return kl_quadratic(p_next, p) - kl_quadratic(q_next, q);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

namespace {

constexpr double kSimplexTolerance = 1e-12;  // invariant bound on |sum - 1|
constexpr double kRenormThreshold = 1e-13;   // divide only beyond this

double checked_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) {
    if (!(x >= 0.0)) {
      throw ValidationError("probability entry negative or NaN: " + std::to_string(x));
    }
    s += x;
  }
  return s;
}

}  // namespace

ProbVec::ProbVec(std::vector<double> values) : v_(std::move(values)) {
  if (v_.empty()) throw ValidationError("probability vector is empty");
  double s = checked_sum(v_);
  if (std::abs(s - 1.0) > kRenormThreshold) {
    if (std::abs(s - 1.0) > kSimplexTolerance) {
      throw ValidationError("probability mass sums to " + std::to_string(s) +
                            ", outside tolerance 1e-12");
    }
    for (double& x : v_) x /= s;
  }
}

ProbVec ProbVec::uniform(std::size_t n) {
  if (n == 0) throw ValidationError("uniform distribution needs n >= 1");
  return ProbVec(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

bool ProbVec::strictly_positive() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return x > 0.0; });
}

TransitionMatrix::TransitionMatrix(std::vector<ProbVec> rows) : rows_(std::move(rows)) {
  if (rows_.size() < 2) throw DimensionError("transition matrix needs at least 2 inputs");
  const std::size_t n = rows_.front().size();
  if (n < 2) throw DimensionError("transition matrix needs at least 2 outputs");
  for (const ProbVec& r : rows_) {
    if (r.size() != n) throw DimensionError("transition matrix rows have unequal lengths");
  }
}

SurprisalVec::SurprisalVec(std::vector<double> values) : v_(std::move(values)) {
  for (double d : v_) {
    if (!std::isfinite(d)) {
      throw DominationError("reference marginal does not dominate every channel row");
    }
  }
}

double kl_divergence(const ProbVec& p, const ProbVec& q) {
  if (p.size() != q.size()) {
    throw DimensionError("kl_divergence: lengths " + std::to_string(p.size()) + " vs " +
                         std::to_string(q.size()));
  }
  return detail::kl_sum(p.values(), q.values());
}

ProbVec output_marginal(const ProbVec& p, const TransitionMatrix& W) {
  if (p.size() != W.input_size()) {
    throw DimensionError("output_marginal: prior length " + std::to_string(p.size()) +
                         " vs input size " + std::to_string(W.input_size()));
  }
  return ProbVec(detail::marginal(p.values(), W));
}

SurprisalVec surprisal_vector(const TransitionMatrix& W, const ProbVec& q) {
  if (q.size() != W.output_size()) {
    throw DimensionError("surprisal_vector: marginal length " + std::to_string(q.size()) +
                         " vs output size " + std::to_string(W.output_size()));
  }
  return SurprisalVec(detail::surprisal(W, q.values()));
}

double mutual_information(const ProbVec& p, const TransitionMatrix& W) {
  if (p.size() != W.input_size()) {
    throw DimensionError("mutual_information: prior length " + std::to_string(p.size()) +
                         " vs input size " + std::to_string(W.input_size()));
  }
  const std::vector<double> q = detail::marginal(p.values(), W);
  // Zero-mass inputs contribute nothing even when their row is undominated.
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) s += p[j] * detail::kl_sum(W.row(j).values(), q);
  }
  return s;
}

CapacityBounds capacity_bounds(const ProbVec& p, const TransitionMatrix& W) {
  if (p.size() != W.input_size()) {
    throw DimensionError("capacity_bounds: prior length " + std::to_string(p.size()) +
                         " vs input size " + std::to_string(W.input_size()));
  }
  const std::vector<double> q = detail::marginal(p.values(), W);
  const std::vector<double> d = detail::surprisal(W, q);
  SurprisalVec checked(d);  // strictly positive p requires full domination
  double lower = 0.0;
  double upper = d.front();
  for (std::size_t j = 0; j < d.size(); ++j) {
    lower += p[j] * d[j];
    upper = std::max(upper, d[j]);
  }
  return CapacityBounds{lower, upper};
}

}  // namespace dmcap
