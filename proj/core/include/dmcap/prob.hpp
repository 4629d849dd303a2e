#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dmcap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched vector/matrix sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Input violates a constructor or config precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A reference marginal assigns zero mass where a channel row does not;
// the divergence would be infinite and the multiplicative update breaks.
class DominationError : public Error {
 public:
  using Error::Error;
};

// Point on the probability simplex. Entries >= 0 and the sum is within
// 1e-12 of 1. Construction divides by the sum only when it is off by more
// than 1e-13, so constructing from a ProbVec's own values is the identity
// bit for bit (files round-trip exactly).
class ProbVec {
 public:
  explicit ProbVec(std::vector<double> values);
  static ProbVec uniform(std::size_t n);

  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  const std::vector<double>& values() const { return v_; }
  std::vector<double>::const_iterator begin() const { return v_.begin(); }
  std::vector<double>::const_iterator end() const { return v_.end(); }
  bool strictly_positive() const;

 private:
  std::vector<double> v_;
};

// Row-stochastic conditional law; row j is p(y | x = x_j).
class TransitionMatrix {
 public:
  explicit TransitionMatrix(std::vector<ProbVec> rows);

  std::size_t input_size() const { return rows_.size(); }
  std::size_t output_size() const { return rows_.front().size(); }
  const ProbVec& row(std::size_t j) const { return rows_[j]; }

 private:
  std::vector<ProbVec> rows_;
};

// Per-input divergence D_x = D(p(y|x) || q) in nats; every entry finite.
class SurprisalVec {
 public:
  // Throws DominationError if any entry is non-finite.
  explicit SurprisalVec(std::vector<double> values);

  std::size_t size() const { return v_.size(); }
  double operator[](std::size_t j) const { return v_[j]; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> v_;
};

struct CapacityBounds {
  double lower;  // I(p), never above the capacity
  double upper;  // max_x D_x, never below the capacity
};

// D(p || q) in nats. Convention 0*log(0/q) = 0; p(x) > 0 with q(x) = 0
// yields +infinity (a value, not an error).
double kl_divergence(const ProbVec& p, const ProbVec& q);

// q_i = sum_j p_j W(j,i).
ProbVec output_marginal(const ProbVec& p, const TransitionMatrix& W);

// Entry j = kl_divergence(row j, q); throws DominationError if q fails to
// dominate some row.
SurprisalVec surprisal_vector(const TransitionMatrix& W, const ProbVec& q);

// I(p, W) = sum_j p_j D(W_j || q) with q the induced output marginal.
double mutual_information(const ProbVec& p, const TransitionMatrix& W);

CapacityBounds capacity_bounds(const ProbVec& p, const TransitionMatrix& W);

}  // namespace dmcap
