#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dmcap/prob.hpp"

namespace dmcap {

struct IdentityReport {
  std::string name;
  double max_violation;
  std::size_t samples;
  bool passed;
};

// A report plus, when it failed, a description of the worst offending
// inputs (reconstructible from the seed and sample index).
struct IdentityCheck {
  IdentityReport report;
  std::string witness;
};

// D(p||p_ref) - D(q||q_ref) with q, q_ref the induced output marginals.
// Nonnegative up to rounding (Jensen); computed with the linear terms
// removed so the result carries relative accuracy at any step size.
double penalty(const ProbVec& p, const ProbVec& p_ref, const TransitionMatrix& W);

// |I(p) - [sum_x p(x) D(W_x||q_ref) - D(q||q_ref)]|; zero in exact
// arithmetic for any p, p_ref.
double decomposition_residual(const ProbVec& p, const ProbVec& p_ref,
                              const TransitionMatrix& W);

// Residual of E_{p_next}[D_x] = log sum_x p_k(x) exp(D_x) + D(p_next||p_k),
// with D_x taken at p_k's marginal. Meaningful when p_next is the classical
// step from p_k, where the identity holds exactly.
double projection_residual(const ProbVec& p_next, const ProbVec& p_k,
                           const TransitionMatrix& W);

// Brute-force ground truth for channels with 2 or 3 inputs: maximum of
// mutual_information over a uniform simplex grid (grid_points subdivisions
// per dimension), refined once at x10 resolution around the argmax.
// Requires grid_points >= 100; use 10000 for binary inputs.
double capacity_oracle(const TransitionMatrix& W, std::size_t grid_points);

// Uniform on the simplex: exponential spacings -log U normalized. Strictly
// positive with probability 1. Uniform variates are built from the raw
// generator bits, so the sequence is identical on every platform.
ProbVec sample_simplex(std::mt19937_64& rng, std::size_t n);

TransitionMatrix sample_channel(std::mt19937_64& rng, std::size_t input_size,
                                std::size_t output_size);

// Runs the full identity suite: Jensen nonnegativity of the penalty,
// the mutual-information decomposition, the projection identity after a
// classical step, the per-iteration improvement bound along proximal
// traces, and solver agreement with the brute-force oracle. The first
// three sweep `samples` random (p, p_ref, W) triples with alphabets up to
// 10x40 drawn from the given seed.
std::vector<IdentityCheck> run_identity_checks(std::size_t samples, std::uint64_t seed);

}  // namespace dmcap
