#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "dmcap/prob.hpp"

namespace dmcap {

// The inner fixed-point iteration raised its divergence signal (L1 change
// grew for 5 consecutive inner steps).
class InnerDivergenceError : public Error {
 public:
  using Error::Error;
};

struct Classical {};

// Accelerated multiplicative update p'(x) proportional to p(x)*exp(D_x/lambda).
// A nonempty schedule overrides the fixed value; entry k-1 applies to outer
// iteration k and the last entry persists afterwards. Convergence is not
// guaranteed for lambda != 1.
struct Matz {
  double lambda = 0.5;
  std::vector<double> schedule;
};

// True proximal update with lambda chosen per iteration by line search.
struct Proximal {};

using Variant = std::variant<Classical, Matz, Proximal>;

// Search window and termination tolerance for the lambda line search
// (golden-section on log10 lambda).
struct LambdaSearch {
  double lo = 1e-2;
  double hi = 1e2;
  double tol = 1e-6;
};

struct SolverConfig {
  Variant variant{};
  double tolerance = 1e-11;            // stop when upper - lower <= tolerance (nats)
  std::size_t max_iterations = 10000;  // outer iterations
  double inner_tolerance = 1e-12;      // L1 change between inner iterates
  std::size_t inner_max_iterations = 100;
  LambdaSearch lambda_search{};
  std::optional<ProbVec> initial_prior;  // default uniform; must be strictly positive
};

// State at the start of one outer iteration plus the step taken from it.
// The final record of a trace is the state the loop stopped at; no step was
// taken from it, so lambda/penalty/inner_iterations are placeholders there.
struct IterationRecord {
  std::size_t index;    // 1-based
  ProbVec prior;        // p^(k)
  ProbVec marginal;     // q^(k) = output_marginal(p^(k), W)
  double mutual_info;   // I(p^(k)) in nats
  double lower;         // = mutual_info
  double upper;         // max_x D_x^k
  double lambda;        // step size used (1 for Classical)
  double penalty;       // D(p^(k+1)||p^(k)) - D(q^(k+1)||q^(k))
  std::size_t inner_iterations;  // 0 for explicit steps
  bool fallback;        // inner divergence forced the explicit step instead
};

enum class Termination { Converged, MaxIterations, NumericalFailure };

struct SolveResult {
  double capacity;       // nats; best lower bound at termination
  ProbVec optimal_prior;
  std::vector<IterationRecord> trace;
  Termination termination;
  std::size_t iterations;  // = trace.size()
};

// One BA update: p'(x) proportional to p(x)*exp(D_x), D_x against the
// marginal of p.
ProbVec classical_step(const ProbVec& p, const TransitionMatrix& W);

// p'(x) proportional to p(x)*exp(D_x/lambda); exponent max-shifted.
ProbVec matz_step(const ProbVec& p, const TransitionMatrix& W, double lambda);

struct ProximalStep {
  ProbVec prior;
  std::size_t inner_iterations;
  bool converged;  // inner L1 change fell below inner_tolerance
};

// Resolves the implicit proximal update by fixed-point iteration seeded at
// p: r'(x) proportional to p(x)*exp(D_x + (1/lambda - 1)*D(W_x||s)), where
// s is the marginal of the current inner iterate and D_x is held at p's
// marginal. At lambda = 1 the exponent is constant in the iterate and the
// map lands on the classical step immediately. Throws InnerDivergenceError
// on the 5-consecutive-increase signal; reaching inner_max_iterations
// without it returns the last iterate with converged = false.
ProximalStep proximal_step(const ProbVec& p, const TransitionMatrix& W, double lambda,
                           double inner_tolerance = 1e-12,
                           std::size_t inner_max_iterations = 100);

// Maximizes phi(lambda) = lambda*(D(p_lambda||p) - D(q_lambda||q)) over
// [search.lo, search.hi]: probes a 40-point log-spaced grid plus lambda = 1,
// then golden-section refines around the best grid point. Probes whose inner
// iteration did not converge are excluded. Returns 1 when every valid probe
// has phi <= 0 (already at the optimum).
double select_lambda(const ProbVec& p, const TransitionMatrix& W,
                     const LambdaSearch& search = {},
                     double inner_tolerance = 1e-12,
                     std::size_t inner_max_iterations = 100);

// Runs the configured variant from the initial prior until
// upper - lower <= tolerance (Converged), max_iterations is reached, or the
// iterate degenerates so the marginal no longer dominates every row
// (NumericalFailure; partial trace kept). mutual_info is non-decreasing
// along Classical and Proximal traces.
SolveResult solve(const TransitionMatrix& W, const SolverConfig& config = {});

}  // namespace dmcap
