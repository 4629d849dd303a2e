#include "dmcap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "internal.hpp"

namespace dmcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct InnerResult {
  std::vector<double> prior;
  std::size_t iterations;
  bool converged;
};

// Fixed-point resolution of the implicit update, seeded at p. D is the
// surprisal vector at p's own marginal and stays fixed; only the correction
// term (1/lambda - 1)*D(W_x||s) tracks the inner iterate. At lambda = 1 the
// correction vanishes exactly and the map is constant.
InnerResult proximal_inner(const std::vector<double>& p, const TransitionMatrix& W,
                           double lambda, double inner_tol, std::size_t inner_max,
                           const std::vector<double>& D) {
  const double c = 1.0 / lambda - 1.0;
  std::vector<double> r(p);
  std::vector<double> e(p.size());
  double prev_l1 = kInf;
  int increases = 0;
  for (std::size_t it = 1; it <= inner_max; ++it) {
    const std::vector<double> s = detail::marginal(r, W);
    const std::vector<double> ds = detail::surprisal(W, s);
    for (std::size_t j = 0; j < e.size(); ++j) {
      e[j] = D[j] + c * ds[j];
      if (!std::isfinite(e[j])) {
        throw InnerDivergenceError(
            "inner iterate lost domination at lambda = " + std::to_string(lambda));
      }
    }
    std::vector<double> next = detail::scaled_exp_normalize(p, e);
    double l1 = 0.0;
    for (std::size_t j = 0; j < next.size(); ++j) l1 += std::abs(next[j] - r[j]);
    r = std::move(next);
    if (l1 < inner_tol) return {std::move(r), it, true};
    if (l1 > prev_l1) {
      if (++increases >= 5) {
        throw InnerDivergenceError("inner iteration diverging at lambda = " +
                                   std::to_string(lambda) + " (L1 grew 5 times)");
      }
    } else {
      increases = 0;
    }
    prev_l1 = l1;
  }
  return {std::move(r), inner_max, false};
}

struct Probe {
  double phi = -kInf;  // -inf marks a probe whose inner iteration failed
  InnerResult inner{};
};

struct LambdaChoice {
  double lambda;
  std::optional<InnerResult> step;  // empty when every probed phi <= 0
};

// Grid scan plus golden-section refinement of phi(lambda) =
// lambda*(D(p_lambda||p) - D(q_lambda||q)) on log10 lambda. Only probes
// whose inner iteration converged compete: a truncated iterate carries a
// meaningless penalty that would otherwise win the argmax near convergence.
LambdaChoice choose_lambda(const std::vector<double>& p, const TransitionMatrix& W,
                           const LambdaSearch& search, double inner_tol,
                           std::size_t inner_max, const std::vector<double>& D,
                           const std::vector<double>& q) {
  const double t_lo = std::log10(search.lo);
  const double t_hi = std::log10(search.hi);
  std::map<double, Probe> cache;
  auto probe = [&](double t) -> double {
    auto found = cache.find(t);
    if (found != cache.end()) return found->second.phi;
    const double lam = std::pow(10.0, t);
    Probe pr;
    try {
      InnerResult inner = proximal_inner(p, W, lam, inner_tol, inner_max, D);
      if (inner.converged) {
        const std::vector<double> s = detail::marginal(inner.prior, W);
        pr.phi = lam * detail::penalty_given_marginals(inner.prior, p, s, q);
        pr.inner = std::move(inner);
      }
    } catch (const InnerDivergenceError&) {
    }
    const double phi = pr.phi;
    cache.emplace(t, std::move(pr));
    return phi;
  };

  std::vector<double> ts;
  ts.reserve(41);
  for (int g = 0; g < 40; ++g) {
    ts.push_back(t_lo + (t_hi - t_lo) * static_cast<double>(g) / 39.0);
  }
  if (t_lo <= 0.0 && 0.0 <= t_hi) ts.push_back(0.0);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::size_t best_i = 0;
  double best_grid_phi = -kInf;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double phi = probe(ts[i]);
    if (phi > best_grid_phi) {
      best_grid_phi = phi;
      best_i = i;
    }
  }

  double a = ts[best_i > 0 ? best_i - 1 : 0];
  double b = ts[best_i + 1 < ts.size() ? best_i + 1 : ts.size() - 1];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - (b - a) * invphi;
  double d = a + (b - a) * invphi;
  while (b - a > search.tol) {
    if (probe(c) > probe(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - (b - a) * invphi;
    d = a + (b - a) * invphi;
  }

  double best_t = ts[best_i];
  const Probe* best = nullptr;
  for (const auto& [t, pr] : cache) {
    if (best == nullptr || pr.phi > best->phi) {
      best = &pr;
      best_t = t;
    }
  }
  if (!(best->phi > 0.0)) return {1.0, std::nullopt};
  return {std::pow(10.0, best_t), std::move(cache.at(best_t).inner)};
}

void validate_search(const LambdaSearch& s) {
  if (!(s.lo > 0.0) || !(s.lo < s.hi)) {
    throw ValidationError("lambda search requires 0 < lo < hi");
  }
  if (!(s.tol > 0.0)) {
    throw ValidationError("lambda search tolerance must be > 0");
  }
}

void validate_inner(double inner_tol, std::size_t inner_max) {
  if (!(inner_tol > 0.0)) throw ValidationError("inner tolerance must be > 0");
  if (inner_max < 1) throw ValidationError("inner iteration cap must be >= 1");
}

}  // namespace

ProbVec classical_step(const ProbVec& p, const TransitionMatrix& W) {
  const ProbVec q = output_marginal(p, W);
  const SurprisalVec D = surprisal_vector(W, q);
  return ProbVec(detail::scaled_exp_normalize(p.values(), D.values()));
}

ProbVec matz_step(const ProbVec& p, const TransitionMatrix& W, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("matz_step requires lambda > 0");
  const ProbVec q = output_marginal(p, W);
  const SurprisalVec D = surprisal_vector(W, q);
  std::vector<double> e(D.values());
  for (double& x : e) x /= lambda;
  return ProbVec(detail::scaled_exp_normalize(p.values(), e));
}

ProximalStep proximal_step(const ProbVec& p, const TransitionMatrix& W, double lambda,
                           double inner_tolerance, std::size_t inner_max_iterations) {
  if (!(lambda > 0.0)) throw ValidationError("proximal_step requires lambda > 0");
  validate_inner(inner_tolerance, inner_max_iterations);
  const ProbVec q = output_marginal(p, W);
  const SurprisalVec D = surprisal_vector(W, q);
  InnerResult inner =
      proximal_inner(p.values(), W, lambda, inner_tolerance, inner_max_iterations, D.values());
  return {ProbVec(std::move(inner.prior)), inner.iterations, inner.converged};
}

double select_lambda(const ProbVec& p, const TransitionMatrix& W, const LambdaSearch& search,
                     double inner_tolerance, std::size_t inner_max_iterations) {
  validate_search(search);
  validate_inner(inner_tolerance, inner_max_iterations);
  const ProbVec q = output_marginal(p, W);
  const SurprisalVec D = surprisal_vector(W, q);
  return choose_lambda(p.values(), W, search, inner_tolerance, inner_max_iterations,
                       D.values(), q.values())
      .lambda;
}

SolveResult solve(const TransitionMatrix& W, const SolverConfig& config) {
  if (!(config.tolerance > 0.0)) throw ValidationError("tolerance must be > 0");
  if (config.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
  validate_inner(config.inner_tolerance, config.inner_max_iterations);
  validate_search(config.lambda_search);
  const Matz* matz = std::get_if<Matz>(&config.variant);
  if (matz != nullptr) {
    if (matz->schedule.empty() && !(matz->lambda > 0.0)) {
      throw ValidationError("Matz lambda must be > 0");
    }
    for (double l : matz->schedule) {
      if (!(l > 0.0)) throw ValidationError("Matz schedule entries must be > 0");
    }
  }
  const ProbVec start =
      config.initial_prior ? *config.initial_prior : ProbVec::uniform(W.input_size());
  if (start.size() != W.input_size()) {
    throw DimensionError("initial prior length " + std::to_string(start.size()) +
                         " vs input size " + std::to_string(W.input_size()));
  }
  if (!start.strictly_positive()) {
    throw ValidationError("initial prior must be strictly positive");
  }

  std::vector<double> p = start.values();
  std::vector<IterationRecord> trace;
  Termination termination = Termination::MaxIterations;

  for (std::size_t k = 1; k <= config.max_iterations; ++k) {
    const std::vector<double> q = detail::marginal(p, W);
    const std::vector<double> D = detail::surprisal(W, q);
    bool dominated = true;
    for (double d : D) {
      if (!std::isfinite(d)) dominated = false;
    }
    if (!dominated) {
      // The iterate collapsed far enough that its marginal no longer
      // dominates some row; no further multiplicative step is defined.
      termination = Termination::NumericalFailure;
      break;
    }
    double lower = 0.0;
    double upper = D.front();
    for (std::size_t j = 0; j < D.size(); ++j) {
      if (p[j] > 0.0) lower += p[j] * D[j];
      upper = std::max(upper, D[j]);
    }
    double lambda_k = 1.0;
    if (matz != nullptr) {
      lambda_k = matz->schedule.empty()
                     ? matz->lambda
                     : matz->schedule[std::min(k - 1, matz->schedule.size() - 1)];
    }
    IterationRecord rec{k,     ProbVec(p), ProbVec(q), lower, lower,
                        upper, lambda_k,   0.0,        0,     false};
    if (upper - lower <= config.tolerance) {
      trace.push_back(std::move(rec));
      termination = Termination::Converged;
      break;
    }
    if (k == config.max_iterations) {
      trace.push_back(std::move(rec));
      break;
    }

    std::vector<double> p_next;
    if (std::holds_alternative<Classical>(config.variant)) {
      p_next = detail::scaled_exp_normalize(p, D);
    } else if (matz != nullptr) {
      std::vector<double> e(D);
      for (double& x : e) x /= lambda_k;
      p_next = detail::scaled_exp_normalize(p, e);
    } else {
      LambdaChoice choice = choose_lambda(p, W, config.lambda_search, config.inner_tolerance,
                                          config.inner_max_iterations, D, q);
      if (choice.step) {
        rec.lambda = choice.lambda;
        rec.inner_iterations = choice.step->iterations;
        p_next = std::move(choice.step->prior);
      } else {
        // Every probe had phi <= 0: take the lambda = 1 step, whose inner
        // map is constant and reproduces the classical update.
        rec.lambda = 1.0;
        try {
          InnerResult inner = proximal_inner(p, W, 1.0, config.inner_tolerance,
                                             config.inner_max_iterations, D);
          rec.inner_iterations = inner.iterations;
          p_next = std::move(inner.prior);
        } catch (const InnerDivergenceError&) {
          rec.fallback = true;  // explicit step with the same lambda
          p_next = detail::scaled_exp_normalize(p, D);
        }
      }
    }
    const std::vector<double> q_next = detail::marginal(p_next, W);
    rec.penalty = detail::penalty_given_marginals(p_next, p, q_next, q);
    trace.push_back(std::move(rec));
    p = std::move(p_next);
  }

  if (trace.empty()) {
    // A strictly positive prior's marginal dominates every row, so the first
    // iteration always records; only a degenerate caller state lands here.
    throw DominationError("solver state degenerate before the first iteration");
  }
  SolveResult result{trace.back().lower, trace.back().prior, {}, termination, trace.size()};
  result.trace = std::move(trace);
  return result;
}

}  // namespace dmcap
