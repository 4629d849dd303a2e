#include "dmcap/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "dmcap/channels.hpp"
#include "dmcap/solver.hpp"
#include "internal.hpp"

namespace dmcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pass thresholds of the identity suite.
constexpr double kJensenTol = 1e-12;
constexpr double kDecompositionTol = 1e-11;
constexpr double kProjectionTol = 1e-10;
constexpr double kImprovementTol = 1e-10;
constexpr double kOracleTol = 1e-5;

// (0,1) strictly, from the top 53 bits; identical on every platform.
double u01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

std::string describe(const ProbVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ", ";
    s += detail::format_double(v[i]);
  }
  s += ")";
  return s;
}

TransitionMatrix symmetric_2x3() {
  return from_matrix({{0.7, 0.2, 0.1}, {0.1, 0.2, 0.7}});
}

}  // namespace

double penalty(const ProbVec& p, const ProbVec& p_ref, const TransitionMatrix& W) {
  if (p.size() != p_ref.size() || p.size() != W.input_size()) {
    throw DimensionError("penalty: prior lengths must match the channel input size");
  }
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0 && p_ref[j] <= 0.0) {
      throw DominationError("penalty: reference prior vanishes where p has mass");
    }
  }
  const std::vector<double> q = detail::marginal(p.values(), W);
  const std::vector<double> q_ref = detail::marginal(p_ref.values(), W);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0 && q_ref[i] <= 0.0) {
      throw DominationError("penalty: reference marginal fails to dominate");
    }
  }
  return detail::penalty_given_marginals(p.values(), p_ref.values(), q, q_ref);
}

double decomposition_residual(const ProbVec& p, const ProbVec& p_ref,
                              const TransitionMatrix& W) {
  if (p.size() != p_ref.size() || p.size() != W.input_size()) {
    throw DimensionError(
        "decomposition_residual: prior lengths must match the channel input size");
  }
  const std::vector<double> q = detail::marginal(p.values(), W);
  const std::vector<double> q_ref = detail::marginal(p_ref.values(), W);
  double cross = 0.0;  // sum_x p(x) D(W_x || q_ref)
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] <= 0.0) continue;
    const double d = detail::kl_sum(W.row(j).values(), q_ref);
    if (!std::isfinite(d)) {
      throw DominationError("decomposition_residual: reference marginal fails to dominate");
    }
    cross += p[j] * d;
  }
  const double dq = detail::kl_sum(q, q_ref);
  if (!std::isfinite(dq)) {
    throw DominationError("decomposition_residual: reference marginal fails to dominate");
  }
  return std::abs(mutual_information(p, W) - (cross - dq));
}

double projection_residual(const ProbVec& p_next, const ProbVec& p_k,
                           const TransitionMatrix& W) {
  if (p_next.size() != p_k.size() || p_next.size() != W.input_size()) {
    throw DimensionError(
        "projection_residual: prior lengths must match the channel input size");
  }
  const std::vector<double> q = detail::marginal(p_k.values(), W);
  const std::vector<double> D = detail::surprisal(W, q);
  for (double d : D) {
    if (!std::isfinite(d)) {
      throw DominationError("projection_residual: marginal of p_k fails to dominate");
    }
  }
  const double lhs = detail::dot(p_next.values(), D);
  const double shift = *std::max_element(D.begin(), D.end());
  double z = 0.0;
  for (std::size_t j = 0; j < p_k.size(); ++j) z += p_k[j] * std::exp(D[j] - shift);
  const double kl = detail::kl_sum(p_next.values(), p_k.values());
  if (!std::isfinite(kl)) {
    throw DominationError("projection_residual: p_k vanishes where p_next has mass");
  }
  return std::abs(lhs - (shift + std::log(z) + kl));
}

double capacity_oracle(const TransitionMatrix& W, std::size_t grid_points) {
  if (W.input_size() > 3) {
    throw ValidationError("capacity_oracle handles at most 3 inputs");
  }
  if (grid_points < 100) {
    throw ValidationError("capacity_oracle needs grid_points >= 100");
  }
  const double G = static_cast<double>(grid_points);
  if (W.input_size() == 2) {
    auto mi = [&](double t) {
      return mutual_information(ProbVec(std::vector<double>{t, 1.0 - t}), W);
    };
    double best = -kInf;
    double best_t = 0.5;
    for (std::size_t i = 0; i <= grid_points; ++i) {
      const double t = static_cast<double>(i) / G;
      const double v = mi(t);
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
    const double lo = std::max(0.0, best_t - 1.0 / G);
    const double hi = std::min(1.0, best_t + 1.0 / G);
    for (int i = 0; i <= 20; ++i) {
      best = std::max(best, mi(lo + (hi - lo) * i / 20.0));
    }
    return best;
  }
  auto mi3 = [&](double u, double v, double w) {
    return mutual_information(ProbVec(std::vector<double>{u, v, w}), W);
  };
  double best = -kInf;
  double bu = 1.0 / 3.0;
  double bv = 1.0 / 3.0;
  for (std::size_t i = 0; i <= grid_points; ++i) {
    for (std::size_t j = 0; i + j <= grid_points; ++j) {
      const double u = static_cast<double>(i) / G;
      const double v = static_cast<double>(j) / G;
      const double w = static_cast<double>(grid_points - i - j) / G;
      const double val = mi3(u, v, w);
      if (val > best) {
        best = val;
        bu = u;
        bv = v;
      }
    }
  }
  for (int a = 0; a <= 20; ++a) {
    for (int b = 0; b <= 20; ++b) {
      const double u = bu + (a - 10) / (10.0 * G);
      const double v = bv + (b - 10) / (10.0 * G);
      if (u < 0.0 || v < 0.0 || u > 1.0 || v > 1.0) continue;
      double w = 1.0 - u - v;
      if (w < 0.0) {
        if (w < -1e-12) continue;
        w = 0.0;
      }
      best = std::max(best, mi3(u, v, w));
    }
  }
  return best;
}

ProbVec sample_simplex(std::mt19937_64& rng, std::size_t n) {
  if (n < 1) throw ValidationError("sample_simplex needs n >= 1");
  std::vector<double> e(n);
  double s = 0.0;
  for (double& x : e) {
    x = -std::log(u01(rng));
    s += x;
  }
  for (double& x : e) x /= s;
  return ProbVec(std::move(e));
}

TransitionMatrix sample_channel(std::mt19937_64& rng, std::size_t input_size,
                                std::size_t output_size) {
  std::vector<ProbVec> rows;
  rows.reserve(input_size);
  for (std::size_t j = 0; j < input_size; ++j) {
    rows.push_back(sample_simplex(rng, output_size));
  }
  return TransitionMatrix(std::move(rows));
}

std::vector<IdentityCheck> run_identity_checks(std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw ValidationError("identity checks need samples >= 1");
  std::mt19937_64 rng(seed);

  IdentityCheck jensen{{"jensen-penalty", 0.0, samples, true}, ""};
  IdentityCheck decomposition{{"decomposition", 0.0, samples, true}, ""};
  IdentityCheck projection{{"projection", 0.0, samples, true}, ""};

  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t m = 2 + static_cast<std::size_t>(u01(rng) * 9.0);
    const std::size_t n = 2 + static_cast<std::size_t>(u01(rng) * 39.0);
    const TransitionMatrix W = sample_channel(rng, m, n);
    const ProbVec p = sample_simplex(rng, m);
    const ProbVec p_ref = sample_simplex(rng, m);
    const std::string where = "sample " + std::to_string(s) + " (" + std::to_string(m) +
                              "x" + std::to_string(n) + ", seed " + std::to_string(seed) +
                              ") p=" + describe(p) + " p_ref=" + describe(p_ref);

    const double pen = penalty(p, p_ref, W);
    if (-pen > jensen.report.max_violation) {
      jensen.report.max_violation = -pen;
      jensen.witness = where + " penalty=" + detail::format_double(pen);
    }
    const double res = decomposition_residual(p, p_ref, W);
    if (res > decomposition.report.max_violation) {
      decomposition.report.max_violation = res;
      decomposition.witness = where + " residual=" + detail::format_double(res);
    }
    const double proj = projection_residual(classical_step(p, W), p, W);
    if (proj > projection.report.max_violation) {
      projection.report.max_violation = proj;
      projection.witness = where + " residual=" + detail::format_double(proj);
    }
  }
  jensen.report.passed = jensen.report.max_violation <= kJensenTol;
  decomposition.report.passed = decomposition.report.max_violation <= kDecompositionTol;
  projection.report.passed = projection.report.max_violation <= kProjectionTol;

  IdentityCheck improvement{{"improvement-bound", 0.0, 0, true}, ""};
  {
    struct Case {
      std::string name;
      TransitionMatrix W;
      ProbVec p0;
    };
    const std::vector<Case> cases = {
        {"symmetric_2x3", symmetric_2x3(), ProbVec(std::vector<double>{0.3, 0.7})},
        {"bsc(0.1)", bsc(0.1), ProbVec(std::vector<double>{0.9, 0.1})},
        {"bernoulli_gaussian", bernoulli_gaussian_channel({}),
         ProbVec::uniform(10)},
    };
    for (const Case& c : cases) {
      SolverConfig cfg;
      cfg.variant = Proximal{};
      cfg.initial_prior = c.p0;
      const SolveResult r = solve(c.W, cfg);
      for (std::size_t k = 0; k + 1 < r.trace.size(); ++k) {
        const IterationRecord& cur = r.trace[k];
        const IterationRecord& next = r.trace[k + 1];
        const double margin = next.mutual_info - cur.mutual_info -
                              cur.lambda * penalty(next.prior, cur.prior, c.W);
        ++improvement.report.samples;
        if (-margin > improvement.report.max_violation) {
          improvement.report.max_violation = -margin;
          improvement.witness = c.name + " iteration " + std::to_string(cur.index) +
                                " margin=" + detail::format_double(margin);
        }
      }
    }
    improvement.report.passed = improvement.report.max_violation <= kImprovementTol;
  }

  IdentityCheck oracle{{"oracle-agreement", 0.0, 0, true}, ""};
  {
    struct Case {
      std::string name;
      TransitionMatrix W;
    };
    const std::vector<Case> cases = {
        {"bsc(0)", bsc(0.0)},       {"bsc(0.05)", bsc(0.05)}, {"bsc(0.1)", bsc(0.1)},
        {"bsc(0.25)", bsc(0.25)},   {"bsc(0.5)", bsc(0.5)},   {"symmetric_2x3", symmetric_2x3()},
    };
    const std::vector<std::pair<std::string, Variant>> variants = {
        {"classical", Classical{}}, {"matz", Matz{}}, {"proximal", Proximal{}}};
    for (const Case& c : cases) {
      const double truth = capacity_oracle(c.W, 10000);
      for (const auto& [vname, variant] : variants) {
        SolverConfig cfg;
        cfg.variant = variant;
        const SolveResult r = solve(c.W, cfg);
        const double diff = std::abs(r.capacity - truth);
        ++oracle.report.samples;
        if (diff > oracle.report.max_violation) {
          oracle.report.max_violation = diff;
          oracle.witness = c.name + " " + vname + " capacity=" +
                           detail::format_double(r.capacity) +
                           " oracle=" + detail::format_double(truth);
        }
      }
    }
    oracle.report.passed = oracle.report.max_violation <= kOracleTol;
  }

  std::vector<IdentityCheck> checks;
  checks.push_back(std::move(jensen));
  checks.push_back(std::move(decomposition));
  checks.push_back(std::move(projection));
  checks.push_back(std::move(improvement));
  checks.push_back(std::move(oracle));
  for (IdentityCheck& c : checks) {
    if (c.report.passed) c.witness.clear();
  }
  return checks;
}

}  // namespace dmcap
