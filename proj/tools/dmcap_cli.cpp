// Command-line front end: load a channel description, run or compare the
// solver variants, dump matrices, and drive the identity verification suite.
//
// Exit codes (scripts depend on these):
//   0 converged / all checks passed
//   1 iteration budget exhausted before convergence
//   2 parse or usage error
//   3 numerical failure (partial trace still written)
//   4 variant capacities disagree beyond 1e-9 nats in `compare`
//   5 identity violation in `verify`

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dmcap/channels.hpp"
#include "dmcap/diagnostics.hpp"
#include "dmcap/io.hpp"
#include "dmcap/prob.hpp"
#include "dmcap/solver.hpp"

namespace {

constexpr double kAgreementTol = 1e-9;  // nats, compare's capacity cross-check

const char* termination_name(dmcap::Termination t) {
  switch (t) {
    case dmcap::Termination::Converged:
      return "Converged";
    case dmcap::Termination::MaxIterations:
      return "MaxIterations";
    case dmcap::Termination::NumericalFailure:
      return "NumericalFailure";
  }
  return "?";
}

struct SolveFlags {
  double tolerance = 1e-11;
  std::size_t max_iter = 10000;
  double lambda = 0.5;                            // Matz fixed step
  std::vector<double> lambda_range;               // lo hi tol, proximal search
};

dmcap::SolverConfig make_config(const dmcap::Variant& variant, const SolveFlags& flags) {
  dmcap::SolverConfig cfg;
  cfg.variant = variant;
  cfg.tolerance = flags.tolerance;
  cfg.max_iterations = flags.max_iter;
  if (!flags.lambda_range.empty()) {
    cfg.lambda_search = {flags.lambda_range[0], flags.lambda_range[1], flags.lambda_range[2]};
  }
  return cfg;
}

bool write_trace_file(const std::string& path, const dmcap::SolveResult& result) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  dmcap::write_trace(out, result);
  return bool(out);
}

int run_command(const std::string& channel_file, const std::string& variant_name,
                const SolveFlags& flags, const std::string& output) {
  dmcap::Variant variant;
  if (variant_name == "classical") {
    variant = dmcap::Classical{};
  } else if (variant_name == "matz") {
    variant = dmcap::Matz{flags.lambda, {}};
  } else if (variant_name == "proximal") {
    variant = dmcap::Proximal{};
  } else {
    std::cerr << "error: unknown variant '" << variant_name
              << "' (expected classical, matz or proximal)\n";
    return 2;
  }
  const dmcap::TransitionMatrix W = dmcap::load_channel(channel_file);
  const dmcap::SolveResult result = dmcap::solve(W, make_config(variant, flags));
  if (!write_trace_file(output, result)) return 2;
  std::cout << "capacity: " << dmcap::format_double(result.capacity) << " nats ("
            << dmcap::format_double(result.capacity / std::numbers::ln2) << " bits)\n"
            << "iterations: " << result.iterations << "\n"
            << "termination: " << termination_name(result.termination) << "\n"
            << "trace: " << output << "\n";
  switch (result.termination) {
    case dmcap::Termination::Converged:
      return 0;
    case dmcap::Termination::MaxIterations:
      return 1;
    case dmcap::Termination::NumericalFailure:
      return 3;
  }
  return 2;
}

int compare_command(const std::string& channel_file, const SolveFlags& flags,
                    const std::string& output_dir) {
  const dmcap::TransitionMatrix W = dmcap::load_channel(channel_file);
  struct Entry {
    std::string name;
    dmcap::Variant variant;
    dmcap::SolveResult result{0.0, dmcap::ProbVec::uniform(2), {},
                              dmcap::Termination::MaxIterations, 0};
    double seconds = 0.0;
  };
  std::vector<Entry> entries;
  entries.push_back({"classical", dmcap::Classical{}});
  entries.push_back({"matz", dmcap::Matz{flags.lambda, {}}});
  entries.push_back({"proximal", dmcap::Proximal{}});

  // Independent solves; run them concurrently.
  std::vector<std::future<std::pair<dmcap::SolveResult, double>>> futures;
  futures.reserve(entries.size());
  for (const Entry& e : entries) {
    dmcap::SolverConfig cfg = make_config(e.variant, flags);
    futures.push_back(std::async(std::launch::async, [&W, cfg]() {
      const auto t0 = std::chrono::steady_clock::now();
      dmcap::SolveResult r = dmcap::solve(W, cfg);
      const double dt =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return std::make_pair(std::move(r), dt);
    }));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto [result, seconds] = futures[i].get();
    entries[i].result = std::move(result);
    entries[i].seconds = seconds;
  }

  for (const Entry& e : entries) {
    if (!write_trace_file(output_dir + "/" + e.name + ".csv", e.result)) return 2;
  }
  std::ofstream summary(output_dir + "/summary.txt");
  if (!summary) {
    std::cerr << "error: cannot write " << output_dir << "/summary.txt\n";
    return 2;
  }
  std::string table = "variant capacity_nats iterations wall_clock_seconds\n";
  for (const Entry& e : entries) {
    table += e.name + " " + dmcap::format_double(e.result.capacity) + " " +
             std::to_string(e.result.iterations) + " " + dmcap::format_double(e.seconds) +
             "\n";
  }
  summary << table;
  std::cout << table;

  double worst = 0.0;
  for (const Entry& a : entries) {
    for (const Entry& b : entries) {
      worst = std::max(worst, std::abs(a.result.capacity - b.result.capacity));
    }
  }
  if (worst > kAgreementTol) {
    std::cerr << "error: variant capacities disagree by " << dmcap::format_double(worst)
              << " nats (tolerance " << dmcap::format_double(kAgreementTol) << ")\n";
    return 4;
  }
  for (const Entry& e : entries) {
    if (e.result.termination == dmcap::Termination::NumericalFailure) return 3;
  }
  for (const Entry& e : entries) {
    if (e.result.termination == dmcap::Termination::MaxIterations) return 1;
  }
  return 0;
}

int verify_command(std::size_t samples, std::uint64_t seed) {
  if (samples == 0) {
    std::cerr << "error: verify needs at least 1 sample\n";
    return 2;
  }
  const std::vector<dmcap::IdentityCheck> checks = dmcap::run_identity_checks(samples, seed);
  std::printf("%-20s %8s %14s %s\n", "identity", "samples", "max_violation", "result");
  bool all_passed = true;
  for (const dmcap::IdentityCheck& c : checks) {
    std::printf("%-20s %8zu %14.3e %s\n", c.report.name.c_str(), c.report.samples,
                c.report.max_violation, c.report.passed ? "pass" : "FAIL");
    all_passed = all_passed && c.report.passed;
  }
  if (!all_passed) {
    for (const dmcap::IdentityCheck& c : checks) {
      if (!c.report.passed) {
        std::cerr << "violation: " << c.report.name << ": " << c.witness << "\n";
      }
    }
    return 5;
  }
  return 0;
}

int spec_dump_command(const std::string& channel_file, const std::string& output) {
  const dmcap::TransitionMatrix W = dmcap::load_channel(channel_file);
  if (output.empty()) {
    dmcap::dump_channel(std::cout, W);
    return 0;
  }
  std::ofstream out(output);
  if (!out) {
    std::cerr << "error: cannot write " << output << "\n";
    return 2;
  }
  dmcap::dump_channel(out, W);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete memoryless channel capacity solver"};
  app.require_subcommand(1);

  SolveFlags flags;
  std::string channel_file;
  std::string variant_name;
  std::string output = "trace.csv";
  std::string output_dir = ".";
  std::string dump_output;
  std::size_t samples = 1000;
  std::uint64_t seed = 42;

  CLI::App* run = app.add_subcommand("run", "Solve one channel with one variant");
  run->add_option("channel-file", channel_file, "channel description file")->required();
  run->add_option("variant", variant_name, "classical, matz or proximal")->required();
  run->add_option("--tolerance", flags.tolerance, "stop when upper-lower <= this (nats)");
  run->add_option("--max-iter", flags.max_iter, "outer iteration budget");
  run->add_option("--lambda", flags.lambda, "fixed step size for matz");
  run->add_option("--lambda-range", flags.lambda_range,
                  "proximal line-search window and tolerance: lo hi tol")
      ->expected(3);
  run->add_option("--output", output, "trace file path (default trace.csv)");

  CLI::App* compare = app.add_subcommand("compare", "Run all three variants and compare");
  compare->add_option("channel-file", channel_file, "channel description file")->required();
  compare->add_option("--tolerance", flags.tolerance, "stop when upper-lower <= this (nats)");
  compare->add_option("--max-iter", flags.max_iter, "outer iteration budget");
  compare->add_option("--lambda", flags.lambda, "fixed step size for matz");
  compare->add_option("--lambda-range", flags.lambda_range,
                      "proximal line-search window and tolerance: lo hi tol")
      ->expected(3);
  compare->add_option("--output", output_dir, "directory for traces and summary");

  CLI::App* verify = app.add_subcommand("verify", "Run the identity verification suite");
  verify->add_option("samples", samples, "random triples per identity (default 1000)");
  verify->add_option("--seed", seed, "RNG seed for the sampled triples");

  CLI::App* dump = app.add_subcommand("spec-dump", "Print a channel in matrix form");
  dump->add_option("channel-file", channel_file, "channel description file")->required();
  dump->add_option("--output", dump_output, "write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return run_command(channel_file, variant_name, flags, output);
    if (compare->parsed()) return compare_command(channel_file, flags, output_dir);
    if (verify->parsed()) return verify_command(samples, seed);
    if (dump->parsed()) return spec_dump_command(channel_file, dump_output);
  } catch (const dmcap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
