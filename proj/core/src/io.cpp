#include "dmcap/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "dmcap/channels.hpp"
#include "internal.hpp"

namespace dmcap {

namespace {

double parse_real(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size()) {
    throw ParseError("not a number: '" + tok + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError("number out of range: '" + tok + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& tok) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("not a count: '" + tok + "'");
  }
  return static_cast<std::size_t>(std::strtoull(tok.c_str(), nullptr, 10));
}

struct Line {
  std::string key;
  std::vector<std::string> args;
};

// Strips comments and blanks; splits the rest on whitespace.
std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream tokens(raw);
    Line line;
    if (!(tokens >> line.key)) continue;
    std::string tok;
    while (tokens >> tok) line.args.push_back(tok);
    lines.push_back(std::move(line));
  }
  return lines;
}

void expect_args(const Line& line, std::size_t n) {
  if (line.args.size() != n) {
    throw ParseError("field '" + line.key + "' takes " + std::to_string(n) +
                     " value(s), got " + std::to_string(line.args.size()));
  }
}

TransitionMatrix parse_matrix(const std::vector<Line>& lines, std::size_t first) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = first; i < lines.size(); ++i) {
    if (lines[i].key != "row") {
      throw ParseError("unexpected field '" + lines[i].key + "' in a matrix channel");
    }
    if (lines[i].args.empty()) throw ParseError("empty matrix row");
    std::vector<double> row;
    row.reserve(lines[i].args.size());
    for (const std::string& tok : lines[i].args) row.push_back(parse_real(tok));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix channel has no rows");
  return from_matrix(rows);
}

TransitionMatrix parse_bsc(const std::vector<Line>& lines, std::size_t first) {
  bool seen = false;
  double epsilon = 0.0;
  for (std::size_t i = first; i < lines.size(); ++i) {
    if (lines[i].key != "epsilon") {
      throw ParseError("unexpected field '" + lines[i].key + "' in a bsc channel");
    }
    if (seen) throw ParseError("duplicate field 'epsilon'");
    expect_args(lines[i], 1);
    epsilon = parse_real(lines[i].args[0]);
    seen = true;
  }
  if (!seen) throw ParseError("bsc channel needs 'epsilon'");
  return bsc(epsilon);
}

TransitionMatrix parse_bernoulli_gaussian(const std::vector<Line>& lines,
                                          std::size_t first) {
  BernoulliGaussianParams params;
  std::map<std::string, bool> seen;
  bool have_p = false;
  bool have_sb = false;
  bool have_sg = false;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (seen[line.key]) throw ParseError("duplicate field '" + line.key + "'");
    seen[line.key] = true;
    if (line.key == "p_impulse") {
      expect_args(line, 1);
      params.p_impulse = parse_real(line.args[0]);
      have_p = true;
    } else if (line.key == "sigma_b") {
      expect_args(line, 1);
      params.sigma_b = parse_real(line.args[0]);
      have_sb = true;
    } else if (line.key == "sigma_g") {
      expect_args(line, 1);
      params.sigma_g = parse_real(line.args[0]);
      have_sg = true;
    } else if (line.key == "input_levels") {
      expect_args(line, 1);
      params.input_levels = parse_count(line.args[0]);
    } else if (line.key == "output_levels") {
      expect_args(line, 1);
      params.output_levels = parse_count(line.args[0]);
    } else if (line.key == "input_range") {
      expect_args(line, 2);
      params.input_range = {parse_real(line.args[0]), parse_real(line.args[1])};
    } else if (line.key == "output_range") {
      expect_args(line, 2);
      params.output_range = {{parse_real(line.args[0]), parse_real(line.args[1])}};
    } else {
      throw ParseError("unknown field '" + line.key + "' in a bernoulli_gaussian channel");
    }
  }
  if (!have_p || !have_sb || !have_sg) {
    throw ParseError("bernoulli_gaussian channel needs p_impulse, sigma_b and sigma_g");
  }
  return bernoulli_gaussian_channel(params);
}

}  // namespace

TransitionMatrix parse_channel(std::istream& in) {
  const std::vector<Line> lines = read_lines(in);
  if (lines.empty()) throw ParseError("empty channel description");
  if (lines[0].key != "type") {
    throw ParseError("channel description must start with 'type'");
  }
  expect_args(lines[0], 1);
  const std::string& type = lines[0].args[0];
  if (type == "matrix") return parse_matrix(lines, 1);
  if (type == "bsc") return parse_bsc(lines, 1);
  if (type == "bernoulli_gaussian") return parse_bernoulli_gaussian(lines, 1);
  throw ParseError("unknown channel type '" + type + "'");
}

TransitionMatrix load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open channel file: " + path);
  return parse_channel(in);
}

void dump_channel(std::ostream& out, const TransitionMatrix& W) {
  out << "type matrix\n";
  for (std::size_t j = 0; j < W.input_size(); ++j) {
    const ProbVec& row = W.row(j);
    out << "row";
    for (std::size_t i = 0; i < row.size(); ++i) out << ' ' << format_double(row[i]);
    out << '\n';
  }
}

void write_trace(std::ostream& out, const SolveResult& result) {
  out << "iteration,mutual_info_nats,mutual_info_bits,lower_nats,upper_nats,gap,"
         "lambda,penalty,inner_iterations\n";
  for (const IterationRecord& rec : result.trace) {
    out << rec.index << ',' << format_double(rec.mutual_info) << ','
        << format_double(rec.mutual_info / std::numbers::ln2) << ','
        << format_double(rec.lower) << ',' << format_double(rec.upper) << ','
        << format_double(rec.upper - rec.lower) << ',' << format_double(rec.lambda) << ','
        << format_double(rec.penalty) << ',' << rec.inner_iterations << '\n';
  }
}

std::string format_double(double x) { return detail::format_double(x); }

}  // namespace dmcap
