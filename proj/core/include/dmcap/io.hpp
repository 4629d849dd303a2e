#pragma once

#include <iosfwd>
#include <string>

#include "dmcap/prob.hpp"
#include "dmcap/solver.hpp"

namespace dmcap {

class ParseError : public Error {
 public:
  using Error::Error;
};

// Channel description files are line-oriented: blank lines and text after
// '#' are ignored; the first meaningful line is `type matrix`, `type bsc`,
// or `type bernoulli_gaussian`, followed by type-specific fields:
//   matrix              row <p> <p> ...      (one line per input symbol)
//   bsc                 epsilon <e>
//   bernoulli_gaussian  p_impulse/sigma_b/sigma_g <v>   (required)
//                       input_levels/output_levels <n>  (optional)
//                       input_range/output_range <lo> <hi>  (optional)
// Unknown, duplicate, or missing fields are ParseErrors.
TransitionMatrix parse_channel(std::istream& in);

TransitionMatrix load_channel(const std::string& path);

// Matrix form, one `row` line per input symbol, 17 significant digits;
// re-parsing reproduces the matrix bit for bit.
void dump_channel(std::ostream& out, const TransitionMatrix& W);

// CSV, one data row per outer iteration. Columns: iteration,
// mutual_info_nats, mutual_info_bits, lower_nats, upper_nats, gap, lambda,
// penalty, inner_iterations.
void write_trace(std::ostream& out, const SolveResult& result);

// 17 significant digits; round-trips any finite double.
std::string format_double(double x);

}  // namespace dmcap
