#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace robustpath {

using Rational = mpq_class;

enum class ErrorCode {
  ParseError,
  ValidationError,
  InvalidPath,
  NoPath,
  CapExceeded,
  NotSeriesParallel,
  MalformedSubtree,
  PathNotRepresentable,
  NumericalFailure,
  NeverFeasible,
  InconsistentFractional,
  NotALeaf,
  PathNotSimple,
  ParallelEdges,
  WidthCapExceeded,
  EdgeUncovered,
  LabelSpaceCapExceeded,
  Infeasible,
  NoPathInSubgraph,
  SizeCapExceeded,
  NotThreeCNF,
  ValidationFailure,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Accepts "12", "-0.25", "3/8". Throws ParseError.
Rational parse_rational(const std::string& text);
// Exact decimal when the reduced denominator is 2^a 5^b, "p/q" otherwise.
std::string format_rational(const Rational& q);

// SplitMix64. split(i) derives an independent stream for trial i.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}
  uint64_t next();
  double uniform();  // [0, 1)
  uint64_t below(uint64_t bound);
  Rng split(uint64_t index) const;
  uint64_t state() const { return state_; }

 private:
  uint64_t state_;
};

uint64_t mix64(uint64_t z);

}  // namespace robustpath
