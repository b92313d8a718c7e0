#include "robustpath/common.hpp"

#include <cctype>

namespace robustpath {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NotSeriesParallel: return "NotSeriesParallel";
    case ErrorCode::MalformedSubtree: return "MalformedSubtree";
    case ErrorCode::PathNotRepresentable: return "PathNotRepresentable";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::NeverFeasible: return "NeverFeasible";
    case ErrorCode::InconsistentFractional: return "InconsistentFractional";
    case ErrorCode::NotALeaf: return "NotALeaf";
    case ErrorCode::PathNotSimple: return "PathNotSimple";
    case ErrorCode::ParallelEdges: return "ParallelEdges";
    case ErrorCode::WidthCapExceeded: return "WidthCapExceeded";
    case ErrorCode::EdgeUncovered: return "EdgeUncovered";
    case ErrorCode::LabelSpaceCapExceeded: return "LabelSpaceCapExceeded";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NoPathInSubgraph: return "NoPathInSubgraph";
    case ErrorCode::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorCode::NotThreeCNF: return "NotThreeCNF";
    case ErrorCode::ValidationFailure: return "ValidationFailure";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

Rational parse_rational(const std::string& text) {
  auto fail = [&]() -> Rational { throw Error(ErrorCode::ParseError, "bad number '" + text + "'"); };
  if (text.empty()) return fail();
  size_t slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    auto is_int = [](const std::string& s, bool allow_sign) {
      size_t i = 0;
      if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
      if (i >= s.size()) return false;
      for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
      return true;
    };
    if (!is_int(num, true) || !is_int(den, false)) return fail();
    mpz_class n(num[0] == '+' ? num.substr(1) : num, 10), d(den, 10);
    if (d == 0) return fail();
    Rational q(n, d);
    q.canonicalize();
    return q;
  }
  size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  std::string digits;
  size_t frac_digits = 0;
  bool seen_point = false, seen_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point) return fail();
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++frac_digits;
    } else {
      return fail();
    }
  }
  if (!seen_digit) return fail();
  mpz_class num(digits, 10), den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits);
  Rational q(num, den);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

std::string format_rational(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  mpz_class den = q.get_den();
  unsigned twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return q.get_num().get_str() + "/" + q.get_den().get_str();
  unsigned places = std::max(twos, fives);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  mpz_class scaled = q.get_num() * (scale / q.get_den());
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string s = scaled.get_str();
  if (places > 0) {
    if (s.size() <= places) s = std::string(places - s.size() + 1, '0') + s;
    s.insert(s.size() - places, ".");
  }
  return negative ? "-" + s : s;
}

uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

uint64_t Rng::below(uint64_t bound) {
  if (bound <= 1) return 0;
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return r % bound;
}

Rng Rng::split(uint64_t index) const {
  return Rng(mix64(state_ ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

}  // namespace robustpath
