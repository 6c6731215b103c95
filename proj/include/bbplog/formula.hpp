#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bbplog/numerics.hpp"

namespace bbplog {

/// prefactor * P(s, b, l, A), where
/// P = sum_{k>=0} b^-k sum_{j=1..l} a_j / (k*l + j)^s.
struct BbpFormula {
  int degree = 1;
  BigInt base;
  int length = 0;
  std::vector<BigInt> coeffs;
  Rational prefactor = 1;
  std::string label;

  /// Throws ValidationError naming the offending field.
  void validate() const;

  friend bool operator==(const BbpFormula& a, const BbpFormula& b) {
    return a.degree == b.degree && a.base == b.base && a.length == b.length &&
           a.coeffs == b.coeffs && a.prefactor == b.prefactor && a.label == b.label;
  }
};

class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct EvalResult {
  FixedReal value;
  long terms_used = 0;      // outer (k) terms summed
  BigInt tail_bound_ulp;    // already folded into value.err_ulp
};

/// Bound on the (prefactor-scaled) remainder after `terms` outer terms, in
/// ulps of 2^-frac_bits, rounded up.
BigInt tail_bound_ulp(const BbpFormula& f, long terms, int frac_bits);

/// Sums exactly `terms` outer terms; the result's error includes the tail
/// bound for the omitted terms.
EvalResult eval_P_terms(const BbpFormula& f, int frac_bits, long terms, unsigned threads = 1);

/// Full evaluation, truncated at the first K whose tail bound drops below
/// 2^-frac_bits. `threads` = 0 picks the hardware concurrency; the result is
/// bit-identical for every thread count.
EvalResult eval_P(const BbpFormula& f, int frac_bits, unsigned threads = 1);

BbpFormula parse_formula(std::string_view text);
std::string emit_formula(const BbpFormula& f);

}  // namespace bbplog
