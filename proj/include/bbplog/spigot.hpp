#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bbplog/formula.hpp"

namespace bbplog {

class UnsupportedFormula : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A degree-1, base 2^beta formula prepared for digit extraction.
///
/// With prefactor p/q the constant is C = sum_k sum_j p a_j / (q (kl+j) 2^(beta k)),
/// so every term of frac(2^n C) is an exact fraction modulo q (kl+j).
struct SpigotPlan {
  BbpFormula formula;
  unsigned beta = 0;
  BigInt numerator_scale;    // p
  BigInt denominator_scale;  // q > 0
  std::vector<BigInt> scaled_coeffs;  // p * a_j
};

struct DigitWindow {
  std::uint64_t position = 0;  // bit (or hex digit) index after the point where the window starts
  std::string digits;
  int radix = 2;
  int certified = 0;  // leading digits guaranteed correct, in units of the radix

  bool fully_certified() const { return certified == static_cast<int>(digits.size()); }
};

SpigotPlan build_plan(const BbpFormula& f);

/// Bits n+1 .. n+count of C, i.e. the leading bits of frac(2^n C), where
/// frac(y) = y - floor(y) (so a negative C yields its two's-complement tail).
/// count is 1..64. `threads` = 0 means hardware concurrency; the output is
/// identical for every thread count.
DigitWindow extract_bits(const SpigotPlan& plan, std::uint64_t n, int count, unsigned threads = 1);

/// Hex digits hex_position+1 .. hex_position+count (count 1..16).
DigitWindow extract_hex(const SpigotPlan& plan, std::uint64_t hex_position, int count, unsigned threads = 1);

}  // namespace bbplog
