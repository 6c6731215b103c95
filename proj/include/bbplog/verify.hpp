#pragma once

#include <chrono>
#include <string>

#include "bbplog/numerics.hpp"

namespace bbplog {

/// Guard bits added to every target precision before comparing two sides.
inline constexpr int kVerifyGuardBits = 88;

struct VerificationReport {
  std::string subject;
  FixedReal lhs;
  FixedReal rhs;
  int agreement_bits = 0;
  int target_bits = 0;
  bool passed = false;
  std::chrono::milliseconds elapsed{0};
  std::string detail;  // human-readable notes (stderr material)
};

/// sqrt5 atanh(...) against eval_P of the family member for t.
VerificationReport verify_theorem(const BigInt& t, int target_bits);

/// golden_constant against eval_P of the golden preset, plus a 64-bit spigot
/// window at position 0 checked against both.
VerificationReport verify_corollary(int target_bits);

/// Li1 decomposition of the family's atanh side.
VerificationReport verify_decomposition(const BigInt& t, int target_bits);

/// `REPORT <subject> passed=<true|false> bits=<int> ms=<int>`
std::string format_report(const VerificationReport& r);

}  // namespace bbplog
