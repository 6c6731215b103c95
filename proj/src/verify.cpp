#include "bbplog/verify.hpp"

#include <algorithm>

#include "bbplog/family.hpp"
#include "bbplog/formula.hpp"
#include "bbplog/spigot.hpp"

namespace bbplog {

namespace {

using Clock = std::chrono::steady_clock;

void check_target(int target_bits) {
  if (target_bits < 1) throw std::invalid_argument("target bits must be positive");
}

void finish(VerificationReport& r, Clock::time_point start) {
  r.agreement_bits = std::min(r.agreement_bits, r.lhs.frac_bits);
  r.passed = r.passed && r.agreement_bits >= r.target_bits;
  r.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
}

}  // namespace

VerificationReport verify_theorem(const BigInt& t, int target_bits) {
  check_target(target_bits);
  const auto start = Clock::now();
  const int work = target_bits + kVerifyGuardBits;
  const FamilyInstance inst = family_coeffs(t);

  VerificationReport r;
  r.subject = "theorem[t=" + t.get_str() + "]";
  r.target_bits = target_bits;
  r.lhs = lhs_value(inst, work);
  const EvalResult rhs = eval_P(inst.formula, work);
  r.rhs = rhs.value;
  r.agreement_bits = bits_from_ulp_bound(separation_ulp(r.lhs, r.rhs), work);
  r.passed = true;
  r.detail = "terms=" + std::to_string(rhs.terms_used);
  finish(r, start);
  return r;
}

VerificationReport verify_corollary(int target_bits) {
  check_target(target_bits);
  const auto start = Clock::now();
  const int work = target_bits + kVerifyGuardBits;
  const BbpFormula formula = golden_formula();

  VerificationReport r;
  r.subject = "corollary";
  r.target_bits = target_bits;
  r.lhs = golden_constant(work);
  const EvalResult rhs = eval_P(formula, work);
  r.rhs = rhs.value;
  r.agreement_bits = bits_from_ulp_bound(separation_ulp(r.lhs, r.rhs), work);

  // The spigot window must agree with both sides wherever all three certify.
  const DigitWindow window = extract_bits(build_plan(formula), 0, 64);
  const auto [oracle_bits, oracle_cert] = bit_window(r.lhs, 0, 64);
  const auto [series_bits, series_cert] = bit_window(r.rhs, 0, 64);
  const auto common = static_cast<std::size_t>(std::min({window.certified, oracle_cert, series_cert}));
  const bool spigot_ok = common == 64 && window.digits.compare(0, common, oracle_bits, 0, common) == 0 &&
                         window.digits.compare(0, common, series_bits, 0, common) == 0;
  r.passed = spigot_ok;
  r.detail = "terms=" + std::to_string(rhs.terms_used) + " spigot=" + window.digits +
             (spigot_ok ? " spigot-agrees" : " spigot-MISMATCH");
  finish(r, start);
  return r;
}

VerificationReport verify_decomposition(const BigInt& t, int target_bits) {
  check_target(target_bits);
  const auto start = Clock::now();
  const int work = target_bits + kVerifyGuardBits;
  Li1Report li1 = verify_li1_decomposition(t, work);

  VerificationReport r;
  r.subject = "decomposition[t=" + t.get_str() + "]";
  r.target_bits = target_bits;
  r.lhs = std::move(li1.atanh_side);
  r.rhs = std::move(li1.li1_side);
  r.agreement_bits = li1.agreement_bits;
  r.passed = true;
  finish(r, start);
  return r;
}

std::string format_report(const VerificationReport& r) {
  return "REPORT " + r.subject + " passed=" + (r.passed ? "true" : "false") +
         " bits=" + std::to_string(r.agreement_bits) + " ms=" + std::to_string(r.elapsed.count());
}

}  // namespace bbplog
