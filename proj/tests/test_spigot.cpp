#include <gtest/gtest.h>

#include <random>

#include "bbplog/family.hpp"
#include "bbplog/spigot.hpp"
#include "oracle.hpp"

using bbplog::BigInt;
using bbplog::DigitWindow;
using bbplog::FixedReal;
using bbplog::SpigotPlan;

namespace {

BigInt pow2(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

const SpigotPlan& golden_plan() {
  static const SpigotPlan plan = bbplog::build_plan(bbplog::golden_formula());
  return plan;
}

// Certified window digits agree with the oracle's certified digits.
void expect_agrees(const DigitWindow& w, const std::string& oracle_bits, int oracle_certified) {
  const int common = std::min(w.certified, oracle_certified);
  EXPECT_EQ(w.digits.substr(0, static_cast<std::size_t>(common)),
            oracle_bits.substr(0, static_cast<std::size_t>(common)));
}

}  // namespace

TEST(BuildPlan, GoldenFormula) {
  const SpigotPlan& plan = golden_plan();
  EXPECT_EQ(plan.beta, 20U);
  EXPECT_EQ(plan.numerator_scale, 5);
  EXPECT_EQ(plan.denominator_scale, 3 * pow2(20));
  EXPECT_EQ(plan.scaled_coeffs[0], 5 * pow2(19));
}

TEST(BuildPlan, Log2Formula) {
  const SpigotPlan plan = bbplog::build_plan(bbplog::log2_formula());
  EXPECT_EQ(plan.beta, 1U);
  EXPECT_EQ(plan.denominator_scale, 1);
}

TEST(BuildPlan, Gates) {
  bbplog::BbpFormula base5 = bbplog::log2_formula();
  base5.base = 5;
  EXPECT_THROW(bbplog::build_plan(base5), bbplog::UnsupportedFormula);
  bbplog::BbpFormula degree2 = bbplog::log2_formula();
  degree2.degree = 2;
  EXPECT_THROW(bbplog::build_plan(degree2), bbplog::UnsupportedFormula);
  EXPECT_THROW(bbplog::build_plan(bbplog::family_coeffs(3).formula), bbplog::UnsupportedFormula);
}

TEST(ExtractBits, GoldenAtZeroMatchesOracle) {
  const DigitWindow w = bbplog::extract_bits(golden_plan(), 0, 32);
  EXPECT_EQ(w.position, 0U);
  EXPECT_EQ(w.radix, 2);
  EXPECT_EQ(w.certified, 32);
  const auto [bits, cert] = bbplog::bit_window(bbplog::golden_constant(256), 0, 32);
  EXPECT_EQ(cert, 32);
  EXPECT_EQ(w.digits, bits);
  const auto [mp_bits, pinned] = oracle::bits_of(oracle::golden(400), 0, 32);
  EXPECT_TRUE(pinned);
  EXPECT_EQ(w.digits, mp_bits);
}

TEST(ExtractBits, Log2MatchesFxLog) {
  // 2 log 2 = 1.386...; frac drops the integer part.
  const SpigotPlan plan = bbplog::build_plan(bbplog::log2_formula());
  const FixedReal two_log2 = bbplog::fx_log(FixedReal::from_int(2, 256)) * BigInt(2);
  for (std::uint64_t n : {0ULL, 1ULL, 7ULL, 100ULL, 1000ULL}) {
    const DigitWindow w = bbplog::extract_bits(plan, n, 64);
    const auto [bits, cert] = bbplog::bit_window(bbplog::fx_log(FixedReal::from_int(2, 1200)) * BigInt(2), n, 64);
    EXPECT_EQ(w.certified, 64) << n;
    expect_agrees(w, bits, cert);
    if (n == 0) {
      const auto [b0, c0] = bbplog::bit_window(two_log2, 0, 64);
      expect_agrees(w, b0, c0);
    }
  }
}

TEST(ExtractBits, GoldenAgainstOracleUpToTenThousand) {
  for (std::uint64_t n : {1ULL, 19ULL, 20ULL, 21ULL, 100ULL, 1234ULL, 10000ULL}) {
    const DigitWindow w = bbplog::extract_bits(golden_plan(), n, 64);
    EXPECT_EQ(w.certified, 64) << n;
    const auto [bits, cert] = bbplog::bit_window(bbplog::golden_constant(static_cast<int>(n) + 512), n, 64);
    EXPECT_EQ(cert, 64) << n;
    EXPECT_EQ(w.digits, bits) << n;
  }
}

TEST(ExtractBits, ShiftCoherence) {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t n = rng() % 20000;
    const DigitWindow a = bbplog::extract_bits(golden_plan(), n, 48);
    const DigitWindow b = bbplog::extract_bits(golden_plan(), n + 20, 48);
    ASSERT_TRUE(a.fully_certified() && b.fully_certified()) << n;
    EXPECT_EQ(a.digits.substr(20, 28), b.digits.substr(0, 28)) << n;
  }
}

TEST(ExtractBits, ThreadCountDoesNotChangeOutput) {
  const DigitWindow one = bbplog::extract_bits(golden_plan(), 54321, 64, 1);
  for (unsigned t : {2U, 3U, 7U, 16U}) {
    const DigitWindow many = bbplog::extract_bits(golden_plan(), 54321, 64, t);
    EXPECT_EQ(one.digits, many.digits) << t;
    EXPECT_EQ(one.certified, many.certified) << t;
  }
}

TEST(ExtractBits, NegativeConstantUsesFloorFraction) {
  // t = -1 keeps the base at 2^20; the constant sqrt5 atanh(-4 sqrt5/11) is negative.
  const auto inst = bbplog::family_coeffs(-1);
  const SpigotPlan plan = bbplog::build_plan(inst.formula);
  for (std::uint64_t n : {0ULL, 37ULL, 4000ULL}) {
    const DigitWindow w = bbplog::extract_bits(plan, n, 64);
    const auto [bits, cert] = bbplog::bit_window(bbplog::lhs_value(inst, static_cast<int>(n) + 256), n, 64);
    EXPECT_EQ(w.certified, 64);
    expect_agrees(w, bits, cert);
  }
}

TEST(ExtractBits, WideModuliTakeTheBigIntegerPath) {
  // t = 2: base 2^60, prefactor 5/2^59, so q (40k + j) exceeds 2^63 quickly.
  const auto inst = bbplog::family_coeffs(2);
  const SpigotPlan plan = bbplog::build_plan(inst.formula);
  EXPECT_EQ(plan.beta, 60U);
  for (std::uint64_t n : {0ULL, 300ULL, 3000ULL}) {
    const DigitWindow w = bbplog::extract_bits(plan, n, 64);
    const auto [bits, cert] = bbplog::bit_window(bbplog::lhs_value(inst, static_cast<int>(n) + 256), n, 64);
    EXPECT_EQ(w.certified, 64);
    expect_agrees(w, bits, cert);
  }
}

TEST(ExtractBits, CountValidation) {
  EXPECT_THROW(bbplog::extract_bits(golden_plan(), 0, 0), std::invalid_argument);
  EXPECT_THROW(bbplog::extract_bits(golden_plan(), 0, 65), std::invalid_argument);
}

TEST(ExtractHex, RegroupsBits) {
  const DigitWindow bits = bbplog::extract_bits(golden_plan(), 0, 32);
  const DigitWindow hex = bbplog::extract_hex(golden_plan(), 0, 8);
  ASSERT_EQ(hex.digits.size(), 8U);
  EXPECT_EQ(hex.radix, 16);
  EXPECT_EQ(hex.certified, 8);
  for (std::size_t i = 0; i < 8; ++i) {
    const int nibble = std::stoi(bits.digits.substr(4 * i, 4), nullptr, 2);
    EXPECT_EQ(hex.digits[i], "0123456789abcdef"[nibble]);
  }
}

TEST(ExtractHex, AtTenThousandMatchesOracle) {
  const DigitWindow hex = bbplog::extract_hex(golden_plan(), 10000, 16);
  const auto [bits, cert] = bbplog::bit_window(bbplog::golden_constant(4 * 10000 + 256), 4 * 10000, 64);
  ASSERT_EQ(cert, 64);
  std::string expected;
  for (std::size_t i = 0; i < 64; i += 4) expected += "0123456789abcdef"[std::stoi(bits.substr(i, 4), nullptr, 2)];
  EXPECT_EQ(hex.digits, expected);
  EXPECT_EQ(hex.position, 10000U);
}

TEST(ExtractHex, CountValidation) {
  EXPECT_THROW(bbplog::extract_hex(golden_plan(), 0, 0), std::invalid_argument);
  EXPECT_THROW(bbplog::extract_hex(golden_plan(), 0, 17), std::invalid_argument);
}
