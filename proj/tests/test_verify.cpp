#include <gtest/gtest.h>

#include <regex>

#include "bbplog/verify.hpp"

using bbplog::BigInt;

TEST(VerifyTheorem, TOneAtThousandBits) {
  const auto r = bbplog::verify_theorem(1, 1000);
  EXPECT_TRUE(r.passed);
  EXPECT_GE(r.agreement_bits, 1000);
  EXPECT_EQ(r.subject, "theorem[t=1]");
}

TEST(VerifyTheorem, TTwoAtFiveHundredBits) {
  const auto r = bbplog::verify_theorem(2, 500);
  EXPECT_TRUE(r.passed);
  EXPECT_GE(r.agreement_bits, 500);
}

TEST(VerifyTheorem, ZeroIsDomainError) {
  EXPECT_THROW(bbplog::verify_theorem(0, 100), bbplog::DomainError);
}

TEST(VerifyTheorem, MonotoneInPrecision) {
  for (long t : {1L, -2L}) {
    for (int bits : {64, 128, 256, 400}) EXPECT_TRUE(bbplog::verify_theorem(t, bits).passed) << t << " " << bits;
  }
}

TEST(VerifyTheorem, AgreementIsDeterministic) {
  const auto a = bbplog::verify_theorem(3, 300);
  const auto b = bbplog::verify_theorem(3, 300);
  EXPECT_EQ(a.agreement_bits, b.agreement_bits);
  EXPECT_EQ(a.lhs.mantissa, b.lhs.mantissa);
  EXPECT_EQ(a.rhs.mantissa, b.rhs.mantissa);
}

TEST(VerifyCorollary, LowAndHighTargets) {
  const auto low = bbplog::verify_corollary(64);
  EXPECT_TRUE(low.passed);
  const auto high = bbplog::verify_corollary(1000);
  EXPECT_TRUE(high.passed);
  EXPECT_GE(high.agreement_bits, 1000);
  EXPECT_NE(high.detail.find("spigot-agrees"), std::string::npos);
}

TEST(VerifyCorollary, ThreeTimesGoldenIsTheTOneClosedForm) {
  // Both reports compare against the same series family; their LHS sides differ by 3.
  const auto cor = bbplog::verify_corollary(300);
  const auto thm = bbplog::verify_theorem(1, 300);
  const bbplog::FixedReal tripled = cor.lhs * BigInt(3);
  EXPECT_GE(bbplog::bits_from_ulp_bound(bbplog::separation_ulp(tripled, thm.lhs), tripled.frac_bits), 300);
}

TEST(VerifyDecomposition, SeveralT) {
  for (long t : {1L, 2L, 5L, -2L}) {
    const auto r = bbplog::verify_decomposition(t, 200);
    EXPECT_TRUE(r.passed) << t;
    EXPECT_GE(r.agreement_bits, 200) << t;
  }
}

TEST(VerifyReport, LineFormat) {
  const auto r = bbplog::verify_theorem(-1, 128);
  const std::string line = bbplog::format_report(r);
  EXPECT_TRUE(std::regex_match(line, std::regex(R"(REPORT theorem\[t=-1\] passed=true bits=\d+ ms=\d+)"))) << line;

  bbplog::VerificationReport failed;
  failed.subject = "x";
  failed.agreement_bits = 3;
  EXPECT_EQ(bbplog::format_report(failed), "REPORT x passed=false bits=3 ms=0");
}

TEST(VerifyReport, RejectsNonPositiveTarget) {
  EXPECT_THROW(bbplog::verify_corollary(0), std::invalid_argument);
}
