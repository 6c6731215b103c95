#pragma once

// Randomised interval-soundness and modpow suites, shared by the unit tests and
// the acceptance runner. Each returns the number of violations found.

#include <random>

#include "bbplog/numerics.hpp"
#include "oracle.hpp"

namespace soundness {

using bbplog::BigInt;
using bbplog::FixedReal;
using bbplog::Rational;

// Independent modpow: e successive multiplications.
inline BigInt brute_modpow(const BigInt& base, unsigned long e, const BigInt& m) {
  BigInt r = 1 % m;
  BigInt b = base % m;
  if (b < 0) b += m;
  for (unsigned long i = 0; i < e; ++i) r = r * b % m;
  return r;
}

// A rational in [lo, hi] with denominator d * 1000 + 1, d <= max_den.
inline Rational random_rational(std::mt19937_64& rng, long lo, long hi, unsigned long max_den) {
  const long den = static_cast<long>(std::uniform_int_distribution<unsigned long>(1, max_den)(rng)) * 1000 + 1;
  std::uniform_int_distribution<long> num(lo * den, hi * den);
  return bbplog::make_rational(num(rng), den);
}

// A value known to equal q, carrying up to 600 extra ulps of declared error and
// a mantissa nudged anywhere within them.
inline FixedReal noisy(const Rational& q, int bits, std::mt19937_64& rng) {
  FixedReal x = FixedReal::from_rational(q, bits);
  std::uniform_int_distribution<long> slack(0, 600);
  const long s = slack(rng);
  std::uniform_int_distribution<long> nudge(-s, s);
  x.mantissa += nudge(rng);
  x.err_ulp += s;
  return x;
}

inline int random_bits(std::mt19937_64& rng) { return 64 + static_cast<int>(rng() % 256); }

inline int arithmetic(int cases, std::uint64_t seed = 2024) {
  std::mt19937_64 rng(seed);
  int violations = 0;
  for (int i = 0; i < cases; ++i) {
    const int bits = random_bits(rng);
    const mpfr_prec_t prec = bits + 256;
    Rational a = random_rational(rng, -40, 40, 1000);
    Rational b = random_rational(rng, -40, 40, 1000);
    FixedReal x = noisy(a, bits, rng);
    FixedReal y = noisy(b, bits, rng);
    violations += !oracle::covers(FixedReal::from_rational(a, bits), oracle::exact(a, prec));
    violations += !oracle::covers(x + y, oracle::exact(a + b, prec));
    violations += !oracle::covers(x - y, oracle::exact(a - b, prec));
    violations += !oracle::covers(x * y, oracle::exact(a * b, prec));
    violations += !oracle::covers(x / y, oracle::exact(a / b, prec));
    violations += !oracle::covers(x / BigInt(97), oracle::exact(a / 97, prec));
    Rational r = bbplog::make_rational(BigInt(static_cast<long>(rng() % 2001)) - 1000, 37);
    violations += !oracle::covers(bbplog::mul_rational(x, r), oracle::exact(a * r, prec));
    violations += !oracle::covers(x.rescaled(bits / 2), oracle::exact(a, prec));
  }
  return violations;
}

inline int sqrt(int cases, std::uint64_t seed = 99) {
  std::mt19937_64 rng(seed);
  int violations = 0;
  for (int i = 0; i < cases; ++i) {
    const int bits = random_bits(rng);
    Rational q = abs(random_rational(rng, 0, 1000, 1000));
    FixedReal x = noisy(q, bits, rng);
    if (x.mantissa < 0) continue;
    auto b = oracle::increasing(q, bits + 256, [](mpfr_ptr o, mpfr_srcptr v, mpfr_rnd_t r) { mpfr_sqrt(o, v, r); });
    violations += !oracle::covers(bbplog::fx_sqrt(x), b);
  }
  return violations;
}

inline int log(int cases, std::uint64_t seed = 5) {
  std::mt19937_64 rng(seed);
  int violations = 0;
  for (int i = 0; i < cases; ++i) {
    const int bits = random_bits(rng);
    Rational q = abs(random_rational(rng, 0, 1000, 1000)) + Rational(1, 1000);
    FixedReal x = noisy(q, bits, rng);
    if (x.mantissa <= x.err_ulp) continue;
    auto b = oracle::increasing(q, bits + 256, [](mpfr_ptr o, mpfr_srcptr v, mpfr_rnd_t r) { mpfr_log(o, v, r); });
    violations += !oracle::covers(bbplog::fx_log(x), b);
  }
  return violations;
}

inline int atanh(int cases, std::uint64_t seed = 17) {
  std::mt19937_64 rng(seed);
  int violations = 0;
  std::uniform_int_distribution<long> num(-9999, 9999);
  for (int i = 0; i < cases; ++i) {
    const int bits = random_bits(rng);
    Rational q = bbplog::make_rational(num(rng), 10000);
    FixedReal x = noisy(q, bits, rng);
    auto b = oracle::increasing(q, bits + 256, [](mpfr_ptr o, mpfr_srcptr v, mpfr_rnd_t r) { mpfr_atanh(o, v, r); });
    violations += !oracle::covers(bbplog::fx_atanh(x), b);
  }
  return violations;
}

// cos is decreasing on [0, pi], so the bracket swaps endpoints.
inline int cosine(int cases, std::uint64_t seed = 23) {
  std::mt19937_64 rng(seed);
  int violations = 0;
  std::uniform_int_distribution<long> num(0, 31415);
  for (int i = 0; i < cases; ++i) {
    const int bits = random_bits(rng);
    Rational q = bbplog::make_rational(num(rng), 10000);
    FixedReal x = noisy(q, bits, rng);
    oracle::Bracket b(bits + 256);
    oracle::Mpfr lo(bits + 256), hi(bits + 256);
    oracle::set_rational(lo.get(), q, MPFR_RNDD);
    oracle::set_rational(hi.get(), q, MPFR_RNDU);
    mpfr_cos(b.lo.get(), hi.get(), MPFR_RNDD);
    mpfr_cos(b.hi.get(), lo.get(), MPFR_RNDU);
    violations += !oracle::covers(bbplog::fx_cos(x), b);
  }
  return violations;
}

inline int modpow(int cases, std::uint64_t seed = 41) {
  std::mt19937_64 rng(seed);
  int mismatches = 0;
  for (int i = 0; i < cases; ++i) {
    BigInt base = BigInt(static_cast<unsigned long>(rng())) - BigInt(static_cast<unsigned long>(rng()));
    const unsigned long e = rng() % 3000;
    BigInt m = BigInt(static_cast<unsigned long>(rng() % 1000000007ULL)) + 1;
    if (i % 3 == 0) m = m * BigInt(static_cast<unsigned long>(rng())) + 1;  // multi-limb moduli
    mismatches += bbplog::modpow(base, e, m) != brute_modpow(base, e, m);
    if (m < BigInt(1UL << 62)) {
      BigInt b = base % m;
      if (b < 0) b += m;
      mismatches += BigInt(static_cast<unsigned long>(bbplog::modpow_u64(b.get_ui(), e, m.get_ui()))) !=
                    brute_modpow(base, e, m);
      mismatches += BigInt(static_cast<unsigned long>(bbplog::modpow2_u64(e, m.get_ui()))) !=
                    brute_modpow(2, e, m);
    }
  }
  return mismatches;
}

}  // namespace soundness
