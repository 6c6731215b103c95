#pragma once

// Exact integers/rationals and error-tracked fixed-point reals.
//
// A FixedReal stores mantissa * 2^-F together with err_ulp, an upper bound on
// |value - true value| in units of 2^-F. All rounding truncates toward zero
// and every operation bumps err_ulp by whatever it may have lost.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace bbplog {

using BigInt = mpz_class;
using Rational = mpq_class;

/// num/den in lowest terms (gmpxx leaves two-argument construction
/// uncanonicalized).
inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct FixedReal {
  BigInt mantissa;
  int frac_bits = 0;
  BigInt err_ulp;

  static FixedReal from_int(const BigInt& v, int frac_bits);
  static FixedReal from_rational(const Rational& q, int frac_bits);

  /// Re-expresses the value with `frac_bits` fractional bits (truncating).
  FixedReal rescaled(int frac_bits) const;

  /// True iff |mantissa*2^-F - q| <= err_ulp*2^-F.
  bool contains(const Rational& q) const;

  Rational value() const;
  double to_double() const;
  int sign() const { return sgn(mantissa); }
};

FixedReal operator-(const FixedReal& x);
FixedReal operator+(const FixedReal& a, const FixedReal& b);
FixedReal operator-(const FixedReal& a, const FixedReal& b);
FixedReal operator*(const FixedReal& a, const FixedReal& b);
FixedReal operator/(const FixedReal& a, const FixedReal& b);
FixedReal operator*(const FixedReal& a, const BigInt& n);
FixedReal operator/(const FixedReal& a, const BigInt& n);
FixedReal mul_rational(const FixedReal& a, const Rational& q);
FixedReal shift_left(const FixedReal& a, unsigned bits);

/// floor(sqrt(n)) by Newton iteration; n >= 0.
BigInt isqrt(const BigInt& n);

FixedReal fx_sqrt(const FixedReal& x);
FixedReal fx_log(const FixedReal& x);
FixedReal fx_atanh(const FixedReal& x);

// Trigonometry exists only for the Li1 decomposition check.
FixedReal fx_pi(int frac_bits);
FixedReal fx_cos(const FixedReal& x);

/// base^exp mod m by left-to-right square-and-multiply. Result in [0, m).
BigInt modpow(const BigInt& base, const BigInt& exp, const BigInt& m);

/// 2^exp mod m for word-sized moduli, m < 2^63.
std::uint64_t modpow2_u64(std::uint64_t exp, std::uint64_t m);
std::uint64_t modpow_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Upper bound on |true - approx| in units of 2^-frac_bits that the two
/// values jointly guarantee: |a - b| + err(a) + err(b).
BigInt separation_ulp(const FixedReal& a, const FixedReal& b);

/// Number of leading fractional bits of the true value guaranteed by x,
/// i.e. floor(-log2(bound * 2^-F)) for a mantissa-unit bound; capped at F.
int bits_from_ulp_bound(const BigInt& bound, int frac_bits);

/// Binary digits n+1 .. n+count of the value (digits of frac(2^n * x), with
/// frac(y) = y - floor(y)). Returns the digit string and how many leading
/// digits the error bound certifies.
std::pair<std::string, int> bit_window(const FixedReal& x, std::uint64_t position, int count);

/// Decimal rendering truncated toward zero. At most `digits` fractional
/// digits are printed and never more than the error bound defends; a
/// trailing '~' marks a request that could not be fully certified.
std::string to_decimal(const FixedReal& x, int digits);

}  // namespace bbplog
