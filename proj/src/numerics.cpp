#include "bbplog/numerics.hpp"

#include <algorithm>
#include <cstdlib>

namespace bbplog {

namespace {

// Extra bits carried by transcendental routines before the final truncation.
constexpr int kGuardBits = 64;

BigInt pow2(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

BigInt shl(const BigInt& a, unsigned long bits) {
  BigInt r;
  mpz_mul_2exp(r.get_mpz_t(), a.get_mpz_t(), bits);
  return r;
}

// Truncating division toward zero; `inexact` reports a nonzero remainder.
BigInt tdiv(const BigInt& n, const BigInt& d, bool& inexact) {
  BigInt q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  inexact = (r != 0);
  return q;
}

BigInt tdiv_2exp(const BigInt& n, unsigned long bits, bool& inexact) {
  BigInt q;
  mpz_tdiv_q_2exp(q.get_mpz_t(), n.get_mpz_t(), bits);
  inexact = mpz_scan1(n.get_mpz_t(), 0) < bits && n != 0;
  return q;
}

// ceil(a / b) for a >= 0, b > 0.
BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BigInt ceil_div_2exp(const BigInt& a, unsigned long bits) {
  BigInt q;
  mpz_cdiv_q_2exp(q.get_mpz_t(), a.get_mpz_t(), bits);
  return q;
}

BigInt floor_mul_2exp(const BigInt& a, long shift) {
  BigInt r;
  if (shift >= 0) {
    mpz_mul_2exp(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(shift));
  } else {
    mpz_fdiv_q_2exp(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(-shift));
  }
  return r;
}

unsigned long bit_length(const BigInt& a) {
  return a == 0 ? 0 : mpz_sizeinbase(a.get_mpz_t(), 2);
}

void require_same_scale(const FixedReal& a, const FixedReal& b) {
  if (a.frac_bits != b.frac_bits) {
    throw std::invalid_argument("FixedReal operands have different frac_bits");
  }
}

BigInt magnitude_bound(const FixedReal& x) { return abs(x.mantissa) + x.err_ulp; }

// Upper bound for (|x| + err)^2 as a fraction num / 2^32 (dimensionless).
BigInt square_bound_q32(const FixedReal& x) {
  BigInt m = magnitude_bound(x);
  return ceil_div_2exp(shl(m * m, 32), 2UL * static_cast<unsigned long>(x.frac_bits));
}

// atanh(z) = sum_{i>=0} z^(2i+1)/(2i+1) for |z| <= 1/2, with the tail bounded
// by |z|^(2i+1) * z^2 / (1 - z^2) after the last included power.
FixedReal atanh_series(const FixedReal& z) {
  const BigInt zz = square_bound_q32(z);
  const BigInt one_q32 = pow2(32);
  if (zz * 4 > one_q32) {
    throw std::logic_error("atanh_series argument outside |z| <= 1/2");
  }
  // ratio = zz / (1 - zz), rounded up, still in 2^-32 units.
  const BigInt ratio = ceil_div(shl(zz, 32), one_q32 - zz);

  const FixedReal z2 = z * z;
  FixedReal power = z;
  FixedReal sum = z;
  for (unsigned long i = 1;; ++i) {
    BigInt tail = ceil_div_2exp(magnitude_bound(power) * ratio, 32);
    if (tail <= 1) {
      sum.err_ulp += tail;
      return sum;
    }
    power = power * z2;
    sum = sum + power / BigInt(2 * i + 1);
  }
}

// arccot(n) = sum (-1)^i / ((2i+1) n^(2i+1)), alternating; remainder bounded by
// the first omitted term.
FixedReal arccot_series(unsigned long n, int frac_bits) {
  const BigInt n2 = BigInt(n) * n;
  FixedReal power = FixedReal::from_rational(Rational(1, n), frac_bits);
  FixedReal sum = power;
  for (unsigned long i = 1;; ++i) {
    BigInt next = ceil_div(magnitude_bound(power), n2);
    if (next <= 1) {
      sum.err_ulp += next;
      return sum;
    }
    power = power / n2;
    FixedReal term = power / BigInt(2 * i + 1);
    sum = (i % 2 == 1) ? sum - term : sum + term;
  }
}

FixedReal ln2(int frac_bits) {
  return atanh_series(FixedReal::from_rational(Rational(1, 3), frac_bits)) * BigInt(2);
}

}  // namespace

FixedReal FixedReal::from_int(const BigInt& v, int frac_bits) {
  if (frac_bits < 0) throw std::invalid_argument("negative frac_bits");
  return FixedReal{shl(v, static_cast<unsigned long>(frac_bits)), frac_bits, 0};
}

FixedReal FixedReal::from_rational(const Rational& q, int frac_bits) {
  if (frac_bits < 0) throw std::invalid_argument("negative frac_bits");
  bool inexact = false;
  BigInt m = tdiv(shl(q.get_num(), static_cast<unsigned long>(frac_bits)), q.get_den(), inexact);
  return FixedReal{std::move(m), frac_bits, inexact ? 1 : 0};
}

FixedReal FixedReal::rescaled(int target) const {
  if (target < 0) throw std::invalid_argument("negative frac_bits");
  if (target >= frac_bits) {
    const auto d = static_cast<unsigned long>(target - frac_bits);
    return FixedReal{shl(mantissa, d), target, shl(err_ulp, d)};
  }
  const auto d = static_cast<unsigned long>(frac_bits - target);
  bool inexact = false;
  BigInt m = tdiv_2exp(mantissa, d, inexact);
  BigInt e = ceil_div_2exp(err_ulp, d) + (inexact ? 1 : 0);
  return FixedReal{std::move(m), target, std::move(e)};
}

Rational FixedReal::value() const {
  Rational q(mantissa);
  mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(frac_bits));
  return q;
}

double FixedReal::to_double() const { return value().get_d(); }

bool FixedReal::contains(const Rational& q) const {
  Rational diff = value() - q;
  Rational bound(err_ulp);
  mpq_div_2exp(bound.get_mpq_t(), bound.get_mpq_t(), static_cast<unsigned long>(frac_bits));
  return abs(diff) <= bound;
}

FixedReal operator-(const FixedReal& x) { return FixedReal{-x.mantissa, x.frac_bits, x.err_ulp}; }

FixedReal operator+(const FixedReal& a, const FixedReal& b) {
  require_same_scale(a, b);
  return FixedReal{a.mantissa + b.mantissa, a.frac_bits, a.err_ulp + b.err_ulp};
}

FixedReal operator-(const FixedReal& a, const FixedReal& b) {
  require_same_scale(a, b);
  return FixedReal{a.mantissa - b.mantissa, a.frac_bits, a.err_ulp + b.err_ulp};
}

FixedReal operator*(const FixedReal& a, const FixedReal& b) {
  require_same_scale(a, b);
  const auto f = static_cast<unsigned long>(a.frac_bits);
  bool inexact = false;
  BigInt m = tdiv_2exp(a.mantissa * b.mantissa, f, inexact);
  BigInt spread = abs(a.mantissa) * b.err_ulp + abs(b.mantissa) * a.err_ulp + a.err_ulp * b.err_ulp;
  BigInt e = ceil_div_2exp(spread, f) + (inexact ? 1 : 0);
  return FixedReal{std::move(m), a.frac_bits, std::move(e)};
}

FixedReal operator/(const FixedReal& a, const FixedReal& b) {
  require_same_scale(a, b);
  const BigInt bmag = abs(b.mantissa);
  if (bmag <= b.err_ulp) throw DomainError("division by a value not certainly nonzero");
  const auto f = static_cast<unsigned long>(a.frac_bits);
  bool inexact = false;
  BigInt m = tdiv(shl(a.mantissa, f), b.mantissa, inexact);
  // |a/b - ma/mb| <= 2^F (ea*|mb| + |ma|*eb) / (|mb| (|mb| - eb)) in ulps.
  BigInt e = inexact ? 1 : 0;
  if (a.err_ulp != 0 || b.err_ulp != 0) {
    BigInt num = shl(a.err_ulp * bmag + abs(a.mantissa) * b.err_ulp, f);
    e += ceil_div(num, bmag * (bmag - b.err_ulp));
  }
  return FixedReal{std::move(m), a.frac_bits, std::move(e)};
}

FixedReal operator*(const FixedReal& a, const BigInt& n) {
  return FixedReal{a.mantissa * n, a.frac_bits, a.err_ulp * abs(n)};
}

FixedReal operator/(const FixedReal& a, const BigInt& n) {
  if (n == 0) throw DomainError("division by zero");
  bool inexact = false;
  BigInt m = tdiv(a.mantissa, n, inexact);
  BigInt e = ceil_div(a.err_ulp, abs(n)) + (inexact ? 1 : 0);
  return FixedReal{std::move(m), a.frac_bits, std::move(e)};
}

FixedReal mul_rational(const FixedReal& a, const Rational& q) {
  return (a * q.get_num()) / q.get_den();
}

FixedReal shift_left(const FixedReal& a, unsigned bits) {
  return FixedReal{shl(a.mantissa, bits), a.frac_bits, shl(a.err_ulp, bits)};
}

BigInt isqrt(const BigInt& n) {
  if (n < 0) throw DomainError("isqrt of negative integer");
  if (n < 2) return n;
  BigInt x = pow2((bit_length(n) + 1) / 2);
  while (true) {
    BigInt y = (x + n / x) >> 1;
    if (y >= x) return x;
    x = std::move(y);
  }
}

FixedReal fx_sqrt(const FixedReal& x) {
  if (x.mantissa < 0) throw DomainError("sqrt of negative value");
  const auto f = static_cast<unsigned long>(x.frac_bits);
  const BigInt radicand = shl(x.mantissa, f);
  BigInt root = isqrt(radicand);
  BigInt e = (root * root == radicand) ? 0 : 1;
  if (x.err_ulp != 0) {
    // |sqrt(a+h) - sqrt(a)| <= min(h / sqrt(a), sqrt(h)).
    const BigInt h = shl(x.err_ulp, f);
    BigInt spread = isqrt(h) + 1;
    if (root > 0) spread = std::min(spread, ceil_div(h, root));
    e += spread;
  }
  return FixedReal{std::move(root), x.frac_bits, std::move(e)};
}

FixedReal fx_log(const FixedReal& x) {
  if (x.mantissa <= 0) throw DomainError("log of non-positive value");
  if (x.mantissa <= x.err_ulp) throw DomainError("log argument not certainly positive");
  const int work = x.frac_bits + kGuardBits;
  const BigInt& m = x.mantissa;

  // x = 2^k * y with y in [3/4, 3/2); then log y = 2 atanh((y-1)/(y+1)).
  unsigned long top = bit_length(m) - 1;
  long k = static_cast<long>(top) - x.frac_bits;
  if (m * 2 >= BigInt(3) * pow2(top)) {
    ++top;
    ++k;
  }
  const BigInt unit = pow2(top);
  const Rational z = make_rational(m - unit, m + unit);
  FixedReal result = atanh_series(FixedReal::from_rational(z, work)) * BigInt(2);
  if (k != 0) result = result + ln2(work) * BigInt(k);

  if (x.err_ulp != 0) {
    // |log(x + d) - log x| <= |d| / (x - |d|).
    result.err_ulp += ceil_div(shl(x.err_ulp, static_cast<unsigned long>(work)), m - x.err_ulp);
  }
  return result.rescaled(x.frac_bits);
}

FixedReal fx_atanh(const FixedReal& x) {
  const BigInt bound = magnitude_bound(x);
  const BigInt one = pow2(static_cast<unsigned long>(x.frac_bits));
  if (bound >= one) throw DomainError("atanh argument not certainly inside (-1, 1)");
  const int work = x.frac_bits + kGuardBits;
  const FixedReal xw = x.rescaled(work);
  FixedReal result;
  if (bound * 4 <= one) {
    result = atanh_series(xw);
  } else {
    const FixedReal unit = FixedReal::from_int(1, work);
    result = (fx_log(unit + xw) - fx_log(unit - xw)) / BigInt(2);
  }
  return result.rescaled(x.frac_bits);
}

FixedReal fx_pi(int frac_bits) {
  const int work = frac_bits + kGuardBits;
  FixedReal pi = arccot_series(5, work) * BigInt(16) - arccot_series(239, work) * BigInt(4);
  return pi.rescaled(frac_bits);
}

FixedReal fx_cos(const FixedReal& x) {
  const int work = x.frac_bits + kGuardBits;
  const auto w = static_cast<unsigned long>(work);
  const FixedReal xw = x.rescaled(work);
  const FixedReal x2 = xw * xw;
  // x^2 upper bound in ulps at `work`.
  const BigInt xx = ceil_div_2exp(magnitude_bound(xw) * magnitude_bound(xw), w);

  FixedReal term = FixedReal::from_int(1, work);
  FixedReal sum = term;
  for (unsigned long n = 1;; ++n) {
    term = (term * x2) / BigInt((2 * n - 1) * (2 * n));
    sum = (n % 2 == 1) ? sum - term : sum + term;
    const BigInt denom = BigInt((2 * n + 1)) * (2 * n + 2);
    if (xx <= shl(denom, w)) {
      // Terms decrease from here on: remainder <= next term.
      BigInt next = ceil_div(ceil_div_2exp(magnitude_bound(term) * xx, w), denom);
      if (next <= 1) {
        sum.err_ulp += next;
        return sum.rescaled(x.frac_bits);
      }
    }
  }
}

BigInt modpow(const BigInt& base, const BigInt& exp, const BigInt& m) {
  if (m < 1) throw DomainError("modpow modulus must be >= 1");
  if (exp < 0) throw DomainError("modpow exponent must be nonnegative");
  if (m == 1) return 0;

  // Temporaries are sized once for the modulus so the loop does not reallocate.
  const auto limb_bits = 2 * bit_length(m) + GMP_NUMB_BITS;
  mpz_t acc, sq, tmp;
  mpz_init2(acc, limb_bits);
  mpz_init2(sq, limb_bits);
  mpz_init2(tmp, limb_bits);
  mpz_set_ui(acc, 1);
  mpz_mod(sq, base.get_mpz_t(), m.get_mpz_t());

  const unsigned long nbits = bit_length(exp);
  for (unsigned long i = nbits; i-- > 0;) {
    mpz_mul(tmp, acc, acc);
    mpz_mod(acc, tmp, m.get_mpz_t());
    if (mpz_tstbit(exp.get_mpz_t(), i)) {
      mpz_mul(tmp, acc, sq);
      mpz_mod(acc, tmp, m.get_mpz_t());
    }
  }
  BigInt r(acc);
  mpz_clear(acc);
  mpz_clear(sq);
  mpz_clear(tmp);
  return r;
}

std::uint64_t modpow_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 0) throw DomainError("modpow modulus must be >= 1");
  if (m == 1) return 0;
  using u128 = unsigned __int128;
  std::uint64_t result = 1;
  std::uint64_t b = base % m;
  while (exp != 0) {
    if (exp & 1U) result = static_cast<std::uint64_t>(static_cast<u128>(result) * b % m);
    b = static_cast<std::uint64_t>(static_cast<u128>(b) * b % m);
    exp >>= 1U;
  }
  return result;
}

std::uint64_t modpow2_u64(std::uint64_t exp, std::uint64_t m) {
  if (m == 0) throw DomainError("modpow modulus must be >= 1");
  if (m == 1) return 0;
  using u128 = unsigned __int128;
  // Left-to-right; the multiply by 2 is a shift and conditional subtract.
  std::uint64_t result = 1;
  for (int i = 63 - (exp == 0 ? 63 : __builtin_clzll(exp)); i >= 0; --i) {
    result = static_cast<std::uint64_t>(static_cast<u128>(result) * result % m);
    if ((exp >> i) & 1U) {
      result <<= 1;
      if (result >= m) result -= m;
    }
  }
  return exp == 0 ? 1 : result;
}

BigInt separation_ulp(const FixedReal& a, const FixedReal& b) {
  require_same_scale(a, b);
  return abs(a.mantissa - b.mantissa) + a.err_ulp + b.err_ulp;
}

int bits_from_ulp_bound(const BigInt& bound, int frac_bits) {
  if (bound <= 1) return frac_bits;
  // bound * 2^-F <= 2^-(F - ceil(log2 bound)).
  return frac_bits - static_cast<int>(bit_length(bound - 1));
}

std::pair<std::string, int> bit_window(const FixedReal& x, std::uint64_t position, int count) {
  if (count < 1) throw std::invalid_argument("bit_window count must be >= 1");
  auto window_at = [&](const BigInt& mant, int c) {
    return floor_mul_2exp(mant, static_cast<long>(position) + c - x.frac_bits);
  };
  BigInt digits = window_at(x.mantissa, count);
  BigInt low_bits;
  mpz_fdiv_r_2exp(low_bits.get_mpz_t(), digits.get_mpz_t(), static_cast<unsigned long>(count));
  std::string text = low_bits.get_str(2);
  text.insert(0, static_cast<std::size_t>(count) - text.size(), '0');

  const BigInt lo = x.mantissa - x.err_ulp;
  const BigInt hi = x.mantissa + x.err_ulp;
  int certified = count;
  while (certified > 0 && window_at(lo, certified) != window_at(hi, certified)) --certified;
  return {std::move(text), certified};
}

std::string to_decimal(const FixedReal& x, int digits) {
  if (digits < 0) throw std::invalid_argument("negative digit count");
  const auto f = static_cast<unsigned long>(x.frac_bits);
  const BigInt mag = abs(x.mantissa);
  if (mag < x.err_ulp) return "0~";
  const BigInt lo = mag - x.err_ulp;
  const BigInt hi = mag + x.err_ulp;

  auto truncated = [&](const BigInt& v, int d) {
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(d));
    BigInt r;
    mpz_tdiv_q_2exp(r.get_mpz_t(), BigInt(v * scale).get_mpz_t(), f);
    return r;
  };
  auto agrees = [&](int d) { return truncated(lo, d) == truncated(hi, d); };

  int good = -1;
  if (agrees(digits)) {
    good = digits;
  } else {
    int a = 0;
    int b = digits - 1;
    while (a <= b) {
      int mid = a + (b - a) / 2;
      if (agrees(mid)) {
        good = mid;
        a = mid + 1;
      } else {
        b = mid - 1;
      }
    }
  }

  const bool negative = x.mantissa < 0;
  const int shown = std::max(good, 0);
  std::string body = truncated(mag, shown).get_str(10);
  if (shown > 0) {
    if (body.size() <= static_cast<std::size_t>(shown)) {
      body.insert(0, static_cast<std::size_t>(shown) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(shown), ".");
  }
  std::string out = negative ? "-" + body : body;
  if (good < digits) out += "~";
  return out;
}

}  // namespace bbplog
