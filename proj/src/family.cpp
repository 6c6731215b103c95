#include "bbplog/family.hpp"

#include <array>

namespace bbplog {

namespace {

constexpr int kFamilyLength = 40;
constexpr int kBaseShift = 20;  // b = 2^20 t^40
constexpr int kWorkGuard = 32;

// 4 sin(r pi/5) sin(2r pi/5) is sqrt5 times a sign fixed by r mod 10; r mod 10
// is recovered from (r mod 5, parity of r mod 8).
constexpr std::array<int, 5> kSineSign = {0, +1, +1, -1, -1};

// cos(r pi/4) for r mod 8: value is sign * 1 (even r) or sign / sqrt2 (odd r).
constexpr std::array<int, 8> kCosineSign = {+1, +1, 0, -1, -1, -1, 0, +1};

std::int64_t floor_mod(std::int64_t r, std::int64_t m) {
  std::int64_t v = r % m;
  return v < 0 ? v + m : v;
}

BigInt ipow(const BigInt& b, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

Rational family_lhs_arg(const BigInt& t) {
  BigInt t2 = t * t;
  BigInt t3 = t2 * t;
  BigInt t4 = t3 * t;
  return make_rational(t * (1 - t + 2 * t2), 1 - t + 3 * t2 - 2 * t3 + 4 * t4);
}

FixedReal sqrt_int(unsigned long n, int frac_bits) {
  return fx_sqrt(FixedReal::from_int(n, frac_bits));
}

}  // namespace

Rational WeightValue::squared() const {
  switch (cls) {
    case WeightClass::Zero: return 0;
    case WeightClass::Root5: return 5;
    case WeightClass::Root5OverRoot2: return Rational(5, 2);
  }
  return 0;
}

WeightValue weight(std::int64_t r) {
  const auto r5 = static_cast<std::size_t>(floor_mod(r, 5));
  const auto r8 = static_cast<std::size_t>(floor_mod(r, 8));
  int sine = kSineSign[r5];
  if ((r8 & 1U) != (r5 & 1U)) sine = -sine;  // r mod 10 >= 5
  const int sign = sine * kCosineSign[r8];
  if (sign == 0) return {WeightClass::Zero, 0};
  return {(r8 & 1U) ? WeightClass::Root5OverRoot2 : WeightClass::Root5, sign};
}

std::string to_string(const WeightValue& w) {
  const char* mag = "0";
  if (w.cls == WeightClass::Root5) mag = "sqrt5";
  if (w.cls == WeightClass::Root5OverRoot2) mag = "sqrt5/sqrt2";
  if (w.sign == 0) return mag;
  return std::string(w.sign > 0 ? "+" : "-") + mag;
}

FamilyInstance family_coeffs(const BigInt& t) {
  if (t == 0) throw DomainError("family parameter t must be nonzero");

  FamilyInstance inst;
  inst.t = t;
  inst.lhs_arg = family_lhs_arg(t);
  // atanh needs |lhs_arg * sqrt5| < 1.
  if (inst.lhs_arg * inst.lhs_arg * 5 >= 1) {
    throw DomainError("atanh argument outside (-1, 1) for t = " + t.get_str());
  }

  BbpFormula& f = inst.formula;
  f.degree = 1;
  f.length = kFamilyLength;
  f.base = ipow(2, kBaseShift) * ipow(t, kFamilyLength);
  // 5 / (2^20 t^39); the sign of t^39 moves to the numerator.
  f.prefactor = make_rational(5, ipow(2, kBaseShift) * ipow(t, 39));
  f.label = "family t=" + t.get_str();

  // a_j = f(j)/5 * t^(39-j) * sqrt5 * sqrt(2^(40-j)) = sign * t^(39-j) * 2^e.
  f.coeffs.reserve(kFamilyLength);
  for (int j = 1; j <= kFamilyLength; ++j) {
    const WeightValue w = weight(j);
    if (w.cls == WeightClass::Zero) {
      f.coeffs.emplace_back(0);
      continue;
    }
    const int twice_exp = kFamilyLength - j - (w.cls == WeightClass::Root5OverRoot2 ? 1 : 0);
    if (twice_exp < 0 || twice_exp % 2 != 0 || 39 - j < 0) {
      throw std::logic_error("non-integral family coefficient at j = " + std::to_string(j));
    }
    BigInt a = ipow(2, static_cast<unsigned long>(twice_exp / 2)) * ipow(t, static_cast<unsigned long>(39 - j));
    f.coeffs.push_back(w.sign > 0 ? a : BigInt(-a));
  }
  if (f.base < ipow(2, kBaseShift)) throw std::logic_error("family base below 2^20");
  f.validate();
  return inst;
}

FixedReal lhs_atanh(const FamilyInstance& inst, int frac_bits) {
  const int work = frac_bits + kWorkGuard;
  const FixedReal arg = mul_rational(sqrt_int(5, work), inst.lhs_arg);
  return fx_atanh(arg).rescaled(frac_bits);
}

FixedReal lhs_value(const FamilyInstance& inst, int frac_bits) {
  const int work = frac_bits + kWorkGuard;
  const FixedReal root5 = sqrt_int(5, work);
  return (root5 * fx_atanh(mul_rational(root5, inst.lhs_arg))).rescaled(frac_bits);
}

FixedReal golden_constant(int frac_bits) {
  if (frac_bits < 1) throw std::invalid_argument("frac_bits must be positive");
  const int work = frac_bits + kWorkGuard;
  const FixedReal root5 = sqrt_int(5, work);
  const FixedReal phi = (FixedReal::from_int(1, work) + root5) / BigInt(2);
  return (root5 * fx_log(phi)).rescaled(frac_bits);
}

BbpFormula golden_formula() {
  BbpFormula f = family_coeffs(1).formula;
  f.prefactor /= 3;
  f.label = "sqrt(5)*log(phi)";
  return f;
}

BbpFormula log2_formula() {
  BbpFormula f;
  f.degree = 1;
  f.base = 2;
  f.length = 1;
  f.coeffs = {BigInt(1)};
  f.prefactor = 1;
  f.label = "2*log(2)";
  return f;
}

Li1Report verify_li1_decomposition(const BigInt& t, int frac_bits) {
  const FamilyInstance inst = family_coeffs(t);
  const int work = frac_bits + kWorkGuard;

  const FixedReal pi = fx_pi(work);
  const FixedReal root2 = sqrt_int(2, work);
  const FixedReal one = FixedReal::from_int(1, work);
  const Rational q_squared = make_rational(1, 2 * t * t);

  auto re_li1 = [&](long k) {
    const FixedReal angle = (pi * BigInt(k)) / BigInt(20);
    const FixedReal two_q_cos = (root2 * fx_cos(angle)) / t;
    const FixedReal arg = one + FixedReal::from_rational(q_squared, work) - two_q_cos;
    return -(fx_log(arg) / BigInt(2));
  };
  const FixedReal li1 = re_li1(1) - re_li1(7) + re_li1(9) - re_li1(17);

  Li1Report report;
  report.frac_bits = frac_bits;
  report.li1_side = li1.rescaled(frac_bits);
  report.atanh_side = lhs_atanh(inst, frac_bits);
  report.deviation_ulp = separation_ulp(report.atanh_side, report.li1_side);
  report.agreement_bits = bits_from_ulp_bound(report.deviation_ulp, frac_bits);
  return report;
}

}  // namespace bbplog
