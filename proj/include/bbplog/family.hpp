#pragma once

#include <cstdint>
#include <string>

#include "bbplog/formula.hpp"
#include "bbplog/numerics.hpp"

namespace bbplog {

/// The period-40 weight 4 sin(r pi/5) sin(2 r pi/5) cos(r pi/4), held exactly.
enum class WeightClass { Zero, Root5, Root5OverRoot2 };

struct WeightValue {
  WeightClass cls = WeightClass::Zero;
  int sign = 0;

  /// value^2 as an exact rational: 0, 5 or 5/2.
  Rational squared() const;
  friend bool operator==(const WeightValue&, const WeightValue&) = default;
};

WeightValue weight(std::int64_t r);
std::string to_string(const WeightValue& w);

/// The logarithm family member for integer t != 0:
///   sqrt5 * atanh(lhs_arg * sqrt5) = 5 / (2^20 t^39) * P(1, 2^20 t^40, 40, A(t)).
struct FamilyInstance {
  BigInt t;
  BbpFormula formula;
  Rational lhs_arg;  // t (1 - t + 2t^2) / (1 - t + 3t^2 - 2t^3 + 4t^4)
};

FamilyInstance family_coeffs(const BigInt& t);

/// sqrt5 * atanh(lhs_arg * sqrt5), the closed-form side of the family identity.
FixedReal lhs_value(const FamilyInstance& inst, int frac_bits);

/// atanh(lhs_arg * sqrt5) alone (the Li1 decomposition's left side).
FixedReal lhs_atanh(const FamilyInstance& inst, int frac_bits);

/// sqrt5 * log(phi) from sqrt and log directly, never from a BBP sum.
FixedReal golden_constant(int frac_bits);

/// The t = 1 member renormalised so its value is sqrt5 * log(phi).
BbpFormula golden_formula();

/// P(1, 2, 1, (1)) = 2 log 2, the classical sanity formula.
BbpFormula log2_formula();

struct Li1Report {
  FixedReal atanh_side;  // atanh(lhs_arg * sqrt5)
  FixedReal li1_side;    // alternating sum of the four Re Li1 terms
  BigInt deviation_ulp;  // |difference| + both error bounds
  int agreement_bits = 0;
  int frac_bits = 0;
};

/// Checks atanh(...) = sum of four Re Li1[(t sqrt2)^-1 exp(i k pi/20)] terms,
/// k = 1, 7, 9, 17 with signs +, -, +, -, using
/// Re Li1[q e^{ix}] = -1/2 log(1 - 2 q cos x + q^2).
Li1Report verify_li1_decomposition(const BigInt& t, int frac_bits);

}  // namespace bbplog
