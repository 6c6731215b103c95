#include "bbplog/spigot.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <thread>

namespace bbplog {

namespace {

using u128 = unsigned __int128;

// The accumulator holds frac(2^n C) * 2^128; wrap-around is the mod-1 reduction.
// Every term costs at most one ulp of truncation, so with 2^(128-64) ulps of
// headroom a 64-bit window stays certifiable up to ~2^60 summed terms.
constexpr unsigned kAccumulatorBits = 128;
constexpr int kMaxWindowBits = 64;
constexpr std::uint64_t kWordModulusLimit = std::uint64_t{1} << 63;

u128 to_u128(const BigInt& v) {
  BigInt low;
  mpz_fdiv_r_2exp(low.get_mpz_t(), v.get_mpz_t(), kAccumulatorBits);
  std::uint64_t words[2] = {0, 0};
  std::size_t written = 0;
  mpz_export(words, &written, -1, sizeof(std::uint64_t), 0, 0, low.get_mpz_t());
  return (static_cast<u128>(words[1]) << 64) | words[0];
}

BigInt from_u128(u128 v) {
  BigInt hi(static_cast<unsigned long>(v >> 64));
  BigInt lo(static_cast<unsigned long>(v));
  return (hi << 64) + lo;
}

// floor(r * 2^128 / m) for r < m < 2^64.
u128 scaled_fraction(std::uint64_t r, std::uint64_t m) {
  const u128 num = static_cast<u128>(r) << 64;
  const u128 hi = num / m;
  const u128 rem = num % m;
  const u128 lo = (rem << 64) / m;
  return (hi << 64) | lo;
}

struct Term {
  int j = 0;
  int sign = 0;
  BigInt magnitude;                        // |p a_j|
  std::optional<std::uint64_t> word;       // |p a_j| when it fits in 63 bits
};

struct Accumulator {
  u128 value = 0;
  std::uint64_t terms = 0;
};

class Kernel {
 public:
  Kernel(const SpigotPlan& plan, std::uint64_t n) : plan_(plan), n_(n) {
    for (int j = 1; j <= plan.formula.length; ++j) {
      const BigInt& c = plan.scaled_coeffs[static_cast<std::size_t>(j - 1)];
      if (c == 0) continue;
      Term t;
      t.j = j;
      t.sign = sgn(c);
      t.magnitude = abs(c);
      if (t.magnitude < BigInt(static_cast<unsigned long>(kWordModulusLimit))) {
        t.word = t.magnitude.get_ui();
      }
      terms_.push_back(std::move(t));
    }
    if (plan.denominator_scale < BigInt(static_cast<unsigned long>(kWordModulusLimit))) {
      q_word_ = plan.denominator_scale.get_ui();
    }
  }

  std::uint64_t head_end() const { return n_ / plan_.beta + 1; }

  // Terms with beta k <= n: p a_j 2^(n - beta k) mod q (kl+j), exactly.
  Accumulator head(std::uint64_t k_begin, std::uint64_t k_end) const {
    Accumulator acc;
    const auto l = static_cast<std::uint64_t>(plan_.formula.length);
    for (std::uint64_t k = k_begin; k < k_end; ++k) {
      const std::uint64_t e = n_ - plan_.beta * k;
      for (const Term& t : terms_) {
        const std::uint64_t d = k * l + static_cast<std::uint64_t>(t.j);
        u128 frac;
        if (q_word_ && t.word && *q_word_ <= (kWordModulusLimit - 1) / d) {
          const std::uint64_t m = *q_word_ * d;
          const std::uint64_t r = static_cast<std::uint64_t>(
              static_cast<u128>(*t.word % m) * modpow2_u64(e, m) % m);
          frac = scaled_fraction(r, m);
        } else {
          frac = head_big(t, d, e);
        }
        acc.value = t.sign > 0 ? acc.value + frac : acc.value - frac;
        ++acc.terms;
      }
    }
    return acc;
  }

  // Terms with beta k > n summed directly, then one ulp for everything beyond.
  Accumulator tail() const {
    Accumulator acc;
    BigInt max_mag = 0;
    for (const Term& t : terms_) max_mag = std::max(max_mag, t.magnitude);
    const auto l = static_cast<long>(plan_.formula.length);
    for (std::uint64_t k = head_end();; ++k) {
      if (remainder_negligible(max_mag, k)) {
        ++acc.terms;
        return acc;
      }
      const long shift = static_cast<long>(kAccumulatorBits) + static_cast<long>(n_) -
                         static_cast<long>(plan_.beta * k);
      for (const Term& t : terms_) {
        BigInt modulus = plan_.denominator_scale * (BigInt(static_cast<unsigned long>(k)) * l + t.j);
        BigInt frac;
        if (shift >= 0) {
          frac = (t.magnitude << static_cast<unsigned long>(shift)) / modulus;
        } else {
          frac = t.magnitude / (modulus << static_cast<unsigned long>(-shift));
        }
        const u128 v = to_u128(frac);
        acc.value = t.sign > 0 ? acc.value + v : acc.value - v;
        ++acc.terms;
      }
    }
  }

 private:
  u128 head_big(const Term& t, std::uint64_t d, std::uint64_t e) const {
    const BigInt m = plan_.denominator_scale * BigInt(static_cast<unsigned long>(d));
    const BigInt r = (t.magnitude % m) * modpow(2, BigInt(static_cast<unsigned long>(e)), m) % m;
    return to_u128((r << kAccumulatorBits) / m);
  }

  // Everything from outer index K on is below one accumulator ulp:
  // max|p a| l / (q (K l + 1)) * 2^(n - beta K) * 2^128 * b/(b-1) < 1, with b/(b-1) <= 2.
  bool remainder_negligible(const BigInt& max_mag, std::uint64_t k) const {
    const BigInt lhs = max_mag * plan_.formula.length;
    const BigInt rhs = plan_.denominator_scale *
                       (BigInt(static_cast<unsigned long>(k)) * plan_.formula.length + 1);
    const long shift = static_cast<long>(kAccumulatorBits) + 1 + static_cast<long>(n_) -
                       static_cast<long>(plan_.beta * k);
    if (shift >= 0) return (lhs << static_cast<unsigned long>(shift)) < rhs;
    return lhs < (rhs << static_cast<unsigned long>(-shift));
  }

  const SpigotPlan& plan_;
  std::uint64_t n_;
  std::vector<Term> terms_;
  std::optional<std::uint64_t> q_word_;
};

}  // namespace

SpigotPlan build_plan(const BbpFormula& f) {
  f.validate();
  if (f.degree != 1) throw UnsupportedFormula("digit extraction supports degree 1 only");
  if (mpz_popcount(f.base.get_mpz_t()) != 1) {
    throw UnsupportedFormula("digit extraction needs a power-of-two base, got " + f.base.get_str());
  }
  SpigotPlan plan;
  plan.formula = f;
  plan.beta = static_cast<unsigned>(mpz_sizeinbase(f.base.get_mpz_t(), 2) - 1);
  plan.numerator_scale = f.prefactor.get_num();
  plan.denominator_scale = f.prefactor.get_den();
  BigInt g;
  mpz_gcd(g.get_mpz_t(), plan.numerator_scale.get_mpz_t(), plan.denominator_scale.get_mpz_t());
  if (g != 1 || plan.denominator_scale <= 0) {
    throw ValidationError("pre", "prefactor is not a reduced fraction");
  }
  plan.scaled_coeffs.reserve(f.coeffs.size());
  for (const auto& a : f.coeffs) plan.scaled_coeffs.push_back(plan.numerator_scale * a);
  return plan;
}

DigitWindow extract_bits(const SpigotPlan& plan, std::uint64_t n, int count, unsigned threads) {
  if (count < 1 || count > kMaxWindowBits) {
    throw std::invalid_argument("bit count must be in 1.." + std::to_string(kMaxWindowBits));
  }
  const Kernel kernel(plan, n);
  const std::uint64_t head_terms = kernel.head_end();

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, head_terms));

  std::vector<Accumulator> parts(threads);
  if (threads == 1) {
    parts[0] = kernel.head(0, head_terms);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (head_terms + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::uint64_t lo = std::min(head_terms, w * chunk);
      const std::uint64_t hi = std::min(head_terms, lo + chunk);
      pool.emplace_back([&, w, lo, hi] { parts[w] = kernel.head(lo, hi); });
    }
    for (auto& t : pool) t.join();
  }
  parts.push_back(kernel.tail());

  u128 sum = 0;
  std::uint64_t error_ulp = 0;
  for (const auto& p : parts) {
    sum += p.value;
    error_ulp += p.terms;
  }

  DigitWindow window;
  window.position = n;
  window.radix = 2;
  const u128 top = sum >> (kAccumulatorBits - static_cast<unsigned>(count));
  window.digits.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    window.digits[static_cast<std::size_t>(i)] = ((top >> (count - 1 - i)) & 1U) ? '1' : '0';
  }

  // Certified prefix: the longest c for which every value in
  // [sum - err, sum + err] shares its leading c bits (no wrap across 0 or 1).
  const BigInt exact = from_u128(sum);
  const BigInt lo = exact - static_cast<unsigned long>(error_ulp);
  const BigInt hi = exact + static_cast<unsigned long>(error_ulp);
  int certified = count;
  while (certified > 0) {
    const unsigned long drop = kAccumulatorBits - static_cast<unsigned long>(certified);
    BigInt a, b;
    mpz_fdiv_q_2exp(a.get_mpz_t(), lo.get_mpz_t(), drop);
    mpz_fdiv_q_2exp(b.get_mpz_t(), hi.get_mpz_t(), drop);
    if (a == b) break;
    --certified;
  }
  window.certified = certified;
  return window;
}

DigitWindow extract_hex(const SpigotPlan& plan, std::uint64_t hex_position, int count, unsigned threads) {
  if (count < 1 || count > kMaxWindowBits / 4) {
    throw std::invalid_argument("hex digit count must be in 1.." + std::to_string(kMaxWindowBits / 4));
  }
  if (hex_position > std::numeric_limits<std::uint64_t>::max() / 4) {
    throw std::invalid_argument("hex position out of range");
  }
  const DigitWindow bits = extract_bits(plan, 4 * hex_position, 4 * count, threads);
  static constexpr char kHex[] = "0123456789abcdef";
  DigitWindow window;
  window.position = hex_position;
  window.radix = 16;
  for (std::size_t i = 0; i < bits.digits.size(); i += 4) {
    int nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) nibble = nibble * 2 + (bits.digits[i + b] - '0');
    window.digits.push_back(kHex[nibble]);
  }
  window.certified = bits.certified / 4;
  return window;
}

}  // namespace bbplog
