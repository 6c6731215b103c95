#include "bbplog/formula.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <thread>

namespace bbplog {

namespace {

// Guard bits for the per-term truncations; covers up to 2^40 summed terms.
constexpr int kEvalGuardBits = 48;

BigInt max_abs_coeff(const BbpFormula& f) {
  BigInt best = 0;
  for (const auto& a : f.coeffs) best = std::max(best, BigInt(abs(a)));
  return best;
}

BigInt ipow(const BigInt& b, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

// Sum over k in [k_begin, k_end) of trunc(2^work * a_j / (b^k (kl+j)^s)).
// Each truncation loses < 1 ulp; the caller accounts for it.
BigInt partial_sum(const BbpFormula& f, int work, long k_begin, long k_end) {
  BigInt sum = 0;
  if (k_begin >= k_end) return sum;
  BigInt numerator_scale;
  mpz_ui_pow_ui(numerator_scale.get_mpz_t(), 2, static_cast<unsigned long>(work));
  BigInt base_pow = ipow(f.base, static_cast<unsigned long>(k_begin));
  BigInt q, denom;
  for (long k = k_begin; k < k_end; ++k) {
    for (int j = 1; j <= f.length; ++j) {
      const BigInt& a = f.coeffs[static_cast<std::size_t>(j - 1)];
      if (a == 0) continue;
      denom = ipow(BigInt(k) * f.length + j, static_cast<unsigned long>(f.degree)) * base_pow;
      mpz_tdiv_q(q.get_mpz_t(), BigInt(a * numerator_scale).get_mpz_t(), denom.get_mpz_t());
      sum += q;
    }
    base_pow *= f.base;
  }
  return sum;
}

bool is_reduced(const Rational& q) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return g == 1;
}

unsigned resolve_threads(unsigned threads) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  return threads;
}

}  // namespace

void BbpFormula::validate() const {
  if (degree < 1) throw ValidationError("s", "degree must be >= 1");
  if (base < 2) throw ValidationError("b", "base must be >= 2");
  if (length < 1) throw ValidationError("l", "length must be >= 1");
  if (coeffs.size() != static_cast<std::size_t>(length)) {
    throw ValidationError("A", "expected " + std::to_string(length) + " coefficients, got " +
                                   std::to_string(coeffs.size()));
  }
  if (std::all_of(coeffs.begin(), coeffs.end(), [](const BigInt& a) { return a == 0; })) {
    throw ValidationError("A", "all coefficients are zero");
  }
  if (prefactor == 0) throw ValidationError("pre", "prefactor must be nonzero");
  if (prefactor.get_den() <= 0 || !is_reduced(prefactor)) {
    throw ValidationError("pre", "prefactor must be a reduced fraction with positive denominator");
  }
}

BigInt tail_bound_ulp(const BbpFormula& f, long terms, int frac_bits) {
  // max|a| * l / (K l + 1)^s * b^-K * b / (b - 1), times |prefactor|.
  Rational bound = make_rational(max_abs_coeff(f) * f.length,
                                 ipow(BigInt(terms) * f.length + 1, static_cast<unsigned long>(f.degree)));
  bound /= Rational(ipow(f.base, static_cast<unsigned long>(terms)));
  bound *= make_rational(f.base, f.base - 1);
  bound *= abs(f.prefactor);
  mpq_mul_2exp(bound.get_mpq_t(), bound.get_mpq_t(), static_cast<unsigned long>(frac_bits));
  BigInt ulp;
  mpz_cdiv_q(ulp.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
  return ulp;
}

EvalResult eval_P_terms(const BbpFormula& f, int frac_bits, long terms, unsigned threads) {
  f.validate();
  if (frac_bits < 1) throw std::invalid_argument("frac_bits must be positive");
  if (terms < 0) throw std::invalid_argument("negative term count");
  const int work = frac_bits + kEvalGuardBits;

  threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max(1L, terms)));
  std::vector<BigInt> parts(threads);
  if (threads == 1) {
    parts[0] = partial_sum(f, work, 0, terms);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (terms + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const long lo = std::min(terms, static_cast<long>(w) * chunk);
      const long hi = std::min(terms, lo + chunk);
      pool.emplace_back([&, w, lo, hi] { parts[w] = partial_sum(f, work, lo, hi); });
    }
    for (auto& t : pool) t.join();
  }
  BigInt sum = 0;
  for (const auto& p : parts) sum += p;

  long nonzero = std::count_if(f.coeffs.begin(), f.coeffs.end(), [](const BigInt& a) { return a != 0; });
  FixedReal raw{sum, work, BigInt(terms) * nonzero};
  FixedReal scaled = mul_rational(raw, f.prefactor).rescaled(frac_bits);

  EvalResult result;
  result.tail_bound_ulp = tail_bound_ulp(f, terms, frac_bits);
  scaled.err_ulp += result.tail_bound_ulp;
  result.value = std::move(scaled);
  result.terms_used = terms;
  return result;
}

EvalResult eval_P(const BbpFormula& f, int frac_bits, unsigned threads) {
  f.validate();
  if (frac_bits < 1) throw std::invalid_argument("frac_bits must be positive");
  // First K with tail < 2^-frac_bits, i.e. a tail bound of at most one ulp.
  long terms = 0;
  while (tail_bound_ulp(f, terms, frac_bits) > 1) ++terms;
  return eval_P_terms(f, frac_bits, terms, threads);
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

BigInt parse_integer(std::string_view word, int line) {
  std::string_view digits = word;
  if (!digits.empty() && digits.front() == '-') digits.remove_prefix(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError(line, "expected an integer, got '" + std::string(word) + "'");
  }
  return BigInt(std::string(word), 10);
}

int parse_small(std::string_view word, int line) {
  BigInt v = parse_integer(word, line);
  if (!v.fits_sint_p()) throw ParseError(line, "integer out of range: " + std::string(word));
  return static_cast<int>(v.get_si());
}

std::vector<std::string_view> expect_key(const std::vector<std::string_view>& lines, std::size_t idx,
                                         std::string_view key) {
  const int line_no = static_cast<int>(idx) + 1;
  if (idx >= lines.size()) throw ParseError(line_no, "missing '" + std::string(key) + "' line");
  auto words = split_words(lines[idx]);
  if (words.empty() || words[0] != key) {
    throw ParseError(line_no, "expected '" + std::string(key) + "'");
  }
  return words;
}

}  // namespace

BbpFormula parse_formula(std::string_view text) {
  auto lines = split_lines(text);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, "empty formula file");

  auto header = split_words(lines[0]);
  if (header.size() != 2 || header[0] != "bbp" || header[1] != "1") {
    throw ParseError(1, "expected version tag 'bbp 1'");
  }

  BbpFormula f;
  auto single = [&](std::size_t idx, std::string_view key) {
    auto words = expect_key(lines, idx, key);
    if (words.size() != 2) throw ParseError(static_cast<int>(idx) + 1, "expected exactly one value");
    return words[1];
  };
  f.degree = parse_small(single(1, "s"), 2);
  f.base = parse_integer(single(2, "b"), 3);
  f.length = parse_small(single(3, "l"), 4);

  std::string_view pre = single(4, "pre");
  const auto slash = pre.find('/');
  if (slash == std::string_view::npos) throw ParseError(5, "prefactor must be written num/den");
  BigInt num = parse_integer(pre.substr(0, slash), 5);
  BigInt den = parse_integer(pre.substr(slash + 1), 5);
  if (den == 0) throw ParseError(5, "zero denominator");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (den < 0 || g != 1) {
    throw ValidationError("pre", "prefactor must be a reduced fraction with positive denominator");
  }
  f.prefactor = Rational(num, den);

  auto coeff_words = expect_key(lines, 5, "A");
  for (std::size_t i = 1; i < coeff_words.size(); ++i) f.coeffs.push_back(parse_integer(coeff_words[i], 6));

  if (lines.size() > 6) {
    std::string_view label_line = lines[6];
    if (label_line.rfind("label ", 0) != 0) throw ParseError(7, "expected 'label <text>'");
    f.label = std::string(label_line.substr(6));
  }
  if (lines.size() > 7) throw ParseError(8, "unexpected trailing content");

  f.validate();
  return f;
}

std::string emit_formula(const BbpFormula& f) {
  f.validate();
  std::ostringstream out;
  out << "bbp 1\n";
  out << "s " << f.degree << "\n";
  out << "b " << f.base.get_str(10) << "\n";
  out << "l " << f.length << "\n";
  out << "pre " << f.prefactor.get_num().get_str(10) << "/" << f.prefactor.get_den().get_str(10) << "\n";
  out << "A";
  for (const auto& a : f.coeffs) out << ' ' << a.get_str(10);
  out << "\n";
  if (!f.label.empty()) out << "label " << f.label << "\n";
  return out.str();
}

}  // namespace bbplog
