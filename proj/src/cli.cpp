#include "bbplog/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "bbplog/family.hpp"
#include "bbplog/formula.hpp"
#include "bbplog/presets.hpp"
#include "bbplog/spigot.hpp"
#include "bbplog/verify.hpp"

namespace bbplog::cli {

namespace {

struct CliConfig {
  int bits = 0;
  std::uint64_t position = 0;
  int count = 32;
  int radix = 2;
  std::string t = "1";
  std::string input;
  std::string output;
  std::string preset;
  std::optional<int> digits;
  bool theorem = false;
  bool corollary = false;
  bool decomposition = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FileError : public std::runtime_error {
 public:
  FileError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

unsigned threads_from_env() {
  const char* raw = std::getenv("BBP_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const unsigned long v = std::strtoul(raw, &end, 10);
  if (*end != '\0' || v > 4096) throw UsageError("BBP_THREADS must be a small nonnegative integer");
  return static_cast<unsigned>(v);
}

BigInt parse_bigint(const std::string& text) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
    throw UsageError("not an integer: '" + text + "'");
  }
  return BigInt(text.front() == '+' ? text.substr(1) : text, 10);
}

// "3", "-2", "1..3" or comma-separated mixtures thereof.
std::vector<BigInt> parse_t_list(const std::string& spec) {
  std::vector<BigInt> values;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      values.push_back(parse_bigint(item));
      continue;
    }
    BigInt lo = parse_bigint(item.substr(0, dots));
    BigInt hi = parse_bigint(item.substr(dots + 2));
    if (lo > hi) throw UsageError("empty t range '" + item + "'");
    if (hi - lo > 10000) throw UsageError("t range too long: '" + item + "'");
    for (BigInt v = lo; v <= hi; ++v) values.push_back(v);
  }
  if (values.empty()) throw UsageError("no t values given");
  return values;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(kExitNoInput, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

BbpFormula load_formula(const CliConfig& cfg, const std::string& fallback_preset) {
  if (!cfg.input.empty()) return parse_formula(read_file(cfg.input));
  const std::string name = cfg.preset.empty() ? fallback_preset : cfg.preset;
  auto f = preset_formula(name);
  if (!f) throw UsageError("unknown preset '" + name + "' (known: golden, log2)");
  return *f;
}

int cmd_digits(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const SpigotPlan plan = build_plan(load_formula(cfg, "golden"));
  const unsigned threads = threads_from_env();
  DigitWindow window;
  if (cfg.radix == 16) {
    if (cfg.position % 4 != 0 || cfg.count % 4 != 0) {
      throw UsageError("--radix 16 needs --pos and --count to be multiples of 4");
    }
    window = extract_hex(plan, cfg.position / 4, cfg.count / 4, threads);
  } else {
    window = extract_bits(plan, cfg.position, cfg.count, threads);
  }
  out << "pos=" << cfg.position << " radix=" << window.radix << " digits=" << window.digits
      << " certified=" << window.certified << "\n";
  if (!window.fully_certified()) {
    err << "warning: only " << window.certified << " of " << window.digits.size()
        << " digits are certified\n";
  }
  return kExitOk;
}

int cmd_family(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const BigInt t = parse_bigint(cfg.t);
  std::string text;
  if (cfg.corollary) {
    if (t != 1) throw UsageError("--corollary applies to --t 1 only");
    text = emit_formula(golden_formula());
  } else {
    text = emit_formula(family_coeffs(t).formula);
  }
  if (cfg.output.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw FileError(kExitCantCreate, "cannot write " + cfg.output);
  file << text;
  if (!file) throw FileError(kExitCantCreate, "write failed for " + cfg.output);
  err << "wrote " << cfg.output << "\n";
  return kExitOk;
}

int cmd_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.theorem && !cfg.corollary && !cfg.decomposition) {
    throw UsageError("verify needs at least one of --theorem, --corollary, --decomposition");
  }
  const int bits = cfg.bits > 0 ? cfg.bits : 256;
  std::vector<BigInt> ts;
  if (cfg.theorem || cfg.decomposition) ts = parse_t_list(cfg.t);

  std::vector<VerificationReport> reports;
  if (cfg.theorem) {
    for (const auto& t : ts) reports.push_back(verify_theorem(t, bits));
  }
  if (cfg.corollary) reports.push_back(verify_corollary(bits));
  if (cfg.decomposition) {
    for (const auto& t : ts) reports.push_back(verify_decomposition(t, bits));
  }

  bool all = true;
  for (const auto& r : reports) {
    out << format_report(r) << "\n";
    if (!r.detail.empty()) err << r.subject << ": " << r.detail << "\n";
    all = all && r.passed;
  }
  return all ? kExitOk : kExitCheckFailed;
}

int cmd_eval(const CliConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.input.empty() && cfg.preset.empty()) throw UsageError("eval needs a formula file or --preset");
  const BbpFormula f = load_formula(cfg, "");
  const int bits = cfg.bits > 0 ? cfg.bits : 128;
  const EvalResult r = eval_P(f, bits, threads_from_env());
  // floor(bits * log10(2)) decimal digits unless asked otherwise.
  const int digits = cfg.digits.value_or(static_cast<int>(static_cast<long>(bits) * 30103 / 100000));
  out << "value=" << to_decimal(r.value, digits) << " bits=" << bits << " terms=" << r.terms_used
      << " err_ulp=" << r.value.err_ulp.get_str() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"BBP-type formula engine: evaluation, the golden-ratio logarithm family, "
               "verification and binary digit extraction",
               "bbplog"};
  app.require_subcommand(1);

  auto* digits = app.add_subcommand("digits", "extract binary/hex digits at an arbitrary position");
  digits->add_option("--pos", cfg.position, "bit position after the binary point (window starts at pos+1)");
  digits->add_option("--count", cfg.count, "number of bits (1..64)")->check(CLI::Range(1, 64));
  digits->add_option("--radix", cfg.radix, "2 or 16")->check(CLI::IsMember({2, 16}));
  auto* dig_file = digits->add_option("--formula", cfg.input, "formula file");
  digits->add_option("--preset", cfg.preset, "built-in formula: golden (default) or log2")->excludes(dig_file);

  auto* family = app.add_subcommand("family", "write the formula file for the logarithm family member t");
  family->add_option("--t", cfg.t, "nonzero integer parameter")->required();
  family->add_flag("--corollary", cfg.corollary, "normalise t=1 to sqrt(5)*log(phi)");
  family->add_option("-o,--output", cfg.output, "output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "run identity checks; exit 0 iff all pass");
  verify->add_flag("--theorem", cfg.theorem, "family identity for each --t");
  verify->add_flag("--corollary", cfg.corollary, "golden-ratio identity and spigot cross-check");
  verify->add_flag("--decomposition", cfg.decomposition, "Li1 decomposition for each --t");
  verify->add_option("--t", cfg.t, "t values: 3, -2, 1..3 or comma list (default 1)");
  verify->add_option("--bits", cfg.bits, "agreement target in bits (default 256)")->check(CLI::Range(1, 1 << 22));

  auto* eval = app.add_subcommand("eval", "evaluate prefactor * P(s,b,l,A) to a given precision");
  auto* eval_file = eval->add_option("formula", cfg.input, "formula file");
  eval->add_option("--preset", cfg.preset, "built-in formula: golden or log2")->excludes(eval_file);
  eval->add_option("--bits", cfg.bits, "fractional bits (default 128)")->check(CLI::Range(1, 1 << 22));
  eval->add_option("--digits", cfg.digits, "decimal digits to print")->check(CLI::Range(0, 1 << 22));

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("bbplog");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (digits->parsed()) return cmd_digits(cfg, out, err);
    if (family->parsed()) return cmd_family(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    if (eval->parsed()) return cmd_eval(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FileError& e) {
    err << "error: " << e.what() << "\n";
    return e.code();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const ValidationError& e) {
    err << "invalid formula: " << e.what() << "\n";
    return kExitDataError;
  } catch (const UnsupportedFormula& e) {
    err << "unsupported formula: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace bbplog::cli
