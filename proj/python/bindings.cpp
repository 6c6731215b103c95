#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bbplog/family.hpp"
#include "bbplog/formula.hpp"
#include "bbplog/numerics.hpp"
#include "bbplog/presets.hpp"
#include "bbplog/spigot.hpp"
#include "bbplog/verify.hpp"

namespace py = pybind11;

// Arbitrary-size integers travel as Python ints, rationals as fractions.Fraction.
namespace pybind11::detail {

template <>
struct type_caster<bbplog::BigInt> {
  PYBIND11_TYPE_CASTER(bbplog::BigInt, const_name("int"));

  bool load(handle src, bool) {
    if (!PyLong_Check(src.ptr())) return false;
    const auto text = py::str(src).cast<std::string>();
    return value.set_str(text, 10) == 0;
  }

  static handle cast(const bbplog::BigInt& v, return_value_policy, handle) {
    const std::string text = v.get_str(10);
    return PyLong_FromString(text.c_str(), nullptr, 10);
  }
};

template <>
struct type_caster<bbplog::Rational> {
  PYBIND11_TYPE_CASTER(bbplog::Rational, const_name("fractions.Fraction"));

  bool load(handle src, bool) {
    if (PyLong_Check(src.ptr())) {
      value = bbplog::Rational(py::str(src).cast<std::string>(), 10);
      return true;
    }
    if (!py::hasattr(src, "numerator") || !py::hasattr(src, "denominator")) return false;
    const auto num = py::str(src.attr("numerator")).cast<std::string>();
    const auto den = py::str(src.attr("denominator")).cast<std::string>();
    if (den == "0") return false;
    value = bbplog::make_rational(bbplog::BigInt(num, 10), bbplog::BigInt(den, 10));
    return true;
  }

  static handle cast(const bbplog::Rational& v, return_value_policy, handle) {
    py::object fraction = py::module_::import("fractions").attr("Fraction");
    py::object num = py::reinterpret_steal<py::object>(
        type_caster<bbplog::BigInt>::cast(v.get_num(), return_value_policy::move, {}));
    py::object den = py::reinterpret_steal<py::object>(
        type_caster<bbplog::BigInt>::cast(v.get_den(), return_value_policy::move, {}));
    return fraction(num, den).release();
  }
};

}  // namespace pybind11::detail

namespace {

using bbplog::BbpFormula;
using bbplog::BigInt;
using bbplog::FixedReal;

bbplog::SpigotPlan plan_for(const BbpFormula& f) { return bbplog::build_plan(f); }

std::string formula_repr(const BbpFormula& f) {
  return "<Formula " + (f.label.empty() ? std::string("unnamed") : f.label) + " s=" + std::to_string(f.degree) +
         " b=" + f.base.get_str() + " l=" + std::to_string(f.length) + ">";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "BBP-type formula engine";

  py::register_exception<bbplog::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<bbplog::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<bbplog::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<bbplog::UnsupportedFormula>(m, "UnsupportedFormula", PyExc_ValueError);

  py::class_<FixedReal>(m, "FixedReal", "mantissa * 2^-frac_bits, correct to within err_ulp units")
      .def_readonly("mantissa", &FixedReal::mantissa)
      .def_readonly("frac_bits", &FixedReal::frac_bits)
      .def_readonly("err_ulp", &FixedReal::err_ulp)
      .def("to_decimal", &bbplog::to_decimal, py::arg("digits"))
      .def("bits", &bbplog::bit_window, py::arg("position"), py::arg("count"))
      .def("__float__", &FixedReal::to_double)
      .def("__repr__", [](const FixedReal& x) {
        return "<FixedReal " + bbplog::to_decimal(x, 20) + " F=" + std::to_string(x.frac_bits) + ">";
      });

  py::class_<BbpFormula>(m, "Formula")
      .def(py::init([](int degree, const BigInt& base, int length, std::vector<BigInt> coeffs,
                       const bbplog::Rational& prefactor, std::string label) {
             BbpFormula f{degree, base, length, std::move(coeffs), prefactor, std::move(label)};
             f.validate();
             return f;
           }),
           py::arg("degree"), py::arg("base"), py::arg("length"), py::arg("coeffs"),
           py::arg("prefactor") = bbplog::Rational(1), py::arg("label") = "")
      .def_readonly("degree", &BbpFormula::degree)
      .def_readonly("base", &BbpFormula::base)
      .def_readonly("length", &BbpFormula::length)
      .def_readonly("coeffs", &BbpFormula::coeffs)
      .def_readonly("prefactor", &BbpFormula::prefactor)
      .def_readonly("label", &BbpFormula::label)
      .def("emit", &bbplog::emit_formula)
      .def("__repr__", &formula_repr);

  py::class_<bbplog::EvalResult>(m, "EvalResult")
      .def_readonly("value", &bbplog::EvalResult::value)
      .def_readonly("terms_used", &bbplog::EvalResult::terms_used)
      .def_readonly("tail_bound_ulp", &bbplog::EvalResult::tail_bound_ulp);

  py::class_<bbplog::FamilyInstance>(m, "FamilyInstance")
      .def_readonly("t", &bbplog::FamilyInstance::t)
      .def_readonly("formula", &bbplog::FamilyInstance::formula)
      .def_readonly("lhs_arg", &bbplog::FamilyInstance::lhs_arg);

  py::class_<bbplog::DigitWindow>(m, "DigitWindow")
      .def_readonly("position", &bbplog::DigitWindow::position)
      .def_readonly("digits", &bbplog::DigitWindow::digits)
      .def_readonly("radix", &bbplog::DigitWindow::radix)
      .def_readonly("certified", &bbplog::DigitWindow::certified)
      .def_property_readonly("fully_certified", &bbplog::DigitWindow::fully_certified)
      .def("__repr__", [](const bbplog::DigitWindow& w) {
        return "<DigitWindow pos=" + std::to_string(w.position) + " radix=" + std::to_string(w.radix) +
               " digits=" + w.digits + " certified=" + std::to_string(w.certified) + ">";
      });

  py::class_<bbplog::VerificationReport>(m, "VerificationReport")
      .def_readonly("subject", &bbplog::VerificationReport::subject)
      .def_readonly("lhs", &bbplog::VerificationReport::lhs)
      .def_readonly("rhs", &bbplog::VerificationReport::rhs)
      .def_readonly("agreement_bits", &bbplog::VerificationReport::agreement_bits)
      .def_readonly("target_bits", &bbplog::VerificationReport::target_bits)
      .def_readonly("passed", &bbplog::VerificationReport::passed)
      .def_property_readonly("elapsed_ms", [](const bbplog::VerificationReport& r) { return r.elapsed.count(); })
      .def_readonly("detail", &bbplog::VerificationReport::detail)
      .def("__str__", &bbplog::format_report);

  using release = py::call_guard<py::gil_scoped_release>;

  m.def("parse_formula", [](const std::string& text) { return bbplog::parse_formula(text); }, py::arg("text"));
  m.def("emit_formula", &bbplog::emit_formula, py::arg("formula"));
  m.def("preset", [](const std::string& name) {
    auto f = bbplog::preset_formula(name);
    if (!f) throw py::key_error("unknown preset '" + name + "'");
    return *f;
  }, py::arg("name"));
  m.def("golden_formula", &bbplog::golden_formula);
  m.def("log2_formula", &bbplog::log2_formula);

  m.def("eval_P", &bbplog::eval_P, py::arg("formula"), py::arg("bits"), py::arg("threads") = 1, release());
  m.def("family_coeffs", &bbplog::family_coeffs, py::arg("t"));
  m.def("lhs_value", &bbplog::lhs_value, py::arg("instance"), py::arg("bits"), release());
  m.def("golden_constant", &bbplog::golden_constant, py::arg("bits"), release());
  m.def("weight", [](std::int64_t r) { return bbplog::to_string(bbplog::weight(r)); }, py::arg("r"));

  m.def("extract_bits",
        [](const BbpFormula& f, std::uint64_t position, int count, unsigned threads) {
          return bbplog::extract_bits(plan_for(f), position, count, threads);
        },
        py::arg("formula"), py::arg("position"), py::arg("count") = 32, py::arg("threads") = 1, release());
  m.def("extract_hex",
        [](const BbpFormula& f, std::uint64_t position, int count, unsigned threads) {
          return bbplog::extract_hex(plan_for(f), position, count, threads);
        },
        py::arg("formula"), py::arg("position"), py::arg("count") = 8, py::arg("threads") = 1, release());

  m.def("verify_theorem", &bbplog::verify_theorem, py::arg("t"), py::arg("bits") = 256, release());
  m.def("verify_corollary", &bbplog::verify_corollary, py::arg("bits") = 256, release());
  m.def("verify_decomposition", &bbplog::verify_decomposition, py::arg("t"), py::arg("bits") = 256, release());
}
