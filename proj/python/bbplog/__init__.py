"""BBP-type formula evaluation, the golden-ratio logarithm family and binary digit extraction."""

from ._core import (
    DigitWindow,
    DomainError,
    EvalResult,
    FamilyInstance,
    FixedReal,
    Formula,
    ParseError,
    UnsupportedFormula,
    ValidationError,
    VerificationReport,
    emit_formula,
    eval_P,
    extract_bits,
    extract_hex,
    family_coeffs,
    golden_constant,
    golden_formula,
    lhs_value,
    log2_formula,
    parse_formula,
    preset,
    verify_corollary,
    verify_decomposition,
    verify_theorem,
    weight,
)

__all__ = [
    "DigitWindow",
    "DomainError",
    "EvalResult",
    "FamilyInstance",
    "FixedReal",
    "Formula",
    "ParseError",
    "UnsupportedFormula",
    "ValidationError",
    "VerificationReport",
    "emit_formula",
    "eval_P",
    "extract_bits",
    "extract_hex",
    "family_coeffs",
    "golden_constant",
    "golden_formula",
    "lhs_value",
    "log2_formula",
    "parse_formula",
    "preset",
    "verify_corollary",
    "verify_decomposition",
    "verify_theorem",
    "weight",
]
