#pragma once

#include <optional>
#include <string_view>

#include "bbplog/formula.hpp"

namespace bbplog {

/// Formula files compiled into the library from presets/*.bbp.
std::string_view golden_preset_text();
std::string_view log2_preset_text();

/// "golden" or "log2"; nullopt for anything else.
std::optional<BbpFormula> preset_formula(std::string_view name);

}  // namespace bbplog
