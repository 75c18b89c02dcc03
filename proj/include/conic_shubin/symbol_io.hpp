#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "conic_shubin/formal_symbol.hpp"

namespace conic_shubin {

/// {"anisotropy":[l1,l2,l3],"terms":[{"alpha","j","k","coeff":[...]}]} in canonical term order.
nlohmann::json to_json(const FormalSymbol& a);
/// Throws std::invalid_argument on schema violations.
FormalSymbol symbol_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AnisotropyVector& l);
AnisotropyVector aniso_from_json(const nlohmann::json& j);

}  // namespace conic_shubin
