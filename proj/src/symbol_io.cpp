#include "conic_shubin/symbol_io.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace conic_shubin {

nlohmann::json to_json(const AnisotropyVector& l) { return nlohmann::json::array({l.l1(), l.l2(), l.l3()}); }

AnisotropyVector aniso_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("anisotropy must be an array [l1,l2,l3]");
  for (const auto& v : j)
    if (!v.is_number_integer()) throw std::invalid_argument("anisotropy entries must be integers");
  return AnisotropyVector(j[0].get<int>(), j[1].get<int>(), j[2].get<int>());
}

nlohmann::json to_json(const FormalSymbol& a) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : a.terms())
    terms.push_back({{"alpha", e.alpha}, {"j", e.j}, {"k", e.k}, {"coeff", to_json(c)}});
  return {{"anisotropy", to_json(a.aniso())}, {"terms", terms}};
}

FormalSymbol symbol_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("anisotropy") || !j.contains("terms"))
    throw std::invalid_argument("symbol JSON needs 'anisotropy' and 'terms'");
  FormalSymbol a(aniso_from_json(j.at("anisotropy")));
  if (!j.at("terms").is_array()) throw std::invalid_argument("'terms' must be an array");
  for (const auto& t : j.at("terms")) {
    for (const char* f : {"alpha", "j", "k"})
      if (!t.contains(f) || !t.at(f).is_number_integer())
        throw std::invalid_argument(std::string("term field '") + f + "' must be an integer");
    if (!t.contains("coeff")) throw std::invalid_argument("term needs 'coeff'");
    a.accumulate(t.at("alpha").get<int>(), t.at("j").get<int>(), t.at("k").get<int>(), coeff_from_json(t.at("coeff")));
  }
  return a;
}

}  // namespace conic_shubin
