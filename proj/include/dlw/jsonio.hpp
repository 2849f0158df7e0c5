/// JSON shapes for the external interfaces: theories as
/// {background, defaults:[{name,prec,just,cons}]}, processes as arrays of
/// default names, extensions as {axiom, witnesses:[[names]]}.
#pragma once

#include <json.hpp>

#include <dlw/process.hpp>
#include <dlw/translate.hpp>

namespace dlw {

inline nlohmann::json to_json(const DefaultTheory& t) {
  nlohmann::json defaults = nlohmann::json::array();
  for (const Default& d : t.defaults())
    defaults.push_back({{"name", d.name},
                        {"prec", d.prec.str()},
                        {"just", d.just.str()},
                        {"cons", d.cons.str()}});
  return {{"background", t.background().str()}, {"defaults", defaults}};
}

inline nlohmann::json to_json(const DefaultTheory& t, const Process& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const std::string& n : process_names(t, p)) out.push_back(n);
  return out;
}

inline nlohmann::json to_json(const DefaultTheory& t, const Extension& e) {
  nlohmann::json witnesses = nlohmann::json::array();
  for (const Process& p : e.witnesses) witnesses.push_back(to_json(t, p));
  return {{"axiom", e.axiom.str()}, {"witnesses", witnesses}};
}

inline nlohmann::json to_json(const SimulationArtifacts& art) {
  nlohmann::json families = nlohmann::json::array();
  for (std::size_t i = 0; i < art.family.size(); ++i)
    families.push_back({{"name", art.theory.at(i).name},
                        {"family", std::string(1, family_code(
                                                      art.family[i].family))},
                        {"source_index", art.family[i].index}});
  nlohmann::json out = to_json(art.theory);
  out["families"] = families;
  out["output_formula"] = art.output_formula.str();
  return out;
}

}  // namespace dlw
