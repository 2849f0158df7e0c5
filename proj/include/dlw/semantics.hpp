/// A regular default-logic semantics is a pair of a successfulness mode and
/// a closure mode. Named presets cover the dialects the workbench ships.
#pragma once

#include <string>

#include <dlw/errors.hpp>

namespace dlw {

/// Local: every applied justification is separately consistent with the
/// consequences. Global: all applied justifications are jointly consistent.
enum class Successfulness { Local, Global };

/// Inapplicability: no outside default is applicable (precondition entailed
/// and justification consistent). MaximalSuccess: no outside default yields
/// a successful one-step process extension, successfulness taken in the
/// semantics' own mode.
enum class Closure { Inapplicability, MaximalSuccess };

struct SemanticsSpec {
  Successfulness successfulness = Successfulness::Local;
  Closure closure = Closure::Inapplicability;
  bool requires_normal = false;
  std::string name = "reiter";
};

inline SemanticsSpec reiter_semantics() {
  return {Successfulness::Local, Closure::Inapplicability, false, "reiter"};
}

inline SemanticsSpec constrained_semantics() {
  return {Successfulness::Global, Closure::MaximalSuccess, false,
          "constrained"};
}

inline SemanticsSpec justified_semantics() {
  return {Successfulness::Local, Closure::MaximalSuccess, false, "justified"};
}

/// Reiter's conditions restricted to normal default theories.
inline SemanticsSpec normal_semantics() {
  return {Successfulness::Local, Closure::Inapplicability, true, "normal"};
}

inline SemanticsSpec semantics_by_name(const std::string& name) {
  if (name == "reiter") return reiter_semantics();
  if (name == "constrained") return constrained_semantics();
  if (name == "justified") return justified_semantics();
  if (name == "normal") return normal_semantics();
  throw ValidationError("unknown semantics '" + name +
                        "' (expected reiter, constrained, justified or "
                        "normal)");
}

}  // namespace dlw
