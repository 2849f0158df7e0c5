/// Default theories: a consistent background formula plus an ordered list
/// of named defaults "prec : just / cons".
#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <dlw/formula.hpp>
#include <dlw/sat.hpp>

namespace dlw {

struct Default {
  std::string name;
  Formula prec;  // empty in the concrete syntax means true
  Formula just;
  Formula cons;
};

/// Validated on construction: the background must be consistent and default
/// names pairwise distinct. Immutable afterwards.
class DefaultTheory {
 public:
  DefaultTheory(Formula background, std::vector<Default> defaults)
      : background_(std::move(background)), defaults_(std::move(defaults)) {
    std::set<std::string> names;
    for (const Default& d : defaults_) {
      if (d.name.empty() || !Atom::valid_name(d.name))
        throw ValidationError("invalid default name: '" + d.name + "'");
      if (!names.insert(d.name).second)
        throw ValidationError("duplicate default name: '" + d.name + "'");
    }
    Oracle oracle;
    if (!oracle.is_consistent(background_))
      throw ValidationError("inconsistent background theory");
  }

  const Formula& background() const { return background_; }
  const std::vector<Default>& defaults() const { return defaults_; }
  std::size_t size() const { return defaults_.size(); }
  const Default& at(std::size_t i) const { return defaults_.at(i); }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < defaults_.size(); ++i)
      if (defaults_[i].name == name) return i;
    return std::nullopt;
  }

  std::set<Atom> atoms() const {
    std::set<Atom> out = background_.atoms();
    for (const Default& d : defaults_)
      for (const auto& f : {d.prec, d.just, d.cons})
        for (const Atom& a : f.atoms()) out.insert(a);
    return out;
  }

  bool uses_reserved_atoms() const {
    for (const Atom& a : atoms())
      if (a.reserved()) return true;
    return false;
  }

 private:
  Formula background_;
  std::vector<Default> defaults_;
};

struct Query {
  enum class Mode { Skeptical, Credulous };
  Formula formula;
  Mode mode = Mode::Skeptical;
};

/// A theory is normal when every justification is logically equivalent to
/// its consequence. The test is semantic, not syntactic.
inline bool is_normal(const DefaultTheory& t, Oracle& oracle) {
  for (const Default& d : t.defaults())
    if (!oracle.equivalent(d.just, d.cons)) return false;
  return true;
}

inline bool is_normal(const DefaultTheory& t) {
  Oracle oracle;
  return is_normal(t, oracle);
}

/// Concrete .dlt syntax. Theories containing reserved atoms get the
/// "#generated" header so they reparse.
inline std::string serialize_theory(const DefaultTheory& t) {
  std::ostringstream os;
  if (t.uses_reserved_atoms()) os << "#generated\n";
  if (!t.background().is_constant(true))
    os << "W: " << t.background() << ".\n";
  for (const Default& d : t.defaults()) {
    os << d.name << ": ";
    if (!d.prec.is_constant(true)) os << d.prec << ' ';
    os << ": ";
    if (!d.just.is_constant(true)) os << d.just << ' ';
    os << "/ " << d.cons << ".\n";
  }
  return os.str();
}

}  // namespace dlw
