/// Clausification. Definitional encoding with fresh "__cnf<k>" atoms; the
/// result is equisatisfiable and its models, projected onto the input's
/// atoms, are exactly the input's models.
#pragma once

#include <set>
#include <string>
#include <vector>

#include <dlw/formula.hpp>

namespace dlw {

struct Literal {
  Atom atom;
  bool negated = false;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.atom == b.atom && a.negated == b.negated;
  }
  friend bool operator<(const Literal& a, const Literal& b) {
    if (a.atom < b.atom) return true;
    if (b.atom < a.atom) return false;
    return a.negated < b.negated;
  }
};

using Clause = std::vector<Literal>;

namespace detail {

class Clausifier {
 public:
  explicit Clausifier(const Formula& f) {
    for (const Atom& a : f.atoms()) taken_.insert(a.name());
  }

  std::vector<Clause> clauses;

  Literal neg(Literal l) const { return {l.atom, !l.negated}; }

  Atom fresh() {
    for (;;) {
      std::string name = "__cnf" + std::to_string(next_++);
      if (!taken_.count(name)) return Atom(name);
    }
  }

  // Returns a literal equivalent to the subformula under the emitted
  // definitions. Constants must have been folded away beforehand.
  Literal define(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Var:
        return {f.atom(), false};
      case K::Not:
        return neg(define(f.lhs()));
      case K::And: {
        Literal a = define(f.lhs()), b = define(f.rhs());
        Literal d{fresh(), false};
        clauses.push_back({neg(d), a});
        clauses.push_back({neg(d), b});
        clauses.push_back({neg(a), neg(b), d});
        return d;
      }
      case K::Or: {
        Literal a = define(f.lhs()), b = define(f.rhs());
        Literal d{fresh(), false};
        clauses.push_back({neg(d), a, b});
        clauses.push_back({neg(a), d});
        clauses.push_back({neg(b), d});
        return d;
      }
      case K::Implies: {
        Literal a = define(f.lhs()), b = define(f.rhs());
        Literal d{fresh(), false};
        clauses.push_back({neg(d), neg(a), b});
        clauses.push_back({a, d});
        clauses.push_back({neg(b), d});
        return d;
      }
      case K::Iff: {
        Literal a = define(f.lhs()), b = define(f.rhs());
        Literal d{fresh(), false};
        clauses.push_back({neg(d), neg(a), b});
        clauses.push_back({neg(d), a, neg(b)});
        clauses.push_back({d, a, b});
        clauses.push_back({d, neg(a), neg(b)});
        return d;
      }
      default:
        throw Error("clausifier reached a constant");
    }
  }

  static bool is_literal(const Formula& f) {
    using K = Formula::Kind;
    return f.kind() == K::Var ||
           (f.kind() == K::Not && f.lhs().kind() == K::Var);
  }

  static Literal as_literal(const Formula& f) {
    if (f.kind() == Formula::Kind::Var) return {f.atom(), false};
    return {f.lhs().atom(), true};
  }

 private:
  std::set<std::string> taken_;
  std::size_t next_ = 0;
};

inline void flatten_and(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::And) {
    flatten_and(f.lhs(), out);
    flatten_and(f.rhs(), out);
  } else {
    out.push_back(f);
  }
}

}  // namespace detail

inline std::vector<Clause> to_clauses(const Formula& input) {
  Formula f = fold_constants(input);
  if (f.is_constant(true)) return {};
  if (f.is_constant(false)) return {Clause{}};

  detail::Clausifier cl(input);
  std::vector<Formula> conjuncts;
  detail::flatten_and(f, conjuncts);
  for (const Formula& c : conjuncts) {
    if (detail::Clausifier::is_literal(c)) {
      cl.clauses.push_back({detail::Clausifier::as_literal(c)});
    } else {
      Literal root = cl.define(c);
      cl.clauses.push_back({root});
    }
  }
  return cl.clauses;
}

}  // namespace dlw
