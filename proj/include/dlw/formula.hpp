/// Propositional formulas as immutable shared trees, plus the elementary
/// operations everything else builds on: renaming, evaluation, constant
/// folding, and variable forgetting.
#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <dlw/errors.hpp>

namespace dlw {

/// A named propositional variable. Names generated by the tool carry the
/// reserved "__" prefix; atoms parsed from user input never do.
class Atom {
 public:
  Atom() = default;
  explicit Atom(std::string name) : name_(std::move(name)) {
    if (!valid_name(name_))
      throw ValidationError("invalid atom name: '" + name_ + "'");
  }

  const std::string& name() const { return name_; }
  bool reserved() const { return name_.rfind("__", 0) == 0; }

  static bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
      return false;
    for (char c : s)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        return false;
    return true;
  }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.name_ == b.name_;
  }
  friend bool operator<(const Atom& a, const Atom& b) {
    return a.name_ < b.name_;
  }

 private:
  std::string name_;
};

/// An injective atom-to-atom substitution, used for alphabet copies.
class Renaming {
 public:
  Renaming() = default;

  void add(const Atom& from, const Atom& to) {
    if (map_.count(from))
      throw ValidationError("renaming already maps '" + from.name() + "'");
    if (range_.count(to))
      throw ValidationError("renaming is not injective at '" + to.name() +
                            "'");
    map_.emplace(from, to);
    range_.insert(to);
  }

  const Atom* find(const Atom& a) const {
    auto it = map_.find(a);
    return it == map_.end() ? nullptr : &it->second;
  }

  Renaming inverse() const {
    Renaming r;
    for (const auto& [from, to] : map_) r.add(to, from);
    return r;
  }

  const std::map<Atom, Atom>& mapping() const { return map_; }
  bool empty() const { return map_.empty(); }

 private:
  std::map<Atom, Atom> map_;
  std::set<Atom> range_;
};

using Assignment = std::map<Atom, bool>;

class Formula {
 public:
  enum class Kind { True, False, Var, Not, And, Or, Implies, Iff };

  /// Default-constructed formulas are the constant true.
  Formula() : node_(true_node()) {}

  static Formula constant(bool v) {
    return Formula(v ? true_node() : false_node());
  }
  static Formula var(Atom a) {
    return Formula(std::make_shared<const Node>(
        Node{Kind::Var, std::move(a), nullptr, nullptr}));
  }
  static Formula var(const std::string& name) { return var(Atom(name)); }
  static Formula implies(const Formula& a, const Formula& b) {
    return make(Kind::Implies, a, b);
  }
  static Formula iff(const Formula& a, const Formula& b) {
    return make(Kind::Iff, a, b);
  }

  friend Formula operator!(const Formula& f) {
    return Formula(std::make_shared<const Node>(
        Node{Kind::Not, Atom{}, f.node_, nullptr}));
  }
  friend Formula operator&(const Formula& a, const Formula& b) {
    return make(Kind::And, a, b);
  }
  friend Formula operator|(const Formula& a, const Formula& b) {
    return make(Kind::Or, a, b);
  }

  Kind kind() const { return node_->kind; }
  bool is_constant(bool v) const {
    return kind() == (v ? Kind::True : Kind::False);
  }

  const Atom& atom() const { return node_->atom; }
  Formula lhs() const { return Formula(node_->a); }
  Formula rhs() const { return Formula(node_->b); }

  /// Structural equality.
  friend bool operator==(const Formula& x, const Formula& y) {
    return eq(x.node_.get(), y.node_.get());
  }

  std::set<Atom> atoms() const {
    std::set<Atom> out;
    collect(node_.get(), out);
    return out;
  }

  bool mentions(const Atom& a) const {
    auto s = atoms();
    return s.count(a) > 0;
  }

  std::string str() const {
    std::ostringstream os;
    print(os, 1);
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Formula& f) {
    f.print(os, 1);
    return os;
  }

 private:
  struct Node {
    Kind kind;
    Atom atom;
    std::shared_ptr<const Node> a, b;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula make(Kind k, const Formula& a, const Formula& b) {
    return Formula(std::make_shared<const Node>(Node{k, Atom{}, a.node_,
                                                     b.node_}));
  }

  static const std::shared_ptr<const Node>& true_node() {
    static const auto n = std::make_shared<const Node>(
        Node{Kind::True, Atom{}, nullptr, nullptr});
    return n;
  }
  static const std::shared_ptr<const Node>& false_node() {
    static const auto n = std::make_shared<const Node>(
        Node{Kind::False, Atom{}, nullptr, nullptr});
    return n;
  }

  static bool eq(const Node* x, const Node* y) {
    if (x == y) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
      case Kind::True:
      case Kind::False:
        return true;
      case Kind::Var:
        return x->atom == y->atom;
      case Kind::Not:
        return eq(x->a.get(), y->a.get());
      default:
        return eq(x->a.get(), y->a.get()) && eq(x->b.get(), y->b.get());
    }
  }

  static void collect(const Node* n, std::set<Atom>& out) {
    switch (n->kind) {
      case Kind::Var:
        out.insert(n->atom);
        break;
      case Kind::Not:
        collect(n->a.get(), out);
        break;
      case Kind::And:
      case Kind::Or:
      case Kind::Implies:
      case Kind::Iff:
        collect(n->a.get(), out);
        collect(n->b.get(), out);
        break;
      default:
        break;
    }
  }

  // Binding strength, loosest to tightest: <-> (1), -> (2), | (3), & (4),
  // ~ (5), leaves (6). '->' is right-associative, '<->' left-associative;
  // printing parenthesizes so that parsing reproduces the exact tree.
  static int prec(Kind k) {
    switch (k) {
      case Kind::Iff: return 1;
      case Kind::Implies: return 2;
      case Kind::Or: return 3;
      case Kind::And: return 4;
      case Kind::Not: return 5;
      default: return 6;
    }
  }

  void print(std::ostream& os, int min_prec) const {
    const int p = prec(kind());
    const bool parens = p < min_prec;
    if (parens) os << '(';
    switch (kind()) {
      case Kind::True: os << "true"; break;
      case Kind::False: os << "false"; break;
      case Kind::Var: os << atom().name(); break;
      case Kind::Not:
        os << '~';
        lhs().print(os, 5);
        break;
      case Kind::And:
        lhs().print(os, 4);
        os << " & ";
        rhs().print(os, 5);
        break;
      case Kind::Or:
        lhs().print(os, 3);
        os << " | ";
        rhs().print(os, 4);
        break;
      case Kind::Implies:
        lhs().print(os, 3);
        os << " -> ";
        rhs().print(os, 2);
        break;
      case Kind::Iff:
        lhs().print(os, 1);
        os << " <-> ";
        rhs().print(os, 2);
        break;
    }
    if (parens) os << ')';
  }

  std::shared_ptr<const Node> node_;
};

inline bool operator!=(const Formula& a, const Formula& b) {
  return !(a == b);
}

/// Left fold of a conjunction; the empty conjunction is true.
inline Formula conjunction(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::constant(true);
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = out & fs[i];
  return out;
}

/// Replaces every atom in the renaming's domain by its image.
inline Formula rename(const Formula& f, const Renaming& r) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return f;
    case K::Var: {
      const Atom* to = r.find(f.atom());
      return to ? Formula::var(*to) : f;
    }
    case K::Not:
      return !rename(f.lhs(), r);
    case K::And:
      return rename(f.lhs(), r) & rename(f.rhs(), r);
    case K::Or:
      return rename(f.lhs(), r) | rename(f.rhs(), r);
    case K::Implies:
      return Formula::implies(rename(f.lhs(), r), rename(f.rhs(), r));
    case K::Iff:
      return Formula::iff(rename(f.lhs(), r), rename(f.rhs(), r));
  }
  throw Error("unreachable");
}

/// Truth-functional evaluation under a total assignment of f's atoms.
inline bool evaluate(const Formula& f, const Assignment& m) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: return true;
    case K::False: return false;
    case K::Var: {
      auto it = m.find(f.atom());
      if (it == m.end())
        throw ValidationError("unassigned atom '" + f.atom().name() + "'");
      return it->second;
    }
    case K::Not: return !evaluate(f.lhs(), m);
    case K::And: return evaluate(f.lhs(), m) && evaluate(f.rhs(), m);
    case K::Or: return evaluate(f.lhs(), m) || evaluate(f.rhs(), m);
    case K::Implies: return !evaluate(f.lhs(), m) || evaluate(f.rhs(), m);
    case K::Iff: return evaluate(f.lhs(), m) == evaluate(f.rhs(), m);
  }
  throw Error("unreachable");
}

/// Replaces the listed atoms by constants; other atoms stay.
inline Formula assign_constants(const Formula& f, const Assignment& m) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return f;
    case K::Var: {
      auto it = m.find(f.atom());
      return it == m.end() ? f : Formula::constant(it->second);
    }
    case K::Not:
      return !assign_constants(f.lhs(), m);
    case K::And:
      return assign_constants(f.lhs(), m) & assign_constants(f.rhs(), m);
    case K::Or:
      return assign_constants(f.lhs(), m) | assign_constants(f.rhs(), m);
    case K::Implies:
      return Formula::implies(assign_constants(f.lhs(), m),
                              assign_constants(f.rhs(), m));
    case K::Iff:
      return Formula::iff(assign_constants(f.lhs(), m),
                          assign_constants(f.rhs(), m));
  }
  throw Error("unreachable");
}

/// Bottom-up constant folding. Preserves logical equivalence.
inline Formula fold_constants(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
    case K::Var:
      return f;
    case K::Not: {
      Formula c = fold_constants(f.lhs());
      if (c.is_constant(true)) return Formula::constant(false);
      if (c.is_constant(false)) return Formula::constant(true);
      return !c;
    }
    case K::And: {
      Formula a = fold_constants(f.lhs());
      Formula b = fold_constants(f.rhs());
      if (a.is_constant(false) || b.is_constant(false))
        return Formula::constant(false);
      if (a.is_constant(true)) return b;
      if (b.is_constant(true)) return a;
      return a & b;
    }
    case K::Or: {
      Formula a = fold_constants(f.lhs());
      Formula b = fold_constants(f.rhs());
      if (a.is_constant(true) || b.is_constant(true))
        return Formula::constant(true);
      if (a.is_constant(false)) return b;
      if (b.is_constant(false)) return a;
      return a | b;
    }
    case K::Implies: {
      Formula a = fold_constants(f.lhs());
      Formula b = fold_constants(f.rhs());
      if (a.is_constant(false) || b.is_constant(true))
        return Formula::constant(true);
      if (a.is_constant(true)) return b;
      if (b.is_constant(false)) return fold_constants(!a);
      return Formula::implies(a, b);
    }
    case K::Iff: {
      Formula a = fold_constants(f.lhs());
      Formula b = fold_constants(f.rhs());
      if (a.is_constant(true)) return b;
      if (b.is_constant(true)) return a;
      if (a.is_constant(false)) return fold_constants(!b);
      if (b.is_constant(false)) return fold_constants(!a);
      return Formula::iff(a, b);
    }
  }
  throw Error("unreachable");
}

/// Strongest consequence of f over the remaining atoms, by iterated Shannon
/// expansion: forget(f, {v}) = f[v/true] | f[v/false]. Exponential in the
/// number of forgotten atoms that actually occur in f.
inline Formula forget(const Formula& f, const std::set<Atom>& vars) {
  Formula out = f;
  for (const Atom& v : vars) {
    if (!out.mentions(v)) continue;
    Formula hi = fold_constants(assign_constants(out, {{v, true}}));
    Formula lo = fold_constants(assign_constants(out, {{v, false}}));
    out = fold_constants(hi | lo);
  }
  return out;
}

}  // namespace dlw
