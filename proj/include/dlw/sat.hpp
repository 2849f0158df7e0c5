/// The consistency oracle: a complete DPLL procedure with unit propagation
/// and deterministic lexicographic branching, plus entailment, equivalence
/// and var-equivalence built on top of it.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <vector>

#include <dlw/cnf.hpp>
#include <dlw/formula.hpp>

namespace dlw {

struct OracleStats {
  std::uint64_t calls = 0;
  std::uint64_t decisions = 0;
};

namespace detail {

struct IndexedCnf {
  // Literals as +/-(index+1); variable indices follow lexicographic atom
  // order, which fixes the branching order.
  std::vector<std::vector<int>> clauses;
  std::size_t num_vars = 0;
};

inline IndexedCnf index_clauses(const std::vector<Clause>& cls) {
  std::set<Atom> atoms;
  for (const Clause& c : cls)
    for (const Literal& l : c) atoms.insert(l.atom);
  std::map<Atom, int> index;
  int next = 1;
  for (const Atom& a : atoms) index.emplace(a, next++);

  IndexedCnf out;
  out.num_vars = atoms.size();
  out.clauses.reserve(cls.size());
  for (const Clause& c : cls) {
    std::vector<int> ic;
    ic.reserve(c.size());
    for (const Literal& l : c)
      ic.push_back(l.negated ? -index.at(l.atom) : index.at(l.atom));
    out.clauses.push_back(std::move(ic));
  }
  return out;
}

inline bool clause_satisfied(const std::vector<int>& c,
                             const std::vector<signed char>& asg) {
  for (int lit : c) {
    signed char v = asg[static_cast<std::size_t>(std::abs(lit))];
    if (v != -1 && (lit > 0) == (v == 1)) return true;
  }
  return false;
}

inline bool dpll(const std::vector<std::vector<int>>& clauses,
                 std::vector<signed char>& asg, OracleStats& stats) {
  std::vector<int> trail;

  // Unit propagation to fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : clauses) {
      int unassigned = 0;
      int unit = 0;
      bool sat = false;
      for (int lit : c) {
        signed char v = asg[static_cast<std::size_t>(std::abs(lit))];
        if (v == -1) {
          ++unassigned;
          unit = lit;
          if (unassigned > 1) continue;
        } else if ((lit > 0) == (v == 1)) {
          sat = true;
          break;
        }
      }
      if (sat) continue;
      if (unassigned == 0) {
        for (int lit : trail) asg[static_cast<std::size_t>(std::abs(lit))] = -1;
        return false;
      }
      if (unassigned == 1) {
        asg[static_cast<std::size_t>(std::abs(unit))] = unit > 0 ? 1 : 0;
        trail.push_back(unit);
        changed = true;
      }
    }
  }

  bool all_sat = true;
  for (const auto& c : clauses)
    if (!clause_satisfied(c, asg)) {
      all_sat = false;
      break;
    }
  if (all_sat) return true;

  std::size_t branch = 0;
  for (std::size_t v = 1; v < asg.size(); ++v)
    if (asg[v] == -1) {
      branch = v;
      break;
    }
  if (branch == 0) {
    // Fully assigned and some clause unsatisfied: contradiction was
    // already caught above, so this point is unreachable.
    for (int lit : trail) asg[static_cast<std::size_t>(std::abs(lit))] = -1;
    return false;
  }

  ++stats.decisions;
  for (signed char value : {static_cast<signed char>(1),
                            static_cast<signed char>(0)}) {
    asg[branch] = value;
    if (dpll(clauses, asg, stats)) return true;
  }
  asg[branch] = -1;
  for (int lit : trail) asg[static_cast<std::size_t>(std::abs(lit))] = -1;
  return false;
}

}  // namespace detail

/// Complete decision procedures. Stateless apart from per-session counters.
class Oracle {
 public:
  /// True iff the conjunction of fs is satisfiable. The empty set is
  /// consistent.
  bool is_consistent(const std::vector<Formula>& fs) {
    ++stats_.calls;
    Formula all = conjunction(fs);
    auto cnf = detail::index_clauses(to_clauses(all));
    std::vector<signed char> asg(cnf.num_vars + 1, -1);
    return detail::dpll(cnf.clauses, asg, stats_);
  }

  bool is_consistent(const Formula& f) {
    return is_consistent(std::vector<Formula>{f});
  }

  /// True iff fs together with the negation of g is inconsistent.
  bool entails(std::vector<Formula> fs, const Formula& g) {
    fs.push_back(!g);
    return !is_consistent(fs);
  }

  bool equivalent(const Formula& f, const Formula& g) {
    return entails({f}, g) && entails({g}, f);
  }

  /// True iff f and g have the same consequences over the keep alphabet.
  /// Decided by brute-force model projection: for every assignment of the
  /// keep atoms, f and g must be satisfiable under it alike.
  bool var_equivalent(const Formula& f, const Formula& g,
                      const std::set<Atom>& keep) {
    if (keep.size() > 16)
      throw ResourceLimitError(
          "var-equivalence projection over more than 16 atoms");
    std::vector<Atom> ks(keep.begin(), keep.end());
    const std::size_t n = ks.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<Formula> lits;
      lits.reserve(n + 1);
      for (std::size_t i = 0; i < n; ++i) {
        Formula v = Formula::var(ks[i]);
        lits.push_back((mask >> i) & 1 ? v : !v);
      }
      lits.push_back(f);
      bool in_f = is_consistent(lits);
      lits.back() = g;
      if (in_f != is_consistent(lits)) return false;
    }
    return true;
  }

  const OracleStats& stats() const { return stats_; }

 private:
  OracleStats stats_;
};

}  // namespace dlw
