/// The process engine: processes, successfulness, closure, extension
/// computation, skeptical/credulous entailment, fail-safeness and
/// completability, all against one theory and semantics.
///
/// Successfulness and closure of a process depend only on the *set* of its
/// steps, so both are memoized on sorted index sets; the per-step
/// consistency and entailment tests are memoized the same way.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <dlw/semantics.hpp>
#include <dlw/theory.hpp>

namespace dlw {

/// An ordered, duplicate-free sequence of default indices into a theory's
/// default list.
struct Process {
  std::vector<std::size_t> steps;

  Process() = default;
  Process(std::initializer_list<std::size_t> s) : steps(s) {}
  explicit Process(std::vector<std::size_t> s) : steps(std::move(s)) {}

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  bool contains(std::size_t i) const {
    return std::find(steps.begin(), steps.end(), i) != steps.end();
  }

  friend bool operator==(const Process& a, const Process& b) {
    return a.steps == b.steps;
  }
  friend bool operator<(const Process& a, const Process& b) {
    return a.steps < b.steps;
  }
};

inline std::vector<std::string> process_names(const DefaultTheory& t,
                                              const Process& p) {
  std::vector<std::string> out;
  out.reserve(p.size());
  for (std::size_t i : p.steps) out.push_back(t.at(i).name);
  return out;
}

/// One extension: the finite axiom of its deductive closure together with
/// every successful and closed process that generates it.
struct Extension {
  Formula axiom;  // background & consequences of a generating process
  std::vector<Process> witnesses;
};

struct EngineOptions {
  /// Hard cap on prefixes explored by any one search; exceeding it throws.
  std::uint64_t max_prefixes = 1'000'000;
};

class Engine {
 public:
  Engine(DefaultTheory theory, SemanticsSpec spec, EngineOptions opts = {})
      : theory_(std::move(theory)), spec_(std::move(spec)), opts_(opts) {
    if (spec_.requires_normal && !is_normal(theory_, oracle_))
      throw PreconditionError("semantics '" + spec_.name +
                              "' requires a normal default theory");
  }

  const DefaultTheory& theory() const { return theory_; }
  const SemanticsSpec& spec() const { return spec_; }
  const OracleStats& oracle_stats() const { return oracle_.stats(); }
  Oracle& oracle() { return oracle_; }

  /// Definition check: consequences jointly consistent with the background
  /// and every step's precondition entailed by what precedes it.
  bool is_process(const Process& p) {
    validate_indices(p);
    IndexSet prefix;
    for (std::size_t step : p.steps) {
      if (!prec_entailed(prefix, step)) return false;
      insert(prefix, step);
    }
    return oracle_.is_consistent(context(prefix));
  }

  bool is_successful(const Process& p) {
    if (!is_process(p)) throw PreconditionError("not a process");
    return successful_set(to_set(p));
  }

  bool is_closed(const Process& p) {
    if (!is_process(p)) throw PreconditionError("not a process");
    IndexSet s = to_set(p);
    if (!successful_set(s))
      throw PreconditionError("not a successful process");
    return closed_set(s);
  }

  /// All successful and closed processes, in lexicographic order of their
  /// index sequences.
  std::vector<Process> successful_closed_processes() {
    std::vector<Process> out;
    enumerate([&](const Process& p) {
      out.push_back(p);
      return true;
    });
    return out;
  }

  std::optional<Process> first_successful_closed() {
    std::optional<Process> found;
    enumerate([&](const Process& p) {
      found = p;
      return false;  // stop
    });
    return found;
  }

  /// Every process, successful or not (used by cross-checks).
  std::vector<Process> all_processes() {
    std::vector<Process> out;
    std::uint64_t budget = opts_.max_prefixes;
    Process p;
    IndexSet s;
    walk_processes(p, s, budget, out);
    return out;
  }

  /// Extensions: axioms of the successful and closed processes, merged by
  /// logical equivalence. Witness order follows enumeration order.
  /// Reorderings of one step set share an axiom, so the oracle only
  /// compares one representative per set.
  const std::vector<Extension>& extensions() {
    if (!extensions_) {
      std::vector<Extension> exts;
      std::map<IndexSet, std::size_t> by_set;
      for (const Process& p : successful_closed_processes()) {
        IndexSet key = to_set(p);
        auto known = by_set.find(key);
        if (known != by_set.end()) {
          exts[known->second].witnesses.push_back(p);
          continue;
        }
        Formula axiom = axiom_of(p);
        std::size_t slot = exts.size();
        for (std::size_t i = 0; i < exts.size(); ++i) {
          if (oracle_.equivalent(exts[i].axiom, axiom)) {
            slot = i;
            break;
          }
        }
        if (slot == exts.size())
          exts.push_back({axiom, {p}});
        else
          exts[slot].witnesses.push_back(p);
        by_set.emplace(std::move(key), slot);
      }
      extensions_ = std::move(exts);
    }
    return *extensions_;
  }

  Formula axiom_of(const Process& p) {
    Formula axiom = theory_.background();
    for (std::size_t i : p.steps) axiom = axiom & theory_.at(i).cons;
    return axiom;
  }

  /// Entailed by all extensions; vacuously true when there are none.
  bool skeptical_entails(const Formula& q) {
    for (const Extension& e : extensions())
      if (!oracle_.entails({e.axiom}, q)) return false;
    return true;
  }

  /// Entailed by at least one extension; false when there are none.
  bool credulous_entails(const Formula& q) {
    for (const Extension& e : extensions())
      if (oracle_.entails({e.axiom}, q)) return true;
    return false;
  }

  struct FailSafeResult {
    bool fail_safe = true;
    /// A successful process that no successful and closed process extends.
    std::optional<Process> witness;
  };

  /// Exhaustive check that every successful process is a prefix of a
  /// successful and closed one.
  FailSafeResult fail_safe() {
    FailSafeResult result;
    std::uint64_t budget = opts_.max_prefixes;
    Process p;
    IndexSet s;
    reach_all(p, s, budget, &result);
    return result;
  }

  /// True iff some successful and closed process has this exact sequence as
  /// an initial segment.
  bool completable(const Process& prefix) {
    validate_indices(prefix);
    if (!is_process(prefix)) return false;
    IndexSet s = to_set(prefix);
    if (!successful_set(s)) return false;
    std::uint64_t budget = opts_.max_prefixes;
    Process p = prefix;
    return reach_all(p, s, budget, nullptr);
  }

  /// Greedy construction: repeatedly apply the lowest-index default that
  /// keeps the process successful, until closed. Sound and complete for
  /// fail-safe semantics; on others it may get stuck, which is itself a
  /// witness of non-fail-safeness.
  Process construct_extension_greedy() {
    Process p;
    IndexSet s;
    std::uint64_t steps = 0;
    for (;;) {
      if (++steps > opts_.max_prefixes)
        throw ResourceLimitError("greedy construction exceeded step cap");
      if (closed_set(s)) return p;
      bool advanced = false;
      for (std::size_t d = 0; d < theory_.size(); ++d) {
        if (contains(s, d)) continue;
        if (can_extend(s, d) && successful_after(s, d)) {
          p.steps.push_back(d);
          insert(s, d);
          advanced = true;
          break;
        }
      }
      if (!advanced)
        throw StuckError(
            "successful process [" + join_names(p) +
            "] is neither closed nor extensible; the semantics is not "
            "fail-safe on this theory");
    }
  }

 private:
  using IndexSet = std::vector<std::uint32_t>;  // sorted, duplicate-free

  static IndexSet to_set(const Process& p) {
    IndexSet s;
    s.reserve(p.size());
    for (std::size_t i : p.steps) s.push_back(static_cast<std::uint32_t>(i));
    std::sort(s.begin(), s.end());
    return s;
  }
  static void insert(IndexSet& s, std::size_t d) {
    s.insert(std::lower_bound(s.begin(), s.end(), d),
             static_cast<std::uint32_t>(d));
  }
  static void erase(IndexSet& s, std::size_t d) {
    s.erase(std::lower_bound(s.begin(), s.end(), d));
  }
  static bool contains(const IndexSet& s, std::size_t d) {
    return std::binary_search(s.begin(), s.end(),
                              static_cast<std::uint32_t>(d));
  }

  void validate_indices(const Process& p) const {
    std::set<std::size_t> seen;
    for (std::size_t i : p.steps) {
      if (i >= theory_.size())
        throw ValidationError("default index " + std::to_string(i) +
                              " out of range");
      if (!seen.insert(i).second)
        throw ValidationError("duplicated default in process");
    }
  }

  std::vector<Formula> context(const IndexSet& s) const {
    std::vector<Formula> ctx;
    ctx.reserve(s.size() + 1);
    ctx.push_back(theory_.background());
    for (std::uint32_t i : s) ctx.push_back(theory_.at(i).cons);
    return ctx;
  }

  // Memoized primitive tests. Order-independence of the consistency tests
  // makes the set a sound key.
  bool prec_entailed(const IndexSet& s, std::size_t d) {
    return memo(prec_memo_, s, d, [&] {
      return oracle_.entails(context(s), theory_.at(d).prec);
    });
  }
  bool cons_consistent(const IndexSet& s, std::size_t d) {
    return memo(cons_memo_, s, d, [&] {
      auto ctx = context(s);
      ctx.push_back(theory_.at(d).cons);
      return oracle_.is_consistent(ctx);
    });
  }
  bool just_consistent(const IndexSet& s, std::size_t d) {
    return memo(just_memo_, s, d, [&] {
      auto ctx = context(s);
      ctx.push_back(theory_.at(d).just);
      return oracle_.is_consistent(ctx);
    });
  }

  /// W u cons(s) u cons(d) consistent and prec(d) entailed: p.[d] is a
  /// process whenever p with step set s is.
  bool can_extend(const IndexSet& s, std::size_t d) {
    return prec_entailed(s, d) && cons_consistent(s, d);
  }

  bool successful_set(const IndexSet& s) {
    auto it = success_memo_.find(s);
    if (it != success_memo_.end()) return it->second;
    bool ok = true;
    if (spec_.successfulness == Successfulness::Local) {
      for (std::uint32_t d : s)
        if (!just_consistent(s, d)) {
          ok = false;
          break;
        }
    } else {
      auto ctx = context(s);
      for (std::uint32_t d : s) ctx.push_back(theory_.at(d).just);
      ok = oracle_.is_consistent(ctx);
    }
    success_memo_.emplace(s, ok);
    return ok;
  }

  bool successful_after(const IndexSet& s, std::size_t d) {
    IndexSet ext = s;
    insert(ext, d);
    return successful_set(ext);
  }

  bool closed_set(const IndexSet& s) {
    auto it = closed_memo_.find(s);
    if (it != closed_memo_.end()) return it->second;
    bool closed = true;
    for (std::size_t d = 0; d < theory_.size() && closed; ++d) {
      if (contains(s, d)) continue;
      if (spec_.closure == Closure::Inapplicability) {
        if (prec_entailed(s, d) && just_consistent(s, d)) closed = false;
      } else {
        if (can_extend(s, d) && successful_after(s, d)) closed = false;
      }
    }
    closed_memo_.emplace(s, closed);
    return closed;
  }

  void charge(std::uint64_t& budget) const {
    if (budget == 0)
      throw ResourceLimitError(
          "search explored more than " + std::to_string(opts_.max_prefixes) +
          " prefixes (see DLW_MAX_PREFIXES)");
    --budget;
  }

  /// Depth-first search over successful processes in index order; the sink
  /// sees successful and closed processes in lexicographic order and may
  /// stop the search by returning false.
  void enumerate(const std::function<bool(const Process&)>& sink) {
    std::uint64_t budget = opts_.max_prefixes;
    Process p;
    IndexSet s;
    dfs(p, s, budget, sink);
  }

  bool dfs(Process& p, IndexSet& s, std::uint64_t& budget,
           const std::function<bool(const Process&)>& sink) {
    charge(budget);
    if (closed_set(s) && !sink(p)) return false;
    for (std::size_t d = 0; d < theory_.size(); ++d) {
      if (contains(s, d)) continue;
      if (!can_extend(s, d) || !successful_after(s, d)) continue;
      p.steps.push_back(d);
      insert(s, d);
      bool go_on = dfs(p, s, budget, sink);
      p.steps.pop_back();
      erase(s, d);
      if (!go_on) return false;
    }
    return true;
  }

  void walk_processes(Process& p, IndexSet& s, std::uint64_t& budget,
                      std::vector<Process>& out) {
    charge(budget);
    out.push_back(p);
    for (std::size_t d = 0; d < theory_.size(); ++d) {
      if (contains(s, d)) continue;
      if (!can_extend(s, d)) continue;
      p.steps.push_back(d);
      insert(s, d);
      walk_processes(p, s, budget, out);
      p.steps.pop_back();
      erase(s, d);
    }
  }

  /// reach(s): some successful and closed process extends step set s.
  /// Traverses every reachable successful set; when collecting for the
  /// fail-safe check, records the first dead end found.
  bool reach_all(Process& p, IndexSet& s, std::uint64_t& budget,
                 FailSafeResult* collect) {
    auto it = reach_memo_.find(s);
    if (it != reach_memo_.end() && !collect) return it->second;
    charge(budget);
    bool reach = closed_set(s);
    for (std::size_t d = 0; d < theory_.size(); ++d) {
      if (contains(s, d)) continue;
      if (!can_extend(s, d) || !successful_after(s, d)) continue;
      p.steps.push_back(d);
      insert(s, d);
      reach = reach_all(p, s, budget, collect) || reach;
      p.steps.pop_back();
      erase(s, d);
      if (reach && !collect) break;
    }
    if (!reach && collect && !collect->witness) {
      collect->fail_safe = false;
      collect->witness = p;
    }
    reach_memo_[s] = reach;
    return reach;
  }

  template <typename Map, typename Fn>
  bool memo(Map& m, const IndexSet& s, std::size_t d, Fn&& compute) {
    auto key = std::make_pair(s, static_cast<std::uint32_t>(d));
    auto it = m.find(key);
    if (it != m.end()) return it->second;
    bool v = compute();
    m.emplace(std::move(key), v);
    return v;
  }

  std::string join_names(const Process& p) const {
    std::string out;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
      if (i) out += ", ";
      out += theory_.at(p.steps[i]).name;
    }
    return out;
  }

  DefaultTheory theory_;
  SemanticsSpec spec_;
  EngineOptions opts_;
  Oracle oracle_;

  std::map<std::pair<IndexSet, std::uint32_t>, bool> prec_memo_, cons_memo_,
      just_memo_;
  std::map<IndexSet, bool> success_memo_, closed_memo_, reach_memo_;
  std::optional<std::vector<Extension>> extensions_;
};

}  // namespace dlw
