/// Independent oracles and corpus-driven property checks. Everything here
/// validates the engine and the translations by brute force at desk scale:
/// the extension oracle recomputes Reiter extensions by a subset sweep that
/// shares nothing with the process search, and the simulation checks verify
/// the correspondence statements exhaustively on small theories.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <dlw/jsonio.hpp>
#include <dlw/parser.hpp>
#include <dlw/translate.hpp>

namespace dlw::verify {

/// splitmix64; self-contained so corpora are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
  bool chance(std::uint64_t percent) { return below(100) < percent; }

 private:
  std::uint64_t state_;
};

struct CorpusParams {
  std::size_t max_defaults = 3;
  std::size_t max_atoms = 3;
  std::size_t formula_depth = 3;
  std::uint64_t seed = 0;
  std::size_t count = 100;
};

namespace detail {

inline Formula random_nnf(Rng& rng, const std::vector<Atom>& pool,
                          std::size_t depth) {
  if (depth == 0 || rng.chance(40)) {
    Formula lit = Formula::var(pool[rng.below(pool.size())]);
    return rng.chance(50) ? lit : !lit;
  }
  Formula a = random_nnf(rng, pool, depth - 1);
  Formula b = random_nnf(rng, pool, depth - 1);
  return rng.chance(50) ? (a & b) : (a | b);
}

inline std::vector<Atom> atom_pool(std::size_t n) {
  std::vector<Atom> pool;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < 26)
      pool.emplace_back(std::string(1, static_cast<char>('a' + i)));
    else
      pool.emplace_back("x" + std::to_string(i));
  }
  return pool;
}

}  // namespace detail

/// Deterministic function of (params, index). The background is consistent
/// by construction: inconsistent draws are redrawn.
inline DefaultTheory random_theory(const CorpusParams& p, std::size_t index) {
  Rng rng(p.seed * 0x9E3779B97F4A7C15ull + index + 1);
  std::vector<Atom> pool = detail::atom_pool(std::max<std::size_t>(p.max_atoms,
                                                                   1));
  Oracle oracle;

  Formula background = Formula::constant(true);
  if (!rng.chance(50)) {
    for (int tries = 0; tries < 64; ++tries) {
      Formula w = detail::random_nnf(rng, pool, p.formula_depth);
      if (oracle.is_consistent(w)) {
        background = w;
        break;
      }
    }
  }

  const std::size_t m = rng.below(p.max_defaults + 1);
  std::vector<Default> defaults;
  for (std::size_t i = 0; i < m; ++i) {
    Formula prec = rng.chance(35)
                       ? Formula::constant(true)
                       : detail::random_nnf(rng, pool, p.formula_depth);
    Formula just = rng.chance(20)
                       ? Formula::constant(true)
                       : detail::random_nnf(rng, pool, p.formula_depth);
    Formula cons = detail::random_nnf(rng, pool, p.formula_depth);
    defaults.push_back({"d" + std::to_string(i + 1), prec, just, cons});
  }
  return DefaultTheory(std::move(background), std::move(defaults));
}

/// The normal restriction of a theory: every justification replaced by the
/// consequence.
inline DefaultTheory make_normal(const DefaultTheory& t) {
  std::vector<Default> defaults;
  for (const Default& d : t.defaults())
    defaults.push_back({d.name, d.prec, d.cons, d.cons});
  return DefaultTheory(t.background(), std::move(defaults));
}

/// Reiter extensions without processes: for every subset S of the defaults,
/// accept Cn(W u cons(S)) iff the classical applicability fixpoint built
/// against that candidate regenerates exactly S. Independent of the
/// operational engine; shares only the formula and oracle layers.
inline std::vector<Formula> reiter_fixpoint_extensions(const DefaultTheory& t,
                                                       Oracle& oracle) {
  const std::size_t m = t.size();
  if (m > 12)
    throw GuardError("subset sweep guard: more than 12 defaults");

  std::vector<Formula> extensions;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    Formula axiom = t.background();
    for (std::size_t i = 0; i < m; ++i)
      if ((mask >> i) & 1) axiom = axiom & t.at(i).cons;

    std::uint64_t generated = 0;
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<Formula> closure{t.background()};
      for (std::size_t i = 0; i < m; ++i)
        if ((generated >> i) & 1) closure.push_back(t.at(i).cons);
      for (std::size_t i = 0; i < m; ++i) {
        if ((generated >> i) & 1) continue;
        if (oracle.entails(closure, t.at(i).prec) &&
            oracle.is_consistent({axiom, t.at(i).just})) {
          generated |= std::uint64_t{1} << i;
          changed = true;
        }
      }
    }
    if (generated != mask) continue;

    bool duplicate = false;
    for (const Formula& e : extensions)
      if (oracle.equivalent(e, axiom)) {
        duplicate = true;
        break;
      }
    if (!duplicate) extensions.push_back(axiom);
  }
  return extensions;
}

struct Finding {
  std::string theory_id;
  std::string property;
  bool passed = true;
  nlohmann::json counterexample;  // replayable: theory text plus the item

  nlohmann::json to_json() const {
    return {{"theory", theory_id},
            {"property", property},
            {"pass", passed},
            {"counterexample", counterexample}};
  }
};

struct Report {
  std::vector<Finding> findings;
  std::size_t guard_skips = 0;

  bool all_passed() const {
    for (const Finding& f : findings)
      if (!f.passed) return false;
    return true;
  }
  void add(Finding f) { findings.push_back(std::move(f)); }
  void merge(Report other) {
    for (Finding& f : other.findings) findings.push_back(std::move(f));
    guard_skips += other.guard_skips;
  }
};

namespace detail {

inline nlohmann::json process_cex(const DefaultTheory& t, const Process& p) {
  return {{"theory", serialize_theory(t)}, {"process", to_json(t, p)}};
}

}  // namespace detail

/// The suite invariant: on every process of the theory, the circuit agrees
/// with successful && closed.
inline Finding check_circuit(const DefaultTheory& t, const SemanticsSpec& s,
                             const CheckSuite& suite, const std::string& id,
                             const EngineOptions& opts = {}) {
  Engine engine(t, s, opts);
  Oracle oracle;
  for (const Process& p : engine.all_processes()) {
    bool expected = engine.is_successful(p) && engine.is_closed(p);
    bool got = circuit_accepts(suite, t, p, oracle);
    if (expected != got) {
      auto cex = detail::process_cex(t, p);
      cex["circuit"] = got;
      cex["successful_and_closed"] = expected;
      return {id, "circuit-invariant", false, cex};
    }
  }
  return {id, "circuit-invariant", true, nullptr};
}

namespace detail {

inline void require_simulation_scale(const DefaultTheory& t,
                                     std::size_t max_defaults = 2) {
  if (t.size() > max_defaults)
    throw GuardError("simulation sweep guard: more than " +
                     std::to_string(max_defaults) + " source defaults");
}

inline std::vector<Formula> extension_axioms(Engine& e) {
  std::vector<Formula> out;
  for (const Extension& x : e.extensions()) out.push_back(x.axiom);
  return out;
}

/// Both inclusions of the extension quotient sets modulo var-equivalence
/// w.r.t. keep.
inline bool quotients_equal(Oracle& oracle, const std::vector<Formula>& as,
                            const std::vector<Formula>& bs,
                            const std::set<Atom>& keep,
                            std::string* detail_out) {
  for (const Formula& a : as) {
    bool found = false;
    for (const Formula& b : bs)
      if (oracle.var_equivalent(a, b, keep)) {
        found = true;
        break;
      }
    if (!found) {
      if (detail_out) *detail_out = "unmatched source class: " + a.str();
      return false;
    }
  }
  for (const Formula& b : bs) {
    bool found = false;
    for (const Formula& a : as)
      if (oracle.var_equivalent(a, b, keep)) {
        found = true;
        break;
      }
    if (!found) {
      if (detail_out) *detail_out = "unmatched target class: " + b.str();
      return false;
    }
  }
  return true;
}

}  // namespace detail

/// Exhaustive verification of the simulation: circuit invariant, phase
/// structure of the simulation's successful and closed processes, process
/// back-mapping, output-default selection, and both var-equivalence
/// correspondence directions.
inline Report check_simulation(const DefaultTheory& t, const SemanticsSpec& s,
                               const Formula& F, const std::string& id,
                               const EngineOptions& opts = {}) {
  detail::require_simulation_scale(t);
  Report report;
  Oracle oracle;
  SimulationArtifacts art = build_simulation(t, s, F);
  const std::size_t m = t.size();
  const std::size_t u = art.checks.count();

  report.add(check_circuit(t, s, art.checks, id, opts));

  Engine source(t, s, opts);
  Engine sim(art.theory, reiter_semantics(), opts);
  const std::vector<Process> sim_processes = sim.successful_closed_processes();

  // Phase structure: one of a_i/n_i per source default in the first m
  // steps, one of v_i/g_i per check in the next u, one z-default last.
  {
    Finding f{id, "phase-structure", true, nullptr};
    for (const Process& p : sim_processes) {
      bool ok = p.size() == m + u + 1;
      std::set<std::size_t> chosen, checked;
      for (std::size_t pos = 0; ok && pos < p.size(); ++pos) {
        const FamilyTag& tag = art.family.at(p.steps[pos]);
        if (pos < m)
          ok = (tag.family == Family::Application ||
                tag.family == Family::NonApplication) &&
               chosen.insert(tag.index).second;
        else if (pos < m + u)
          ok = (tag.family == Family::CheckSat ||
                tag.family == Family::CheckUnsat) &&
               checked.insert(tag.index).second;
        else
          ok = tag.family == Family::Output;
      }
      if (!ok) {
        f.passed = false;
        f.counterexample = detail::process_cex(art.theory, p);
        break;
      }
    }
    report.add(f);
  }

  // Back-mapping: the simulated process is a process of the source theory,
  // and z1 was chosen exactly when it is successful and closed there.
  {
    Finding f{id, "simulated-process", true, nullptr};
    for (const Process& p : sim_processes) {
      Process op = extract_simulated(art, p, sim);
      bool is_proc = source.is_process(op);
      bool ok = is_proc;
      if (ok) {
        bool source_accepts =
            source.is_successful(op) && source.is_closed(op);
        bool picked_z1 = false;
        for (std::size_t step : p.steps)
          if (art.family.at(step).family == Family::Output)
            picked_z1 = art.family.at(step).index == 1;
        ok = source_accepts == picked_z1;
      }
      if (!ok) {
        f.passed = false;
        f.counterexample = detail::process_cex(art.theory, p);
        f.counterexample["simulated"] = to_json(t, op);
        break;
      }
    }
    report.add(f);
  }

  // Extension correspondence, both directions.
  {
    std::vector<Formula> source_exts = detail::extension_axioms(source);
    std::vector<Formula> sim_exts = detail::extension_axioms(sim);

    Finding fwd{id, "forward-correspondence", true, nullptr};
    for (const Formula& e : source_exts) {
      bool found = false;
      for (const Formula& e2 : sim_exts)
        if (oracle.var_equivalent(e, e2, art.original_atoms)) {
          found = true;
          break;
        }
      if (!found) {
        fwd.passed = false;
        fwd.counterexample = {{"theory", serialize_theory(t)},
                              {"extension", e.str()}};
        break;
      }
    }
    report.add(fwd);

    Finding bwd{id, "backward-correspondence", true, nullptr};
    for (const Formula& e2 : sim_exts) {
      bool found = oracle.var_equivalent(e2, F, art.original_atoms);
      for (const Formula& e : source_exts) {
        if (found) break;
        found = oracle.var_equivalent(e2, e, art.original_atoms);
      }
      if (!found) {
        bwd.passed = false;
        bwd.counterexample = {{"theory", serialize_theory(art.theory)},
                              {"extension", e2.str()}};
        break;
      }
    }
    report.add(bwd);
  }
  return report;
}

/// Faithfulness: output is normal, has exactly 2m + 2u + 2 defaults, and its
/// extension classes modulo var-equivalence w.r.t. the source alphabet are
/// exactly the source's.
inline Report check_faithful(const DefaultTheory& t, const SemanticsSpec& s,
                             const std::string& id,
                             const EngineOptions& opts = {}) {
  detail::require_simulation_scale(t);
  Report report;
  Oracle oracle;
  SimulationArtifacts art = faithful_translate(t, s, opts);

  report.add({id, "faithful-normal", is_normal(art.theory, oracle), nullptr});
  const std::size_t expected =
      2 * t.size() + 2 * art.checks.count() + 2;
  Finding size{id, "faithful-size", art.theory.size() == expected, nullptr};
  if (!size.passed)
    size.counterexample = {{"theory", serialize_theory(t)},
                           {"expected", expected},
                           {"actual", art.theory.size()}};
  report.add(size);

  Engine source(t, s, opts);
  Engine sim(art.theory, reiter_semantics(), opts);
  std::string why;
  Finding quot{id, "faithful-quotient", true, nullptr};
  if (!detail::quotients_equal(oracle, detail::extension_axioms(source),
                               detail::extension_axioms(sim),
                               art.original_atoms, &why)) {
    quot.passed = false;
    quot.counterexample = {{"theory", serialize_theory(t)}, {"detail", why}};
  }
  report.add(quot);
  return report;
}

/// The almost-consequence-preserving translation: for every query q,
/// skeptical entailment of q in the source matches skeptical entailment of
/// flag | q in the skeptical build, and dually for credulous with flag & q.
inline Report check_almost(const DefaultTheory& t, const SemanticsSpec& s,
                           const std::vector<Formula>& queries,
                           const std::string& id,
                           const EngineOptions& opts = {}) {
  detail::require_simulation_scale(t, 3);
  Report report;
  Engine source(t, s, opts);
  if (source.extensions().empty())
    throw NoExtensionError("almost-translation check requires extensions");

  AlmostTranslation sk = almost_translate(t, s, Query::Mode::Skeptical);
  AlmostTranslation cr = almost_translate(t, s, Query::Mode::Credulous);
  Engine sk_engine(sk.artifacts.theory, reiter_semantics(), opts);
  Engine cr_engine(cr.artifacts.theory, reiter_semantics(), opts);

  Finding f_sk{id, "almost-skeptical", true, nullptr};
  Finding f_cr{id, "almost-credulous", true, nullptr};
  for (const Formula& q : queries) {
    if (f_sk.passed) {
      bool lhs = source.skeptical_entails(q);
      bool rhs = sk_engine.skeptical_entails(
          transform_query(q, Query::Mode::Skeptical, sk.flag));
      if (lhs != rhs) {
        f_sk.passed = false;
        f_sk.counterexample = {{"theory", serialize_theory(t)},
                               {"query", q.str()},
                               {"source", lhs},
                               {"translated", rhs}};
      }
    }
    if (f_cr.passed) {
      bool lhs = source.credulous_entails(q);
      bool rhs = cr_engine.credulous_entails(
          transform_query(q, Query::Mode::Credulous, cr.flag));
      if (lhs != rhs) {
        f_cr.passed = false;
        f_cr.counterexample = {{"theory", serialize_theory(t)},
                               {"query", q.str()},
                               {"source", lhs},
                               {"translated", rhs}};
      }
    }
  }
  report.add(f_sk);
  report.add(f_cr);
  return report;
}

/// Operational extensions against the subset-fixpoint oracle, modulo
/// logical equivalence.
inline Finding check_oracle_equivalence(const DefaultTheory& t,
                                        const std::string& id,
                                        const EngineOptions& opts = {}) {
  Oracle oracle;
  Engine engine(t, reiter_semantics(), opts);
  std::vector<Formula> operational = detail::extension_axioms(engine);
  std::vector<Formula> fixpoint = reiter_fixpoint_extensions(t, oracle);

  auto covered = [&](const std::vector<Formula>& ys, const Formula& x) {
    for (const Formula& y : ys)
      if (oracle.equivalent(x, y)) return true;
    return false;
  };
  for (const Formula& e : operational)
    if (!covered(fixpoint, e))
      return {id, "oracle-equivalence", false,
              {{"theory", serialize_theory(t)},
               {"operational_only", e.str()}}};
  for (const Formula& e : fixpoint)
    if (!covered(operational, e))
      return {id, "oracle-equivalence", false,
              {{"theory", serialize_theory(t)}, {"fixpoint_only", e.str()}}};
  return {id, "oracle-equivalence", true, nullptr};
}

/// Process-level regularity properties: prefixes of processes are
/// processes, successfulness is antimonotonic, and successfulness/closure
/// are invariant under permutations that remain processes.
inline Report check_process_properties(const DefaultTheory& t,
                                       const SemanticsSpec& s,
                                       const std::string& id,
                                       const EngineOptions& opts = {}) {
  Report report;
  Engine engine(t, s, opts);
  Finding prefix{id, "prefix-of-process", true, nullptr};
  Finding anti{id, "successfulness-antimonotonic", true, nullptr};
  Finding perm{id, "permutation-invariance", true, nullptr};

  for (const Process& p : engine.all_processes()) {
    // Prefixes.
    for (std::size_t len = 0; len < p.size(); ++len) {
      Process q(std::vector<std::size_t>(p.steps.begin(),
                                         p.steps.begin() + len));
      if (!engine.is_process(q)) {
        prefix.passed = false;
        prefix.counterexample = detail::process_cex(t, p);
        break;
      }
      if (engine.is_successful(p) && !engine.is_successful(q)) {
        anti.passed = false;
        anti.counterexample = detail::process_cex(t, p);
        break;
      }
    }

    // Permutations.
    if (perm.passed) {
      bool succ = engine.is_successful(p);
      std::vector<std::size_t> sorted = p.steps;
      std::sort(sorted.begin(), sorted.end());
      do {
        Process q(sorted);
        if (!engine.is_process(q)) continue;
        if (engine.is_successful(q) != succ ||
            (succ && engine.is_closed(q) != engine.is_closed(p))) {
          perm.passed = false;
          auto cex = detail::process_cex(t, p);
          cex["permutation"] = to_json(t, q);
          perm.counterexample = cex;
          break;
        }
      } while (std::next_permutation(sorted.begin(), sorted.end()));
    }
  }
  report.add(prefix);
  report.add(anti);
  report.add(perm);
  return report;
}

/// Turner-style reasoning-about-actions theory; the canonical non-fail-safe
/// instance for Reiter's conditions.
inline DefaultTheory turner_theory() {
  return parse_theory(
      "d1: : h / h.\n"
      "d2: : ~h / ~h.\n"
      "d3: ~h : / false.\n");
}

/// Fail-safety asymmetry across a corpus: constrained is fail-safe
/// everywhere, Reiter is fail-safe on normal restrictions (which then have
/// extensions), and at least one theory witnesses Reiter failing.
inline Report check_failsafe_asymmetry(const CorpusParams& params,
                                       const EngineOptions& opts = {}) {
  Report report;
  Finding constrained_ok{"corpus", "constrained-fail-safe", true, nullptr};
  Finding normal_ok{"corpus", "normal-reiter-fail-safe", true, nullptr};
  Finding normal_ext{"corpus", "normal-reiter-has-extension", true, nullptr};
  std::size_t failures_found = 0;

  {
    Engine turner(turner_theory(), reiter_semantics(), opts);
    auto fs = turner.fail_safe();
    if (!fs.fail_safe) ++failures_found;
    Finding f{"turner", "reiter-not-fail-safe-on-turner", !fs.fail_safe,
              nullptr};
    if (fs.witness)
      f.counterexample = {{"witness", to_json(turner.theory(), *fs.witness)}};
    report.add(f);
  }

  for (std::size_t i = 0; i < params.count; ++i) {
    const std::string id =
        "corpus-" + std::to_string(params.seed) + "-" + std::to_string(i);
    DefaultTheory t = random_theory(params, i);

    Engine constrained(t, constrained_semantics(), opts);
    auto fs = constrained.fail_safe();
    if (!fs.fail_safe && constrained_ok.passed) {
      constrained_ok.passed = false;
      constrained_ok.counterexample = {
          {"theory", serialize_theory(t)},
          {"witness", to_json(t, *fs.witness)},
          {"id", id}};
    }

    Engine reiter(t, reiter_semantics(), opts);
    if (!reiter.fail_safe().fail_safe) ++failures_found;

    DefaultTheory tn = make_normal(t);
    Engine normal(tn, reiter_semantics(), opts);
    auto fsn = normal.fail_safe();
    if (!fsn.fail_safe && normal_ok.passed) {
      normal_ok.passed = false;
      normal_ok.counterexample = {{"theory", serialize_theory(tn)},
                                  {"witness", to_json(tn, *fsn.witness)},
                                  {"id", id}};
    }
    if (normal.extensions().empty() && normal_ext.passed) {
      normal_ext.passed = false;
      normal_ext.counterexample = {{"theory", serialize_theory(tn)},
                                   {"id", id}};
    }
  }
  report.add(constrained_ok);
  report.add(normal_ok);
  report.add(normal_ext);
  report.add({"corpus", "reiter-failure-witnessed", failures_found > 0,
              nullptr});
  return report;
}

/// Scans corpus indices until `needed` theories with at least one extension
/// under s have been collected.
inline std::vector<std::pair<std::string, DefaultTheory>>
corpus_with_extensions(const CorpusParams& params, const SemanticsSpec& s,
                       std::size_t needed, const EngineOptions& opts = {}) {
  std::vector<std::pair<std::string, DefaultTheory>> out;
  for (std::size_t i = 0; out.size() < needed; ++i) {
    if (i > needed * 100 + 1000)
      throw GuardError("corpus scan failed to find enough theories with "
                       "extensions");
    DefaultTheory t = random_theory(params, i);
    Engine engine(t, s, opts);
    if (!engine.extensions().empty())
      out.emplace_back("corpus-" + std::to_string(params.seed) + "-" +
                           std::to_string(i),
                       std::move(t));
  }
  return out;
}

/// Query set for the almost-translation checks: every literal plus false.
inline std::vector<Formula> literal_queries(const DefaultTheory& t) {
  std::vector<Formula> out;
  for (const Atom& a : t.atoms()) {
    out.push_back(Formula::var(a));
    out.push_back(!Formula::var(a));
  }
  out.push_back(Formula::constant(false));
  return out;
}

}  // namespace dlw::verify
