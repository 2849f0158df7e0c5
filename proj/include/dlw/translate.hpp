/// Source-to-source translations from a regular semantics into normal
/// default logic.
///
/// The central construction simulates process building of the source theory
/// inside a normal theory. Per source default d_i two fresh atoms record
/// membership (__c<i>) and the fact that the choice was made (__e<i>); a
/// first block of defaults (families A and N) either applies a copy of d_i
/// over the alphabet copy X_0 or records its non-application. Successfulness
/// and closure of the simulated process reduce to consistency checks
/// delta_1..delta_u over the c-atoms; a second block (families V and G)
/// decides each check on its own fresh alphabet copy X_i and stores the
/// result in __o<i>. A final pair (family Z) evaluates a circuit over the
/// o/c-atoms: z1 emits the simulated consequences over the original
/// alphabet when the circuit accepts, z2 emits the fallback formula F when
/// it rejects.
///
/// Each check gets its own alphabet copy: a shared copy would let the
/// asserted copy of one check contaminate the precondition test of another.
#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <dlw/process.hpp>

namespace dlw {

/// The per-semantics consistency checks and the accepting circuit.
/// Invariant: for every process P of the source theory, wiring c_j to the
/// membership of d_j and o_i to the consistency of delta_i under those
/// memberships makes the circuit evaluate to successful(P) and closed(P).
struct CheckSuite {
  std::vector<Formula> checks;  // delta_i over source atoms plus c-atoms
  Formula circuit;              // over o-atoms and c-atoms only
  std::vector<Atom> c_atoms;    // one per source default
  std::vector<Atom> o_atoms;    // one per check

  std::size_t count() const { return checks.size(); }
};

namespace detail {

inline Atom numbered_atom(const char* stem, std::size_t i) {
  return Atom(std::string("__") + stem + std::to_string(i));
}

inline std::vector<Atom> numbered_atoms(const char* stem, std::size_t n) {
  std::vector<Atom> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) out.push_back(numbered_atom(stem, i));
  return out;
}

/// W & (c_1 -> cons_1) & ... & (c_m -> cons_m): the simulated consequence
/// set as a formula parameterized by the membership atoms.
inline Formula guarded_consequences(const DefaultTheory& t,
                                    const std::vector<Atom>& c_atoms) {
  Formula out = t.background();
  for (std::size_t j = 0; j < t.size(); ++j)
    out = out & Formula::implies(Formula::var(c_atoms[j]), t.at(j).cons);
  return out;
}

inline Formula guarded_justifications(const DefaultTheory& t,
                                      const std::vector<Atom>& c_atoms,
                                      Formula base) {
  for (std::size_t j = 0; j < t.size(); ++j)
    base = base & Formula::implies(Formula::var(c_atoms[j]), t.at(j).just);
  return base;
}

}  // namespace detail

/// Builds the consistency checks and circuit for the given semantics.
/// Supported: reiter (and its normal restriction) and constrained.
inline CheckSuite generate_checks(const DefaultTheory& t,
                                  const SemanticsSpec& s) {
  const std::size_t m = t.size();
  CheckSuite suite;
  suite.c_atoms = detail::numbered_atoms("c", m);
  const Formula applied = detail::guarded_consequences(t, suite.c_atoms);

  const bool reiter_like = s.successfulness == Successfulness::Local &&
                           s.closure == Closure::Inapplicability;
  const bool constrained_like = s.successfulness == Successfulness::Global &&
                                s.closure == Closure::MaximalSuccess;
  if (!reiter_like && !constrained_like)
    throw PreconditionError("unsupported semantics for check generation: " +
                            s.name);

  if (reiter_like) {
    // u = 2m. Check i: the justification of d_i is consistent with the
    // simulated consequences. Check m+i: the precondition of d_i is *not*
    // entailed, i.e. its negation is consistent.
    for (std::size_t i = 0; i < m; ++i)
      suite.checks.push_back(applied & t.at(i).just);
    for (std::size_t i = 0; i < m; ++i)
      suite.checks.push_back(applied & !t.at(i).prec);
    suite.o_atoms = detail::numbered_atoms("o", suite.checks.size());

    // Applied defaults need their justification check to pass; unapplied
    // ones must be blocked on the precondition or the justification.
    Formula circuit = Formula::constant(true);
    for (std::size_t i = 0; i < m; ++i) {
      Formula c = Formula::var(suite.c_atoms[i]);
      Formula o_just = Formula::var(suite.o_atoms[i]);
      Formula o_prec = Formula::var(suite.o_atoms[m + i]);
      circuit = circuit & (Formula::implies(c, o_just) &
                           Formula::implies(!c, o_prec | !o_just));
    }
    suite.circuit = fold_constants(circuit);
    return suite;
  }

  // Constrained: u = 2m + 1. Check i: appending d_i keeps the process
  // globally successful. Check m+i: the precondition of d_i is not
  // entailed. Check 2m+1: the process itself is globally successful.
  const Formula globally =
      detail::guarded_justifications(t, suite.c_atoms, applied);
  for (std::size_t i = 0; i < m; ++i)
    suite.checks.push_back(globally & t.at(i).cons & t.at(i).just);
  for (std::size_t i = 0; i < m; ++i)
    suite.checks.push_back(applied & !t.at(i).prec);
  suite.checks.push_back(globally);
  suite.o_atoms = detail::numbered_atoms("o", suite.checks.size());

  Formula circuit = Formula::var(suite.o_atoms[2 * m]);
  for (std::size_t i = 0; i < m; ++i) {
    Formula c = Formula::var(suite.c_atoms[i]);
    Formula o_ext = Formula::var(suite.o_atoms[i]);
    Formula o_prec = Formula::var(suite.o_atoms[m + i]);
    circuit = circuit & Formula::implies(!c, o_prec | !o_ext);
  }
  suite.circuit = fold_constants(circuit);
  return suite;
}

/// Evaluates the suite on a concrete source process: substitutes the
/// membership values into each check, decides its consistency, and runs the
/// circuit. Equals successful(p) && closed(p) by the suite invariant.
inline bool circuit_accepts(const CheckSuite& suite, const DefaultTheory& t,
                            const Process& p, Oracle& oracle) {
  Assignment env;
  for (std::size_t j = 0; j < t.size(); ++j)
    env[suite.c_atoms[j]] = p.contains(j);
  for (std::size_t i = 0; i < suite.count(); ++i) {
    Formula grounded = fold_constants(assign_constants(suite.checks[i], env));
    env[suite.o_atoms[i]] = oracle.is_consistent(grounded);
  }
  return evaluate(suite.circuit, env);
}

enum class Family { Application, NonApplication, CheckSat, CheckUnsat,
                    Output };

inline char family_code(Family f) {
  switch (f) {
    case Family::Application: return 'A';
    case Family::NonApplication: return 'N';
    case Family::CheckSat: return 'V';
    case Family::CheckUnsat: return 'G';
    case Family::Output: return 'Z';
  }
  return '?';
}

inline Family family_from_code(char c) {
  switch (c) {
    case 'A': return Family::Application;
    case 'N': return Family::NonApplication;
    case 'V': return Family::CheckSat;
    case 'G': return Family::CheckUnsat;
    case 'Z': return Family::Output;
  }
  throw ValidationError(std::string("unknown family code '") + c + "'");
}

struct FamilyTag {
  Family family;
  std::size_t index;  // 1-based: source default for A/N, check for V/G, 1|2 for Z
};

struct SimulationArtifacts {
  DefaultTheory theory;          // the generated normal theory
  std::vector<FamilyTag> family;  // parallel to theory.defaults()
  CheckSuite checks;
  Formula output_formula;        // F, emitted by z2 on rejected simulations
  std::vector<Atom> c_atoms, e_atoms, o_atoms, t_atoms;
  std::vector<Renaming> copies;  // copies[0] = X_0, copies[i] = X_i
  std::set<Atom> original_atoms;  // X
};

namespace detail {

inline Renaming alphabet_copy(const std::set<Atom>& original,
                              std::size_t index) {
  Renaming r;
  for (const Atom& a : original)
    r.add(a, Atom("__x" + std::to_string(index) + "_" + a.name()));
  return r;
}

inline Formula conj_atoms(const std::vector<Atom>& atoms) {
  std::vector<Formula> fs;
  fs.reserve(atoms.size());
  for (const Atom& a : atoms) fs.push_back(Formula::var(a));
  return conjunction(fs);
}

/// The full simulation. success_extra, when present, is conjoined to the
/// accepting output default z1 (used by the credulous almost-translation to
/// mark extensions that stem from real simulated extensions).
inline SimulationArtifacts build_simulation_impl(
    const DefaultTheory& t, const SemanticsSpec& s, const Formula& output,
    const std::optional<Formula>& success_extra) {
  const std::set<Atom> original = t.atoms();
  for (const Atom& a : original)
    if (a.reserved())
      throw ValidationError("cannot translate a theory that already uses "
                            "reserved atoms ('" + a.name() + "')");
  for (const Atom& a : output.atoms())
    if (a.reserved() && !(a == Atom("__a")))
      throw ValidationError("output formula mentions reserved atom '" +
                            a.name() + "' other than the flag __a");

  CheckSuite suite = generate_checks(t, s);
  const std::size_t m = t.size();
  const std::size_t u = suite.count();

  std::vector<Atom> e_atoms = numbered_atoms("e", m);
  std::vector<Atom> t_atoms = numbered_atoms("t", u);

  std::vector<Renaming> copies;
  copies.reserve(u + 1);
  for (std::size_t i = 0; i <= u; ++i)
    copies.push_back(alphabet_copy(original, i));

  const Formula all_chosen = conj_atoms(e_atoms);   // E
  const Formula all_checked = conj_atoms(t_atoms);  // T

  std::vector<Default> defaults;
  std::vector<FamilyTag> tags;
  defaults.reserve(2 * m + 2 * u + 2);

  for (std::size_t i = 0; i < m; ++i) {
    Formula core = rename(t.at(i).cons, copies[0]) &
                   Formula::var(suite.c_atoms[i]) & Formula::var(e_atoms[i]);
    defaults.push_back({"a" + std::to_string(i + 1),
                        rename(t.at(i).prec, copies[0]), core, core});
    tags.push_back({Family::Application, i + 1});
  }
  for (std::size_t i = 0; i < m; ++i) {
    Formula core = (!Formula::var(suite.c_atoms[i])) & Formula::var(e_atoms[i]);
    defaults.push_back({"n" + std::to_string(i + 1), Formula::constant(true),
                        core, core});
    tags.push_back({Family::NonApplication, i + 1});
  }
  for (std::size_t i = 0; i < u; ++i) {
    Formula copy = rename(suite.checks[i], copies[i + 1]);
    Formula core = copy & Formula::var(suite.o_atoms[i]) &
                   Formula::var(t_atoms[i]);
    defaults.push_back({"v" + std::to_string(i + 1), all_chosen, core, core});
    tags.push_back({Family::CheckSat, i + 1});
  }
  for (std::size_t i = 0; i < u; ++i) {
    Formula copy = rename(suite.checks[i], copies[i + 1]);
    Formula core = (!Formula::var(suite.o_atoms[i])) & Formula::var(t_atoms[i]);
    defaults.push_back({"g" + std::to_string(i + 1), all_chosen & !copy,
                        core, core});
    tags.push_back({Family::CheckUnsat, i + 1});
  }
  {
    Formula accept = guarded_consequences(t, suite.c_atoms);
    if (success_extra) accept = accept & *success_extra;
    defaults.push_back({"z1", all_chosen & all_checked & suite.circuit,
                        accept, accept});
    tags.push_back({Family::Output, 1});
    defaults.push_back({"z2", all_chosen & all_checked & !suite.circuit,
                        output, output});
    tags.push_back({Family::Output, 2});
  }

  DefaultTheory generated(rename(t.background(), copies[0]),
                          std::move(defaults));
  return SimulationArtifacts{std::move(generated),
                             std::move(tags),
                             std::move(suite),
                             output,
                             /*c_atoms=*/{},
                             std::move(e_atoms),
                             /*o_atoms=*/{},
                             std::move(t_atoms),
                             std::move(copies),
                             original};
}

}  // namespace detail

/// Simulates the source theory under semantics s by a normal default
/// theory of exactly 2m + 2u + 2 defaults; rejected simulated processes
/// generate the formula F instead of an extension.
inline SimulationArtifacts build_simulation(const DefaultTheory& t,
                                            const SemanticsSpec& s,
                                            const Formula& F) {
  SimulationArtifacts art =
      detail::build_simulation_impl(t, s, F, std::nullopt);
  art.c_atoms = art.checks.c_atoms;
  art.o_atoms = art.checks.o_atoms;
  return art;
}

/// The simulated source process: A-family steps mapped back to source
/// defaults, order preserved.
inline Process extract_simulated(const SimulationArtifacts& art,
                                 const Process& p, Engine& engine) {
  if (!engine.is_process(p))
    throw PreconditionError("not a process of the simulation theory");
  Process out;
  for (std::size_t step : p.steps) {
    const FamilyTag& tag = art.family.at(step);
    if (tag.family == Family::Application)
      out.steps.push_back(tag.index - 1);
  }
  return out;
}

inline Process extract_simulated(const SimulationArtifacts& art,
                                 const Process& p) {
  Engine engine(art.theory, reiter_semantics());
  return extract_simulated(art, p, engine);
}

/// Extension-preserving translation: F is the extension generated by the
/// lexicographically first successful and closed process, so the rejected
/// branch collapses onto a real extension. Poly-size but not poly-time.
inline SimulationArtifacts faithful_translate(const DefaultTheory& t,
                                              const SemanticsSpec& s,
                                              const EngineOptions& opts = {}) {
  Engine engine(t, s, opts);
  auto first = engine.first_successful_closed();
  if (!first)
    throw NoExtensionError("theory has no extension under semantics '" +
                           s.name + "'");
  return build_simulation(t, s, engine.axiom_of(*first));
}

struct AlmostTranslation {
  SimulationArtifacts artifacts;
  Atom flag;
  Query::Mode mode;
};

/// Polynomial-time, almost-consequence-preserving translation. Skeptical:
/// F = flag, ask flag | q. Credulous: F = ~flag and z1 additionally asserts
/// the flag, ask flag & q.
inline AlmostTranslation almost_translate(const DefaultTheory& t,
                                          const SemanticsSpec& s,
                                          Query::Mode mode) {
  Atom flag("__a");
  if (mode == Query::Mode::Skeptical) {
    SimulationArtifacts art = detail::build_simulation_impl(
        t, s, Formula::var(flag), std::nullopt);
    art.c_atoms = art.checks.c_atoms;
    art.o_atoms = art.checks.o_atoms;
    return {std::move(art), flag, mode};
  }
  SimulationArtifacts art = detail::build_simulation_impl(
      t, s, !Formula::var(flag), Formula::var(flag));
  art.c_atoms = art.checks.c_atoms;
  art.o_atoms = art.checks.o_atoms;
  return {std::move(art), flag, mode};
}

inline Formula transform_query(const Formula& q, Query::Mode mode,
                               const Atom& flag) {
  return mode == Query::Mode::Skeptical ? Formula::var(flag) | q
                                        : Formula::var(flag) & q;
}

/// The exponential baseline: one normal default per extension, with
/// mutually inconsistent selector atoms.
inline DefaultTheory enumerate_translate(const DefaultTheory& t,
                                         const SemanticsSpec& s,
                                         const EngineOptions& opts = {}) {
  Engine engine(t, s, opts);
  const auto& exts = engine.extensions();
  if (exts.empty())
    throw NoExtensionError("theory has no extension under semantics '" +
                           s.name + "'");
  std::vector<Atom> selectors = detail::numbered_atoms("e", exts.size());
  std::vector<Default> defaults;
  for (std::size_t i = 0; i < exts.size(); ++i) {
    Formula core = Formula::var(selectors[i]) & exts[i].axiom;
    for (std::size_t j = 0; j < exts.size(); ++j)
      if (j != i) core = core & !Formula::var(selectors[j]);
    defaults.push_back({"x" + std::to_string(i + 1), Formula::constant(true),
                        core, core});
  }
  return DefaultTheory(Formula::constant(true), std::move(defaults));
}

/// .dlt document for a simulation, with the family map preserved in
/// comments.
inline std::string serialize_artifacts(const SimulationArtifacts& art) {
  std::ostringstream os;
  os << "#generated\n";
  for (std::size_t i = 0; i < art.family.size(); ++i)
    os << "#family " << art.theory.at(i).name << ' '
       << family_code(art.family[i].family) << ' ' << art.family[i].index
       << '\n';
  std::string body = serialize_theory(art.theory);
  if (body.rfind("#generated\n", 0) == 0)
    body.erase(0, std::string("#generated\n").size());
  os << body;
  return os.str();
}

}  // namespace dlw
