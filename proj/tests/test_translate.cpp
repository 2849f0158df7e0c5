#include <doctest.h>

#include <dlw/parser.hpp>
#include <dlw/translate.hpp>
#include <dlw/verify.hpp>

using namespace dlw;

namespace {

DefaultTheory section1() {
  return parse_theory("W: a. d1: a : b / c. d2: c : a / ~b.");
}

DefaultTheory turner() {
  return parse_theory("d1: : h / h. d2: : ~h / ~h. d3: ~h : / false.");
}

DefaultTheory single() { return parse_theory("W: a. d1: : b / b."); }

DefaultTheory coin() { return parse_theory("d1: : b / b. d2: : ~b / ~b."); }

std::set<Atom> atoms_of(std::initializer_list<const char*> names) {
  std::set<Atom> out;
  for (const char* n : names) out.insert(Atom(n));
  return out;
}

}  // namespace

TEST_CASE("reiter check suite for the two-default theory") {
  Oracle oracle;
  CheckSuite suite = generate_checks(section1(), reiter_semantics());
  REQUIRE(suite.count() == 4);

  Formula delta1 =
      parse_formula("a & (__c1 -> c) & (__c2 -> ~b) & b");
  CHECK(oracle.equivalent(suite.checks[0], delta1));
  CHECK(suite.checks[0].atoms() ==
        atoms_of({"a", "b", "c", "__c1", "__c2"}));

  // the precondition checks test non-entailment, hence the negation
  CHECK(oracle.equivalent(suite.checks[2],
                          parse_formula("a & (__c1 -> c) & (__c2 -> ~b) & "
                                        "~a")));
  CHECK(oracle.equivalent(suite.checks[3],
                          parse_formula("a & (__c1 -> c) & (__c2 -> ~b) & "
                                        "~c")));

  Formula expected_circuit = parse_formula(
      "(__c1 -> __o1) & (~__c1 -> (__o3 | ~__o1)) & "
      "(__c2 -> __o2) & (~__c2 -> (__o4 | ~__o2))");
  CHECK(oracle.equivalent(suite.circuit, expected_circuit));
  for (const Atom& a : suite.circuit.atoms())
    CHECK((a.name().rfind("__o", 0) == 0 || a.name().rfind("__c", 0) == 0));
}

TEST_CASE("circuit evaluation matches the engine verdicts") {
  Oracle oracle;
  DefaultTheory t = section1();
  CheckSuite suite = generate_checks(t, reiter_semantics());

  // the empty process is not closed, so the circuit rejects it
  CHECK_FALSE(circuit_accepts(suite, t, Process{}, oracle));

  Engine engine(t, reiter_semantics());
  for (const Process& p : engine.all_processes())
    CHECK(circuit_accepts(suite, t, p, oracle) ==
          (engine.is_successful(p) && engine.is_closed(p)));
}

TEST_CASE("circuit invariant across semantics and corpus") {
  verify::CorpusParams params;
  params.seed = 271;
  params.count = 25;
  params.max_defaults = 3;
  params.max_atoms = 3;
  for (std::size_t i = 0; i < params.count; ++i) {
    DefaultTheory t = verify::random_theory(params, i);
    for (const SemanticsSpec& s :
         {reiter_semantics(), constrained_semantics()}) {
      auto finding =
          verify::check_circuit(t, s, generate_checks(t, s), "corpus");
      INFO(serialize_theory(t) << " under " << s.name);
      CHECK(finding.passed);
    }
  }
}

TEST_CASE("check generation rejects unsupported semantics") {
  CHECK_THROWS_AS(generate_checks(section1(), justified_semantics()),
                  PreconditionError);
}

TEST_CASE("simulation shape") {
  SimulationArtifacts art =
      build_simulation(section1(), reiter_semantics(),
                       Formula::var(Atom("__a")));
  CHECK(art.theory.size() == 14);  // 2m + 2u + 2 with m=2, u=4
  CHECK(is_normal(art.theory));
  CHECK(art.theory.background() == parse_formula("__x0_a"));

  // family layout: a1 a2 n1 n2 v1..v4 g1..g4 z1 z2
  CHECK(art.theory.at(0).name == "a1");
  CHECK(art.family[0].family == Family::Application);
  CHECK(art.theory.at(2).name == "n1");
  CHECK(art.family[4].family == Family::CheckSat);
  CHECK(art.theory.at(12).name == "z1");
  CHECK(art.family[13].family == Family::Output);
  CHECK(art.family[13].index == 2);

  // a1 applies d1 over the X_0 copy and records the choice
  CHECK(art.theory.at(0).prec == parse_formula("__x0_a"));
  CHECK(art.theory.at(0).cons ==
        parse_formula("__x0_c & __c1 & __e1"));
  // n1 only records the refusal
  CHECK(art.theory.at(2).prec.is_constant(true));
  CHECK(art.theory.at(2).cons == parse_formula("~__c1 & __e1"));

  // each check runs on its own alphabet copy
  std::set<Atom> v1_atoms = art.theory.at(4).cons.atoms();
  std::set<Atom> v2_atoms = art.theory.at(5).cons.atoms();
  CHECK(v1_atoms.count(Atom("__x1_a")));
  CHECK(v2_atoms.count(Atom("__x2_a")));
  CHECK_FALSE(v2_atoms.count(Atom("__x1_a")));

  // z1 speaks the source language
  CHECK(art.theory.at(12).cons ==
        parse_formula("a & (__c1 -> c) & (__c2 -> ~b)"));
}

TEST_CASE("simulation of a single-default theory") {
  Oracle oracle;
  DefaultTheory t = single();
  SimulationArtifacts art =
      build_simulation(t, reiter_semantics(), Formula::var(Atom("__a")));
  CHECK(art.theory.size() == 8);  // m=1, u=2
  CHECK(is_normal(art.theory));

  Engine sim(art.theory, reiter_semantics());
  const auto& exts = sim.extensions();
  REQUIRE(exts.size() == 2);

  std::set<Atom> keep = atoms_of({"a", "b"});
  bool has_ab = false, has_flag = false;
  for (const Extension& e : exts) {
    if (oracle.var_equivalent(e.axiom, parse_formula("a & b"), keep))
      has_ab = true;
    if (oracle.var_equivalent(e.axiom, Formula::var(Atom("__a")), keep))
      has_flag = true;
  }
  CHECK(has_ab);
  CHECK(has_flag);
}

TEST_CASE("simulation rejects reserved atoms outside the flag") {
  CHECK_THROWS_AS(build_simulation(section1(), reiter_semantics(),
                                   parse_formula("__o1")),
                  ValidationError);
  DefaultTheory generated =
      parse_theory("#generated\nd1: : __c1 / __c1.");
  CHECK_THROWS_AS(build_simulation(generated, reiter_semantics(),
                                   Formula::constant(true)),
                  ValidationError);
}

TEST_CASE("extension axiom of a constrained simulation process") {
  // the accepted simulation run of the section-1 theory under constrained
  // semantics generates an extension var-equivalent to {a, c}
  Oracle oracle;
  DefaultTheory t = section1();
  SimulationArtifacts art = build_simulation(t, constrained_semantics(),
                                             Formula::var(Atom("__a")));
  Engine sim(art.theory, reiter_semantics());
  bool found = false;
  for (const Process& p : sim.successful_closed_processes()) {
    bool picked_z1 = false;
    for (std::size_t step : p.steps)
      if (art.family[step].family == Family::Output)
        picked_z1 = art.family[step].index == 1;
    if (!picked_z1) continue;
    Process op = extract_simulated(art, p, sim);
    if (!(op == Process{0})) continue;
    found = true;
    CHECK(oracle.var_equivalent(sim.axiom_of(p), parse_formula("a & c"),
                                atoms_of({"a", "b", "c"})));
  }
  CHECK(found);
}

TEST_CASE("extract_simulated") {
  DefaultTheory t = coin();
  SimulationArtifacts art =
      build_simulation(t, reiter_semantics(), Formula::var(Atom("__a")));
  Engine sim(art.theory, reiter_semantics());
  Engine source(t, reiter_semantics());

  std::set<std::vector<std::size_t>> seen;
  for (const Process& p : sim.successful_closed_processes()) {
    Process op = extract_simulated(art, p, sim);
    CHECK(source.is_process(op));
    seen.insert(op.steps);
  }
  // both guesses and both orders of refusal appear among simulated runs
  CHECK(seen.count({0}));
  CHECK(seen.count({1}));
  CHECK(seen.count({}));

  CHECK_THROWS_AS(extract_simulated(art, Process{art.theory.size() - 1}, sim),
                  PreconditionError);
}

TEST_CASE("faithful translation") {
  Oracle oracle;

  SimulationArtifacts art = faithful_translate(single(), reiter_semantics());
  CHECK(art.output_formula == parse_formula("a & b"));
  Engine sim(art.theory, reiter_semantics());
  std::set<Atom> keep = atoms_of({"a", "b"});
  for (const Extension& e : sim.extensions())
    CHECK(oracle.var_equivalent(e.axiom, parse_formula("a & b"), keep));

  auto report = verify::check_faithful(coin(), reiter_semantics(), "coin");
  for (const auto& f : report.findings) {
    INFO(f.property);
    CHECK(f.passed);
  }

  CHECK_THROWS_AS(faithful_translate(section1(), reiter_semantics()),
                  NoExtensionError);
}

TEST_CASE("almost-consequence-preserving translation") {
  Oracle oracle;

  // skeptical: Turner entails h, the translation entails __a | h
  DefaultTheory t = turner();
  Engine source(t, reiter_semantics());
  AlmostTranslation tr = almost_translate(t, reiter_semantics(),
                                          Query::Mode::Skeptical);
  CHECK(tr.flag == Atom("__a"));
  CHECK(tr.artifacts.theory.size() == 20);  // m=3, u=6
  Engine sim(tr.artifacts.theory, reiter_semantics());
  Formula q = parse_formula("h");
  CHECK(source.skeptical_entails(q));
  CHECK(sim.skeptical_entails(transform_query(q, Query::Mode::Skeptical,
                                              tr.flag)));

  // skeptical over the two-extension theory: both sides say no
  DefaultTheory two = coin();
  Engine two_source(two, reiter_semantics());
  AlmostTranslation tr2 = almost_translate(two, reiter_semantics(),
                                           Query::Mode::Skeptical);
  Engine two_sim(tr2.artifacts.theory, reiter_semantics());
  Formula qb = parse_formula("b");
  CHECK_FALSE(two_source.skeptical_entails(qb));
  CHECK_FALSE(two_sim.skeptical_entails(
      transform_query(qb, Query::Mode::Skeptical, tr2.flag)));

  // credulous dual
  AlmostTranslation tr3 = almost_translate(two, reiter_semantics(),
                                           Query::Mode::Credulous);
  Engine cred_sim(tr3.artifacts.theory, reiter_semantics());
  CHECK(is_normal(tr3.artifacts.theory, oracle));
  CHECK(two_source.credulous_entails(qb));
  CHECK(cred_sim.credulous_entails(
      transform_query(qb, Query::Mode::Credulous, tr3.flag)));
  Formula contradiction = Formula::constant(false);
  CHECK_FALSE(two_source.credulous_entails(contradiction));
  CHECK_FALSE(cred_sim.credulous_entails(
      transform_query(contradiction, Query::Mode::Credulous, tr3.flag)));
}

TEST_CASE("transform_query") {
  Atom flag("__a");
  CHECK(transform_query(parse_formula("b"), Query::Mode::Skeptical, flag) ==
        parse_formula("__a | b"));
  CHECK(transform_query(Formula::constant(false), Query::Mode::Skeptical,
                        flag) == parse_formula("__a | false"));
  CHECK(transform_query(parse_formula("b"), Query::Mode::Credulous, flag) ==
        parse_formula("__a & b"));
}

TEST_CASE("enumerate_translate") {
  Oracle oracle;

  DefaultTheory out = enumerate_translate(coin(), reiter_semantics());
  REQUIRE(out.size() == 2);
  CHECK(is_normal(out, oracle));
  Engine e(out, reiter_semantics());
  auto procs = e.successful_closed_processes();
  for (const Process& p : procs) CHECK(p.size() == 1);
  std::set<Atom> keep{Atom("b")};
  bool has_b = false, has_nb = false;
  for (const Extension& x : e.extensions()) {
    if (oracle.var_equivalent(x.axiom, parse_formula("b"), keep))
      has_b = true;
    if (oracle.var_equivalent(x.axiom, parse_formula("~b"), keep))
      has_nb = true;
  }
  CHECK(has_b);
  CHECK(has_nb);

  DefaultTheory one = enumerate_translate(single(), reiter_semantics());
  CHECK(one.size() == 1);
  Engine oe(one, reiter_semantics());
  CHECK(oe.successful_closed_processes() ==
        std::vector<Process>{Process{0}});

  DefaultTheory constrained_out =
      enumerate_translate(section1(), constrained_semantics());
  REQUIRE(constrained_out.size() == 1);
  CHECK(constrained_out.at(0).cons ==
        parse_formula("__e1 & (a & c)"));

  CHECK_THROWS_AS(enumerate_translate(section1(), reiter_semantics()),
                  NoExtensionError);
}

TEST_CASE("simulation outputs are fail-safe under reiter") {
  for (const DefaultTheory& t : {single(), coin()}) {
    SimulationArtifacts art =
        build_simulation(t, reiter_semantics(), Formula::var(Atom("__a")));
    Engine sim(art.theory, reiter_semantics());
    CHECK(sim.fail_safe().fail_safe);
  }
}

TEST_CASE("artifact serialization round-trips with family comments") {
  SimulationArtifacts art =
      build_simulation(single(), reiter_semantics(),
                       Formula::var(Atom("__a")));
  std::string text = serialize_artifacts(art);
  CHECK(text.rfind("#generated\n", 0) == 0);
  CHECK(text.find("#family a1 A 1") != std::string::npos);
  CHECK(text.find("#family z2 Z 2") != std::string::npos);

  DefaultTheory reparsed = parse_theory(text);
  REQUIRE(reparsed.size() == art.theory.size());
  for (std::size_t i = 0; i < reparsed.size(); ++i) {
    CHECK(reparsed.at(i).name == art.theory.at(i).name);
    CHECK(reparsed.at(i).prec == art.theory.at(i).prec);
    CHECK(reparsed.at(i).just == art.theory.at(i).just);
    CHECK(reparsed.at(i).cons == art.theory.at(i).cons);
  }
}
