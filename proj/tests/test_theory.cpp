#include <doctest.h>

#include <dlw/jsonio.hpp>
#include <dlw/parser.hpp>
#include <dlw/theory.hpp>
#include <dlw/verify.hpp>

using namespace dlw;

TEST_CASE("parse the two-default theory") {
  DefaultTheory t = parse_theory("W: a. d1: a : b / c. d2: c : a / ~b.");
  CHECK(t.background() == parse_formula("a"));
  REQUIRE(t.size() == 2);
  CHECK(t.at(0).name == "d1");
  CHECK(t.at(0).prec == parse_formula("a"));
  CHECK(t.at(0).just == parse_formula("b"));
  CHECK(t.at(0).cons == parse_formula("c"));
  CHECK(t.at(1).cons == parse_formula("~b"));
  CHECK(t.index_of("d2") == 1);
  CHECK_FALSE(t.index_of("d3"));
}

TEST_CASE("parse empty fields as true") {
  DefaultTheory t =
      parse_theory("d1: : h / h. d2: : ~h / ~h. d3: ~h : / false.");
  CHECK(t.background().is_constant(true));
  REQUIRE(t.size() == 3);
  CHECK(t.at(0).prec.is_constant(true));
  CHECK(t.at(2).just.is_constant(true));
  CHECK(t.at(2).cons.is_constant(false));
  CHECK(t.at(2).prec == parse_formula("~h"));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_theory("W: a & ~a."), ValidationError);
  CHECK_THROWS_AS(parse_theory("d1: a : b / c. d1: : / d."),
                  ValidationError);
  CHECK_THROWS_AS(parse_theory("d1: __x : / y."), ValidationError);
  CHECK_THROWS_AS(parse_theory("W: a. W: b."), ParseError);
  CHECK_THROWS_AS(parse_theory("d1: a : b c."), ParseError);
  CHECK_THROWS_AS(parse_theory("d1 a : b / c."), ParseError);

  try {
    parse_theory("W: a.\nd1: a & : b / c.");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column > 1);
  }
}

TEST_CASE("reserved atoms allowed under #generated") {
  DefaultTheory t = parse_theory("#generated\nd1: : __c1 & x / __c1 & x.");
  CHECK(t.uses_reserved_atoms());
  // and the header must be the first line
  CHECK_THROWS_AS(parse_theory("# note\n#generated\nd1: : __c1 / __c1."),
                  ValidationError);
}

TEST_CASE("comments and whitespace") {
  DefaultTheory t = parse_theory(
      "# a comment\nW: a.   # trailing comment\n\n  d1:a:b/ c.\n");
  CHECK(t.size() == 1);
  CHECK(t.at(0).prec == parse_formula("a"));
}

TEST_CASE("serialize round-trips the worked examples") {
  for (const char* text :
       {"W: a. d1: a : b / c. d2: c : a / ~b.",
        "d1: : h / h. d2: : ~h / ~h. d3: ~h : / false.",
        "W: a | ~b. d1: : / x & (y | z)."}) {
    DefaultTheory t = parse_theory(text);
    DefaultTheory u = parse_theory(serialize_theory(t));
    REQUIRE(u.size() == t.size());
    CHECK(u.background() == t.background());
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(u.at(i).name == t.at(i).name);
      CHECK(u.at(i).prec == t.at(i).prec);
      CHECK(u.at(i).just == t.at(i).just);
      CHECK(u.at(i).cons == t.at(i).cons);
    }
  }
}

TEST_CASE("serialize omits empty fields") {
  DefaultTheory t = parse_theory("d1: : h / h.");
  CHECK(serialize_theory(t) == "d1: : h / h.\n");
  DefaultTheory u = parse_theory("W: a. d1: a : b / c. d2: : / x.");
  CHECK(serialize_theory(u) == "W: a.\nd1: a : b / c.\nd2: : / x.\n");
}

TEST_CASE("round-trip over 500 random theories") {
  verify::CorpusParams params;
  params.seed = 31337;
  params.max_defaults = 4;
  params.max_atoms = 4;
  for (std::size_t i = 0; i < 500; ++i) {
    DefaultTheory t = verify::random_theory(params, i);
    DefaultTheory u = parse_theory(serialize_theory(t));
    REQUIRE(u.size() == t.size());
    CHECK(u.background() == t.background());
    for (std::size_t k = 0; k < t.size(); ++k) {
      CHECK(u.at(k).name == t.at(k).name);
      CHECK(u.at(k).prec == t.at(k).prec);
      CHECK(u.at(k).just == t.at(k).just);
      CHECK(u.at(k).cons == t.at(k).cons);
    }
  }
}

TEST_CASE("background consistency is enforced by construction") {
  CHECK_THROWS_AS(
      DefaultTheory(parse_formula("p & ~p"), {}),
      ValidationError);
  CHECK_THROWS_AS(
      DefaultTheory(parse_formula("a"),
                    {{"d1", {}, {}, parse_formula("x")},
                     {"d1", {}, {}, parse_formula("y")}}),
      ValidationError);
}

TEST_CASE("is_normal") {
  CHECK_FALSE(is_normal(
      parse_theory("d1: : h / h. d2: : ~h / ~h. d3: ~h : / false.")));
  CHECK(is_normal(parse_theory("W: a. d1: : b / b.")));
  // semantic, not syntactic: b & b vs b
  CHECK(is_normal(parse_theory("d1: : b & b / b.")));
}

TEST_CASE("theory JSON emission") {
  DefaultTheory t = parse_theory("W: a. d1: a : b / c.");
  nlohmann::json j = to_json(t);
  CHECK(j["background"] == "a");
  REQUIRE(j["defaults"].size() == 1);
  CHECK(j["defaults"][0]["name"] == "d1");
  CHECK(j["defaults"][0]["prec"] == "a");
  CHECK(j["defaults"][0]["just"] == "b");
  CHECK(j["defaults"][0]["cons"] == "c");
}
