#include <doctest.h>

#include <dlw/parser.hpp>
#include <dlw/sat.hpp>
#include <dlw/verify.hpp>

using namespace dlw;

namespace {

Formula F(const std::string& s) { return parse_formula(s); }

bool truth_table_consistent(const std::vector<Formula>& fs) {
  std::set<Atom> atoms;
  for (const Formula& f : fs)
    for (const Atom& a : f.atoms()) atoms.insert(a);
  std::vector<Atom> as(atoms.begin(), atoms.end());
  REQUIRE(as.size() <= 8);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << as.size());
       ++mask) {
    Assignment m;
    for (std::size_t i = 0; i < as.size(); ++i) m[as[i]] = (mask >> i) & 1;
    bool all = true;
    for (const Formula& f : fs)
      if (!evaluate(f, m)) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("is_consistent") {
  Oracle o;
  CHECK_FALSE(o.is_consistent({F("a"), F("~a")}));
  CHECK(o.is_consistent(std::vector<Formula>{}));
  CHECK_FALSE(o.is_consistent({F("a"), F("a -> b"), F("~b")}));
  CHECK(o.is_consistent({F("a | b"), F("~a")}));
}

TEST_CASE("entails") {
  Oracle o;
  CHECK(o.entails({F("a"), F("a -> b")}, F("b")));
  CHECK(o.entails({}, F("a | ~a")));
  // W = {a} does not entail the second default's precondition c
  CHECK_FALSE(o.entails({F("a")}, F("c")));
}

TEST_CASE("equivalent") {
  Oracle o;
  CHECK(o.equivalent(F("a & b"), F("b & a")));
  CHECK_FALSE(o.equivalent(F("a"), F("a | b")));
  CHECK(o.equivalent(F("x & (x & y)"), F("x & y")));
}

TEST_CASE("var_equivalent") {
  Oracle o;
  CHECK(o.var_equivalent(F("a & __x0"), F("a"), {Atom("a")}));
  CHECK_FALSE(o.var_equivalent(F("a | __x0"), F("a"), {Atom("a")}));
  CHECK(o.var_equivalent(F("a & c & __e1 & (__o1 | b)"), F("a & c"),
                         {Atom("a"), Atom("b"), Atom("c")}));
}

TEST_CASE("oracle agrees with truth tables on a random corpus") {
  verify::Rng rng(2024);
  std::vector<Atom> pool{Atom("a"), Atom("b"), Atom("c"), Atom("d")};
  auto random_formula = [&](auto&& self, std::size_t depth) -> Formula {
    if (depth == 0 || rng.chance(35)) {
      Formula lit = Formula::var(pool[rng.below(pool.size())]);
      return rng.chance(50) ? lit : !lit;
    }
    Formula a = self(self, depth - 1);
    Formula b = self(self, depth - 1);
    switch (rng.below(4)) {
      case 0: return a & b;
      case 1: return a | b;
      case 2: return Formula::implies(a, b);
      default: return Formula::iff(a, b);
    }
  };

  Oracle o;
  for (int i = 0; i < 1000; ++i) {
    std::vector<Formula> fs;
    std::size_t n = 1 + rng.below(3);
    for (std::size_t k = 0; k < n; ++k)
      fs.push_back(random_formula(random_formula, 3));
    bool expected = truth_table_consistent(fs);
    CHECK(o.is_consistent(fs) == expected);

    // entails(fs, g) iff every model of fs satisfies g
    Formula g = random_formula(random_formula, 2);
    std::vector<Formula> with_neg = fs;
    with_neg.push_back(!g);
    CHECK(o.entails(fs, g) == !truth_table_consistent(with_neg));
  }
}

TEST_CASE("var_equivalent is an equivalence relation") {
  verify::Rng rng(11);
  std::vector<Atom> pool{Atom("a"), Atom("b"), Atom("c")};
  auto random_formula = [&](auto&& self, std::size_t depth) -> Formula {
    if (depth == 0 || rng.chance(40)) {
      Formula lit = Formula::var(pool[rng.below(pool.size())]);
      return rng.chance(50) ? lit : !lit;
    }
    Formula a = self(self, depth - 1);
    Formula b = self(self, depth - 1);
    return rng.below(2) ? (a & b) : (a | b);
  };

  Oracle o;
  std::set<Atom> keep{Atom("a"), Atom("b")};
  for (int i = 0; i < 60; ++i) {
    Formula f = random_formula(random_formula, 3);
    Formula g = random_formula(random_formula, 3);
    Formula h = random_formula(random_formula, 3);
    CHECK(o.var_equivalent(f, f, keep));
    CHECK(o.var_equivalent(f, g, keep) == o.var_equivalent(g, f, keep));
    if (o.var_equivalent(f, g, keep) && o.var_equivalent(g, h, keep))
      CHECK(o.var_equivalent(f, h, keep));

    // keeping everything degenerates to plain equivalence
    std::set<Atom> all;
    for (const Atom& a : f.atoms()) all.insert(a);
    for (const Atom& a : g.atoms()) all.insert(a);
    CHECK(o.var_equivalent(f, g, all) == o.equivalent(f, g));

    // agreement with the definitional route through forgetting
    std::set<Atom> forget_f, forget_g;
    for (const Atom& a : f.atoms())
      if (!keep.count(a)) forget_f.insert(a);
    for (const Atom& a : g.atoms())
      if (!keep.count(a)) forget_g.insert(a);
    CHECK(o.var_equivalent(f, g, keep) ==
          o.equivalent(forget(f, forget_f), forget(g, forget_g)));
  }
}

TEST_CASE("oracle statistics are monotone") {
  Oracle o;
  auto c0 = o.stats().calls;
  o.is_consistent({F("a & (b | ~c)")});
  auto c1 = o.stats().calls;
  CHECK(c1 > c0);
  o.entails({F("a")}, F("a"));
  CHECK(o.stats().calls > c1);
  auto d0 = o.stats().decisions;
  o.is_consistent({F("(a | b) & (~a | b) & (a | ~b) & (~a | ~b)")});
  CHECK(o.stats().decisions > d0);
}
