#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "budget/sampling.hpp"
#include "budget/tuplix.hpp"

using budget::CanonicalTuplix;
using budget::Expr;
using budget::GroundForm;
using budget::Rational;
using budget::Tuplix;
using budget::Valuation;

namespace {

Expr c(long n, long d = 1) { return Expr::constant(Rational::make(n, d)); }
Expr var(const char* name) { return Expr::var(name); }
Tuplix e(const char* channel, Expr amount) { return Tuplix::entry(channel, std::move(amount)); }
Tuplix e(const char* channel, long amount) { return e(channel, c(amount)); }

GroundForm ground(std::map<std::string, Rational> entries) { return GroundForm{false, std::move(entries)}; }

const std::vector<std::string> kChannels{"a", "b", "c"};
const std::vector<std::string> kVars{"u", "v", "w"};

Valuation sample(std::uint64_t seed) {
  budget::RationalSampler s(seed);
  Valuation v;
  for (const auto& name : kVars) v.emplace(name, s.next());
  return v;
}

}  // namespace

TEST_CASE("two parties settle over a shared channel") {
  Tuplix p = e("a", -30) | e("b", 10) | e("b", 20);
  Tuplix q = e("b", -30) | e("c", 30);
  Tuplix settled = Tuplix::encap({"b"}, p | q);
  const GroundForm expected = ground({{"a", Rational(-30)}, {"c", Rational(30)}});
  CHECK(denote_ground(settled, {}) == expected);
  CanonicalTuplix n = normalize(settled);
  CHECK(n.tests.empty());
  REQUIRE(n.ground());
  CHECK(*n.ground() == expected);
  CHECK(to_string(expected) == "a(-30) | c(30)");
}

TEST_CASE("zero balances are discharged to the empty budget") {
  Tuplix t = Tuplix::encap({"a", "b"}, e("a", 0) | e("b", 0));
  CanonicalTuplix n = normalize(t);
  CHECK(n == normalize(Tuplix::eps()));
  CHECK(n.entries.empty());
  CHECK(to_string(*n.ground()) == "eps");
}

TEST_CASE("a zero entry is not the empty budget") {
  CHECK(denote_ground(e("a", 0), {}) == ground({{"a", Rational(0)}}));
  CHECK_FALSE(denote_ground(e("a", 0), {}) == denote_ground(Tuplix::eps(), {}));
  CHECK(normalize(e("a", 5) | e("a", -5)).entries.at("a") == c(0));
}

TEST_CASE("delta absorbs and explains itself") {
  CanonicalTuplix n = normalize(e("a", 1) | Tuplix::delta());
  CHECK(n.null);
  REQUIRE(n.violations.size() == 1);
  CHECK(n.violations[0].text == "delta");
  CHECK(to_string(*n.ground()) == "delta");
}

TEST_CASE("encapsulation ignores absent channels and nullifies on imbalance") {
  CHECK(denote_ground(Tuplix::encap({"z"}, e("a", 3)), {}) == ground({{"a", Rational(3)}}));
  CanonicalTuplix n = normalize(Tuplix::encap({"b"}, e("b", 3) | e("b", -1)));
  CHECK(n.null);
  REQUIRE(n.violations.size() == 1);
  CHECK(n.violations[0].text == "balance of channel b");
  CHECK(n.violations[0].value == Rational(2));
}

TEST_CASE("closed tests drop or nullify") {
  CHECK(normalize(Tuplix::test(c(0)) | e("a", 1)) == normalize(e("a", 1)));
  CanonicalTuplix n = normalize(Tuplix::test(c(3) - c(1)) | e("a", 1));
  CHECK(n.null);
  REQUIRE(n.violations.size() == 1);
  CHECK(n.violations[0].value == Rational(2));
}

TEST_CASE("every closed failure is reported, including unbalanced channels around a null part") {
  Tuplix t = Tuplix::encap({"a"}, Tuplix::test(c(1)) | e("a", 4)) | Tuplix::test(c(2));
  CanonicalTuplix n = normalize(t);
  CHECK(n.null);
  REQUIRE(n.violations.size() == 3);
  CHECK(n.violations[1].text == "balance of channel a");
  CHECK(n.violations[1].value == Rational(4));
}

TEST_CASE("open terms keep symbolic entries and residual tests") {
  Tuplix t = e("a", var("u")) | Tuplix::test(var("u") - var("v")) | e("a", var("v")) | e("b", 2);
  CanonicalTuplix n = normalize(t);
  CHECK_FALSE(n.null);
  CHECK_FALSE(n.closed());
  REQUIRE(n.tests.size() == 1);
  CHECK(n.entries.at("b") == c(2));
  // Summands are ordered canonically, so the composition order does not matter.
  CanonicalTuplix swapped = normalize(e("a", var("v")) | e("b", 2) | Tuplix::test(var("u") - var("v")) | e("a", var("u")));
  CHECK(n == swapped);
  // Binding everything closes the term.
  CanonicalTuplix closed = normalize(t, {{"u", Rational(3)}, {"v", Rational(3)}});
  REQUIRE(closed.ground());
  CHECK(*closed.ground() == ground({{"a", Rational(6)}, {"b", Rational(2)}}));
}

TEST_CASE("structurally equal residual tests are kept once") {
  Tuplix t = Tuplix::test(var("u")) | e("a", 1) | Tuplix::test(var("u"));
  CHECK(normalize(t).tests.size() == 1);
}

TEST_CASE("open encapsulation turns the balance into a test") {
  Tuplix t = Tuplix::encap({"b"}, e("b", var("u")) | e("b", -2) | e("a", 1));
  CanonicalTuplix n = normalize(t);
  REQUIRE(n.tests.size() == 1);
  CHECK(n.entries.count("b") == 0);
  CHECK(n.origins[0]->text == "balance of channel b");
  CHECK(budget::equiv_prob(n.tests[0], var("u") - c(2), 200, 3));
}

TEST_CASE("reconstruct gives a term with the same normal form") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Tuplix t = budget::random_tuplix(10, kChannels, kVars, seed);
    CanonicalTuplix n = normalize(t);
    CHECK(normalize(budget::reconstruct(n)) == n);
    const Valuation v = sample(seed);
    CHECK(budget::equiv_ground(budget::reconstruct(n), t, v));
  }
}

TEST_CASE("normalization agrees with the reference semantics") {
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    Tuplix t = budget::random_tuplix(1 + seed % 14, kChannels, kVars, seed);
    const Valuation v = sample(seed + 1);
    auto g = normalize(t, v).ground();
    REQUIRE(g);
    CHECK(*g == denote_ground(t, v));
  }
}

TEST_CASE("test substitution eliminates pinned variables") {
  CanonicalTuplix n = normalize(Tuplix::test(var("u") - var("v")) | e("a", var("u") + var("v")));
  CanonicalTuplix s = apply_test_substitution(n);
  REQUIRE(s.tests.size() == 1);
  CHECK(s.entries.at("a") == var("v") + var("v"));
  CHECK(budget::equiv_prob_tuplix(budget::reconstruct(s), budget::reconstruct(n), 500, 9));

  // u - 5 folds to u + (-5); the binding is still recognized.
  CanonicalTuplix pinned = apply_test_substitution(normalize(Tuplix::test(var("u") - c(5)) | e("a", var("u"))));
  CHECK(pinned.entries.at("a") == c(5));

  // A binding that makes another test a nonzero constant nullifies.
  CanonicalTuplix clash =
      apply_test_substitution(normalize(Tuplix::test(var("u") - c(5)) | Tuplix::test(var("u") - c(6))));
  CHECK(clash.null);
  CHECK_FALSE(clash.violations.empty());
}

TEST_CASE("test substitution is sound on random terms") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Tuplix t = Tuplix::test(var("u") - var("v")) | budget::random_tuplix(8, kChannels, kVars, seed);
    CanonicalTuplix n = normalize(t);
    CanonicalTuplix s = apply_test_substitution(n);
    Valuation v = sample(seed);
    if (seed % 2 == 0) v["u"] = v.at("v");
    CHECK(budget::equiv_ground(budget::reconstruct(s), t, v));
  }
}

TEST_CASE("random terms are deterministic in the seed") {
  CHECK(budget::random_tuplix(12, kChannels, kVars, 77) == budget::random_tuplix(12, kChannels, kVars, 77));
  CHECK_THROWS(budget::random_tuplix(0, kChannels, kVars, 1));
}

TEST_CASE("free variables and printing") {
  Tuplix t = Tuplix::encap({"b"}, e("a", var("u")) | Tuplix::test(var("w")));
  CHECK(budget::free_vars(t) == std::set<std::string>{"u", "w"});
  CHECK(budget::to_string(e("a", -30) | e("c", 30)) == "a(-30) | c(30)");
  CHECK(budget::compose({}) == Tuplix::eps());
}

TEST_CASE("origins do not affect equality") {
  auto origin = std::make_shared<const budget::Origin>(budget::Origin{"f:1:1", "x", {}});
  CHECK(Tuplix::test(var("u"), origin) == Tuplix::test(var("u")));
}
