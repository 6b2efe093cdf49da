#include "fixtures.hpp"

#include "proofgram/unify.hpp"

#include <doctest.h>

#include <set>

using namespace proofgram;
using namespace proofgram::testing;

namespace {

FormulaTerm ft(std::string_view s) { return parse_formula_term(s); }

std::optional<Substitution> mgu1(std::string_view a, std::string_view b) { return mgu(ft(a), ft(b)); }

// Random terms over f/2, g/1, a and variables ?x ?y ?z.
FormulaTerm random_term(std::mt19937_64& rng, int depth) {
  int r = std::uniform_int_distribution<int>(0, 5)(rng);
  if (depth <= 0 || r < 3) {
    static const char* leaves[] = {"x", "y", "z"};
    if (r == 0) return FormulaTerm::app("a", {});
    return FormulaTerm::var(leaves[std::uniform_int_distribution<int>(0, 2)(rng)]);
  }
  if (r == 3) return FormulaTerm::app("g", {random_term(rng, depth - 1)});
  return FormulaTerm::app("f", {random_term(rng, depth - 1), random_term(rng, depth - 1)});
}

// Ground terms of depth <= 1 over constants a, b and g/1, f/2.
std::vector<FormulaTerm> herbrand() {
  std::vector<FormulaTerm> base{FormulaTerm::app("a", {}), FormulaTerm::app("b", {})};
  std::vector<FormulaTerm> out = base;
  for (auto t : base) out.push_back(FormulaTerm::app("g", {t}));
  for (auto s : base)
    for (auto t : base) out.push_back(FormulaTerm::app("f", {s, t}));
  return out;
}

} // namespace

TEST_SUITE("unify") {

TEST_CASE("mgu basics") {
  auto s = mgu1("?x", "f(a)");
  REQUIRE(s);
  CHECK(s->size() == 1);
  CHECK(*s->lookup(Symbol("x")) == ft("f(a)"));

  CHECK_FALSE(mgu1("?x", "f(?x)"));
  CHECK_FALSE(mgu1("f(a)", "g(a)"));
  CHECK_FALSE(mgu1("f(a,?x)", "f(a)"));

  auto t = mgu1("f(?x,g(?y))", "f(g(?z),?x)");
  REQUIRE(t);
  CHECK(apply(*t, ft("f(?x,g(?y))")) == apply(*t, ft("f(g(?z),?x)")));
}

TEST_CASE("mgu over term sets") {
  std::vector<std::vector<FormulaTerm>> sets{{ft("?x"), ft("f(?y)"), ft("f(a)")}, {ft("?z"), ft("?x")}, {}};
  auto s = mgu(sets);
  REQUIRE(s);
  CHECK(apply(*s, ft("?z")) == ft("f(a)"));
  std::vector<std::vector<FormulaTerm>> bad{{ft("?x"), ft("f(?y)")}, {ft("?y"), ft("?x")}};
  CHECK_FALSE(mgu(bad));
}

TEST_CASE("apply") {
  Substitution s;
  s.bind(Symbol("x"), ft("a"));
  CHECK(apply(s, ft("f(?x,?y)")) == ft("f(a,?y)"));
  CHECK(apply(Substitution{}, ft("f(?x,?y)")) == ft("f(?x,?y)"));
  Clause c = cl("h(?x) <- g(?x), ?y");
  Clause r = apply(s, c);
  CHECK(r.head == ft("h(a)"));
  CHECK(r.body[0] == ft("g(a)"));
  CHECK(r.body[1] == ft("?y"));
}

TEST_CASE("match_clause") {
  SUBCASE("INS example is a strict instance") {
    auto m = match_clause(cl("i(i(?x,?y),i(?z,i(?x,?y)))"), cl("i(?x,i(?y,?x))"), BodyOrder::Ordered);
    CHECK(m.instance);
    CHECK(m.strict);
    CHECK_FALSE(m.variant);
    CHECK(*m.instance->sigma.lookup(Symbol("x")) == ft("i(?x,?y)"));
  }
  SUBCASE("reflexivity and renaming") {
    auto m = match_clause(cl("i(?x1,i(?x2,?x1))"), cl("i(?a,i(?b,?a))"), BodyOrder::Ordered);
    CHECK(m.instance);
    CHECK(m.variant);
    CHECK_FALSE(m.strict);
    CHECK_FALSE(match_clause(cl("i(?x,i(?y,?y))"), cl("i(?a,i(?b,?a))"), BodyOrder::Ordered).instance);
  }
  SUBCASE("body permutation") {
    Clause a = cl("h(?x,?y) <- p(?x), q(?y)");
    Clause b = cl("h(?x,?y) <- q(?y), p(?x)");
    CHECK_FALSE(match_clause(a, b, BodyOrder::Ordered).instance);
    auto m = match_clause(a, b, BodyOrder::ModPermutation);
    REQUIRE(m.instance);
    CHECK(m.variant);
    CHECK(m.instance->permutation == std::vector<std::size_t>{1, 0});
    CHECK(is_variant(a, b, BodyOrder::ModPermutation));
    CHECK(variant_fingerprint(a, BodyOrder::ModPermutation) == variant_fingerprint(b, BodyOrder::ModPermutation));
  }
  SUBCASE("permutation search backtracks") {
    // The first compatible assignment for p(?u) fails later.
    Clause general = cl("h(?a,?b) <- p(?a), p(?b), q(?a)");
    Clause specific = cl("h(c,d) <- p(d), p(c), q(c)");
    auto m = match_clause(specific, general, BodyOrder::ModPermutation);
    REQUIRE(m.instance);
    CHECK(apply(m.instance->sigma, general.head) == specific.head);
    for (std::size_t j = 0; j < specific.body.size(); ++j)
      CHECK(apply(m.instance->sigma, general.body[m.instance->permutation[j]]) == specific.body[j]);
  }
  SUBCASE("different body lengths never match") {
    CHECK_FALSE(match_clause(cl("h <- p"), cl("h"), BodyOrder::ModPermutation).instance);
  }
  SUBCASE("shared variables across head and body") {
    CHECK_FALSE(find_instance(cl("h(a) <- p(b)"), cl("h(?x) <- p(?x)"), BodyOrder::Ordered));
    CHECK(find_instance(cl("h(a) <- p(a)"), cl("h(?x) <- p(?x)"), BodyOrder::Ordered));
  }
}

TEST_CASE("property: mgu unifies, is idempotent and most general") {
  std::mt19937_64 rng(3);
  auto ground = herbrand();
  std::vector<Symbol> vars{Symbol("x"), Symbol("y"), Symbol("z")};
  auto tuple_under = [&](auto&& image) {
    std::vector<FormulaTerm> args;
    for (Symbol v : vars) args.push_back(image(v));
    return Clause{FormulaTerm::app(Symbol("t"), args), {}};
  };
  int unifiable = 0, brute_checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    FormulaTerm a = random_term(rng, 3), b = random_term(rng, 3);
    auto s = mgu(a, b);
    // Brute force over all ground substitutions into the small Herbrand set.

    for (auto gx : ground)
      for (auto gy : ground)
        for (auto gz : ground) {
          Substitution theta;
          theta.bind(vars[0], gx);
          theta.bind(vars[1], gy);
          theta.bind(vars[2], gz);
          if (apply(theta, a) != apply(theta, b)) continue;
          REQUIRE(s);
          ++brute_checked;
          // theta must factor through the mgu.
          Clause specific = tuple_under([&](Symbol v) { return *theta.lookup(v); });
          Clause general = tuple_under([&](Symbol v) { return apply(*s, FormulaTerm::var(v)); });
          CHECK(find_instance(specific, general, BodyOrder::Ordered));
        }
    if (!s) continue;
    ++unifiable;
    CHECK(apply(*s, a) == apply(*s, b));
    for (const auto& [v, t] : *s) CHECK(apply(*s, t) == t);
  }
  CHECK(unifiable > 50);
  CHECK(brute_checked > 1000);
}

TEST_CASE("property: mutual instance iff variant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    Clause f{random_term(rng, 3), {random_term(rng, 2)}};
    Clause g{random_term(rng, 3), {random_term(rng, 2)}};
    auto fg = find_instance(f, g, BodyOrder::Ordered).has_value();
    auto gf = find_instance(g, f, BodyOrder::Ordered).has_value();
    CHECK((fg && gf) == is_variant(f, g, BodyOrder::Ordered));
    CHECK(is_variant(f, canonical_rename(f, "w"), BodyOrder::Ordered));
  }
}

}
