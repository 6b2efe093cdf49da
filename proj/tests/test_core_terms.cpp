#include "fixtures.hpp"

#include "proofgram/evaluate.hpp"
#include "proofgram/grammar.hpp"
#include "proofgram/pgt.hpp"

#include <doctest.h>

using namespace proofgram;
using namespace proofgram::testing;

namespace {

// Tree-walking edge count, independent of the cached node sizes.
std::uint64_t naive_size(ProofTerm t) {
  std::uint64_t s = t.arity();
  for (ProofTerm c : t.children()) s += naive_size(c);
  return s;
}

std::uint64_t naive_occurrences(ProofTerm t, std::uint32_t i) {
  if (t.is_param()) return t.param_index() == i ? 1 : 0;
  std::uint64_t s = 0;
  for (ProofTerm c : t.children()) s += naive_occurrences(c, i);
  return s;
}

} // namespace

TEST_SUITE("core_terms") {

TEST_CASE("term_size counts edges") {
  CHECK(term_size(ProofTerm::param(1)) == 0);
  CHECK(term_size(pt("ax-1")) == 0);
  CHECK(term_size(pt("G(ax-1)")) == 1);
  CHECK(term_size(pt("D(G(ax-1),ax-2)")) == 3);
  CHECK(term_size(pt("D(ax-1,D(ax-1,D(D(ax-1,ax-1),D(ax-1,ax-1))))")) == 10);
}

TEST_CASE("term_size is exact beyond 64 bits") {
  // t_{n+1} = D(t_n, t_n) has 2^(n+1) - 2 edges.
  ProofTerm t = pt("ax-1");
  for (int i = 0; i < 100; ++i) t = ProofTerm::node("D", {t, t});
  BigInt expected = (BigInt(1) << 101) - 2;
  CHECK(term_size(t) == expected);
  CHECK(t.size_saturated() == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("hash-consing makes structural equality pointer equality") {
  CHECK(pt("D(ax-1,$1)") == ProofTerm::node("D", {ProofTerm::node("ax-1"), ProofTerm::param(1)}));
  CHECK(pt("D(ax-1,$1)") != pt("D($1,ax-1)"));
  CHECK(parse_formula_term("i(?x,?y)") == FormulaTerm::app("i", {FormulaTerm::var("x"), FormulaTerm::var("y")}));
}

TEST_CASE("clause_metrics") {
  // (x1 => (x2 => x1)) <- empty
  auto m = clause_metrics(cl("i(?x1,i(?x2,?x1))"));
  CHECK(m.size == 2);
  CHECK(m.height == 2);
  auto v = clause_metrics(cl("?x"));
  CHECK(v.size == 0);
  CHECK(v.height == 0);
  auto both = clause_metrics(cl("i(?x,?y) <- i(?x,?y)"));
  CHECK(both.size == 2);
  CHECK(both.height == 1);
  // Constants weigh nothing; an n-ary application weighs 1 regardless of n.
  auto k = clause_metrics(cl("f(a,b,g(c)) <- h(?x)"));
  CHECK(k.size == 3);
  CHECK(k.height == 2);
}

TEST_CASE("is_linear") {
  CHECK(is_linear(pt("D($1,ax-1)")));
  CHECK_FALSE(is_linear(pt("D($1,D(D($1,ax-1),ax-1))")));
  CHECK(is_linear(pt("ax-1")));
  CHECK(is_linear(pt("D(D(ax-1,ax-1),D(ax-1,ax-1))")));  // shared ground subterms do not matter
  CHECK_FALSE(is_linear(pt("D(D($1,ax-1),D($1,ax-1))")));  // shared subterm with a parameter
}

TEST_CASE("substitute_params") {
  std::vector<ProofTerm> a{pt("ax-2")};
  CHECK(substitute_params(pt("D($1,ax-1)"), a) == pt("D(ax-2,ax-1)"));
  std::vector<ProofTerm> b{pt("ax-1")};
  CHECK(substitute_params(pt("D($1,D(D($1,ax-1),ax-1))"), b) == pt("D(ax-1,D(D(ax-1,ax-1),ax-1))"));
  CHECK(substitute_params(pt("ax-1"), {}) == pt("ax-1"));
  CHECK_THROWS_AS(substitute_params(pt("D($2,ax-1)"), a), PreconditionError);
}

TEST_CASE("property: size additivity under substitution") {
  ProofTermGen gen(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::uint32_t k = 1 + trial % 3;
    ProofTerm d = gen.with_params(5, k);
    std::vector<ProofTerm> args;
    for (std::uint32_t i = 0; i < k; ++i) args.push_back(gen.with_params(3, 2));
    BigInt expected = naive_size(d);
    auto occ = parameter_occurrences(d, k);
    for (std::uint32_t i = 1; i <= k; ++i) {
      CHECK(occ[i] == naive_occurrences(d, i));
      expected += occ[i] * naive_size(args[i - 1]);
    }
    CHECK(term_size(substitute_params(d, args)) == expected);
  }
}

TEST_CASE("property: subterms of linear terms are linear") {
  ProofTermGen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    ProofTerm d = gen.with_params(5, 4);
    if (!is_linear(d)) continue;
    std::vector<ProofTerm> stack{d};
    while (!stack.empty()) {
      ProofTerm u = stack.back();
      stack.pop_back();
      CHECK(is_linear(u));
      for (ProofTerm c : u.children()) stack.push_back(c);
    }
  }
}

TEST_CASE("validate_grammar") {
  SUBCASE("example 6 parametrized grammar is valid") {
    auto doc = parse_pgt(R"(
axiom D/2
axiom ax-1/0
prod p2(1) -> D(ax-1,$1)
prod p1(0) -> p2(ax-1)
prod Start(0) -> p2(p2(D(p1,p1)))
)");
    auto r = validate_grammar(doc.grammar, doc.base);
    CHECK(r.ok());
    CHECK(r.warnings.empty());
    REQUIRE(r.terminals.size() == 2);
    CHECK(r.terminals[0] == Symbol("D"));
    CHECK(r.terminals[1] == Symbol("ax-1"));
  }
  SUBCASE("forward reference is an ordering violation") {
    auto doc = parse_pgt(R"(
axiom ax-1/0
prod p1(0) -> p2(ax-1)
prod p2(1) -> p1
)");
    auto r = validate_grammar(doc.grammar, doc.base);
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors.front().kind == IssueKind::OrderingViolation);
  }
  SUBCASE("unused parameter is a warning") {
    auto doc = parse_pgt("axiom D/2\nprod q(2) -> D($1,$1)\n");
    auto r = validate_grammar(doc.grammar, doc.base);
    CHECK(r.ok());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].kind == IssueKind::UnusedParameter);
  }
  SUBCASE("arity, range, duplicate and undeclared errors") {
    auto doc = parse_pgt("axiom D/2\nprod q(1) -> D($1,$2)\nprod r(0) -> D(q,zz)\n");
    auto r = validate_grammar(doc.grammar, doc.base);
    std::vector<IssueKind> kinds;
    for (const auto& e : r.errors) kinds.push_back(e.kind);
    CHECK(std::count(kinds.begin(), kinds.end(), IssueKind::ParameterOutOfRange) == 1);
    CHECK(std::count(kinds.begin(), kinds.end(), IssueKind::ArityMismatch) == 1);
    CHECK(std::count(kinds.begin(), kinds.end(), IssueKind::UndeclaredTerminal) == 1);

    ProofGrammar dup;
    dup.push_back({Symbol("a"), 0, pt("D(x,x)")});
    dup.push_back({Symbol("a"), 0, pt("D(x,x)")});
    auto d = validate_grammar(dup, doc.base);
    CHECK(std::any_of(d.errors.begin(), d.errors.end(),
                      [](const auto& e) { return e.kind == IssueKind::DuplicateNonterminal; }));
  }
}

TEST_CASE("expander builds val_G without tree blow-up") {
  auto doc = parse_pgt(R"(
axiom D/2
axiom ax-1/0
prod p2(1) -> D(ax-1,$1)
prod p1(0) -> p2(ax-1)
prod Start(0) -> p2(p2(D(p1,p1)))
)");
  Expander ex(doc.grammar);
  CHECK(ex.value(2) == pt("D(ax-1,D(ax-1,D(D(ax-1,ax-1),D(ax-1,ax-1))))"));
  CHECK(ex.value(0) == pt("D(ax-1,$1)"));
}

TEST_CASE("PGT text round trip") {
  const char* text = R"(# sample
axiom D/2 : ?y <- i(?x,?y), ?x
axiom 'odd name'/0 : '=>'(?a,?a)
prod p(1) -> D($1,'odd name') : ?x1 <- '=>'(?x2,?x1)
prod q(0) -> p(D('odd name','odd name'))
)";
  auto doc = parse_pgt(text);
  CHECK(doc.comments == std::vector<std::string>{"sample"});
  CHECK(doc.base.size() == 2);
  CHECK(doc.grammar.size() == 2);
  CHECK(doc.stated[0].has_value());
  CHECK_FALSE(doc.stated[1].has_value());
  auto again = parse_pgt(format_pgt(doc));
  CHECK(again.grammar == doc.grammar);
  CHECK(again.stated == doc.stated);
  CHECK(format_pgt(again) == format_pgt(doc));

  CHECK_THROWS_AS(parse_pgt("prod p(1) -> D($1) : ?x\n"), InputError);
  CHECK_THROWS_AS(parse_pgt("bogus line\n"), InputError);
  CHECK_THROWS_AS(parse_pgt("axiom D/2 : ?y <- ?x\n"), InputError);
}

}
