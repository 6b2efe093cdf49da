#include "fixtures.hpp"

#include "proofgram/cddc.hpp"
#include "proofgram/evaluate.hpp"

#include <doctest.h>

using namespace proofgram;
using namespace proofgram::testing;

namespace {

const PresuppositionBase& b3() {
  static const PresuppositionBase base = detachment_base();
  return base;
}

std::optional<Clause> mgt3(std::string_view term) { return mgt(pt(term), b3()).clause; }

void check_mgt(std::string_view term, std::string_view expected) {
  INFO("term: " << term);
  auto got = mgt3(term);
  REQUIRE(got);
  // Canonical renaming makes the output literally comparable.
  CHECK(to_string(*got) == to_string(canonical_rename(cl(expected))));
  CHECK(is_variant(*got, cl(expected), BodyOrder::Ordered));
}

// Random grammar over D/2, ax-1, ax-2 whose RHSs reference earlier
// nonterminals with arity 0..2.
ProofGrammar random_grammar(ProofTermGen& gen, std::size_t n, bool linear) {
  ProofGrammar g;
  auto& rng = gen.rng();
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t arity = std::uniform_int_distribution<std::uint32_t>(0, 2)(rng);
    ProofTerm rhs = linear ? gen.linear(3, arity) : gen.with_params(3, arity);
    if (!linear)
      for (std::uint32_t v = rhs.max_param() + 1; v <= arity; ++v)
        rhs = ProofTerm::node("D", {rhs, ProofTerm::param(v)});
    // Splice in a call to an earlier production.
    if (i > 0) {
      std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
      std::vector<ProofTerm> args;
      for (std::uint32_t a = 0; a < g[j].arity; ++a) args.push_back(gen.ground(1));
      ProofTerm call = ProofTerm::node(g[j].nonterminal, args);
      rhs = gen.coin() ? ProofTerm::node("D", {rhs, call}) : ProofTerm::node("D", {call, rhs});
    }
    g.push_back({Symbol("p" + std::to_string(i + 1)), arity, rhs});
  }
  return g;
}

} // namespace

TEST_SUITE("cddc") {

TEST_CASE("golden MGTs of the detachment chain") {
  check_mgt("ax-1", "i(?x1,i(?x2,?x1))");
  check_mgt("D(ax-1,ax-1)", "i(?x1,i(?x2,i(?x3,?x2)))");
  check_mgt("D($1,ax-1)", "?x1 <- i(i(?x2,i(?x3,?x2)),?x1)");
  check_mgt("D(ax-1,D($1,ax-1))", "i(?x1,?x2) <- i(i(?x3,i(?x4,?x3)),?x2)");
  CHECK_FALSE(mgt3("D(D(ax-2,ax-2),ax-2)"));
  check_mgt("D(D(ax-2,$1),ax-2)",
            "i(i(?x1,i(?x2,?x3)),?x4) <- i(i(?x1,i(?x2,?x3)),i(i(i(?x1,?x2),i(?x1,?x3)),?x4))");
  check_mgt("D(D(ax-2,ax-1),ax-2)", "i(i(?x1,i(?x2,?x3)),i(?x1,i(?x2,?x3)))");
}

TEST_CASE("mgt errors and parameter padding") {
  CHECK_THROWS_AS(mgt(pt("D(ax-1,ax-9)"), b3()), LookupError);
  CHECK_THROWS_AS(mgt(pt("D($2,ax-1)"), b3(), 1), PreconditionError);
  CHECK_THROWS_AS(mgt(pt("D(ax-1)"), b3()), PreconditionError);
  auto r = mgt(pt("D($1,ax-1)"), b3(), 3);
  REQUIRE(r.defined());
  CHECK(r.parameter_count == 3);
  CHECK(r.clause->body.size() == 3);
  CHECK(is_variant(*r.clause, cl("?x1 <- i(i(?x2,i(?x3,?x2)),?x1), ?x4, ?x5"), BodyOrder::Ordered));
  // A parameter used on its own is PAR.
  CHECK(is_variant(*mgt(pt("$2"), b3()).clause, cl("?b <- ?a, ?b"), BodyOrder::Ordered));
}

TEST_CASE("MGT of a ground term is a unit clause") {
  ProofTermGen gen(21);
  int defined = 0;
  for (int i = 0; i < 300; ++i) {
    auto r = mgt(gen.ground(4), b3());
    if (!r.defined()) continue;
    ++defined;
    CHECK(r.clause->body.empty());
  }
  CHECK(defined > 30);
}

TEST_CASE("nonlinearity gap") {
  ProofTerm d = pt("D($1,D(D($1,ax-1),ax-1))");
  CHECK_FALSE(is_linear(d));
  auto outer = mgt(d, b3());
  REQUIRE(outer.defined());
  CHECK(is_variant(*outer.clause,
                   cl("i(i(?y1,i(?y2,?y1)),i(?y3,i(?y4,?y3))) <- "
                      "i(i(?y3,i(?y4,?y3)),i(i(?y1,i(?y2,?y1)),i(?y3,i(?y4,?y3))))"),
                   BodyOrder::Ordered));

  std::vector<ProofTerm> args{pt("ax-1")};
  auto a_sigma = compose_mgt(d, args, b3());
  REQUIRE(a_sigma);
  CHECK(is_variant(*a_sigma, cl("i(i(?y1,i(?y2,?y1)),i(?y3,i(?y4,?y3)))"), BodyOrder::Ordered));

  auto direct = mgt(substitute_params(d, args), b3());
  REQUIRE(direct.defined());
  CHECK(is_variant(*direct.clause, cl("i(?z1,i(?z2,i(?z3,?z2)))"), BodyOrder::Ordered));

  auto m = match_clause(*a_sigma, *direct.clause, BodyOrder::Ordered);
  CHECK(m.instance);
  CHECK(m.strict);
}

TEST_CASE("property: composition, linear case") {
  ProofTermGen gen(42);
  int both_defined = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::uint32_t k = 1 + trial % 3;
    ProofTerm d = gen.linear(4, k);
    REQUIRE(is_linear(d));
    std::vector<ProofTerm> args;
    for (std::uint32_t i = 0; i < k; ++i) args.push_back(gen.ground(3));
    auto composed = compose_mgt(d, args, b3());
    auto oracle = mgt(substitute_params(d, args), b3());
    CHECK(composed.has_value() == oracle.defined());
    if (composed && oracle.defined()) {
      ++both_defined;
      CHECK(is_variant(*composed, *oracle.clause, BodyOrder::Ordered));
    }
  }
  MESSAGE("defined combinations: " << both_defined);
  CHECK(both_defined > 100);
}

TEST_CASE("property: composition, general case") {
  ProofTermGen gen(43);
  int nonlinear = 0, strict = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::uint32_t k = 1 + trial % 2;
    ProofTerm d = gen.with_params(4, k);
    if (d.max_param() < k) continue;
    std::vector<ProofTerm> args;
    for (std::uint32_t i = 0; i < k; ++i) args.push_back(gen.ground(2));
    auto composed = compose_mgt(d, args, b3());
    if (!composed) continue;
    auto oracle = mgt(substitute_params(d, args), b3());
    REQUIRE(oracle.defined());
    auto m = match_clause(*composed, *oracle.clause, BodyOrder::Ordered);
    CHECK(m.instance);
    if (!is_linear(d)) ++nonlinear;
    if (m.strict) ++strict;
  }
  CHECK(nonlinear > 20);
  MESSAGE("nonlinear defined: " << nonlinear << ", strict instances: " << strict);
}

TEST_CASE("grammar_mgt") {
  SUBCASE("the shared-subproof grammar agrees with the MGT of its expansion") {
    auto doc = parse_pgt(R"(
prod p2(1) -> D(ax-1,$1)
prod p1(0) -> p2(ax-1)
prod Start(0) -> p2(p2(D(p1,p1)))
)");
    auto gm = grammar_mgt(doc.grammar, b3());
    REQUIRE(gm.size() == 3);
    REQUIRE(gm[2]);
    Expander ex(doc.grammar);
    ProofTerm d = ex.value(2);
    CHECK(term_size(d) == 10);
    auto oracle = mgt(d, b3());
    REQUIRE(oracle.defined());
    CHECK(is_variant(*gm[2], *oracle.clause, BodyOrder::Ordered));
  }
  SUBCASE("single production") {
    auto doc = parse_pgt("prod p(0) -> ax-1\n");
    auto gm = grammar_mgt(doc.grammar, b3());
    REQUIRE(gm[0]);
    CHECK(is_variant(*gm[0], cl("i(?x1,i(?x2,?x1))"), BodyOrder::Ordered));
  }
  SUBCASE("an undefined production poisons the whole grammar") {
    auto doc = parse_pgt(R"(
prod a(0) -> ax-1
prod bad(0) -> D(D(ax-2,ax-2),ax-2)
prod c(0) -> D(a,a)
prod e(0) -> D(bad,a)
)");
    auto blanket = grammar_mgt(doc.grammar, b3());
    for (const auto& c : blanket) CHECK_FALSE(c);
    auto per = grammar_mgt(doc.grammar, b3(), UndefinedPolicy::PerDependency);
    CHECK(per[0]);
    CHECK_FALSE(per[1]);
    CHECK(per[2]);
    CHECK_FALSE(per[3]);
  }
  SUBCASE("linear grammars: grammar-mgt is mgt of the value") {
    ProofTermGen gen(77);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
      ProofGrammar g = random_grammar(gen, 4, true);
      auto gm = grammar_mgt(g, b3(), UndefinedPolicy::PerDependency);
      Expander ex(g);
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!gm[i]) continue;
        auto oracle = mgt(ex.value(i), b3(), g[i].arity);
        REQUIRE(oracle.defined());
        CHECK(is_variant(*gm[i], *oracle.clause, BodyOrder::Ordered));
        ++checked;
      }
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("shallow_mgt and kb_verify") {
  auto doc = parse_pgt(R"(
prod p(0) -> ax-1 : i(i(?x,?y),i(?z,i(?x,?y)))
prod q(1) -> D($1,p) : ?w <- i(i(i(?a,?b),i(?c,i(?a,?b))),?w)
)");
  KB kb{b3(), {}, doc.grammar};
  for (const auto& s : doc.stated) kb.theorems.push_back(*s);

  auto shallow = shallow_mgt(kb);
  auto gm = grammar_mgt(kb.grammar, kb.base);
  REQUIRE(shallow[1]);
  REQUIRE(gm[1]);
  auto m = match_clause(*shallow[1], *gm[1], BodyOrder::Ordered);
  CHECK(m.instance);
  CHECK(m.strict);

  KbVerifyOptions opt;
  opt.check_chain = true;
  auto report = kb_verify(kb, opt);
  REQUIRE(report.status.size() == 2);
  CHECK(report.status[0] == TheoremStatus::StrictInstance);
  CHECK(report.status[1] == TheoremStatus::Ok);
  CHECK(report.violations == 0);
  CHECK(report.chain_failures == 0);
  CHECK(report.strict_fraction() == doctest::Approx(0.5));

  kb.theorems[1] = cl("?w <- i(?w,?w)");
  auto bad = kb_verify(kb);
  CHECK(bad.status[1] == TheoremStatus::Violation);
  CHECK(bad.violations == 1);

  KB empty;
  CHECK(shallow_mgt(empty).empty());
  CHECK(kb_verify(empty).status.empty());
}

TEST_CASE("property: instance chain on random KBs") {
  ProofTermGen gen(99);
  int kbs = 0;
  for (int trial = 0; trial < 300 && kbs < 60; ++trial) {
    ProofGrammar g = random_grammar(gen, 5, gen.coin());
    auto gm = grammar_mgt(g, b3());
    if (!gm.empty() && !gm[0]) continue;
    KB kb{b3(), {}, g};
    for (const auto& c : gm) kb.theorems.push_back(*c);
    ++kbs;
    KbVerifyOptions opt;
    opt.check_chain = true;
    auto r = kb_verify(kb, opt);
    CHECK(r.violations == 0);
    CHECK(r.undefined == 0);
    CHECK(r.chain_failures == 0);
    // Stating grammar-MGTs makes shallow-mgt coincide with them.
    auto shallow = shallow_mgt(kb);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(is_variant(*shallow[i], *gm[i], BodyOrder::Ordered));
  }
  CHECK(kbs >= 20);
}

}
