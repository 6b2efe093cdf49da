#include "fixtures.hpp"

#include "proofgram/cddc.hpp"
#include "proofgram/metamath.hpp"

#include <doctest.h>

using namespace proofgram;
using namespace proofgram::testing;

namespace {

const MmDatabase& demo() {
  static const MmDatabase db = read_mm(PROOFGRAM_TEST_DATA "/demo.mm");
  return db;
}

std::vector<Symbol> toks(std::string_view s) {
  std::vector<Symbol> out;
  std::size_t p = 0;
  while (p < s.size()) {
    std::size_t e = s.find(' ', p);
    if (e == std::string_view::npos) e = s.size();
    if (e > p) out.emplace_back(s.substr(p, e - p));
    p = e + 1;
  }
  return out;
}

constexpr const char* kDisjointDb = R"(
$c ( ) -> wff |- $. $v ph ps $.
wph $f wff ph $. wps $f wff ps $.
wi $a wff ( ph -> ps ) $.
${ $d ph ps $. ax-d $a |- ( ph -> ( ps -> ph ) ) $. $}
bad $p |- ( ph -> ( ph -> ph ) ) $= wph wph ax-d $.
${ $d ph ps $. good $p |- ( ph -> ( ps -> ph ) ) $= wph wps ax-d $. $}
)";

constexpr const char* kAmbiguousDb = R"(
$c wff |- -> ( ) $. $v ph ps ch $.
wph $f wff ph $. wps $f wff ps $. wch $f wff ch $.
wi $a wff ph -> ps $.
wp $a wff ( ph ) $.
)";

} // namespace

TEST_SUITE("metamath") {

TEST_CASE("parse a minimal database") {
  auto db = mm_parse("$c |- wff $.\n$v p $.\nwp $f wff p $.\nax $a |- p $.\nth $p |- p $= wp ax $.\n");
  int frames = 0;
  for (const auto& st : db.statements) frames += st.is_assertion();
  CHECK(frames == 2);
  const MmStatement* th = db.find(Symbol("th"));
  REQUIRE(th);
  CHECK(th->frame.hyps.size() == 1);
  CHECK(verify_database(db).ok());
}

TEST_CASE("parser errors") {
  CHECK_THROWS_AS(mm_parse("$c a $. ${ "), InputError);
  CHECK_THROWS_AS(mm_parse("$c a $. $}"), InputError);
  CHECK_THROWS_AS(mm_parse("$( open comment"), InputError);
  CHECK_THROWS_AS(mm_parse("$c a $. x $a a $. x $a a $."), InputError);
  CHECK_THROWS_AS(mm_parse("$c a $. x $a a b $."), InputError);
  CHECK_THROWS_AS(mm_parse("$[ other.mm $]"), InputError);
  CHECK_THROWS_AS(mm_parse("$c a $. $v v $. x $a a v $."), InputError);  // no $f for v
}

TEST_CASE("frames follow scoping") {
  const auto& db = demo();
  const MmStatement& mp = db.statements[db.index_of(Symbol("ax-mp"))];
  std::vector<std::string> names;
  for (auto h : mp.frame.hyps) names.push_back(db.statements[h].label.str());
  CHECK(names == std::vector<std::string>{"wph", "wps", "min", "maj"});
  CHECK(mp.frame.essential.size() == 2);
  const MmStatement& a2 = db.statements[db.index_of(Symbol("ax-2"))];
  CHECK(a2.frame.hyps.size() == 3);
  CHECK(a2.frame.essential.empty());
  // min is out of scope after its block.
  CHECK(db.statements[db.index_of(Symbol("min"))].scope_end == db.index_of(Symbol("ax-mp")) + 1);
}

TEST_CASE("compressed numbers") {
  using K = CompressedItem::Kind;
  CHECK(decode_compressed_numbers("A") == std::vector<CompressedItem>{{K::Number, 1}});
  CHECK(decode_compressed_numbers("T") == std::vector<CompressedItem>{{K::Number, 20}});
  CHECK(decode_compressed_numbers("UA") == std::vector<CompressedItem>{{K::Number, 21}});
  CHECK(decode_compressed_numbers("UUA") == std::vector<CompressedItem>{{K::Number, 121}});
  CHECK(decode_compressed_numbers("YT") == std::vector<CompressedItem>{{K::Number, 120}});
  CHECK(decode_compressed_numbers("BZC") ==
        std::vector<CompressedItem>{{K::Number, 2}, {K::Tag, 0}, {K::Number, 3}});
  CHECK(decode_compressed_numbers("A?") == std::vector<CompressedItem>{{K::Number, 1}, {K::Unknown, 0}});
  CHECK_THROWS_AS(decode_compressed_numbers("U"), InputError);
  CHECK_THROWS_AS(decode_compressed_numbers("UZ"), InputError);
  CHECK_THROWS_AS(decode_compressed_numbers("a"), InputError);
}

TEST_CASE("compressed proof with reuse matches the normal proof") {
  std::string text = R"(
$c ( ) -> wff |- $. $v ph ps ch $.
wph $f wff ph $. wps $f wff ps $. wch $f wff ch $.
wi $a wff ( ph -> ps ) $.
${ min $e |- ph $. maj $e |- ( ph -> ps ) $. ax-mp $a |- ps $. $}
ax-1 $a |- ( ph -> ( ps -> ph ) ) $.
ax-2 $a |- ( ( ph -> ( ps -> ch ) ) -> ( ( ph -> ps ) -> ( ph -> ch ) ) ) $.
${ a2i.1 $e |- ( ph -> ( ps -> ch ) ) $.
   a2i $p |- ( ( ph -> ps ) -> ( ph -> ch ) ) $=
     wph wps wch wi wi wph wps wi wph wch wi wi a2i.1 wph wps wch ax-2 ax-mp $. $}
${ mpd.1 $e |- ( ph -> ps ) $. mpd.2 $e |- ( ph -> ( ps -> ch ) ) $.
   mpd $p |- ( ph -> ch ) $= ( wi a2i ax-mp ) ABFACFDABCEGH $. $}
idc $p |- ( ph -> ph ) $= ( wi ax-1 mpd ) AAABZAAACAECD $.
idn $p |- ( ph -> ph ) $= wph wph wph wi wph wph wph ax-1 wph wph wph wi ax-1 mpd $.
)";
  auto db = mm_parse(text);
  auto c = replay_proof(db, db.index_of(Symbol("idc")));
  auto n = replay_proof(db, db.index_of(Symbol("idn")));
  CHECK(c.conclusion == n.conclusion);
  REQUIRE(c.term);
  CHECK(*c.term == *n.term);
  CHECK(*c.term == pt("mpd(ax-1,ax-1)"));

  auto steps = decode_proof(db, db.statements[db.index_of(Symbol("idc"))]);
  REQUIRE(steps.size() == 12);
  CHECK(steps[3].tag);
  CHECK(steps[9].kind == ProofStep::Kind::Reuse);
  CHECK(steps[9].index == 0);
}

TEST_CASE("verify the demo database") {
  auto r = verify_database(demo());
  CHECK(r.ok());
  CHECK(r.checked == 8);
  CHECK(r.warnings.empty());
  CHECK(r.incomplete.empty());
}

TEST_CASE("verification failures") {
  SUBCASE("wrong step") {
    auto db = mm_parse(R"(
$c ( ) -> wff |- $. $v ph ps $.
wph $f wff ph $. wps $f wff ps $.
wi $a wff ( ph -> ps ) $.
${ min $e |- ph $. maj $e |- ( ph -> ps ) $. ax-mp $a |- ps $. $}
ax-1 $a |- ( ph -> ( ps -> ph ) ) $.
${ a1i.1 $e |- ph $. a1i $p |- ( ps -> ph ) $= wph wps wph wi a1i.1 wps wph ax-1 ax-mp $. $}
)");
    auto r = verify_database(db);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].label == Symbol("a1i"));
    CHECK(r.errors[0].message.find("step 9 (ax-mp)") != std::string::npos);
    CHECK(r.errors[0].message.find("maj") != std::string::npos);
  }
  SUBCASE("stack residue and underflow") {
    auto db = mm_parse("$c |- wff $. $v p $. wp $f wff p $. ax $a |- p $.\n"
                       "t1 $p |- p $= wp wp ax $.\n t2 $p |- p $= ax $.\n");
    auto r = verify_database(db);
    REQUIRE(r.errors.size() == 2);
    CHECK(r.errors[0].message.find("stack") != std::string::npos);
    CHECK(r.errors[1].message.find("underflow") != std::string::npos);
  }
  SUBCASE("incomplete proofs are flagged, not failed") {
    auto db = mm_parse("$c |- wff $. $v p $. wp $f wff p $. ax $a |- p $.\n"
                       "t1 $p |- p $= ? $.\n t2 $p |- p $= ( ax ) A? $.\n");
    auto r = verify_database(db);
    CHECK(r.ok());
    CHECK(r.incomplete.size() == 2);
  }
  SUBCASE("disjoint variable restrictions") {
    auto db = mm_parse(kDisjointDb);
    auto r = verify_database(db);
    CHECK(r.ok());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].label == Symbol("bad"));
    MmConfig strict;
    strict.disjoint_errors = true;
    auto s = verify_database(db, strict);
    REQUIRE(s.errors.size() == 1);
    CHECK(s.errors[0].label == Symbol("bad"));
  }
}

TEST_CASE("formula parsing") {
  const auto& db = demo();
  auto g = build_syntax_grammar(db);
  FormulaTerm t = g.parse(toks("( ph -> ( ps -> ph ) )"), Symbol("wff"));
  CHECK(t == parse_formula_term("wi(?ph,wi(?ps,?ph))"));
  CHECK(g.parse(toks("ph"), Symbol("wff")) == FormulaTerm::var("ph"));
  CHECK(parse_formula(toks("|- -. ( ph -> ps )"), g) == parse_formula_term("wn(wi(?ph,?ps))"));

  try {
    (void)g.parse(toks("( ph -> ps"), Symbol("wff"));
    FAIL("expected a parse error");
  } catch (const FormulaParseError& e) {
    CHECK(e.begin() == 3);
  }
  CHECK_THROWS_AS(g.parse(toks("( ph ps )"), Symbol("wff")), FormulaParseError);

  // Unparse reproduces every statement of the database.
  MmConfig cfg;
  for (const auto& st : db.statements) {
    if (st.kind == MmKind::Floating) continue;
    FormulaTerm f = parse_formula(st.expr, g, cfg);
    CHECK(g.unparse(f) == std::vector<Symbol>(st.expr.begin() + 1, st.expr.end()));
  }
}

TEST_CASE("ambiguous grammars are rejected with the offending span") {
  auto db = mm_parse(kAmbiguousDb);
  auto g = build_syntax_grammar(db);
  CHECK_NOTHROW(g.parse(toks("ph -> ps"), Symbol("wff")));
  try {
    (void)g.parse(toks("ph -> ps -> ch"), Symbol("wff"));
    FAIL("expected ambiguity");
  } catch (const FormulaParseError& e) {
    CHECK(std::string(e.what()).find("ambiguous") != std::string::npos);
    CHECK(e.begin() == 0);
    CHECK(e.end() == 5);
  }
  try {
    (void)g.parse(toks("( ph -> ps -> ch )"), Symbol("wff"));
    FAIL("expected ambiguity");
  } catch (const FormulaParseError& e) {
    CHECK(e.begin() == 1);
    CHECK(e.end() == 6);
  }
}

TEST_CASE("extract the demo KB") {
  auto ex = extract_kb(demo(), std::nullopt);
  const KB& kb = ex.kb;
  CHECK(ex.excluded == std::vector<Symbol>{Symbol("wimn")});
  REQUIRE(kb.base.size() == 4);
  REQUIRE(kb.grammar.size() == 7);

  auto rhs = [&](std::string_view name) { return kb.grammar[*kb.grammar.index_of(Symbol(name))]; };
  CHECK(rhs("a1i").rhs == pt("ax-mp($1,ax-1)"));
  CHECK(rhs("a1i").arity == 1);
  CHECK(rhs("mpd").rhs == pt("ax-mp($1,a2i($2))"));
  CHECK(rhs("syl").rhs == pt("mpd($1,a1i($2))"));
  CHECK(rhs("id").rhs == pt("mpd(ax-1,ax-1)"));
  CHECK(rhs("a1d").rhs == pt("syl($1,ax-1)"));
  CHECK(rhs("idimn").rhs == pt("id"));

  const Presupposition* mp = kb.base.find(Symbol("ax-mp"));
  REQUIRE(mp);
  CHECK(mp->arity == 2);
  CHECK(to_string(*mp->clause) == to_string(cl("?ps <- ?ph, wi(?ph,?ps)")));
  auto mpd = *kb.grammar.index_of(Symbol("mpd"));
  CHECK(to_string(kb.theorems[mpd]) == to_string(cl("wi(?ph,?ch) <- wi(?ph,?ps), wi(?ph,wi(?ps,?ch))")));

  auto v = validate_grammar(kb.grammar, kb.base);
  CHECK(v.ok());

  KbVerifyOptions opt;
  opt.check_chain = true;
  auto r = kb_verify(kb, opt);
  CHECK(r.violations == 0);
  CHECK(r.undefined == 0);
  CHECK(r.chain_failures == 0);
  CHECK(r.status[*kb.grammar.index_of(Symbol("idimn"))] == TheoremStatus::StrictInstance);
  CHECK(r.strict == 1);
}

TEST_CASE("extraction restricted to roots") {
  auto ex = extract_kb(demo(), std::vector<Symbol>{Symbol("id")});
  std::vector<std::string> names;
  for (const auto& p : ex.kb.grammar) names.push_back(p.nonterminal.str());
  CHECK(names == std::vector<std::string>{"a2i", "mpd", "id"});
  std::vector<std::string> axioms;
  for (const auto& p : ex.kb.base) axioms.push_back(p.name.str());
  CHECK(axioms == std::vector<std::string>{"ax-mp", "ax-1", "ax-2"});

  auto end = extract_kb(demo(), std::nullopt, {}, Symbol("syl"));
  CHECK(end.kb.grammar.size() == 4);

  CHECK_THROWS_AS(extract_kb(demo(), std::vector<Symbol>{Symbol("nope")}), LookupError);
  auto dj = extract_kb(mm_parse(kDisjointDb), std::nullopt);
  CHECK(dj.with_disjoint == std::vector<Symbol>{Symbol("good")});
}

}
