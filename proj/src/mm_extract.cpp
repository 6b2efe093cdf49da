#include "proofgram/dag.hpp"
#include "proofgram/metamath.hpp"

#include <algorithm>
#include <map>

namespace proofgram {

namespace {

Clause statement_clause(const MmDatabase& db, const MmStatement& st, const SyntaxGrammar& g, const MmConfig& cfg) {
  try {
    Clause c{parse_formula(st.expr, g, cfg), {}};
    for (auto e : st.frame.essential) c.body.push_back(parse_formula(db.statements[e].expr, g, cfg));
    return c;
  } catch (const FormulaParseError& e) {
    throw ProofError(st.label, e.what());
  }
}

ProofTerm replay_term(const MmDatabase& db, std::uint32_t idx, const MmConfig& cfg) {
  auto r = replay_proof(db, idx, cfg);
  if (r.incomplete) throw ProofError(db.statements[idx].label, "incomplete proof");
  if (!r.term) throw InternalError(db.statements[idx].label.str() + ": provable conclusion without a proof term");
  return *r.term;
}

} // namespace

MmExtraction extract_kb(const MmDatabase& db, const std::optional<std::vector<Symbol>>& roots, const MmConfig& cfg,
                        std::optional<Symbol> end_label) {
  MmExtraction out;
  const auto end = end_label ? db.index_of(*end_label) + 1 : static_cast<std::uint32_t>(db.statements.size());
  SyntaxGrammar g = build_syntax_grammar(db, cfg);

  std::map<std::uint32_t, ProofTerm> theorems;  // ordered by database position
  std::vector<std::uint32_t> axioms;

  if (roots) {
    std::vector<std::uint32_t> work;
    std::unordered_set<std::uint32_t> seen;
    for (Symbol r : *roots) {
      auto i = db.index_of(r);
      if (seen.insert(i).second) work.push_back(i);
    }
    while (!work.empty()) {
      auto i = work.back();
      work.pop_back();
      const MmStatement& st = db.statements[i];
      if (!st.is_assertion() || !cfg.is_provable(st.typecode()))
        throw PreconditionError("root '" + st.label.str() + "' is not a provable assertion");
      if (st.kind == MmKind::Axiom) {
        axioms.push_back(i);
        continue;
      }
      ProofTerm t = replay_term(db, i, cfg);
      theorems.emplace(i, t);
      for (ProofTerm n : post_order(t)) {
        if (n.is_param()) continue;
        auto j = db.index_of(n.name());
        if (seen.insert(j).second) work.push_back(j);
      }
    }
    std::sort(axioms.begin(), axioms.end());
  } else {
    for (std::uint32_t i = 0; i < end; ++i) {
      const MmStatement& st = db.statements[i];
      if (!st.is_assertion()) continue;
      if (!cfg.is_provable(st.typecode())) {
        if (st.kind == MmKind::Provable) out.excluded.push_back(st.label);
        continue;
      }
      if (st.kind == MmKind::Axiom) axioms.push_back(i);
      else theorems.emplace(i, replay_term(db, i, cfg));
    }
  }

  for (auto i : axioms) {
    const MmStatement& st = db.statements[i];
    out.kb.base.add({st.label, static_cast<std::uint32_t>(st.frame.essential.size()), statement_clause(db, st, g, cfg)});
  }
  for (const auto& [i, term] : theorems) {
    const MmStatement& st = db.statements[i];
    out.kb.grammar.push_back({st.label, static_cast<std::uint32_t>(st.frame.essential.size()), term});
    out.kb.theorems.push_back(statement_clause(db, st, g, cfg));
    if (!st.frame.disjoint.empty()) out.with_disjoint.push_back(st.label);
  }
  return out;
}

} // namespace proofgram
