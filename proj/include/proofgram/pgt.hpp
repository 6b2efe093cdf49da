#pragma once

// PGT: line-oriented text format for presupposition bases, proof grammars and
// stated theorem clauses.
//
//   # comment
//   axiom <name>/<n> : <clause>
//   prod <name>(<n>) -> <proofterm> [ : <clause> ]
//
// Proof terms are `name` or `name(t1,...,tk)` with parameters `$1`, `$2`, ...;
// clauses are `<term>` or `<term> <- <term>, ..., <term>` with formula
// variables `?name`. Names match [A-Za-z0-9._'-]+ or are single-quoted with
// backslash escapes. Declarations appear in grammar order.

#include "proofgram/grammar.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proofgram {

struct PgtDocument {
  PresuppositionBase base;
  ProofGrammar grammar;
  std::vector<std::optional<Clause>> stated;  // aligned with grammar
  std::vector<std::string> comments;          // leading '#' lines, without the marker
};

PgtDocument parse_pgt(std::string_view text);
PgtDocument read_pgt(const std::filesystem::path& path);

/// Serializes; `header` lines are written first as comments.
std::string format_pgt(const PgtDocument& doc, const std::vector<std::string>& header = {});
void write_pgt(const std::filesystem::path& path, const PgtDocument& doc, const std::vector<std::string>& header = {});

PgtDocument to_document(const KB& kb);

/// Builds a KB, requiring a stated clause for every production.
KB to_kb(const PgtDocument& doc);

ProofTerm parse_proof_term(std::string_view text);
FormulaTerm parse_formula_term(std::string_view text);
Clause parse_clause(std::string_view text);

} // namespace proofgram
