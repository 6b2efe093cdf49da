#pragma once

// Metamath databases: parsing, compressed proofs, proof replay, formula
// parsing through the database's syntax axioms, and extraction of a KB.

#include "proofgram/error.hpp"
#include "proofgram/grammar.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace proofgram {

enum class MmKind : std::uint8_t { Floating, Essential, Axiom, Provable };

using SymbolPair = std::pair<Symbol, Symbol>;  // ordered by id

struct MmFrame {
  std::vector<std::uint32_t> hyps;        // mandatory $f and $e statements, database order
  std::vector<std::uint32_t> essential;   // the $e among them
  std::vector<SymbolPair> disjoint;       // mandatory $d pairs
};

struct MmStatement {
  MmKind kind;
  Symbol label;
  std::vector<Symbol> expr;  // typecode first
  std::size_t line = 0;
  std::uint32_t scope_end = 0;  // hypotheses: index of the first statement outside their block
  MmFrame frame;                // assertions only
  std::vector<SymbolPair> all_disjoint;  // $p: every $d in scope, sorted

  bool compressed = false;
  std::vector<Symbol> proof_labels;  // normal steps, or the parenthesized list when compressed
  std::string proof_letters;

  Symbol typecode() const { return expr.front(); }
  bool is_assertion() const { return kind == MmKind::Axiom || kind == MmKind::Provable; }
};

struct MmDatabase {
  std::vector<MmStatement> statements;
  std::unordered_map<Symbol, std::uint32_t> by_label;
  std::unordered_set<Symbol> constants;
  std::unordered_set<Symbol> variables;

  const MmStatement* find(Symbol label) const;
  std::uint32_t index_of(Symbol label) const;  // LookupError if absent
};

MmDatabase mm_parse(std::string_view text);
MmDatabase read_mm(const std::filesystem::path& path);

// ---------------------------------------------------------------- proofs

struct CompressedItem {
  enum class Kind : std::uint8_t { Number, Tag, Unknown } kind;
  std::uint64_t value = 0;  // Number: 1-based reference
  bool operator==(const CompressedItem&) const = default;
};

/// Splits the letter stream: A-T end a number, U-Y are leading digits, Z tags
/// the previous step, ? is an unknown step.
std::vector<CompressedItem> decode_compressed_numbers(std::string_view letters);

struct ProofStep {
  enum class Kind : std::uint8_t { Statement, Reuse, Unknown } kind;
  std::uint32_t index = 0;  // Statement: statement index; Reuse: tagged-step ordinal
  bool tag = false;         // saved for later Reuse
};

/// Step list of a $p in either proof format.
std::vector<ProofStep> decode_proof(const MmDatabase& db, const MmStatement& stmt);

class ProofError : public InputError {
public:
  ProofError(Symbol label, const std::string& what) : InputError(label.str() + ": " + what), label_(label) {}
  Symbol label() const { return label_; }

private:
  Symbol label_;
};

struct MmConfig {
  std::vector<Symbol> provable{Symbol("|-")};
  /// Syntactic typecode used to parse the body of each provable typecode.
  std::unordered_map<Symbol, Symbol> parse_as{{Symbol("|-"), Symbol("wff")}};
  bool disjoint_errors = false;

  bool is_provable(Symbol typecode) const;
  Symbol syntax_typecode(Symbol typecode) const;
};

struct ReplayResult {
  std::vector<Symbol> conclusion;
  std::optional<ProofTerm> term;  // logical skeleton, when the conclusion is provable
  bool incomplete = false;
  std::vector<std::string> disjoint_violations;
};

/// Runs the proof of a $p on the stack machine. Throws ProofError.
ReplayResult replay_proof(const MmDatabase& db, std::uint32_t stmt, const MmConfig& cfg = {});

struct MmIssue {
  Symbol label;
  std::string message;
};

struct MmVerifyReport {
  std::size_t checked = 0;
  std::vector<MmIssue> errors;
  std::vector<MmIssue> warnings;
  std::vector<Symbol> incomplete;
  bool ok() const { return errors.empty(); }
};

MmVerifyReport verify_database(const MmDatabase& db, const MmConfig& cfg = {});

// ---------------------------------------------------------------- syntax

class FormulaParseError : public InputError {
public:
  FormulaParseError(const std::string& what, std::size_t begin, std::size_t end)
      : InputError(what), begin_(begin), end_(end) {}
  std::size_t begin() const { return begin_; }
  std::size_t end() const { return end_; }

private:
  std::size_t begin_, end_;
};

/// Context-free grammar over typecodes: one rule per $f (the variable token
/// itself) and per $a with a non-provable typecode. Parsing is Earley with a
/// derivation count capped at two.
class SyntaxGrammar {
public:
  SyntaxGrammar() = default;

  /// Parses `tokens` as `typecode`; syntax axiom labels become functors.
  FormulaTerm parse(std::span<const Symbol> tokens, Symbol typecode) const;
  /// Inverse of parse.
  std::vector<Symbol> unparse(FormulaTerm t) const;

  std::size_t rule_count() const { return rules_.size(); }

private:
  friend SyntaxGrammar build_syntax_grammar(const MmDatabase& db, const MmConfig& cfg);
  friend class EarleyChart;

  struct Rule {
    std::uint32_t lhs;          // nonterminal id
    Symbol label;               // syntax axiom, or the variable for $f rules
    bool variable = false;
    std::vector<std::int64_t> rhs;  // >= 0 terminal symbol id, < 0 nonterminal -(id+1)
    std::vector<Symbol> pattern;    // the axiom's tokens after the typecode
  };
  struct TrieNode {
    std::unordered_map<std::int64_t, std::uint32_t> next;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> nt_edges;  // (nonterminal, child)
    std::vector<std::uint32_t> complete;                            // rules ending here
  };

  std::uint32_t nonterminal(Symbol typecode);
  std::uint32_t add_node();
  void add_rule(Rule r);
  void finish();

  std::unordered_map<Symbol, std::uint32_t> nt_;
  std::vector<Symbol> nt_names_;
  std::vector<Rule> rules_;
  std::vector<TrieNode> trie_;
  std::vector<std::uint32_t> root_;               // per nonterminal
  std::vector<std::unordered_set<std::uint32_t>> first_;  // terminal symbol ids per nonterminal
  std::unordered_map<Symbol, std::uint32_t> axiom_rule_;
};

SyntaxGrammar build_syntax_grammar(const MmDatabase& db, const MmConfig& cfg = {});

/// Parses a statement's math string (typecode first) into a formula term.
FormulaTerm parse_formula(std::span<const Symbol> expr, const SyntaxGrammar& g, const MmConfig& cfg = {});

// ---------------------------------------------------------------- extraction

struct MmExtraction {
  KB kb;
  std::vector<Symbol> excluded;       // $p with syntactic typecode
  std::vector<Symbol> with_disjoint;  // theorems carrying $d restrictions
};

/// Builds the KB of provable $p statements: within the dependency closure of
/// `roots` when given, otherwise every $p up to `end_label` (inclusive) or
/// the whole database.
MmExtraction extract_kb(const MmDatabase& db, const std::optional<std::vector<Symbol>>& roots,
                        const MmConfig& cfg = {}, std::optional<Symbol> end_label = std::nullopt);

} // namespace proofgram
