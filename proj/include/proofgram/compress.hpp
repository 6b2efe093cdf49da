#pragma once

// Grammar-based compression of proof terms and reductions of proof grammars.

#include "proofgram/bigint.hpp"
#include "proofgram/grammar.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace proofgram {

// ---------------------------------------------------------------- values

using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(const Digest& d);
Digest sha256(std::string_view bytes);

struct ValMetrics {
  BigInt size;                // |val_G(p)| with parameters left open
  std::vector<BigInt> vmult;  // vmult[i]: occurrences of V_i in val_G(p); index 0 unused
  Digest digest{};            // Merkle hash of val_G(p)
};

/// Metrics of every production, computed by recurrences over the grammar
/// without expanding it.
std::vector<ValMetrics> val_metrics(const ProofGrammar& g);
ValMetrics val_metrics(const ProofGrammar& g, std::size_t prod);

/// Merkle hash of a proof term, consistent with ValMetrics::digest.
Digest term_digest(ProofTerm t);

// ---------------------------------------------------------------- names

/// Fresh nonterminal names `<prefix>N`, skipping names already in use.
class NameSupply {
public:
  explicit NameSupply(std::string prefix = "p", std::uint64_t next = 1) : prefix_(std::move(prefix)), next_(next) {}
  void reserve(Symbol s) { used_.insert(s); }
  void reserve_all(const ProofGrammar& g);
  void reserve_all(ProofTerm t);
  Symbol fresh();

private:
  std::string prefix_;
  std::uint64_t next_;
  std::unordered_set<Symbol> used_;
};

// ---------------------------------------------------------------- DAG

/// `given` if nonempty (one per term), else `start` or `start1`, `start2`, ...
std::vector<Symbol> start_production_names(std::size_t n, std::span<const Symbol> given = {});

/// Minimal DAG grammar: one arity-0 production per non-leaf subtree that occurs
/// at least twice, plus one production per input term named by `start_names`
/// (default: `start`, or `start1`, `start2`, ... for several terms).
ProofGrammar min_dag(std::span<const ProofTerm> terms, std::span<const Symbol> start_names = {});

// ---------------------------------------------------------------- save-values

/// |G'| - |G| where G' unfolds p's production into every RHS and drops it.
BigInt save_value(const ProofGrammar& g, std::size_t prod);
/// save_value for every production.
std::vector<BigInt> save_values(const ProofGrammar& g);

/// G with production `prod` unfolded into every RHS and removed.
ProofGrammar unfold(const ProofGrammar& g, std::size_t prod);

// ---------------------------------------------------------------- TreeRePair

/// Pattern f(V1..V_{i-1}, g(V_i..V_{i+m-1}), V_{i+m}..V_{n-1+m}).
struct Digram {
  Symbol parent;
  std::uint32_t parent_arity = 0;
  Symbol child;
  std::uint32_t child_arity = 0;
  std::uint32_t index = 1;  // 1-based argument of the parent

  std::uint32_t param_count() const { return parent_arity - 1 + child_arity; }
  ProofTerm pattern() const;

  friend bool operator==(const Digram&, const Digram&) = default;
};

std::string to_string(const Digram& d);

struct RepairConfig {
  std::uint32_t min_occurrences = 2;
  std::uint32_t max_arity = 0;    // 0: unbounded
  std::uint32_t batch = 1;        // digrams replaced per counting round
  bool prune = true;
  std::string fresh_prefix = "p";
};

struct RepairStats {
  std::size_t rounds = 0;
  std::size_t replaced = 0;        // fresh productions created
  BigInt size_after_replacement;
  std::size_t productions_after_replacement = 0;
};

/// Compresses ground terms into a grammar whose start productions (named as
/// in min_dag) expand to the inputs.
ProofGrammar treerepair(std::span<const ProofTerm> terms, const RepairConfig& cfg = {},
                        std::span<const Symbol> start_names = {}, RepairStats* stats = nullptr);

/// Compresses a grammar: all RHSs are joined under a virtual root and
/// compressed as one term. Original nonterminals are kept with their values;
/// fresh ones are inserted before their first use.
ProofGrammar treerepair(const ProofGrammar& g, const RepairConfig& cfg = {}, RepairStats* stats = nullptr);

// ---------------------------------------------------------------- reductions

using SymbolSet = std::unordered_set<Symbol>;

/// Unfolds the unprotected production with the smallest save-value while that
/// value is <= 0, recomputing after each step.
ProofGrammar prune(const ProofGrammar& g, const SymbolSet& protect);

enum class NonlinearGuard { None, MgtDefined, MgtSubsumes };

std::string to_string(NonlinearGuard g);
NonlinearGuard parse_guard(std::string_view s);

struct NonlinearConfig {
  NonlinearGuard guard = NonlinearGuard::None;
  /// Required for the MGT guards.
  const PresuppositionBase* base = nullptr;
  /// For MgtSubsumes: stated clauses of protected nonterminals.
  std::unordered_map<Symbol, Clause> theorems;
  std::string fresh_prefix = "p";
};

struct NonlinearStats {
  std::size_t applied = 0;
  std::size_t rejected = 0;  // rolled back: guard violated or grammar not smaller
};

/// Repeatedly identifies two parameters of the production with the lowest
/// save-value that has an RHS occurrence with two equal arguments.
ProofGrammar nonlinear_compress(const ProofGrammar& g, const SymbolSet& protect, const NonlinearConfig& cfg = {},
                                NonlinearStats* stats = nullptr);

/// Merges nonterminals with equal values (equal arity, equal open values),
/// keeping the earliest. Candidates whose expansions fit `edge_budget` are
/// compared exactly; a digest match with different values is an InternalError.
ProofGrammar same_value_reduce(const ProofGrammar& g, const SymbolSet& protect, const BigInt& edge_budget = 100'000);

/// Redirects references of a nonterminal to an earlier one whose grammar-MGT
/// subsumes its own (modulo body permutation, arguments permuted
/// accordingly), then prunes.
ProofGrammar mgt_reduce(const ProofGrammar& g, const PresuppositionBase& base, const SymbolSet& protect);

/// Theorems (by production name) that are not instances of their production's
/// grammar-MGT, or whose production is missing, in grammar order then by name.
std::vector<Symbol> unsupported_theorems(const ProofGrammar& g, const PresuppositionBase& base,
                                         const std::unordered_map<Symbol, Clause>& theorems);

struct RecompressConfig {
  RecompressConfig() { repair.fresh_prefix = "lemma"; }
  RepairConfig repair;  // its fresh_prefix names the lemmas
  bool nonlinear = true;
  NonlinearConfig nonlinear_cfg;
};

/// Grammar re-compression: TreeRePair over the joined RHSs, nonlinear
/// compression and pruning, original nonterminals protected. Fresh
/// nonterminals are named lemma1, lemma2, ... in creation order.
ProofGrammar recompress_grammar(const ProofGrammar& g, const RecompressConfig& cfg = {});

/// Literal check that every nonterminal of `before` named in `names` has the
/// same value in `after`. Uses digests; exact when both fit `edge_budget`.
bool same_values(const ProofGrammar& before, const ProofGrammar& after, std::span<const Symbol> names,
                 const BigInt& edge_budget = 100'000);

} // namespace proofgram
