#pragma once

#include "proofgram/bigint.hpp"
#include "proofgram/term.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace proofgram {

/// p(V1..Vn) -> rhs.
struct Production {
  Symbol nonterminal;
  std::uint32_t arity = 0;
  ProofTerm rhs;

  friend bool operator==(const Production&, const Production&) = default;
};

/// Ordered productions; a nonterminal may only be referenced by later productions.
/// Structural well-formedness is not enforced on construction; see validate_grammar().
class ProofGrammar {
public:
  ProofGrammar() = default;
  explicit ProofGrammar(std::vector<Production> productions);

  const std::vector<Production>& productions() const { return prods_; }
  std::size_t size() const { return prods_.size(); }
  bool empty() const { return prods_.empty(); }
  const Production& operator[](std::size_t i) const { return prods_[i]; }
  auto begin() const { return prods_.begin(); }
  auto end() const { return prods_.end(); }

  std::optional<std::size_t> index_of(Symbol nonterminal) const;
  bool defines(Symbol nonterminal) const { return index_.contains(nonterminal); }
  const Production* find(Symbol nonterminal) const;

  void push_back(Production p);
  void set_rhs(std::size_t i, ProofTerm rhs) { prods_[i].rhs = rhs; }

  friend bool operator==(const ProofGrammar& a, const ProofGrammar& b) { return a.prods_ == b.prods_; }

private:
  std::vector<Production> prods_;
  std::unordered_map<Symbol, std::size_t> index_;
};

/// A presupposition p :: F. The clause may be absent for arity-only terminal
/// declarations (enough for compression, not for MGT computation).
struct Presupposition {
  Symbol name;
  std::uint32_t arity = 0;
  std::optional<Clause> clause;
};

/// Presuppositions with pairwise distinct names, kept in declaration order.
class PresuppositionBase {
public:
  void add(Presupposition p);
  void add(Symbol name, Clause clause);
  const Presupposition* find(Symbol name) const;
  bool contains(Symbol name) const { return index_.contains(name); }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

private:
  std::vector<Presupposition> items_;
  std::unordered_map<Symbol, std::size_t> index_;
};

/// Knowledge base: base, stated theorem clauses aligned with the grammar's productions.
struct KB {
  PresuppositionBase base;
  std::vector<Clause> theorems;
  ProofGrammar grammar;
};

// ---------------------------------------------------------------- metrics

/// Edge count of the tree, exact even for heavily shared DAG terms.
BigInt term_size(ProofTerm t);
BigInt term_size(FormulaTerm t);

struct ClauseMetrics {
  std::uint64_t size = 0;
  std::uint64_t height = 0;
};

/// |F| and h(F): variables and constants weigh 0, f(t1..tn) with n >= 1 weighs 1 + sum.
ClauseMetrics clause_metrics(const Clause& c);

/// No parameter index occurs twice.
bool is_linear(ProofTerm t);

/// Number of occurrences of each parameter V1..Vk in the tree (index 0 unused).
std::vector<BigInt> parameter_occurrences(ProofTerm t, std::uint32_t k);

/// Simultaneous replacement of V_i by args[i-1]. Throws PreconditionError if a
/// parameter index exceeds args.size().
ProofTerm substitute_params(ProofTerm d, std::span<const ProofTerm> args);

/// Sum of RHS sizes; exact.
BigInt grammar_size(const ProofGrammar& g);

/// Number of occurrences of each nonterminal in RHSs, aligned with productions.
std::vector<std::uint64_t> reference_counts(const ProofGrammar& g);

// ---------------------------------------------------------------- validation

enum class IssueKind {
  DuplicateNonterminal,
  OrderingViolation,
  ArityMismatch,
  UndeclaredTerminal,
  ParameterOutOfRange,
  NonterminalShadowsPresupposition,
  UnusedParameter,  // warning only
};

struct GrammarIssue {
  IssueKind kind;
  std::size_t production;
  std::string message;
};

struct GrammarReport {
  std::vector<GrammarIssue> errors;
  std::vector<GrammarIssue> warnings;
  std::vector<Symbol> terminals;  // first-use order

  bool ok() const { return errors.empty(); }
};

GrammarReport validate_grammar(const ProofGrammar& g, const PresuppositionBase& base);

std::string to_string(IssueKind k);

} // namespace proofgram
