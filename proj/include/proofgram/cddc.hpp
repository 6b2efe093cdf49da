#pragma once

#include "proofgram/grammar.hpp"
#include "proofgram/unify.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

namespace proofgram {

/// MGT of a proof term; an absent clause means UNDEFINED (unification failed).
struct MgtResult {
  std::optional<Clause> clause;
  std::uint32_t parameter_count = 0;

  bool defined() const { return clause.has_value(); }
};

/// Computes MGTs bottom-up with the APP and PAR rules, memoized per shared
/// subterm. Returned clauses are canonically renamed (x1, x2, ...).
///
/// The lookup maps a presupposition name to its clause: nullptr if the name is
/// unknown (LookupError), a pointer to nullopt if the presupposition itself is
/// UNDEFINED (the MGT becomes UNDEFINED).
class MgtEngine {
public:
  using Lookup = std::function<const std::optional<Clause>*(Symbol)>;

  explicit MgtEngine(Lookup lookup) : lookup_(std::move(lookup)) {}

  /// k defaults to the largest parameter index of d; a smaller k is a
  /// precondition error.
  MgtResult mgt(ProofTerm d, std::optional<std::uint32_t> k = std::nullopt);

  /// Forget memoized results (needed if the lookup's answers change).
  void clear() { memo_.clear(); }

private:
  const std::optional<Clause>& node_mgt(ProofTerm t);
  std::optional<Clause> apply_rule(ProofTerm t);

  Lookup lookup_;
  std::unordered_map<const detail::Node*, std::optional<Clause>> memo_;
};

MgtResult mgt(ProofTerm d, const PresuppositionBase& base, std::optional<std::uint32_t> k = std::nullopt);

/// Composition: given mgt(d) = A <- B1..Bk and ground d_i with
/// mgt(d_i) = B'_i, returns A·mgu({{B_i, B'_i}}), or nullopt if some MGT or the
/// unifier is undefined. Equals mgt(d[d1..dk]) for linear d and is an instance
/// of it in general.
std::optional<Clause> compose_mgt(ProofTerm d, std::span<const ProofTerm> args, const PresuppositionBase& base);

enum class UndefinedPolicy {
  Blanket,        // any UNDEFINED makes every entry UNDEFINED
  PerDependency,  // only productions depending on an UNDEFINED one
};

/// grammar-mgt for every production, aligned with g's productions.
std::vector<std::optional<Clause>> grammar_mgt(const ProofGrammar& g, const PresuppositionBase& base,
                                               UndefinedPolicy policy = UndefinedPolicy::Blanket);

/// shallow-mgt for every production of the KB, enriching the base with the
/// stated theorems instead of computed MGTs.
std::vector<std::optional<Clause>> shallow_mgt(const KB& kb);

enum class TheoremStatus { Ok, StrictInstance, Violation, Undefined };

std::string to_string(TheoremStatus s);

struct ChainCheck {
  bool shallow_vs_grammar = true;  // shallow-mgt >= grammar-mgt
  bool grammar_vs_expanded = true; // grammar-mgt >= mgt(val); only below the budget
  bool checked_expanded = false;
};

struct KbVerifyOptions {
  BodyOrder order = BodyOrder::Ordered;
  bool check_chain = false;
  BigInt edge_budget = 100'000;
};

struct KbVerifyReport {
  std::vector<TheoremStatus> status;
  std::vector<ChainCheck> chain;  // filled when check_chain is set
  std::size_t ok = 0, strict = 0, violations = 0, undefined = 0;
  std::size_t chain_failures = 0;

  double strict_fraction() const { return status.empty() ? 0.0 : double(strict) / double(status.size()); }
};

/// Checks F_i >= shallow-mgt(p_i) for every theorem and classifies it.
KbVerifyReport kb_verify(const KB& kb, const KbVerifyOptions& options = {});

} // namespace proofgram
