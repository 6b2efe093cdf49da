#pragma once

#include "proofgram/term.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace proofgram {

/// Finite map from variables to terms. Substitutions produced by mgu() are
/// idempotent: no domain variable occurs in a range term.
class Substitution {
public:
  void bind(Symbol var, FormulaTerm t) { map_.insert_or_assign(var, t); }
  const FormulaTerm* lookup(Symbol var) const;
  bool contains(Symbol var) const { return map_.contains(var); }
  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  /// Bindings sorted by variable name.
  std::vector<std::pair<Symbol, FormulaTerm>> sorted() const;

private:
  std::unordered_map<Symbol, FormulaTerm> map_;
};

FormulaTerm apply(const Substitution& s, FormulaTerm t);
Clause apply(const Substitution& s, const Clause& c);

/// Most general unifier of a family of term sets: each nonempty set must
/// become a singleton. Occurs check is enforced. nullopt means undefined.
std::optional<Substitution> mgu(std::span<const std::vector<FormulaTerm>> sets);
std::optional<Substitution> mgu(FormulaTerm a, FormulaTerm b);

enum class BodyOrder { Ordered, ModPermutation };

/// Witness for F = apply(sigma, pi(F')): F.body[j] is the instance of
/// F'.body[permutation[j]].
struct InstanceWitness {
  Substitution sigma;
  std::vector<std::size_t> permutation;
};

struct MatchResult {
  std::optional<InstanceWitness> instance;
  bool variant = false;
  bool strict = false;
};

/// One-way matching: is `specific` an instance of `general`? Only clauses with
/// equal body lengths are compared.
std::optional<InstanceWitness> find_instance(const Clause& specific, const Clause& general, BodyOrder mode);

/// Instance, variant and strict-instance relation of F against F'.
MatchResult match_clause(const Clause& f, const Clause& f_prime, BodyOrder mode);

bool is_variant(const Clause& a, const Clause& b, BodyOrder mode);

/// Hash invariant under variable renaming and (optionally) body permutation,
/// for bucketing before exact variant checks.
std::size_t variant_fingerprint(const Clause& c, BodyOrder mode);

// ---------------------------------------------------------------- low level

/// Mutable term store for repeated unification: variables are cells bound via
/// union-find, structure is copied in from hash-consed terms on load.
class TermBank {
public:
  using Ref = std::uint32_t;

  /// Per-copy variable scope: loading the same variable name twice in one scope
  /// yields the same cell.
  struct Scope {
    std::unordered_map<Symbol, Ref> vars;
    std::unordered_map<const detail::Node*, Ref> memo;
  };

  Ref fresh_var(Symbol origin = {});
  Ref load(FormulaTerm t, Scope& scope);
  Ref deref(Ref r);
  bool unify(Ref a, Ref b);

  bool is_unbound_var(Ref r) { return cell(deref(r)).is_var; }
  Symbol origin(Ref r) { return Symbol::from_id(cell(deref(r)).symbol); }

  /// Rebuilds a hash-consed term; `name_of` names each unbound variable cell.
  FormulaTerm extract(Ref r, const std::function<FormulaTerm(Ref)>& name_of);

  std::size_t cell_count() const { return cells_.size(); }

private:
  struct Cell {
    std::uint32_t symbol;  // functor, or origin name for variables (0 if anonymous)
    std::uint32_t first;   // first argument slot in args_
    std::uint32_t arity;
    std::uint32_t bound;   // variables: target cell, self when unbound
    bool is_var;
  };

  Cell& cell(Ref r) { return cells_[r]; }
  bool occurs(Ref var, Ref in);

  std::vector<Cell> cells_;
  std::vector<Ref> args_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t epoch_ = 0;
};

/// Assigns canonical names x1, x2, ... to unbound cells in extraction order.
class CanonicalNamer {
public:
  explicit CanonicalNamer(TermBank& bank, std::string prefix = "x") : bank_(bank), prefix_(std::move(prefix)) {}
  FormulaTerm operator()(TermBank::Ref r);
  std::size_t count() const { return names_.size(); }

private:
  TermBank& bank_;
  std::string prefix_;
  std::unordered_map<TermBank::Ref, FormulaTerm> names_;
};

} // namespace proofgram
