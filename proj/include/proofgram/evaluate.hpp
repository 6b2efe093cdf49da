#pragma once

#include "proofgram/grammar.hpp"

#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

namespace proofgram {

/// Evaluates nonterminals bottom-up over an algebra without expanding trees.
/// `Ops` supplies:
///   V terminal(Symbol, std::span<const V>)  value of a terminal node
///   V param(std::uint32_t)                   value of an open parameter V_i
///   std::size_t hash(const V&)
/// Results are memoized on (production, argument values), so each distinct
/// instance of a nonterminal is evaluated once.
template <class V, class Ops>
class GrammarEvaluator {
public:
  GrammarEvaluator(const ProofGrammar& g, Ops ops) : g_(g), ops_(std::move(ops)) {}
  GrammarEvaluator(const GrammarEvaluator&) = delete;
  GrammarEvaluator& operator=(const GrammarEvaluator&) = delete;

  /// Value of val_G(p(V1..Vn)) with parameters left open.
  V open_value(std::size_t prod) {
    std::vector<V> params;
    for (std::uint32_t i = 1; i <= g_[prod].arity; ++i) params.push_back(ops_.param(i));
    return value(prod, params);
  }

  V value(std::size_t prod, std::span<const V> args) {
    Key key{prod, std::vector<V>(args.begin(), args.end())};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    V v = eval(g_[prod].rhs, args);
    memo_.emplace(std::move(key), v);
    return v;
  }

  std::size_t memo_size() const { return memo_.size(); }
  Ops& ops() { return ops_; }

private:
  struct Key {
    std::size_t prod;
    std::vector<V> args;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    const Ops* ops;
    std::size_t operator()(const Key& k) const {
      std::size_t h = k.prod * 0x9e3779b97f4a7c15ULL;
      for (const V& v : k.args) h = (h ^ ops->hash(v)) * 1099511628211ULL;
      return h;
    }
  };

  V eval(ProofTerm root, std::span<const V> env) {
    // Post-order over the RHS DAG; RHSs are small so a local memo suffices.
    std::unordered_map<const detail::Node*, V> local;
    struct Frame { ProofTerm t; std::size_t next; };
    std::vector<Frame> stack{{root, 0}};
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == 0 && local.contains(f.t.node_ptr())) { stack.pop_back(); continue; }
      if (f.t.is_param()) {
        local.emplace(f.t.node_ptr(), env[f.t.param_index() - 1]);
        stack.pop_back();
        continue;
      }
      if (f.next < f.t.arity()) {
        ProofTerm kid = f.t.child(f.next++);
        if (!local.contains(kid.node_ptr())) stack.push_back({kid, 0});
        continue;
      }
      std::vector<V> kids;
      kids.reserve(f.t.arity());
      for (ProofTerm k : f.t.children()) kids.push_back(local.at(k.node_ptr()));
      V out = [&] {
        if (auto idx = g_.index_of(f.t.name())) return value(*idx, kids);
        return ops_.terminal(f.t.name(), std::span<const V>(kids));
      }();
      local.emplace(f.t.node_ptr(), std::move(out));
      stack.pop_back();
    }
    return local.at(root.node_ptr());
  }

  const ProofGrammar& g_;
  Ops ops_;
  std::unordered_map<Key, V, KeyHash> memo_{16, KeyHash{&ops_}};
};

/// Builds val_G(p) as a hash-consed term (a DAG, so gigantic trees are fine).
struct ExpansionOps {
  ProofTerm terminal(Symbol s, std::span<const ProofTerm> kids) const { return ProofTerm::node(s, kids); }
  ProofTerm param(std::uint32_t i) const { return ProofTerm::param(i); }
  std::size_t hash(ProofTerm t) const { return std::hash<ProofTerm>{}(t); }
};

class Expander {
public:
  explicit Expander(const ProofGrammar& g) : eval_(g, ExpansionOps{}) {}
  /// val_G(p(V1..Vn)).
  ProofTerm value(std::size_t prod) { return eval_.open_value(prod); }
  ProofTerm value(std::size_t prod, std::span<const ProofTerm> args) { return eval_.value(prod, args); }

private:
  GrammarEvaluator<ProofTerm, ExpansionOps> eval_;
};

} // namespace proofgram
