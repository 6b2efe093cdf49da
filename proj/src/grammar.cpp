#include "proofgram/grammar.hpp"

#include "proofgram/dag.hpp"
#include "proofgram/error.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace proofgram {

// ---------------------------------------------------------------- containers

ProofGrammar::ProofGrammar(std::vector<Production> productions) {
  for (auto& p : productions) push_back(std::move(p));
}

void ProofGrammar::push_back(Production p) {
  index_.try_emplace(p.nonterminal, prods_.size());
  prods_.push_back(std::move(p));
}

std::optional<std::size_t> ProofGrammar::index_of(Symbol nonterminal) const {
  if (auto it = index_.find(nonterminal); it != index_.end()) return it->second;
  return std::nullopt;
}

const Production* ProofGrammar::find(Symbol nonterminal) const {
  auto i = index_of(nonterminal);
  return i ? &prods_[*i] : nullptr;
}

void PresuppositionBase::add(Presupposition p) {
  if (index_.contains(p.name)) throw InputError("duplicate presupposition '" + p.name.str() + "'");
  if (p.clause && p.clause->body.size() != p.arity)
    throw InputError("presupposition '" + p.name.str() + "' declares arity " + std::to_string(p.arity) +
                     " but its clause has " + std::to_string(p.clause->body.size()) + " body atoms");
  index_.emplace(p.name, items_.size());
  items_.push_back(std::move(p));
}

void PresuppositionBase::add(Symbol name, Clause clause) {
  auto arity = static_cast<std::uint32_t>(clause.body.size());
  add(Presupposition{name, arity, std::move(clause)});
}

const Presupposition* PresuppositionBase::find(Symbol name) const {
  if (auto it = index_.find(name); it != index_.end()) return &items_[it->second];
  return nullptr;
}

// ---------------------------------------------------------------- metrics

namespace {

template <class T>
BigInt exact_size(T t) {
  if (t.size_saturated() != std::numeric_limits<std::uint64_t>::max()) return BigInt(t.size_saturated());
  std::unordered_map<const detail::Node*, BigInt> memo;
  for (T u : post_order(t)) {
    BigInt s = u.arity();
    for (std::size_t i = 0; i < u.arity(); ++i) s += memo.at(u.node_ptr()->kids[i]);
    memo.emplace(u.node_ptr(), std::move(s));
  }
  return memo.at(t.node_ptr());
}

} // namespace

BigInt term_size(ProofTerm t) { return exact_size(t); }
BigInt term_size(FormulaTerm t) { return exact_size(t); }

ClauseMetrics clause_metrics(const Clause& c) {
  // Weight and height coincide with edge count and depth except that an
  // n-ary application contributes 1 rather than n.
  std::unordered_map<const detail::Node*, std::pair<std::uint64_t, std::uint64_t>> memo;
  auto atom = [&](FormulaTerm a) {
    for (FormulaTerm u : post_order(a)) {
      if (memo.contains(u.node_ptr())) continue;
      std::uint64_t w = 0, h = 0;
      if (u.arity() > 0) {
        w = 1;
        for (FormulaTerm k : u.args()) {
          auto [kw, kh] = memo.at(k.node_ptr());
          w += kw;
          h = std::max(h, kh);
        }
        h += 1;
      }
      memo.emplace(u.node_ptr(), std::pair{w, h});
    }
    return memo.at(a.node_ptr());
  };
  ClauseMetrics m;
  auto add = [&](FormulaTerm a) {
    auto [w, h] = atom(a);
    m.size += w;
    m.height = std::max(m.height, h);
  };
  add(c.head);
  for (const auto& b : c.body) add(b);
  return m;
}

bool is_linear(ProofTerm t) {
  // A parameter occurs twice in the tree iff some node containing a parameter
  // is reached twice in the DAG walk (parameter leaves are themselves shared).
  std::unordered_set<const detail::Node*> seen;
  std::vector<ProofTerm> stack{t};
  while (!stack.empty()) {
    ProofTerm u = stack.back();
    stack.pop_back();
    if (u.is_ground()) continue;
    if (!seen.insert(u.node_ptr()).second) return false;
    for (ProofTerm k : u.children()) stack.push_back(k);
  }
  return true;
}

std::vector<BigInt> parameter_occurrences(ProofTerm t, std::uint32_t k) {
  std::vector<BigInt> occ(k + 1);
  if (t.is_ground()) return occ;
  // Path counts from the root, propagated in reverse post-order.
  auto order = post_order(t);
  std::unordered_map<const detail::Node*, BigInt> paths;
  paths[t.node_ptr()] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    ProofTerm u = *it;
    if (u.is_ground()) continue;
    const BigInt& here = paths[u.node_ptr()];
    if (u.is_param()) {
      if (u.param_index() <= k) occ[u.param_index()] += here;
      continue;
    }
    for (ProofTerm c : u.children())
      if (!c.is_ground()) paths[c.node_ptr()] += here;
  }
  return occ;
}

ProofTerm substitute_params(ProofTerm d, std::span<const ProofTerm> args) {
  if (d.max_param() > args.size())
    throw PreconditionError("parameter $" + std::to_string(d.max_param()) + " exceeds the " +
                            std::to_string(args.size()) + " supplied arguments");
  if (d.is_ground()) return d;
  std::unordered_map<const detail::Node*, ProofTerm> memo;
  return rebuild(
      d,
      [&](ProofTerm u, std::span<const ProofTerm> kids) {
        if (u.is_param()) return args[u.param_index() - 1];
        if (u.is_ground()) return u;
        return ProofTerm::node(u.name(), kids);
      },
      memo);
}

BigInt grammar_size(const ProofGrammar& g) {
  BigInt total = 0;
  for (const auto& p : g) total += term_size(p.rhs);
  return total;
}

std::vector<std::uint64_t> reference_counts(const ProofGrammar& g) {
  std::vector<std::uint64_t> refs(g.size(), 0);
  for (const auto& p : g) {
    // RHSs are small relative to expansions; walk them as trees.
    std::vector<ProofTerm> stack{p.rhs};
    while (!stack.empty()) {
      ProofTerm u = stack.back();
      stack.pop_back();
      if (u.is_param()) continue;
      if (auto i = g.index_of(u.name())) ++refs[*i];
      for (ProofTerm c : u.children()) stack.push_back(c);
    }
  }
  return refs;
}

// ---------------------------------------------------------------- validation

std::string to_string(IssueKind k) {
  switch (k) {
    case IssueKind::DuplicateNonterminal: return "duplicate-nonterminal";
    case IssueKind::OrderingViolation: return "ordering-violation";
    case IssueKind::ArityMismatch: return "arity-mismatch";
    case IssueKind::UndeclaredTerminal: return "undeclared-terminal";
    case IssueKind::ParameterOutOfRange: return "parameter-out-of-range";
    case IssueKind::NonterminalShadowsPresupposition: return "nonterminal-shadows-presupposition";
    case IssueKind::UnusedParameter: return "unused-parameter";
  }
  return "unknown";
}

GrammarReport validate_grammar(const ProofGrammar& g, const PresuppositionBase& base) {
  GrammarReport report;
  std::unordered_map<Symbol, std::size_t> first_definition;
  std::unordered_map<Symbol, std::size_t> terminal_arity;
  std::unordered_set<Symbol> terminal_seen;

  for (std::size_t j = 0; j < g.size(); ++j) {
    const Production& p = g[j];
    auto [it, fresh] = first_definition.try_emplace(p.nonterminal, j);
    if (!fresh)
      report.errors.push_back({IssueKind::DuplicateNonterminal, j,
                               "nonterminal '" + p.nonterminal.str() + "' already defined by production " +
                                   std::to_string(it->second)});
    if (base.contains(p.nonterminal))
      report.errors.push_back({IssueKind::NonterminalShadowsPresupposition, j,
                               "nonterminal '" + p.nonterminal.str() + "' is also a presupposition"});
  }

  for (std::size_t j = 0; j < g.size(); ++j) {
    const Production& p = g[j];
    std::vector<bool> used(p.arity + 1, false);
    std::unordered_set<const detail::Node*> visited;
    std::vector<ProofTerm> stack{p.rhs};
    while (!stack.empty()) {
      ProofTerm u = stack.back();
      stack.pop_back();
      if (!visited.insert(u.node_ptr()).second) continue;
      if (u.is_param()) {
        if (u.param_index() == 0 || u.param_index() > p.arity)
          report.errors.push_back({IssueKind::ParameterOutOfRange, j,
                                   "parameter $" + std::to_string(u.param_index()) + " exceeds arity " +
                                       std::to_string(p.arity) + " of '" + p.nonterminal.str() + "'"});
        else
          used[u.param_index()] = true;
        continue;
      }
      for (ProofTerm c : u.children()) stack.push_back(c);

      Symbol name = u.name();
      if (auto def = first_definition.find(name); def != first_definition.end()) {
        if (def->second >= j)
          report.errors.push_back({IssueKind::OrderingViolation, j,
                                   "'" + name.str() + "' is referenced by production " + std::to_string(j) +
                                       " but defined at production " + std::to_string(def->second)});
        const Production& q = g[def->second];
        if (q.arity != u.arity())
          report.errors.push_back({IssueKind::ArityMismatch, j,
                                   "'" + name.str() + "' has arity " + std::to_string(q.arity) + " but is applied to " +
                                       std::to_string(u.arity()) + " arguments"});
        continue;
      }
      if (terminal_seen.insert(name).second) report.terminals.push_back(name);
      if (const Presupposition* pre = base.find(name)) {
        if (pre->arity != u.arity())
          report.errors.push_back({IssueKind::ArityMismatch, j,
                                   "presupposition '" + name.str() + "' has arity " + std::to_string(pre->arity) +
                                       " but is applied to " + std::to_string(u.arity()) + " arguments"});
        continue;
      }
      auto [ta, fresh] = terminal_arity.try_emplace(name, u.arity());
      if (fresh)
        report.errors.push_back({IssueKind::UndeclaredTerminal, j, "terminal '" + name.str() + "' is not declared"});
      else if (ta->second != u.arity())
        report.errors.push_back({IssueKind::ArityMismatch, j,
                                 "terminal '" + name.str() + "' is used with arities " + std::to_string(ta->second) +
                                     " and " + std::to_string(u.arity())});
    }
    for (std::uint32_t i = 1; i <= p.arity; ++i)
      if (!used[i])
        report.warnings.push_back({IssueKind::UnusedParameter, j,
                                   "parameter $" + std::to_string(i) + " of '" + p.nonterminal.str() +
                                       "' does not occur in its RHS"});
  }
  return report;
}

} // namespace proofgram
