#include "proofgram/cddc.hpp"
#include "proofgram/compress.hpp"
#include "proofgram/dag.hpp"
#include "proofgram/error.hpp"
#include "proofgram/evaluate.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <tuple>

namespace proofgram {

namespace {

// Rewrites every RHS bottom-up with `fn(node, rebuilt_children)`; a shared memo
// is fine because the rewrite does not depend on the enclosing production.
template <class Fn>
ProofGrammar rewrite_all(const ProofGrammar& g, Fn&& fn) {
  std::unordered_map<const detail::Node*, ProofTerm> memo;
  std::vector<Production> out;
  for (const auto& p : g) {
    Production q = p;
    q.rhs = rebuild(
        p.rhs,
        [&](ProofTerm u, std::span<const ProofTerm> kids) {
          if (u.is_param()) return u;
          return fn(u, kids);
        },
        memo);
    out.push_back(q);
  }
  return ProofGrammar(std::move(out));
}

ProofGrammar without(const ProofGrammar& g, const std::unordered_set<Symbol>& drop) {
  std::vector<Production> out;
  for (const auto& p : g)
    if (!drop.contains(p.nonterminal)) out.push_back(p);
  return ProofGrammar(std::move(out));
}

} // namespace

// ---------------------------------------------------------------- prune

ProofGrammar prune(const ProofGrammar& g, const SymbolSet& protect) {
  ProofGrammar cur = g;
  for (;;) {
    auto sav = save_values(cur);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (protect.contains(cur[i].nonterminal) || sav[i] > 0) continue;
      if (!best || sav[i] < sav[*best]) best = i;
    }
    if (!best) return cur;
    cur = unfold(cur, *best);
  }
}

// ---------------------------------------------------------------- nonlinear

std::string to_string(NonlinearGuard g) {
  switch (g) {
    case NonlinearGuard::None: return "none";
    case NonlinearGuard::MgtDefined: return "mgt-defined";
    case NonlinearGuard::MgtSubsumes: return "mgt-subsumes";
  }
  return "?";
}

NonlinearGuard parse_guard(std::string_view s) {
  if (s == "none") return NonlinearGuard::None;
  if (s == "mgt-defined") return NonlinearGuard::MgtDefined;
  if (s == "mgt-subsumes") return NonlinearGuard::MgtSubsumes;
  throw InputError("unknown guard '" + std::string(s) + "' (expected none, mgt-defined or mgt-subsumes)");
}

namespace {

struct Identification {
  Symbol p;
  std::uint32_t j, k;  // 1-based, j < k
};

struct IdLess {
  bool operator()(const Identification& a, const Identification& b) const {
    if (a.p != b.p) return a.p.id() < b.p.id();
    return std::tie(a.j, a.k) < std::tie(b.j, b.k);
  }
};

// Occurrences p(..t..t..) per production and argument pair, over distinct RHS nodes.
std::map<Identification, std::size_t, IdLess> equal_argument_pairs(const ProofGrammar& g) {
  std::map<Identification, std::size_t, IdLess> out;
  for (const auto& prod : g)
    for (ProofTerm u : post_order(prod.rhs)) {
      if (u.is_param() || u.arity() < 2 || !g.defines(u.name())) continue;
      for (std::uint32_t j = 1; j <= u.arity(); ++j)
        for (std::uint32_t k = j + 1; k <= u.arity(); ++k)
          if (u.child(j - 1) == u.child(k - 1)) ++out[{u.name(), j, k}];
    }
  return out;
}

ProofGrammar identify(const ProofGrammar& g, const Identification& id, Symbol fresh) {
  const std::size_t at = *g.index_of(id.p);
  const Production& p = g[at];
  std::vector<ProofTerm> map;
  for (std::uint32_t i = 1; i <= p.arity; ++i)
    map.push_back(ProofTerm::param(i < id.k ? i : i == id.k ? id.j : i - 1));
  Production np{fresh, p.arity - 1, substitute_params(p.rhs, map)};

  ProofGrammar rewritten = rewrite_all(g, [&](ProofTerm u, std::span<const ProofTerm> kids) {
    if (u.name() != id.p || kids[id.j - 1] != kids[id.k - 1]) return ProofTerm::node(u.name(), kids);
    std::vector<ProofTerm> args;
    for (std::uint32_t i = 1; i <= kids.size(); ++i)
      if (i != id.k) args.push_back(kids[i - 1]);
    return ProofTerm::node(fresh, args);
  });
  std::vector<Production> out(rewritten.begin(), rewritten.end());
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(at) + 1, np);
  return ProofGrammar(std::move(out));
}

// What the guard needs to know about a grammar's MGTs.
struct MgtState {
  std::unordered_set<Symbol> defined;
  std::unordered_set<Symbol> subsuming;  // protected theorems that are instances
};

MgtState mgt_state(const ProofGrammar& g, const NonlinearConfig& cfg) {
  MgtState s;
  auto gm = grammar_mgt(g, *cfg.base, UndefinedPolicy::PerDependency);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!gm[i]) continue;
    s.defined.insert(g[i].nonterminal);
    if (auto it = cfg.theorems.find(g[i].nonterminal); it != cfg.theorems.end())
      if (find_instance(it->second, *gm[i], BodyOrder::Ordered)) s.subsuming.insert(g[i].nonterminal);
  }
  return s;
}

// Nothing defined before may become undefined; new nonterminals must be defined.
bool guard_holds(const ProofGrammar& g, const MgtState& before, const MgtState& after, const NonlinearConfig& cfg) {
  for (const auto& p : g)
    if (before.defined.contains(p.nonterminal) && !after.defined.contains(p.nonterminal)) return false;
  if (cfg.guard == NonlinearGuard::MgtSubsumes)
    for (Symbol s : before.subsuming)
      if (!after.subsuming.contains(s)) return false;
  return true;
}

} // namespace

std::vector<Symbol> unsupported_theorems(const ProofGrammar& g, const PresuppositionBase& base,
                                         const std::unordered_map<Symbol, Clause>& theorems) {
  auto gm = grammar_mgt(g, base, UndefinedPolicy::PerDependency);
  std::vector<Symbol> out, missing;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto it = theorems.find(g[i].nonterminal);
    if (it == theorems.end()) continue;
    if (!gm[i] || !find_instance(it->second, *gm[i], BodyOrder::Ordered)) out.push_back(g[i].nonterminal);
  }
  for (const auto& [name, clause] : theorems)
    if (!g.defines(name)) missing.push_back(name);
  std::sort(missing.begin(), missing.end(), [](Symbol a, Symbol b) { return a.name() < b.name(); });
  out.insert(out.end(), missing.begin(), missing.end());
  return out;
}

ProofGrammar nonlinear_compress(const ProofGrammar& g, const SymbolSet& protect, const NonlinearConfig& cfg,
                                NonlinearStats* stats) {
  if (cfg.guard != NonlinearGuard::None && cfg.base == nullptr)
    throw PreconditionError("the " + to_string(cfg.guard) + " guard needs a presupposition base");
  NameSupply names(cfg.fresh_prefix);
  names.reserve_all(g);

  ProofGrammar cur = g;
  BigInt size = grammar_size(cur);
  std::optional<MgtState> state;
  if (cfg.guard != NonlinearGuard::None) state = mgt_state(cur, cfg);
  std::set<Identification, IdLess> rejected;

  for (;;) {
    auto pairs = equal_argument_pairs(cur);
    auto sav = save_values(cur);
    // Lowest save-value, then earliest production, then most occurrences.
    using Rank = std::tuple<BigInt, std::size_t, std::size_t, std::uint32_t, std::uint32_t>;
    std::optional<Identification> pick;
    std::optional<Rank> best;
    for (const auto& [id, n] : pairs) {
      if (rejected.contains(id)) continue;
      std::size_t at = *cur.index_of(id.p);
      Rank r{sav[at], at, SIZE_MAX - n, id.j, id.k};
      if (!best || r < *best) {
        best = std::move(r);
        pick = id;
      }
    }
    if (!pick) return cur;

    Symbol fresh = names.fresh();
    ProofGrammar next = prune(identify(cur, *pick, fresh), protect);
    BigInt next_size = grammar_size(next);
    bool ok = next_size < size;
    std::optional<MgtState> next_state;
    if (ok && state) {
      next_state = mgt_state(next, cfg);
      ok = guard_holds(next, *state, *next_state, cfg);
      if (ok && next.defines(fresh) && !next_state->defined.contains(fresh)) ok = false;
    }
    if (!ok) {
      rejected.insert(*pick);
      if (stats) ++stats->rejected;
      continue;
    }
    cur = std::move(next);
    size = std::move(next_size);
    if (next_state) state = std::move(next_state);
    if (stats) ++stats->applied;
  }
}

// ---------------------------------------------------------------- same value

ProofGrammar same_value_reduce(const ProofGrammar& g, const SymbolSet& protect, const BigInt& edge_budget) {
  auto metrics = val_metrics(g);
  Expander expander(g);
  std::map<std::pair<std::uint32_t, Digest>, std::size_t> leader;
  std::unordered_map<Symbol, Symbol> merge;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto [it, fresh] = leader.emplace(std::pair{g[i].arity, metrics[i].digest}, i);
    if (fresh || protect.contains(g[i].nonterminal)) continue;
    std::size_t l = it->second;
    if (metrics[i].size <= edge_budget && metrics[l].size <= edge_budget && expander.value(i) != expander.value(l))
      throw InternalError("value digest collision between '" + g[l].nonterminal.str() + "' and '" +
                          g[i].nonterminal.str() + "'");
    merge.emplace(g[i].nonterminal, g[l].nonterminal);
  }
  if (merge.empty()) return g;
  ProofGrammar rewritten = rewrite_all(g, [&](ProofTerm u, std::span<const ProofTerm> kids) {
    auto it = merge.find(u.name());
    return ProofTerm::node(it == merge.end() ? u.name() : it->second, kids);
  });
  std::unordered_set<Symbol> drop;
  for (const auto& [from, to] : merge) drop.insert(from);
  return without(rewritten, drop);
}

// ---------------------------------------------------------------- MGT-based

ProofGrammar mgt_reduce(const ProofGrammar& g, const PresuppositionBase& base, const SymbolSet& protect) {
  ProofGrammar cur = g;
  for (;;) {
    auto gm = grammar_mgt(cur, base, UndefinedPolicy::PerDependency);
    // First production whose RHS mentions each nonterminal.
    std::vector<std::size_t> first_user(cur.size(), cur.size());
    for (std::size_t r = 0; r < cur.size(); ++r)
      for (ProofTerm u : post_order(cur[r].rhs))
        if (!u.is_param())
          if (auto q = cur.index_of(u.name()); q && first_user[*q] == cur.size()) first_user[*q] = r;

    struct Redirect {
      Symbol to;
      std::vector<std::size_t> perm;
    };
    std::unordered_map<Symbol, Redirect> redirect;
    std::unordered_set<Symbol> targets;
    for (std::size_t q = 0; q < cur.size(); ++q) {
      const Symbol qn = cur[q].nonterminal;
      if (protect.contains(qn) || !gm[q] || targets.contains(qn) || first_user[q] == cur.size()) continue;
      for (std::size_t p = 0; p < first_user[q]; ++p) {
        if (p == q || cur[p].arity != cur[q].arity || !gm[p] || redirect.contains(cur[p].nonterminal)) continue;
        auto w = find_instance(*gm[q], *gm[p], BodyOrder::ModPermutation);
        if (!w) continue;
        redirect.emplace(qn, Redirect{cur[p].nonterminal, w->permutation});
        targets.insert(cur[p].nonterminal);
        break;
      }
    }
    if (redirect.empty()) return cur;
    ProofGrammar rewritten = rewrite_all(cur, [&](ProofTerm u, std::span<const ProofTerm> kids) {
      auto it = redirect.find(u.name());
      if (it == redirect.end()) return ProofTerm::node(u.name(), kids);
      std::vector<ProofTerm> args(kids.size());
      for (std::size_t j = 0; j < kids.size(); ++j) args[it->second.perm[j]] = kids[j];
      return ProofTerm::node(it->second.to, args);
    });
    cur = prune(rewritten, protect);
  }
}

// ---------------------------------------------------------------- recompression

namespace {

std::uint64_t numeric_suffix(Symbol s, std::string_view prefix) {
  std::string_view n = s.name();
  std::uint64_t v = UINT64_MAX;
  if (n.starts_with(prefix)) std::from_chars(n.data() + prefix.size(), n.data() + n.size(), v);
  return v;
}

// Renames non-original nonterminals to <prefix>1, <prefix>2, ... by their
// creation number.
ProofGrammar renumber(const ProofGrammar& g, const SymbolSet& originals, const std::string& prefix) {
  std::vector<std::pair<std::uint64_t, std::size_t>> fresh;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!originals.contains(g[i].nonterminal)) fresh.emplace_back(numeric_suffix(g[i].nonterminal, prefix), i);
  std::sort(fresh.begin(), fresh.end());

  NameSupply names(prefix);
  for (const auto& p : g)
    for (ProofTerm u : post_order(p.rhs))
      if (!u.is_param() && !g.defines(u.name())) names.reserve(u.name());
  for (Symbol s : originals) names.reserve(s);
  std::unordered_map<Symbol, Symbol> rename;
  for (const auto& [n, i] : fresh) rename.emplace(g[i].nonterminal, names.fresh());

  ProofGrammar body = rewrite_all(g, [&](ProofTerm u, std::span<const ProofTerm> kids) {
    auto it = rename.find(u.name());
    return ProofTerm::node(it == rename.end() ? u.name() : it->second, kids);
  });
  std::vector<Production> out(body.begin(), body.end());
  for (auto& p : out)
    if (auto it = rename.find(p.nonterminal); it != rename.end()) p.nonterminal = it->second;
  return ProofGrammar(std::move(out));
}

} // namespace

ProofGrammar recompress_grammar(const ProofGrammar& g, const RecompressConfig& cfg) {
  SymbolSet originals;
  for (const auto& p : g) originals.insert(p.nonterminal);
  RepairConfig repair = cfg.repair;
  repair.prune = true;
  ProofGrammar cur = renumber(treerepair(g, repair), originals, repair.fresh_prefix);
  if (!cfg.nonlinear) return cur;
  NonlinearConfig nl = cfg.nonlinear_cfg;
  nl.fresh_prefix = repair.fresh_prefix;
  cur = nonlinear_compress(cur, originals, nl);
  return renumber(prune(cur, originals), originals, repair.fresh_prefix);
}

} // namespace proofgram
