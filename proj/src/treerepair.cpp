#include "proofgram/compress.hpp"
#include "proofgram/dag.hpp"
#include "proofgram/error.hpp"

#include <algorithm>

namespace proofgram {

ProofTerm Digram::pattern() const {
  std::vector<ProofTerm> inner, outer;
  std::uint32_t v = 1;
  for (std::uint32_t j = 1; j <= parent_arity; ++j) {
    if (j != index) {
      outer.push_back(ProofTerm::param(v++));
      continue;
    }
    for (std::uint32_t k = 0; k < child_arity; ++k) inner.push_back(ProofTerm::param(v++));
    outer.push_back(ProofTerm::node(child, inner));
  }
  return ProofTerm::node(parent, outer);
}

std::string to_string(const Digram& d) { return to_string(d.pattern()); }

namespace {

struct DigramHash {
  std::size_t operator()(const Digram& d) const {
    std::size_t h = d.parent.id();
    for (std::uint32_t x : {d.parent_arity, d.child.id(), d.child_arity, d.index}) h = h * 0x100000001b3ULL ^ x;
    return h;
  }
};

bool lex_less(const Digram& a, const Digram& b) {
  if (a.parent != b.parent) return a.parent.name() < b.parent.name();
  if (a.child != b.child) return a.child.name() < b.child.name();
  if (a.index != b.index) return a.index < b.index;
  if (a.parent_arity != b.parent_arity) return a.parent_arity < b.parent_arity;
  return a.child_arity < b.child_arity;
}

// Replacement phase over a main term kept as a DAG. Occurrences are counted on
// DAG nodes weighted by the number of tree positions of each node; for f = g
// chains the greedy bottom-up matching decides per node, so every tree
// position of a node gets the same decision.
class RepairEngine {
public:
  RepairEngine(std::vector<ProofTerm> roots, Symbol excluded, const RepairConfig& cfg, NameSupply& names)
      : roots_(std::move(roots)), excluded_(excluded), cfg_(cfg), names_(names) {}

  void run(RepairStats* stats) {
    const std::size_t batch = std::max<std::uint32_t>(cfg_.batch, 1);
    for (;;) {
      auto cands = count();
      if (cands.empty()) break;
      std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return lex_less(a.first, b.first);
      });
      if (stats) ++stats->rounds;
      bool any = false;
      for (std::size_t c = 0; c < std::min(batch, cands.size()); ++c) {
        const Digram& d = cands[c].first;
        Symbol h = names_.fresh();
        if (!replace(d, h)) continue;
        fresh_.push_back({h, d.param_count(), d.pattern()});
        any = true;
        if (stats) ++stats->replaced;
      }
      if (!any) break;
    }
  }

  const std::vector<ProofTerm>& roots() const { return roots_; }
  const std::vector<Production>& fresh() const { return fresh_; }

private:
  std::vector<std::pair<Digram, BigInt>> count() const {
    auto order = post_order(std::span<const ProofTerm>(roots_));
    std::unordered_map<const detail::Node*, BigInt> occ;
    for (ProofTerm r : roots_) occ[r.node_ptr()] += 1;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (it->arity() == 0) continue;
      const BigInt here = occ[it->node_ptr()];
      for (ProofTerm k : it->children())
        if (k.arity() > 0) occ[k.node_ptr()] += here;
    }

    std::unordered_map<Digram, BigInt, DigramHash> counts;
    std::unordered_map<const detail::Node*, std::vector<bool>> matched;
    for (ProofTerm u : order) {
      if (u.arity() == 0 || u.name() == excluded_) continue;
      const auto n = static_cast<std::uint32_t>(u.arity());
      const BigInt& weight = occ.at(u.node_ptr());
      for (std::uint32_t i = 1; i <= n; ++i) {
        ProofTerm c = u.child(i - 1);
        if (c.is_param()) continue;
        const auto m = static_cast<std::uint32_t>(c.arity());
        if (cfg_.max_arity > 0 && n - 1 + m > cfg_.max_arity) continue;
        if (c.name() == u.name() && m == n) {
          auto it = matched.find(c.node_ptr());
          if (it != matched.end() && it->second[i - 1]) continue;
          auto& mine = matched[u.node_ptr()];
          mine.resize(n);
          mine[i - 1] = true;
        }
        counts[Digram{u.name(), n, c.name(), m, i}] += weight;
      }
    }
    std::vector<std::pair<Digram, BigInt>> out;
    for (auto& [d, c] : counts)
      if (c >= cfg_.min_occurrences) out.emplace_back(d, std::move(c));
    return out;
  }

  bool matches(const Digram& d, ProofTerm u, std::span<const ProofTerm> kids) const {
    if (u.is_param() || u.name() != d.parent || kids.size() != d.parent_arity) return false;
    ProofTerm c = kids[d.index - 1];
    return !c.is_param() && c.name() == d.child && c.arity() == d.child_arity;
  }

  // Rewrites all matches; returns false and leaves the roots alone if there are none.
  bool replace(const Digram& d, Symbol h) {
    std::unordered_map<const detail::Node*, ProofTerm> memo;
    bool hit = false;
    std::vector<ProofTerm> next;
    for (ProofTerm r : roots_) {
      next.push_back(rebuild(
          r,
          [&](ProofTerm u, std::span<const ProofTerm> kids) {
            if (u.is_param()) return u;
            if (!matches(d, u, kids)) return ProofTerm::node(u.name(), kids);
            hit = true;
            std::vector<ProofTerm> args;
            for (std::uint32_t j = 1; j <= d.parent_arity; ++j) {
              if (j != d.index) {
                args.push_back(kids[j - 1]);
                continue;
              }
              for (ProofTerm a : kids[j - 1].children()) args.push_back(a);
            }
            return ProofTerm::node(h, args);
          },
          memo));
    }
    if (hit) roots_ = std::move(next);
    return hit;
  }

  std::vector<ProofTerm> roots_;
  Symbol excluded_;
  const RepairConfig& cfg_;
  NameSupply& names_;
  std::vector<Production> fresh_;
};

} // namespace

ProofGrammar treerepair(std::span<const ProofTerm> terms, const RepairConfig& cfg, std::span<const Symbol> start_names,
                        RepairStats* stats) {
  auto names = start_production_names(terms.size(), start_names);
  for (ProofTerm t : terms)
    if (!t.is_ground()) throw PreconditionError("treerepair expects ground terms");
  NameSupply supply(cfg.fresh_prefix);
  for (ProofTerm t : terms) supply.reserve_all(t);
  for (Symbol s : names) supply.reserve(s);

  RepairEngine engine({terms.begin(), terms.end()}, Symbol(), cfg, supply);
  engine.run(stats);

  std::vector<Production> prods = engine.fresh();
  for (std::size_t i = 0; i < terms.size(); ++i) prods.push_back({names[i], 0, engine.roots()[i]});
  ProofGrammar g(std::move(prods));
  if (stats) {
    stats->size_after_replacement = grammar_size(g);
    stats->productions_after_replacement = g.size();
  }
  if (!cfg.prune) return g;
  return prune(g, SymbolSet(names.begin(), names.end()));
}

ProofGrammar treerepair(const ProofGrammar& g, const RepairConfig& cfg, RepairStats* stats) {
  if (g.empty()) return g;
  NameSupply supply(cfg.fresh_prefix);
  supply.reserve_all(g);
  NameSupply roots("root");
  roots.reserve_all(g);
  Symbol vroot = roots.fresh();

  std::vector<ProofTerm> rhs;
  for (const auto& p : g) rhs.push_back(p.rhs);
  RepairEngine engine({ProofTerm::node(vroot, rhs)}, vroot, cfg, supply);
  engine.run(stats);
  ProofTerm joined = engine.roots().front();

  // Each fresh production goes right before the first production needing it.
  const auto& fresh = engine.fresh();
  std::unordered_map<Symbol, std::size_t> fresh_index;
  for (std::size_t i = 0; i < fresh.size(); ++i) fresh_index.emplace(fresh[i].nonterminal, i);
  std::vector<bool> emitted(fresh.size(), false);
  std::vector<Production> out;
  auto emit_needed = [&](ProofTerm t) {
    std::vector<std::size_t> need, work;
    auto visit = [&](ProofTerm x) {
      for (ProofTerm u : post_order(x)) {
        if (u.is_param()) continue;
        auto it = fresh_index.find(u.name());
        if (it == fresh_index.end() || emitted[it->second]) continue;
        emitted[it->second] = true;
        need.push_back(it->second);
        work.push_back(it->second);
      }
    };
    visit(t);
    while (!work.empty()) {
      auto i = work.back();
      work.pop_back();
      visit(fresh[i].rhs);
    }
    std::sort(need.begin(), need.end());
    for (auto i : need) out.push_back(fresh[i]);
  };
  for (std::size_t i = 0; i < g.size(); ++i) {
    ProofTerm body = joined.child(i);
    emit_needed(body);
    out.push_back({g[i].nonterminal, g[i].arity, body});
  }
  for (std::size_t i = 0; i < fresh.size(); ++i)
    if (!emitted[i]) out.push_back(fresh[i]);

  ProofGrammar result(std::move(out));
  if (stats) {
    stats->size_after_replacement = grammar_size(result);
    stats->productions_after_replacement = result.size();
  }
  if (!cfg.prune) return result;
  SymbolSet protect;
  for (const auto& p : g) protect.insert(p.nonterminal);
  return prune(result, protect);
}

} // namespace proofgram
