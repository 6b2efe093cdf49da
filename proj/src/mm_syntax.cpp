#include "proofgram/metamath.hpp"

#include <algorithm>

namespace proofgram {

std::uint32_t SyntaxGrammar::nonterminal(Symbol typecode) {
  auto [it, fresh] = nt_.emplace(typecode, static_cast<std::uint32_t>(nt_names_.size()));
  if (fresh) {
    nt_names_.push_back(typecode);
    root_.push_back(add_node());
  }
  return it->second;
}

std::uint32_t SyntaxGrammar::add_node() {
  trie_.emplace_back();
  return static_cast<std::uint32_t>(trie_.size() - 1);
}

void SyntaxGrammar::add_rule(Rule r) {
  auto id = static_cast<std::uint32_t>(rules_.size());
  std::uint32_t node = root_[r.lhs];
  for (std::int64_t sym : r.rhs) {
    auto it = trie_[node].next.find(sym);
    if (it != trie_[node].next.end()) {
      node = it->second;
      continue;
    }
    std::uint32_t child = add_node();
    trie_[node].next.emplace(sym, child);
    if (sym < 0) trie_[node].nt_edges.emplace_back(static_cast<std::uint32_t>(-sym - 1), child);
    node = child;
  }
  trie_[node].complete.push_back(id);
  if (!r.variable) axiom_rule_.emplace(r.label, id);
  rules_.push_back(std::move(r));
}

void SyntaxGrammar::finish() {
  first_.assign(nt_names_.size(), {});
  for (bool changed = true; changed;) {
    changed = false;
    for (const Rule& r : rules_) {
      auto& f = first_[r.lhs];
      std::size_t before = f.size();
      std::int64_t s = r.rhs.front();
      if (s >= 0) f.insert(static_cast<std::uint32_t>(s));
      else if (auto b = static_cast<std::uint32_t>(-s - 1); b != r.lhs) f.insert(first_[b].begin(), first_[b].end());
      changed |= f.size() != before;
    }
  }
}

SyntaxGrammar build_syntax_grammar(const MmDatabase& db, const MmConfig& cfg) {
  SyntaxGrammar g;
  std::unordered_set<std::uint64_t> seen_vars;
  for (const MmStatement& st : db.statements) {
    if (st.kind == MmKind::Floating) {
      std::uint32_t lhs = g.nonterminal(st.expr[0]);
      if (!seen_vars.insert((std::uint64_t(lhs) << 32) | st.expr[1].id()).second) continue;
      g.add_rule({lhs, st.expr[1], true, {std::int64_t(st.expr[1].id())}, {st.expr[1]}});
    } else if (st.kind == MmKind::Axiom && !cfg.is_provable(st.typecode())) {
      if (st.expr.size() < 2) throw InputError(st.label.str() + ": syntax axiom with an empty pattern");
      std::unordered_map<Symbol, Symbol> var_type;
      for (auto h : st.frame.hyps) {
        const MmStatement& hyp = db.statements[h];
        if (hyp.kind == MmKind::Floating) var_type.emplace(hyp.expr[1], hyp.expr[0]);
      }
      SyntaxGrammar::Rule r{g.nonterminal(st.typecode()), st.label, false, {}, {}};
      for (std::size_t i = 1; i < st.expr.size(); ++i) {
        Symbol tok = st.expr[i];
        r.pattern.push_back(tok);
        auto vt = var_type.find(tok);
        if (vt == var_type.end()) r.rhs.push_back(tok.id());
        else r.rhs.push_back(-std::int64_t(g.nonterminal(vt->second)) - 1);
      }
      g.add_rule(std::move(r));
    }
  }
  g.finish();
  return g;
}

// Earley recognizer over the rule trie plus derivation counting capped at 2.
class EarleyChart {
public:
  EarleyChart(const SyntaxGrammar& g, std::span<const Symbol> tokens) : g_(g), tok_(tokens) {}

  bool recognize(std::uint32_t goal) {
    const std::size_t n = tok_.size();
    sets_.assign(n + 1, {});
    seen_.assign(n + 1, {});
    waiting_.assign(n + 1, {});
    ends_.assign(n + 1, {});
    predicted_.assign(n + 1, {});
    predict(goal, 0);
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t w = 0; w < sets_[i].size(); ++w) {
        Item it = sets_[i][w];
        const auto& node = g_.trie_[it.node];
        for (auto r : node.complete) complete(g_.rules_[r].lhs, it.origin, i);
        if (i < n) {
          auto t = node.next.find(std::int64_t(tok_[i].id()));
          if (t != node.next.end()) add(i + 1, {t->second, it.origin});
        }
        for (const auto& [b, child] : node.nt_edges) {
          waiting_[i][b].push_back(it);
          predict(b, i);
        }
      }
      if (!sets_[i].empty()) furthest_ = i;
    }
    return span_derives(goal, 0, n);
  }

  std::size_t furthest() const { return furthest_; }

  int count(std::uint32_t a, std::size_t i, std::size_t j) {
    std::uint64_t key = pack(a, i, j);
    auto it = count_memo_.find(key);
    if (it != count_memo_.end()) return it->second == kBusy ? 2 : it->second;
    count_memo_[key] = kBusy;
    int c = seq(g_.root_[a], i, j);
    count_memo_[key] = static_cast<std::uint8_t>(c);
    return c;
  }

  struct Path {
    std::uint32_t rule;
    std::vector<std::tuple<std::uint32_t, std::size_t, std::size_t>> kids;  // (nonterminal, begin, end)
  };

  // Up to `limit` distinct derivation steps for a over [i, j).
  std::vector<Path> paths(std::uint32_t a, std::size_t i, std::size_t j, std::size_t limit) {
    std::vector<Path> out;
    Path cur{0, {}};
    walk(g_.root_[a], i, j, cur, out, limit);
    return out;
  }

private:
  struct Item {
    std::uint32_t node;
    std::uint32_t origin;
  };
  static constexpr std::uint8_t kBusy = 255;

  static std::uint64_t pack(std::uint32_t a, std::size_t i, std::size_t j) {
    return (std::uint64_t(a) << 40) | (std::uint64_t(i) << 20) | std::uint64_t(j);
  }

  void add(std::size_t pos, Item it) {
    std::uint64_t key = (std::uint64_t(it.node) << 32) | it.origin;
    if (seen_[pos].insert(key).second) sets_[pos].push_back(it);
  }

  void predict(std::uint32_t b, std::size_t i) {
    if (i >= tok_.size() || !g_.first_[b].contains(tok_[i].id())) return;
    if (predicted_[i].insert(b).second) add(i, {g_.root_[b], static_cast<std::uint32_t>(i)});
  }

  void complete(std::uint32_t a, std::size_t origin, std::size_t i) {
    auto& e = ends_[origin][a];
    if (std::find(e.begin(), e.end(), i) != e.end()) return;
    e.push_back(i);
    auto w = waiting_[origin].find(a);
    if (w == waiting_[origin].end()) return;
    for (std::size_t k = 0; k < w->second.size(); ++k) {
      Item it = w->second[k];
      add(i, {g_.trie_[it.node].next.at(-std::int64_t(a) - 1), it.origin});
    }
  }

  bool span_derives(std::uint32_t a, std::size_t i, std::size_t j) const {
    auto it = ends_[i].find(a);
    return it != ends_[i].end() && std::find(it->second.begin(), it->second.end(), j) != it->second.end();
  }

  int seq(std::uint32_t node, std::size_t i, std::size_t j) {
    std::uint64_t key = pack(node, i, j);
    auto m = memo_.find(key);
    if (m != memo_.end()) return m->second;
    const auto& n = g_.trie_[node];
    int c = i == j ? static_cast<int>(std::min<std::size_t>(n.complete.size(), 2)) : 0;
    if (i < j) {
      auto t = n.next.find(std::int64_t(tok_[i].id()));
      if (t != n.next.end()) c += seq(t->second, i + 1, j);
      for (const auto& [b, child] : n.nt_edges) {
        if (c >= 2) break;
        auto e = ends_[i].find(b);
        if (e == ends_[i].end()) continue;
        for (std::size_t m2 : e->second) {
          if (m2 > j) continue;
          int rest = seq(child, m2, j);
          if (rest == 0) continue;
          c += count(b, i, m2) * rest;
          if (c >= 2) break;
        }
      }
    }
    c = std::min(c, 2);
    memo_[key] = static_cast<std::uint8_t>(c);
    return c;
  }

  void walk(std::uint32_t node, std::size_t i, std::size_t j, Path& cur, std::vector<Path>& out, std::size_t limit) {
    if (out.size() >= limit) return;
    const auto& n = g_.trie_[node];
    if (i == j)
      for (auto r : n.complete) {
        if (out.size() >= limit) return;
        cur.rule = r;
        out.push_back(cur);
      }
    if (i >= j) return;
    auto t = n.next.find(std::int64_t(tok_[i].id()));
    if (t != n.next.end() && seq(t->second, i + 1, j) > 0) walk(t->second, i + 1, j, cur, out, limit);
    for (const auto& [b, child] : n.nt_edges) {
      auto e = ends_[i].find(b);
      if (e == ends_[i].end()) continue;
      for (std::size_t m2 : e->second) {
        if (m2 > j || seq(child, m2, j) == 0 || count(b, i, m2) == 0) continue;
        cur.kids.emplace_back(b, i, m2);
        walk(child, m2, j, cur, out, limit);
        cur.kids.pop_back();
        if (out.size() >= limit) return;
      }
    }
  }

  const SyntaxGrammar& g_;
  std::span<const Symbol> tok_;
  std::vector<std::vector<Item>> sets_;
  std::vector<std::unordered_set<std::uint64_t>> seen_;
  std::vector<std::unordered_map<std::uint32_t, std::vector<Item>>> waiting_;
  std::vector<std::unordered_map<std::uint32_t, std::vector<std::size_t>>> ends_;
  std::vector<std::unordered_set<std::uint32_t>> predicted_;
  std::unordered_map<std::uint64_t, std::uint8_t> memo_;
  std::unordered_map<std::uint64_t, std::uint8_t> count_memo_;
  std::size_t furthest_ = 0;
};

namespace {

std::string render_span(std::span<const Symbol> tok, std::size_t b, std::size_t e) {
  std::string out;
  for (std::size_t i = b; i < e && i < tok.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tok[i].name();
  }
  return out;
}

} // namespace

FormulaTerm SyntaxGrammar::parse(std::span<const Symbol> tokens, Symbol typecode) const {
  auto nt = nt_.find(typecode);
  if (nt == nt_.end()) throw FormulaParseError("no syntax rules for typecode '" + typecode.str() + "'", 0, tokens.size());
  if (tokens.size() >= (1u << 20)) throw FormulaParseError("math string too long", 0, tokens.size());
  EarleyChart chart(*this, tokens);
  if (!chart.recognize(nt->second)) {
    std::size_t at = chart.furthest();
    std::size_t b = std::min(at, tokens.size() ? tokens.size() - 1 : 0);
    throw FormulaParseError("no parse as '" + typecode.str() + "' at token " + std::to_string(b + 1) + " ('" +
                                render_span(tokens, b, b + 1) + "')",
                            b, std::min(b + 1, tokens.size()));
  }

  // Locate the innermost ambiguous span, if any.
  if (chart.count(nt->second, 0, tokens.size()) > 1) {
    std::uint32_t a = nt->second;
    std::size_t i = 0, j = tokens.size();
    for (;;) {
      auto ps = chart.paths(a, i, j, 2);
      if (ps.size() > 1) break;
      bool moved = false;
      for (const auto& [b, ki, kj] : ps.front().kids)
        if (chart.count(b, ki, kj) > 1) {
          a = b, i = ki, j = kj;
          moved = true;
          break;
        }
      if (!moved) break;
    }
    throw FormulaParseError("ambiguous parse of '" + render_span(tokens, i, j) + "' (tokens " + std::to_string(i + 1) +
                                "-" + std::to_string(j) + ") as '" + nt_names_[a].str() + "'",
                            i, j);
  }

  // Build the unique tree bottom-up with an explicit stack.
  struct Frame {
    std::uint32_t rule;
    std::vector<std::tuple<std::uint32_t, std::size_t, std::size_t>> kids;
    std::vector<FormulaTerm> args;
  };
  auto open = [&](std::uint32_t a, std::size_t i, std::size_t j) {
    auto p = chart.paths(a, i, j, 1).front();
    return Frame{p.rule, std::move(p.kids), {}};
  };
  std::vector<Frame> stack{open(nt->second, 0, tokens.size())};
  FormulaTerm result;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.args.size() < f.kids.size()) {
      auto [b, i, j] = f.kids[f.args.size()];
      stack.push_back(open(b, i, j));
      continue;
    }
    const Rule& r = rules_[f.rule];
    FormulaTerm t = r.variable ? FormulaTerm::var(r.label) : FormulaTerm::app(r.label, f.args);
    stack.pop_back();
    if (stack.empty()) result = t;
    else stack.back().args.push_back(t);
  }
  return result;
}

std::vector<Symbol> SyntaxGrammar::unparse(FormulaTerm t) const {
  std::vector<Symbol> out;
  struct Frame {
    FormulaTerm t;
    std::size_t pos;
    std::size_t arg;
  };
  std::vector<Frame> stack{{t, 0, 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.t.is_var()) {
      out.push_back(f.t.symbol());
      stack.pop_back();
      continue;
    }
    auto it = axiom_rule_.find(f.t.symbol());
    if (it == axiom_rule_.end()) throw LookupError("no syntax axiom '" + f.t.symbol().str() + "'");
    const Rule& r = rules_[it->second];
    if (f.pos == 0 && r.rhs.size() != r.pattern.size()) throw InternalError("syntax rule shape");
    if (f.pos >= r.pattern.size()) {
      stack.pop_back();
      continue;
    }
    std::size_t k = f.pos++;
    if (r.rhs[k] >= 0) {
      out.push_back(r.pattern[k]);
    } else {
      if (f.arg >= f.t.arity()) throw PreconditionError("'" + f.t.symbol().str() + "' applied to too few arguments");
      FormulaTerm a = f.t.arg(f.arg++);
      stack.push_back({a, 0, 0});
    }
  }
  return out;
}

FormulaTerm parse_formula(std::span<const Symbol> expr, const SyntaxGrammar& g, const MmConfig& cfg) {
  if (expr.empty()) throw FormulaParseError("empty math string", 0, 0);
  return g.parse(expr.subspan(1), cfg.syntax_typecode(expr[0]));
}

} // namespace proofgram
