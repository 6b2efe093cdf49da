#include "proofgram/term.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <unordered_set>

namespace proofgram {

// ---------------------------------------------------------------- symbols

namespace {

class SymbolTable {
public:
  std::uint32_t intern(std::string_view s) {
    {
      std::shared_lock lock(mu_);
      if (auto it = ids_.find(s); it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    if (auto it = ids_.find(s); it != ids_.end()) return it->second;
    names_.emplace_back(s);
    auto id = static_cast<std::uint32_t>(names_.size());
    ids_.emplace(std::string_view(names_.back()), id);
    return id;
  }

  std::string_view name(std::uint32_t id) {
    std::shared_lock lock(mu_);
    return names_[id - 1];
  }

private:
  std::shared_mutex mu_;
  std::deque<std::string> names_;
  std::unordered_map<std::string_view, std::uint32_t> ids_;
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

} // namespace

Symbol::Symbol(std::string_view name) : id_(symbols().intern(name)) {}

std::string_view Symbol::name() const {
  if (id_ == 0) return {};
  return symbols().name(id_);
}

// ---------------------------------------------------------------- node store

namespace detail {
namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct NodeKey {
  NodeKind kind;
  std::uint32_t payload;
  std::span<const Node* const> kids;
  std::size_t hash;
};

struct NodeHash {
  using is_transparent = void;
  std::size_t operator()(const Node* n) const { return n->hash; }
  std::size_t operator()(const NodeKey& k) const { return k.hash; }
};

struct NodeEq {
  using is_transparent = void;
  static bool same(NodeKind k, std::uint32_t p, std::span<const Node* const> kids, const Node* n) {
    return n->kind == k && n->payload == p && std::equal(kids.begin(), kids.end(), n->kids.begin(), n->kids.end());
  }
  bool operator()(const Node* a, const Node* b) const { return a == b; }
  bool operator()(const NodeKey& k, const Node* n) const { return same(k.kind, k.payload, k.kids, n); }
  bool operator()(const Node* n, const NodeKey& k) const { return same(k.kind, k.payload, k.kids, n); }
};

class NodeStore {
public:
  const Node* make(NodeKind kind, std::uint32_t payload, std::span<const Node* const> kids) {
    std::size_t h = mix(static_cast<std::size_t>(kind) * 1000003u, payload);
    for (const Node* k : kids) h = mix(h, k->hash);
    NodeKey key{kind, payload, kids, h};
    {
      std::shared_lock lock(mu_);
      if (auto it = table_.find(key); it != table_.end()) return *it;
    }
    std::unique_lock lock(mu_);
    if (auto it = table_.find(key); it != table_.end()) return *it;

    Node& n = arena_.emplace_back();
    n.kind = kind;
    n.payload = payload;
    n.hash = h;
    n.kids.assign(kids.begin(), kids.end());
    n.max_param = kind == NodeKind::Param ? payload : 0;
    n.height = 0;
    constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t size = kids.size();
    for (const Node* k : kids) {
      n.max_param = std::max(n.max_param, k->max_param);
      n.height = std::max(n.height, k->height + 1);
      size = (k->size > cap - size) ? cap : size + k->size;
    }
    n.size = size;
    table_.insert(&n);
    return &n;
  }

private:
  std::shared_mutex mu_;
  std::deque<Node> arena_;
  std::unordered_set<const Node*, NodeHash, NodeEq> table_;
};

NodeStore& store() {
  static NodeStore s;
  return s;
}

} // namespace

const Node* make_node(NodeKind kind, std::uint32_t payload, std::span<const Node* const> kids) {
  return store().make(kind, payload, kids);
}

} // namespace detail

// ---------------------------------------------------------------- terms

namespace {

template <class T>
std::vector<const detail::Node*> node_ptrs(std::span<const T> ts) {
  std::vector<const detail::Node*> out;
  out.reserve(ts.size());
  for (const T& t : ts) out.push_back(t.node_ptr());
  return out;
}

Symbol symbol_from_id(std::uint32_t id) { return Symbol::from_id(id); }

} // namespace

ProofTerm ProofTerm::param(std::uint32_t index) {
  return from_node(detail::make_node(detail::NodeKind::Param, index, {}));
}

ProofTerm ProofTerm::node(Symbol name, std::span<const ProofTerm> children) {
  auto kids = node_ptrs(children);
  return from_node(detail::make_node(detail::NodeKind::App, name.id(), kids));
}

Symbol ProofTerm::name() const { return symbol_from_id(n_->payload); }

FormulaTerm FormulaTerm::var(Symbol name) {
  return from_node(detail::make_node(detail::NodeKind::Var, name.id(), {}));
}

FormulaTerm FormulaTerm::app(Symbol functor, std::span<const FormulaTerm> args) {
  auto kids = node_ptrs(args);
  return from_node(detail::make_node(detail::NodeKind::App, functor.id(), kids));
}

Symbol FormulaTerm::symbol() const { return symbol_from_id(n_->payload); }

void collect_variables(FormulaTerm t, std::vector<Symbol>& out) {
  std::vector<FormulaTerm> stack{t};
  while (!stack.empty()) {
    FormulaTerm u = stack.back();
    stack.pop_back();
    if (u.is_var()) {
      if (std::find(out.begin(), out.end(), u.symbol()) == out.end()) out.push_back(u.symbol());
      continue;
    }
    for (std::size_t i = u.arity(); i-- > 0;) stack.push_back(u.arg(i));
  }
}

std::vector<Symbol> variables_of(const Clause& c) {
  std::vector<Symbol> vars;
  collect_variables(c.head, vars);
  for (const auto& b : c.body) collect_variables(b, vars);
  return vars;
}

namespace {

FormulaTerm rename(FormulaTerm t, const std::unordered_map<Symbol, FormulaTerm>& map,
                   std::unordered_map<const detail::Node*, FormulaTerm>& memo) {
  if (t.is_var()) return map.at(t.symbol());
  if (t.arity() == 0) return t;
  if (auto it = memo.find(t.node_ptr()); it != memo.end()) return it->second;
  std::vector<FormulaTerm> args;
  args.reserve(t.arity());
  for (FormulaTerm a : t.args()) args.push_back(rename(a, map, memo));
  FormulaTerm r = FormulaTerm::app(t.symbol(), args);
  memo.emplace(t.node_ptr(), r);
  return r;
}

} // namespace

Clause canonical_rename(const Clause& c, std::string_view prefix) {
  auto vars = variables_of(c);
  std::unordered_map<Symbol, FormulaTerm> map;
  for (std::size_t i = 0; i < vars.size(); ++i)
    map.emplace(vars[i], FormulaTerm::var(std::string(prefix) + std::to_string(i + 1)));
  std::unordered_map<const detail::Node*, FormulaTerm> memo;
  Clause out;
  out.head = rename(c.head, map, memo);
  out.body.reserve(c.body.size());
  for (const auto& b : c.body) out.body.push_back(rename(b, map, memo));
  return out;
}

// ---------------------------------------------------------------- printing

std::string quote_name(std::string_view name) {
  auto plain = [](char ch) {
    return (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '.' ||
           ch == '_' || ch == '\'' || ch == '-';
  };
  if (!name.empty() && name.front() != '\'' && std::all_of(name.begin(), name.end(), plain) &&
      name.find("->") == std::string_view::npos)
    return std::string(name);
  std::string out = "'";
  for (char ch : name) {
    if (ch == '\'' || ch == '\\') out += '\\';
    out += ch;
  }
  out += '\'';
  return out;
}

namespace {

template <class T, class Leaf>
void print_term(T t, std::string& out, Leaf leaf) {
  // Iterative to cope with deep proof terms.
  struct Frame { T t; std::size_t next; };
  std::vector<Frame> stack{{t, 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next == 0) {
      if (leaf(f.t, out)) { stack.pop_back(); continue; }
      out += quote_name(f.t.node_ptr()->kind == detail::NodeKind::App ? symbol_from_id(f.t.node_ptr()->payload).name()
                                                                      : std::string_view{});
      if (f.t.arity() == 0) { stack.pop_back(); continue; }
      out += '(';
    } else if (f.next == f.t.arity()) {
      out += ')';
      stack.pop_back();
      continue;
    } else {
      out += ',';
    }
    T kid = T::from_node(f.t.node_ptr()->kids[f.next++]);
    stack.push_back({kid, 0});
  }
}

} // namespace

std::string to_string(ProofTerm t) {
  std::string out;
  print_term(t, out, [](ProofTerm u, std::string& o) {
    if (!u.is_param()) return false;
    o += '$';
    o += std::to_string(u.param_index());
    return true;
  });
  return out;
}

std::string to_string(FormulaTerm t) {
  std::string out;
  print_term(t, out, [](FormulaTerm u, std::string& o) {
    if (!u.is_var()) return false;
    o += '?';
    o += quote_name(u.symbol().name());
    return true;
  });
  return out;
}

std::string to_string(const Clause& c) {
  std::string out = to_string(c.head);
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    out += i == 0 ? " <- " : ", ";
    out += to_string(c.body[i]);
  }
  return out;
}

} // namespace proofgram
