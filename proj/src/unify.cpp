#include "proofgram/unify.hpp"

#include "proofgram/dag.hpp"

#include <algorithm>
#include <numeric>

namespace proofgram {

// ---------------------------------------------------------------- substitution

const FormulaTerm* Substitution::lookup(Symbol var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

std::vector<std::pair<Symbol, FormulaTerm>> Substitution::sorted() const {
  std::vector<std::pair<Symbol, FormulaTerm>> out(map_.begin(), map_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return lexically_less(a.first, b.first); });
  return out;
}

FormulaTerm apply(const Substitution& s, FormulaTerm t) {
  if (s.empty()) return t;
  return rebuild(t, [&](FormulaTerm u, std::span<const FormulaTerm> kids) {
    if (u.is_var()) {
      const FormulaTerm* b = s.lookup(u.symbol());
      return b ? *b : u;
    }
    if (u.arity() == 0) return u;
    return FormulaTerm::app(u.symbol(), kids);
  });
}

Clause apply(const Substitution& s, const Clause& c) {
  Clause out{apply(s, c.head), {}};
  out.body.reserve(c.body.size());
  for (const auto& b : c.body) out.body.push_back(apply(s, b));
  return out;
}

// ---------------------------------------------------------------- term bank

TermBank::Ref TermBank::fresh_var(Symbol origin) {
  auto r = static_cast<Ref>(cells_.size());
  cells_.push_back({origin.id(), 0, 0, r, true});
  return r;
}

TermBank::Ref TermBank::load(FormulaTerm t, Scope& scope) {
  if (auto it = scope.memo.find(t.node_ptr()); it != scope.memo.end()) return it->second;
  std::vector<FormulaTerm> order = post_order(t);
  for (FormulaTerm u : order) {
    if (scope.memo.contains(u.node_ptr())) continue;
    Ref r;
    if (u.is_var()) {
      auto [it, fresh] = scope.vars.try_emplace(u.symbol(), 0);
      if (fresh) it->second = fresh_var(u.symbol());
      r = it->second;
    } else {
      r = static_cast<Ref>(cells_.size());
      auto first = static_cast<std::uint32_t>(args_.size());
      for (FormulaTerm a : u.args()) args_.push_back(scope.memo.at(a.node_ptr()));
      cells_.push_back({u.symbol().id(), first, static_cast<std::uint32_t>(u.arity()), 0, false});
    }
    scope.memo.emplace(u.node_ptr(), r);
  }
  return scope.memo.at(t.node_ptr());
}

TermBank::Ref TermBank::deref(Ref r) {
  Ref root = r;
  while (cells_[root].is_var && cells_[root].bound != root) root = cells_[root].bound;
  while (cells_[r].is_var && cells_[r].bound != r) {
    Ref next = cells_[r].bound;
    cells_[r].bound = root;
    r = next;
  }
  return root;
}

bool TermBank::occurs(Ref var, Ref in) {
  if (mark_.size() < cells_.size()) mark_.resize(cells_.size(), 0);
  ++epoch_;
  std::vector<Ref> stack{in};
  while (!stack.empty()) {
    Ref r = deref(stack.back());
    stack.pop_back();
    if (r == var) return true;
    if (mark_[r] == epoch_) continue;
    mark_[r] = epoch_;
    const Cell& c = cells_[r];
    if (c.is_var) continue;
    for (std::uint32_t i = 0; i < c.arity; ++i) stack.push_back(args_[c.first + i]);
  }
  return false;
}

bool TermBank::unify(Ref a, Ref b) {
  std::vector<std::pair<Ref, Ref>> stack{{a, b}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    x = deref(x);
    y = deref(y);
    if (x == y) continue;
    Cell& cx = cells_[x];
    Cell& cy = cells_[y];
    if (cx.is_var || cy.is_var) {
      Ref v = cx.is_var ? x : y;
      Ref t = cx.is_var ? y : x;
      if (!cells_[t].is_var && occurs(v, t)) return false;
      cells_[v].bound = t;
      continue;
    }
    if (cx.symbol != cy.symbol || cx.arity != cy.arity) return false;
    for (std::uint32_t i = 0; i < cx.arity; ++i) stack.emplace_back(args_[cx.first + i], args_[cy.first + i]);
  }
  return true;
}

FormulaTerm TermBank::extract(Ref root, const std::function<FormulaTerm(Ref)>& name_of) {
  std::unordered_map<Ref, FormulaTerm> done;
  struct Frame { Ref r; std::uint32_t next; };
  std::vector<Frame> stack{{deref(root), 0}};
  std::vector<FormulaTerm> values;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const Cell c = cells_[f.r];
    if (f.next == 0) {
      if (auto it = done.find(f.r); it != done.end()) {
        values.push_back(it->second);
        stack.pop_back();
        continue;
      }
      if (c.is_var) {
        FormulaTerm v = name_of(f.r);
        done.emplace(f.r, v);
        values.push_back(v);
        stack.pop_back();
        continue;
      }
    }
    if (f.next < c.arity) {
      Ref kid = deref(args_[c.first + f.next]);
      ++f.next;
      stack.push_back({kid, 0});
      continue;
    }
    std::vector<FormulaTerm> kids(values.end() - c.arity, values.end());
    values.resize(values.size() - c.arity);
    FormulaTerm t = FormulaTerm::app(Symbol::from_id(c.symbol), kids);
    done.emplace(f.r, t);
    values.push_back(t);
    stack.pop_back();
  }
  return values.back();
}

FormulaTerm CanonicalNamer::operator()(TermBank::Ref r) {
  r = bank_.deref(r);
  auto [it, fresh] = names_.try_emplace(r, FormulaTerm{});
  if (fresh) it->second = FormulaTerm::var(prefix_ + std::to_string(names_.size()));
  return it->second;
}

// ---------------------------------------------------------------- mgu

std::optional<Substitution> mgu(std::span<const std::vector<FormulaTerm>> sets) {
  TermBank bank;
  TermBank::Scope scope;
  std::vector<std::vector<TermBank::Ref>> loaded;
  for (const auto& set : sets) {
    auto& refs = loaded.emplace_back();
    for (FormulaTerm t : set) refs.push_back(bank.load(t, scope));
  }
  for (const auto& refs : loaded)
    for (std::size_t i = 1; i < refs.size(); ++i)
      if (!bank.unify(refs[0], refs[i])) return std::nullopt;

  // Unbound representatives keep the name of their own cell, so the domain
  // (bound variables) and range variables are disjoint.
  Substitution sigma;
  auto name_of = [&](TermBank::Ref r) { return FormulaTerm::var(bank.origin(r)); };
  std::vector<std::pair<Symbol, TermBank::Ref>> vars(scope.vars.begin(), scope.vars.end());
  std::sort(vars.begin(), vars.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  for (auto [name, ref] : vars) {
    FormulaTerm value = bank.extract(ref, name_of);
    if (value.is_var() && value.symbol() == name) continue;
    sigma.bind(name, value);
  }
  return sigma;
}

std::optional<Substitution> mgu(FormulaTerm a, FormulaTerm b) {
  std::vector<std::vector<FormulaTerm>> sets{{a, b}};
  return mgu(sets);
}

// ---------------------------------------------------------------- matching

namespace {

// One-way matcher with an undo trail for backtracking.
class Matcher {
public:
  bool match(FormulaTerm pattern, FormulaTerm target) {
    std::vector<std::pair<FormulaTerm, FormulaTerm>> stack{{pattern, target}};
    while (!stack.empty()) {
      auto [p, t] = stack.back();
      stack.pop_back();
      if (p.is_var()) {
        auto it = bindings_.find(p.symbol());
        if (it != bindings_.end()) {
          if (it->second != t) return false;
          continue;
        }
        bindings_.emplace(p.symbol(), t);
        trail_.push_back(p.symbol());
        continue;
      }
      if (t.is_var() || p.symbol() != t.symbol() || p.arity() != t.arity()) return false;
      if (p == t && is_ground(p)) continue;
      for (std::size_t i = 0; i < p.arity(); ++i) stack.emplace_back(p.arg(i), t.arg(i));
    }
    return true;
  }

  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      bindings_.erase(trail_.back());
      trail_.pop_back();
    }
  }

  Substitution substitution() const {
    Substitution s;
    for (auto& [v, t] : bindings_)
      if (!(t.is_var() && t.symbol() == v)) s.bind(v, t);
    return s;
  }

private:
  // Ground-ness of formula terms is not cached on nodes; a small memo avoids
  // repeated walks of shared subterms.
  bool is_ground(FormulaTerm t) {
    if (auto it = ground_.find(t.node_ptr()); it != ground_.end()) return it->second;
    std::vector<Symbol> vars;
    collect_variables(t, vars);
    bool g = vars.empty();
    ground_.emplace(t.node_ptr(), g);
    return g;
  }

  std::unordered_map<Symbol, FormulaTerm> bindings_;
  std::vector<Symbol> trail_;
  std::unordered_map<const detail::Node*, bool> ground_;
};

// Cheap necessary condition for pattern atom p to match target atom t.
bool compatible(FormulaTerm p, FormulaTerm t) {
  if (p.is_var()) return true;
  if (t.is_var()) return false;
  return p.symbol() == t.symbol() && p.arity() == t.arity() && p.size_saturated() <= t.size_saturated();
}

bool assign_bodies(Matcher& m, const Clause& specific, const Clause& general, std::vector<std::size_t>& order,
                   std::size_t depth, std::vector<bool>& taken, std::vector<std::size_t>& perm) {
  if (depth == order.size()) return true;
  std::size_t gi = order[depth];
  for (std::size_t sj = 0; sj < specific.body.size(); ++sj) {
    if (taken[sj] || !compatible(general.body[gi], specific.body[sj])) continue;
    auto mk = m.mark();
    if (m.match(general.body[gi], specific.body[sj])) {
      taken[sj] = true;
      perm[sj] = gi;
      if (assign_bodies(m, specific, general, order, depth + 1, taken, perm)) return true;
      taken[sj] = false;
    }
    m.undo(mk);
  }
  return false;
}

} // namespace

std::optional<InstanceWitness> find_instance(const Clause& specific, const Clause& general, BodyOrder mode) {
  if (specific.body.size() != general.body.size()) return std::nullopt;
  Matcher m;
  if (!compatible(general.head, specific.head) || !m.match(general.head, specific.head)) return std::nullopt;
  const std::size_t n = specific.body.size();
  std::vector<std::size_t> perm(n);
  if (mode == BodyOrder::Ordered) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!compatible(general.body[i], specific.body[i]) || !m.match(general.body[i], specific.body[i]))
        return std::nullopt;
      perm[i] = i;
    }
    return InstanceWitness{m.substitution(), std::move(perm)};
  }

  // Most constrained general atoms first.
  std::vector<std::size_t> candidates(n, 0);
  for (std::size_t gi = 0; gi < n; ++gi)
    for (std::size_t sj = 0; sj < n; ++sj)
      if (compatible(general.body[gi], specific.body[sj])) ++candidates[gi];
  if (std::find(candidates.begin(), candidates.end(), 0u) != candidates.end()) return std::nullopt;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return candidates[a] < candidates[b]; });
  std::vector<bool> taken(n, false);
  if (!assign_bodies(m, specific, general, order, 0, taken, perm)) return std::nullopt;
  return InstanceWitness{m.substitution(), std::move(perm)};
}

MatchResult match_clause(const Clause& f, const Clause& f_prime, BodyOrder mode) {
  MatchResult r;
  r.instance = find_instance(f, f_prime, mode);
  if (r.instance) {
    r.variant = find_instance(f_prime, f, mode).has_value();
    r.strict = !r.variant;
  }
  return r;
}

bool is_variant(const Clause& a, const Clause& b, BodyOrder mode) {
  return find_instance(a, b, mode) && find_instance(b, a, mode);
}

namespace {

// Shape hash of an atom with all variables collapsed to one marker.
std::size_t shape_hash(FormulaTerm t, std::unordered_map<const detail::Node*, std::size_t>& memo) {
  if (auto it = memo.find(t.node_ptr()); it != memo.end()) return it->second;
  std::size_t h = 0;
  for (FormulaTerm u : post_order(t)) {
    if (memo.contains(u.node_ptr())) continue;
    std::size_t v = u.is_var() ? 0x51ed27u : std::hash<Symbol>{}(u.symbol()) * 31 + u.arity();
    for (FormulaTerm a : u.args()) v = v * 1000003u ^ memo.at(a.node_ptr());
    memo.emplace(u.node_ptr(), v);
    h = v;
  }
  return memo.at(t.node_ptr());
}

} // namespace

std::size_t variant_fingerprint(const Clause& c, BodyOrder mode) {
  std::unordered_map<const detail::Node*, std::size_t> memo;
  std::size_t h = shape_hash(c.head, memo) * 131 + c.body.size();
  std::vector<std::size_t> body;
  for (const auto& b : c.body) body.push_back(shape_hash(b, memo));
  if (mode == BodyOrder::ModPermutation) std::sort(body.begin(), body.end());
  for (auto b : body) h = h * 1000003u ^ b;
  return h;
}

} // namespace proofgram
