#include "proofgram/compress.hpp"
#include "proofgram/dag.hpp"
#include "proofgram/error.hpp"
#include "proofgram/evaluate.hpp"

#include <openssl/evp.h>

#include <cstring>

namespace proofgram {

namespace {

class Hasher {
public:
  Hasher() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) throw InternalError("sha256 init failed");
  }
  ~Hasher() { EVP_MD_CTX_free(ctx_); }
  Hasher(const Hasher&) = delete;
  Hasher& operator=(const Hasher&) = delete;

  void add(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }
  void add_u32(std::uint32_t v) {
    std::uint8_t b[4] = {std::uint8_t(v >> 24), std::uint8_t(v >> 16), std::uint8_t(v >> 8), std::uint8_t(v)};
    add(b, 4);
  }
  Digest finish() {
    Digest d{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_, d.data(), &len) != 1 || len != d.size()) throw InternalError("sha256 final failed");
    return d;
  }

private:
  EVP_MD_CTX* ctx_;
};

Digest node_digest(Symbol name, std::span<const Digest> kids) {
  Hasher h;
  std::uint8_t tag = 'N';
  h.add(&tag, 1);
  h.add_u32(static_cast<std::uint32_t>(name.name().size()));
  h.add(name.name().data(), name.name().size());
  h.add_u32(static_cast<std::uint32_t>(kids.size()));
  for (const Digest& k : kids) h.add(k.data(), k.size());
  return h.finish();
}

Digest param_digest(std::uint32_t i) {
  Hasher h;
  std::uint8_t tag = 'P';
  h.add(&tag, 1);
  h.add_u32(i);
  return h.finish();
}

struct DigestOps {
  Digest terminal(Symbol s, std::span<const Digest> kids) const { return node_digest(s, kids); }
  Digest param(std::uint32_t i) const { return param_digest(i); }
  std::size_t hash(const Digest& d) const {
    std::size_t h;
    std::memcpy(&h, d.data(), sizeof h);
    return h;
  }
};

// Size of an RHS subterm as c + sum_i a[i] * |t_i| for arguments t_i.
struct Affine {
  BigInt c;
  std::vector<BigInt> a;
};

} // namespace

Digest sha256(std::string_view bytes) {
  Hasher h;
  h.add(bytes.data(), bytes.size());
  return h.finish();
}

std::string to_hex(const Digest& d) {
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (auto b : d) {
    s.push_back(hex[b >> 4]);
    s.push_back(hex[b & 15]);
  }
  return s;
}

Digest term_digest(ProofTerm t) {
  std::unordered_map<const detail::Node*, Digest> memo;
  for (ProofTerm u : post_order(t)) {
    if (u.is_param()) {
      memo.emplace(u.node_ptr(), param_digest(u.param_index()));
      continue;
    }
    std::vector<Digest> kids;
    for (ProofTerm k : u.children()) kids.push_back(memo.at(k.node_ptr()));
    memo.emplace(u.node_ptr(), node_digest(u.name(), kids));
  }
  return memo.at(t.node_ptr());
}

std::vector<ValMetrics> val_metrics(const ProofGrammar& g) {
  std::vector<ValMetrics> out(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) {
    const std::uint32_t n = g[p].arity;
    std::unordered_map<const detail::Node*, Affine> memo;
    for (ProofTerm u : post_order(g[p].rhs)) {
      Affine f{0, std::vector<BigInt>(n + 1)};
      if (u.is_param()) {
        if (u.param_index() <= n) f.a[u.param_index()] = 1;
      } else if (auto q = g.index_of(u.name()); q && *q < p) {
        const ValMetrics& m = out[*q];
        f.c = m.size;
        for (std::size_t j = 0; j < u.arity(); ++j) {
          const BigInt& mult = m.vmult[j + 1];
          if (mult == 0) continue;
          const Affine& k = memo.at(u.child(j).node_ptr());
          f.c += mult * k.c;
          for (std::uint32_t i = 1; i <= n; ++i)
            if (k.a[i] != 0) f.a[i] += mult * k.a[i];
        }
      } else {
        f.c = u.arity();
        for (ProofTerm k : u.children()) {
          const Affine& ka = memo.at(k.node_ptr());
          f.c += ka.c;
          for (std::uint32_t i = 1; i <= n; ++i)
            if (ka.a[i] != 0) f.a[i] += ka.a[i];
        }
      }
      memo.emplace(u.node_ptr(), std::move(f));
    }
    Affine& root = memo.at(g[p].rhs.node_ptr());
    out[p].size = std::move(root.c);
    out[p].vmult = std::move(root.a);
  }
  GrammarEvaluator<Digest, DigestOps> digests(g, DigestOps{});
  for (std::size_t p = 0; p < g.size(); ++p) out[p].digest = digests.open_value(p);
  return out;
}

ValMetrics val_metrics(const ProofGrammar& g, std::size_t prod) {
  if (prod >= g.size()) throw PreconditionError("production index out of range");
  ProofGrammar prefix(std::vector<Production>(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(prod) + 1));
  return std::move(val_metrics(prefix).back());
}

// ---------------------------------------------------------------- names

void NameSupply::reserve_all(const ProofGrammar& g) {
  for (const auto& p : g) {
    used_.insert(p.nonterminal);
    reserve_all(p.rhs);
  }
}

void NameSupply::reserve_all(ProofTerm t) {
  for (ProofTerm u : post_order(t))
    if (!u.is_param()) used_.insert(u.name());
}

Symbol NameSupply::fresh() {
  for (;;) {
    Symbol s(prefix_ + std::to_string(next_++));
    if (used_.insert(s).second) return s;
  }
}

// ---------------------------------------------------------------- DAG

std::vector<Symbol> start_production_names(std::size_t n, std::span<const Symbol> given) {
  if (!given.empty()) {
    if (given.size() != n) throw PreconditionError("one start name is needed per input term");
    return {given.begin(), given.end()};
  }
  if (n == 1) return {Symbol("start")};
  std::vector<Symbol> names;
  for (std::size_t i = 1; i <= n; ++i) names.emplace_back("start" + std::to_string(i));
  return names;
}

ProofGrammar min_dag(std::span<const ProofTerm> terms, std::span<const Symbol> start_names) {
  auto names = start_production_names(terms.size(), start_names);
  for (ProofTerm t : terms)
    if (!t.is_ground()) throw PreconditionError("min_dag expects ground terms");

  NameSupply supply("p");
  for (ProofTerm t : terms) supply.reserve_all(t);
  for (Symbol s : names) supply.reserve(s);

  auto order = post_order(terms);
  std::unordered_map<const detail::Node*, std::uint32_t> refs;
  for (ProofTerm u : order)
    for (ProofTerm k : u.children()) ++refs[k.node_ptr()];
  std::unordered_map<const detail::Node*, Symbol> name_of;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    auto [it, fresh] = name_of.emplace(terms[i].node_ptr(), names[i]);
    if (!fresh || refs[terms[i].node_ptr()] > 0) ++refs[terms[i].node_ptr()];
  }
  for (ProofTerm u : order)
    if (u.arity() > 0 && refs[u.node_ptr()] >= 2 && !name_of.contains(u.node_ptr()))
      name_of.emplace(u.node_ptr(), supply.fresh());

  // ref: how a parent sees the node; named nodes appear as nonterminals.
  std::unordered_map<const detail::Node*, ProofTerm> ref;
  std::vector<Production> prods;
  for (ProofTerm u : order) {
    std::vector<ProofTerm> kids;
    for (ProofTerm k : u.children()) kids.push_back(ref.at(k.node_ptr()));
    ProofTerm body = ProofTerm::node(u.name(), kids);
    auto it = name_of.find(u.node_ptr());
    if (it == name_of.end()) {
      ref.emplace(u.node_ptr(), body);
      continue;
    }
    prods.push_back({it->second, 0, body});
    ref.emplace(u.node_ptr(), u.arity() == 0 ? body : ProofTerm::node(it->second, {}));
  }
  // Repeated input terms refer to the first production with their value.
  for (std::size_t i = 0; i < terms.size(); ++i) {
    Symbol owner = name_of.at(terms[i].node_ptr());
    if (owner != names[i]) prods.push_back({names[i], 0, ProofTerm::node(owner, {})});
  }
  return ProofGrammar(std::move(prods));
}

// ---------------------------------------------------------------- save-values

namespace {

// Occurrence counts of each parameter in an RHS, or nullopt if every
// parameter occurs exactly once.
std::optional<std::vector<BigInt>> nonlinear_occurrences(const Production& p) {
  auto occ = parameter_occurrences(p.rhs, p.arity);
  for (std::uint32_t i = 1; i <= p.arity; ++i)
    if (occ[i] != 1) return occ;
  return std::nullopt;
}

// Size change of `rhs` when every reference to `name` is unfolded.
BigInt unfold_delta(ProofTerm rhs, Symbol name, const BigInt& body_size, const std::vector<BigInt>& occ) {
  std::unordered_map<const detail::Node*, std::pair<BigInt, BigInt>> memo;  // (old size, new size)
  for (ProofTerm u : post_order(rhs)) {
    BigInt before = 0, after = 0;
    if (!u.is_param()) {
      const bool hit = u.name() == name;
      before = u.arity();
      after = hit ? body_size : BigInt(u.arity());
      for (std::size_t j = 0; j < u.arity(); ++j) {
        const auto& [kb, ka] = memo.at(u.child(j).node_ptr());
        before += kb;
        after += hit ? occ[j + 1] * ka : ka;
      }
    }
    memo.emplace(u.node_ptr(), std::pair{std::move(before), std::move(after)});
  }
  const auto& [b, a] = memo.at(rhs.node_ptr());
  return a - b;
}

bool mentions(ProofTerm t, Symbol name) {
  for (ProofTerm u : post_order(t))
    if (!u.is_param() && u.name() == name) return true;
  return false;
}

} // namespace

BigInt save_value(const ProofGrammar& g, std::size_t prod) {
  const Production& p = g[prod];
  const BigInt body = term_size(p.rhs);
  auto occ = nonlinear_occurrences(p);
  if (!occ) {
    BigInt refs = reference_counts(g)[prod];
    return refs * (body - p.arity) - body;
  }
  BigInt total = -body;
  for (std::size_t i = prod + 1; i < g.size(); ++i)
    if (mentions(g[i].rhs, p.nonterminal)) total += unfold_delta(g[i].rhs, p.nonterminal, body, *occ);
  return total;
}

std::vector<BigInt> save_values(const ProofGrammar& g) {
  auto refs = reference_counts(g);
  std::vector<BigInt> out(g.size());
  std::vector<std::optional<std::vector<BigInt>>> occ(g.size());
  std::vector<BigInt> body(g.size());
  bool any_nonlinear = false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    body[i] = term_size(g[i].rhs);
    occ[i] = nonlinear_occurrences(g[i]);
    if (occ[i]) {
      out[i] = -body[i];
      any_nonlinear = true;
    } else {
      out[i] = BigInt(refs[i]) * (body[i] - g[i].arity) - body[i];
    }
  }
  if (!any_nonlinear) return out;
  for (std::size_t r = 0; r < g.size(); ++r) {
    std::unordered_set<std::size_t> used;
    for (ProofTerm u : post_order(g[r].rhs))
      if (!u.is_param())
        if (auto q = g.index_of(u.name()); q && occ[*q]) used.insert(*q);
    for (auto q : used) out[q] += unfold_delta(g[r].rhs, g[q].nonterminal, body[q], *occ[q]);
  }
  return out;
}

ProofGrammar unfold(const ProofGrammar& g, std::size_t prod) {
  const Production& p = g[prod];
  std::unordered_map<const detail::Node*, ProofTerm> memo;
  std::vector<Production> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == prod) continue;
    Production q = g[i];
    if (i > prod)
      q.rhs = rebuild(
          q.rhs,
          [&](ProofTerm u, std::span<const ProofTerm> kids) {
            if (u.is_param()) return u;
            if (u.name() == p.nonterminal) return substitute_params(p.rhs, kids);
            return ProofTerm::node(u.name(), kids);
          },
          memo);
    out.push_back(q);
  }
  return ProofGrammar(std::move(out));
}

bool same_values(const ProofGrammar& before, const ProofGrammar& after, std::span<const Symbol> names,
                 const BigInt& edge_budget) {
  auto mb = val_metrics(before);
  auto ma = val_metrics(after);
  Expander eb(before), ea(after);
  for (Symbol s : names) {
    auto i = before.index_of(s), j = after.index_of(s);
    if (!i || !j) return false;
    if (before[*i].arity != after[*j].arity || mb[*i].digest != ma[*j].digest) return false;
    if (mb[*i].size <= edge_budget && eb.value(*i) != ea.value(*j)) return false;
  }
  return true;
}

} // namespace proofgram
