#include "proofgram/cddc.hpp"

#include "proofgram/error.hpp"
#include "proofgram/evaluate.hpp"

#include <algorithm>

namespace proofgram {

// ---------------------------------------------------------------- engine

MgtResult MgtEngine::mgt(ProofTerm d, std::optional<std::uint32_t> k) {
  const std::uint32_t needed = d.max_param();
  const std::uint32_t budget = k.value_or(needed);
  if (budget < needed)
    throw PreconditionError("parameter budget " + std::to_string(budget) + " is below the largest parameter $" +
                            std::to_string(needed));
  MgtResult result;
  result.parameter_count = budget;
  const auto& base = node_mgt(d);
  if (!base) return result;
  Clause c = *base;
  // Parameters beyond the term's own contribute unconstrained body atoms.
  for (std::uint32_t i = needed; i < budget; ++i) {
    auto count = variables_of(c).size();
    c.body.push_back(FormulaTerm::var("x" + std::to_string(count + 1)));
  }
  result.clause = std::move(c);
  return result;
}

const std::optional<Clause>& MgtEngine::node_mgt(ProofTerm root) {
  if (auto it = memo_.find(root.node_ptr()); it != memo_.end()) return it->second;
  struct Frame { ProofTerm t; std::size_t next; };
  std::vector<Frame> stack{{root, 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.t.arity()) {
      ProofTerm kid = f.t.child(f.next++);
      if (!memo_.contains(kid.node_ptr())) stack.push_back({kid, 0});
      continue;
    }
    ProofTerm t = f.t;
    stack.pop_back();
    if (memo_.contains(t.node_ptr())) continue;
    memo_.emplace(t.node_ptr(), apply_rule(t));
  }
  return memo_.at(root.node_ptr());
}

std::optional<Clause> MgtEngine::apply_rule(ProofTerm t) {
  const std::uint32_t k = t.max_param();
  TermBank bank;
  CanonicalNamer namer(bank);
  auto name_of = [&](TermBank::Ref r) { return namer(r); };

  if (t.is_param()) {
    // PAR: V_i proves u_i <- u_1 .. u_k.
    std::vector<TermBank::Ref> u;
    for (std::uint32_t i = 0; i < k; ++i) u.push_back(bank.fresh_var());
    Clause c{bank.extract(u[k - 1], name_of), {}};
    for (auto r : u) c.body.push_back(bank.extract(r, name_of));
    return c;
  }

  const std::optional<Clause>* pre = lookup_(t.name());
  if (pre == nullptr) throw LookupError("no presupposition named '" + t.name().str() + "'");
  if (!pre->has_value()) return std::nullopt;
  const Clause& schema = **pre;
  if (schema.body.size() != t.arity())
    throw PreconditionError("'" + t.name().str() + "' has " + std::to_string(schema.body.size()) +
                            " premises but is applied to " + std::to_string(t.arity()) + " proof terms");

  // APP: rename apart the presupposition, U and each premise's MGT, then unify
  // B_j with the premise heads and U with every premise body.
  TermBank::Scope schema_scope;
  TermBank::Ref head = bank.load(schema.head, schema_scope);
  std::vector<TermBank::Ref> premises;
  for (const auto& b : schema.body) premises.push_back(bank.load(b, schema_scope));
  std::vector<TermBank::Ref> u;
  for (std::uint32_t i = 0; i < k; ++i) u.push_back(bank.fresh_var());

  for (std::size_t j = 0; j < t.arity(); ++j) {
    const std::optional<Clause>& sub = memo_.at(t.child(j).node_ptr());
    if (!sub) return std::nullopt;
    TermBank::Scope scope;
    TermBank::Ref sub_head = bank.load(sub->head, scope);
    if (!bank.unify(premises[j], sub_head)) return std::nullopt;
    for (std::size_t i = 0; i < sub->body.size(); ++i) {
      TermBank::Ref r = bank.load(sub->body[i], scope);
      if (!bank.unify(u[i], r)) return std::nullopt;
    }
  }

  Clause c{bank.extract(head, name_of), {}};
  c.body.reserve(k);
  for (auto r : u) c.body.push_back(bank.extract(r, name_of));
  return c;
}

namespace {

MgtEngine::Lookup base_lookup(const PresuppositionBase& base) {
  return [&base](Symbol name) -> const std::optional<Clause>* {
    const Presupposition* p = base.find(name);
    if (p == nullptr) return nullptr;
    if (!p->clause) throw LookupError("presupposition '" + name.str() + "' is declared without a clause");
    return &p->clause;
  };
}

} // namespace

MgtResult mgt(ProofTerm d, const PresuppositionBase& base, std::optional<std::uint32_t> k) {
  MgtEngine engine(base_lookup(base));
  return engine.mgt(d, k);
}

std::optional<Clause> compose_mgt(ProofTerm d, std::span<const ProofTerm> args, const PresuppositionBase& base) {
  MgtEngine engine(base_lookup(base));
  auto k = static_cast<std::uint32_t>(args.size());
  MgtResult outer = engine.mgt(d, k);
  if (!outer.defined()) return std::nullopt;

  TermBank bank;
  TermBank::Scope outer_scope;
  TermBank::Ref head = bank.load(outer.clause->head, outer_scope);
  for (std::uint32_t i = 0; i < k; ++i) {
    if (!args[i].is_ground()) throw PreconditionError("compose_mgt expects ground argument proof terms");
    MgtResult inner = engine.mgt(args[i]);
    if (!inner.defined()) return std::nullopt;
    TermBank::Scope scope;
    TermBank::Ref b = bank.load(outer.clause->body[i], outer_scope);
    TermBank::Ref b_prime = bank.load(inner.clause->head, scope);
    if (!bank.unify(b, b_prime)) return std::nullopt;
  }
  CanonicalNamer namer(bank);
  return Clause{bank.extract(head, [&](TermBank::Ref r) { return namer(r); }), {}};
}

// ---------------------------------------------------------------- grammars

std::vector<std::optional<Clause>> grammar_mgt(const ProofGrammar& g, const PresuppositionBase& base,
                                               UndefinedPolicy policy) {
  std::vector<std::optional<Clause>> result(g.size());
  std::size_t computed = 0;
  auto lookup = [&](Symbol name) -> const std::optional<Clause>* {
    if (auto i = g.index_of(name)) return *i < computed ? &result[*i] : nullptr;
    return base_lookup(base)(name);
  };
  MgtEngine engine(lookup);
  for (std::size_t i = 0; i < g.size(); ++i) {
    result[i] = engine.mgt(g[i].rhs, g[i].arity).clause;
    computed = i + 1;
    if (!result[i] && policy == UndefinedPolicy::Blanket) {
      std::fill(result.begin(), result.end(), std::nullopt);
      return result;
    }
  }
  return result;
}

std::vector<std::optional<Clause>> shallow_mgt(const KB& kb) {
  const ProofGrammar& g = kb.grammar;
  if (kb.theorems.size() != g.size())
    throw PreconditionError("KB has " + std::to_string(kb.theorems.size()) + " theorems for " +
                            std::to_string(g.size()) + " productions");
  std::vector<std::optional<Clause>> stated(kb.theorems.begin(), kb.theorems.end());
  std::vector<std::optional<Clause>> result(g.size());
  std::size_t current = 0;
  auto lookup = [&](Symbol name) -> const std::optional<Clause>* {
    if (auto i = g.index_of(name)) return *i < current ? &stated[*i] : nullptr;
    return base_lookup(kb.base)(name);
  };
  MgtEngine engine(lookup);
  for (std::size_t i = 0; i < g.size(); ++i) {
    current = i;
    result[i] = engine.mgt(g[i].rhs, g[i].arity).clause;
  }
  return result;
}

std::string to_string(TheoremStatus s) {
  switch (s) {
    case TheoremStatus::Ok: return "ok";
    case TheoremStatus::StrictInstance: return "strict-instance";
    case TheoremStatus::Violation: return "violation";
    case TheoremStatus::Undefined: return "undefined";
  }
  return "unknown";
}

KbVerifyReport kb_verify(const KB& kb, const KbVerifyOptions& options) {
  KbVerifyReport report;
  auto shallow = shallow_mgt(kb);
  for (std::size_t i = 0; i < shallow.size(); ++i) {
    TheoremStatus s = TheoremStatus::Undefined;
    if (shallow[i]) {
      MatchResult m = match_clause(kb.theorems[i], *shallow[i], options.order);
      s = !m.instance ? TheoremStatus::Violation : m.strict ? TheoremStatus::StrictInstance : TheoremStatus::Ok;
    }
    switch (s) {
      case TheoremStatus::Ok: ++report.ok; break;
      case TheoremStatus::StrictInstance: ++report.strict; break;
      case TheoremStatus::Violation: ++report.violations; break;
      case TheoremStatus::Undefined: ++report.undefined; break;
    }
    report.status.push_back(s);
  }
  if (!options.check_chain) return report;

  auto gm = grammar_mgt(kb.grammar, kb.base, UndefinedPolicy::PerDependency);
  Expander expander(kb.grammar);
  MgtEngine flat(base_lookup(kb.base));
  for (std::size_t i = 0; i < kb.grammar.size(); ++i) {
    ChainCheck c;
    if (shallow[i] && gm[i]) c.shallow_vs_grammar = find_instance(*shallow[i], *gm[i], options.order).has_value();
    if (gm[i]) {
      ProofTerm val = expander.value(i);
      if (term_size(val) <= options.edge_budget) {
        c.checked_expanded = true;
        auto m = flat.mgt(val, kb.grammar[i].arity);
        // Defined grammar-mgt implies a defined expanded MGT.
        c.grammar_vs_expanded = m.defined() && find_instance(*gm[i], *m.clause, options.order).has_value();
      }
    }
    if (!c.shallow_vs_grammar || !c.grammar_vs_expanded) ++report.chain_failures;
    report.chain.push_back(c);
  }
  return report;
}

} // namespace proofgram
