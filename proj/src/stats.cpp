#include "proofgram/stats.hpp"
#include "proofgram/cddc.hpp"
#include "proofgram/compress.hpp"
#include "proofgram/unify.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace proofgram {

namespace {

BigInt rounded_div(const BigInt& num, std::size_t n) {
  BigInt q = num / n, r = num % n;
  BigInt twice = 2 * boost::multiprecision::abs(r);
  const int sign = num < 0 ? -1 : 1;
  if (twice > n || (twice == n && (q & 1) != 0)) q += sign;
  return q;
}

double percent(std::size_t part, std::size_t whole) { return whole == 0 ? 0.0 : 100.0 * double(part) / double(whole); }

bool all_clauses_known(const PresuppositionBase& base) {
  return std::all_of(base.begin(), base.end(), [](const Presupposition& p) { return p.clause.has_value(); });
}

// Representatives of variant classes, modulo body permutation.
std::size_t variant_classes(std::span<const Clause> clauses, const std::vector<std::size_t>& members) {
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
  std::size_t classes = 0;
  for (auto i : members) {
    auto& reps = buckets[variant_fingerprint(clauses[i], BodyOrder::ModPermutation)];
    bool seen = std::any_of(reps.begin(), reps.end(),
                            [&](std::size_t r) { return is_variant(clauses[i], clauses[r], BodyOrder::ModPermutation); });
    if (seen) continue;
    reps.push_back(i);
    ++classes;
  }
  return classes;
}

} // namespace

Distribution Distribution::of(std::vector<BigInt> values) {
  Distribution d;
  d.count = values.size();
  if (values.empty()) return d;
  std::sort(values.begin(), values.end());
  d.min = values.front();
  d.max = values.back();
  d.median = values[(values.size() - 1) / 2];
  for (const auto& v : values) d.sum += v;
  d.mean = rounded_div(d.sum, values.size());
  return d;
}

double duplicate_share(std::span<const Clause> clauses) {
  std::vector<std::size_t> all(clauses.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return percent(clauses.size() - variant_classes(clauses, all), clauses.size());
}

double subsumed_share(std::span<const Clause> clauses) {
  // Candidate generals share the body length and the head's top symbol
  // (unless their head is a variable) and are not larger.
  using Shape = std::tuple<std::size_t, std::uint32_t, std::size_t>;  // body length, head symbol (0: variable), arity
  auto shape = [](std::size_t body, FormulaTerm head) {
    return head.is_var() ? Shape{body, 0, 0} : Shape{body, head.symbol().id(), head.arity()};
  };
  std::vector<std::uint64_t> size(clauses.size());
  std::map<Shape, std::vector<std::size_t>> by_shape;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    size[i] = clause_metrics(clauses[i]).size;
    by_shape[shape(clauses[i].body.size(), clauses[i].head)].push_back(i);
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const Clause& c = clauses[i];
    bool strict = false;
    for (const Shape& key : {shape(c.body.size(), c.head), Shape{c.body.size(), 0, 0}}) {
      auto it = by_shape.find(key);
      if (it == by_shape.end()) continue;
      for (auto j : it->second) {
        if (j == i || size[j] > size[i]) continue;
        if (match_clause(c, clauses[j], BodyOrder::ModPermutation).strict) {
          strict = true;
          break;
        }
      }
      if (strict || c.head.is_var()) break;
    }
    if (!strict) kept.push_back(i);
  }
  return percent(clauses.size() - variant_classes(clauses, kept), clauses.size());
}

KbStats kb_stats(const KB& kb) {
  const ProofGrammar& g = kb.grammar;
  KbStats s;
  s.grammar_size = grammar_size(g);
  s.productions = g.size();

  auto refs = reference_counts(g);
  auto metrics = val_metrics(g);
  auto sav = save_values(g);
  std::vector<BigInt> ref_v, rhs_v, val_v, sav_v, arity_v, voccs_v, vmult_v;
  std::size_t ref0 = 0, ref1 = 0, sav_neg = 0, sav0 = 0, arity0 = 0, nonlinear = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    ref_v.emplace_back(refs[i]);
    ref0 += refs[i] == 0;
    ref1 += refs[i] == 1;
    rhs_v.push_back(term_size(g[i].rhs));
    val_v.push_back(metrics[i].size);
    if (refs[i] > 0) {
      sav_v.push_back(sav[i]);
      sav_neg += sav[i] < 0;
      sav0 += sav[i] == 0;
    }
    arity_v.emplace_back(g[i].arity);
    arity0 += g[i].arity == 0;
    nonlinear += !is_linear(g[i].rhs);
    auto occ = parameter_occurrences(g[i].rhs, g[i].arity);
    for (std::uint32_t j = 1; j <= g[i].arity; ++j) {
      voccs_v.push_back(occ[j]);
      vmult_v.push_back(metrics[i].vmult[j]);
    }
  }
  s.ref = Distribution::of(std::move(ref_v));
  s.ref_zero = percent(ref0, g.size());
  s.ref_one = percent(ref1, g.size());
  s.rhs_size = Distribution::of(std::move(rhs_v));
  s.val_size = Distribution::of(std::move(val_v));
  s.sav_negative = percent(sav_neg, sav_v.size());
  s.sav_zero = percent(sav0, sav_v.size());
  s.sav = Distribution::of(std::move(sav_v));
  s.arity = Distribution::of(std::move(arity_v));
  s.arity_zero = percent(arity0, g.size());
  s.nonlinear = percent(nonlinear, g.size());
  s.voccs = Distribution::of(std::move(voccs_v));
  s.vmult = Distribution::of(std::move(vmult_v));

  std::vector<BigInt> size_v, height_v;
  for (const Clause& c : kb.theorems) {
    auto m = clause_metrics(c);
    size_v.emplace_back(m.size);
    height_v.emplace_back(m.height);
  }
  s.clause_size = Distribution::of(std::move(size_v));
  s.clause_height = Distribution::of(std::move(height_v));
  if (kb.theorems.size() == g.size() && all_clauses_known(kb.base) && !g.empty()) {
    auto report = kb_verify(kb);
    s.strict_mgt = percent(report.strict, g.size());
  }
  s.duplicates = duplicate_share(kb.theorems);
  s.subsumed = subsumed_share(kb.theorems);
  return s;
}

std::string csv_big(const BigInt& v) {
  if (boost::multiprecision::abs(v) < BigInt("1000000000000000")) return v.str();
  return format_big(v, 3);
}

namespace {

std::string pct(double v) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(2);
  o << v << '%';
  return o.str();
}

} // namespace

std::string stats_csv(const KbStats& s) {
  std::ostringstream o;
  o << "metric,min,median,mean,max,extra\n";
  auto scalar = [&](const char* name, const std::string& v) { o << name << ",,,,," << v << '\n'; };
  auto dist = [&](const char* name, const Distribution& d, const std::string& extra) {
    o << name << ',';
    if (d.count > 0) o << csv_big(d.min) << ',' << csv_big(d.median) << ',' << csv_big(d.mean) << ',' << csv_big(d.max);
    else o << ",,,";
    o << ',' << extra << '\n';
  };
  scalar("grammar_size", csv_big(s.grammar_size));
  scalar("productions", std::to_string(s.productions));
  dist("ref", s.ref, "sum=" + csv_big(s.ref.sum) + ";zero=" + pct(s.ref_zero) + ";one=" + pct(s.ref_one));
  dist("rhs_size", s.rhs_size, "");
  dist("val_size", s.val_size, "");
  dist("sav", s.sav, "negative=" + pct(s.sav_negative) + ";zero=" + pct(s.sav_zero));
  dist("arity", s.arity, "zero=" + pct(s.arity_zero));
  scalar("nonlinear", pct(s.nonlinear));
  dist("voccs", s.voccs, "");
  dist("vmult", s.vmult, "");
  dist("clause_size", s.clause_size, "");
  dist("clause_height", s.clause_height, "");
  scalar("strict_mgt", s.strict_mgt ? pct(*s.strict_mgt) : "n/a");
  scalar("duplicates", pct(s.duplicates));
  scalar("subsumed", pct(s.subsumed));
  return o.str();
}

std::string stats_text(const KbStats& s) {
  std::ostringstream o;
  auto dist = [&](const char* name, const Distribution& d) {
    o << name << ": ";
    if (d.count == 0) {
      o << "-\n";
      return;
    }
    o << "min " << format_big(d.min) << ", median " << format_big(d.median) << ", mean " << format_big(d.mean)
      << ", max " << format_big(d.max) << '\n';
  };
  o << "|G| = " << with_separators(s.grammar_size) << ", N(G) = " << with_separators(s.productions) << '\n';
  dist("ref", s.ref);
  o << "  sum " << with_separators(s.ref.sum) << ", ref=0 " << pct(s.ref_zero) << ", ref=1 " << pct(s.ref_one) << '\n';
  dist("|p|", s.rhs_size);
  dist("|val|", s.val_size);
  dist("sav (ref > 0)", s.sav);
  o << "  <0 " << pct(s.sav_negative) << ", =0 " << pct(s.sav_zero) << '\n';
  dist("arity", s.arity);
  o << "  arity 0 " << pct(s.arity_zero) << ", nonlinear " << pct(s.nonlinear) << '\n';
  dist("voccs", s.voccs);
  dist("vmult", s.vmult);
  dist("|F|", s.clause_size);
  dist("h(F)", s.clause_height);
  o << ">mgt " << (s.strict_mgt ? pct(*s.strict_mgt) : "n/a") << ", duplicates " << pct(s.duplicates) << ", subsumed "
    << pct(s.subsumed) << '\n';
  return o.str();
}

Overlap compare_clauses(std::span<const Clause> clauses, std::span<const Clause> reference,
                        const std::unordered_set<std::size_t>& exclude) {
  std::unordered_map<std::size_t, std::vector<std::size_t>> index;
  for (std::size_t i = 0; i < reference.size(); ++i)
    index[variant_fingerprint(reference[i], BodyOrder::ModPermutation)].push_back(i);
  Overlap o;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (exclude.contains(i)) continue;
    ++o.considered;
    auto it = index.find(variant_fingerprint(clauses[i], BodyOrder::ModPermutation));
    if (it == index.end()) continue;
    if (std::any_of(it->second.begin(), it->second.end(), [&](std::size_t r) {
          return is_variant(clauses[i], reference[r], BodyOrder::ModPermutation);
        }))
      ++o.found;
  }
  return o;
}

Overlap compare_kb(const KB& k, std::span<const Clause> reference, const std::unordered_set<Symbol>& top_level) {
  std::unordered_set<std::size_t> exclude;
  for (std::size_t i = 0; i < k.grammar.size() && i < k.theorems.size(); ++i)
    if (top_level.contains(k.grammar[i].nonterminal)) exclude.insert(i);
  return compare_clauses(k.theorems, reference, exclude);
}

} // namespace proofgram
