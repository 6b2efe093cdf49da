#include "cli.hpp"

#include "proofgram/cddc.hpp"
#include "proofgram/compress.hpp"
#include "proofgram/error.hpp"
#include "proofgram/evaluate.hpp"
#include "proofgram/metamath.hpp"
#include "proofgram/pdnet.hpp"
#include "proofgram/pgt.hpp"
#include "proofgram/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace proofgram::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

const std::vector<std::string> kStages{"treerepair", "prune", "nonlinear", "samevalue", "mgtreduce"};

struct Settings {
  std::vector<std::string> provable{"|-"};
  std::string syntax_typecode = "wff";
  bool disjoint_errors = false;
  std::string end_label;
  std::vector<std::string> roots;
  std::vector<std::string> protect;
  std::vector<std::string> pipeline = kStages;
  std::uint32_t min_occurrences = 2;
  std::uint32_t max_arity = 0;
  std::uint32_t batch = 1;
  std::string guard = "none";
  std::string edge_budget = "100000";
  std::string body_order = "ordered";
  std::string undefined_policy = "per-dependency";
  std::string kmin = "auto";
  std::string power_law_method = "discrete";
  std::string lemma_prefix = "lemma";
  std::size_t top = 20;

  std::vector<std::string> echo() const {
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
      return s;
    };
    return {
        "provable=" + join(provable),
        "syntax-typecode=" + syntax_typecode,
        "disjoint-errors=" + std::string(disjoint_errors ? "true" : "false"),
        "end-label=" + end_label,
        "roots=" + join(roots),
        "protect=" + join(protect),
        "pipeline=" + join(pipeline),
        "min-occurrences=" + std::to_string(min_occurrences),
        "max-arity=" + std::to_string(max_arity),
        "batch=" + std::to_string(batch),
        "guard=" + guard,
        "edge-budget=" + edge_budget,
        "body-order=" + body_order,
        "undefined-policy=" + undefined_policy,
        "kmin=" + kmin,
        "power-law-method=" + power_law_method,
        "lemma-prefix=" + lemma_prefix,
        "top=" + std::to_string(top),
    };
  }

  BigInt budget() const {
    try {
      BigInt b(edge_budget);
      if (b < 0) throw InputError("");
      return b;
    } catch (const std::exception&) {
      throw InputError("edge-budget must be a nonnegative integer, got '" + edge_budget + "'");
    }
  }

  MmConfig mm() const {
    MmConfig c;
    c.provable.clear();
    c.parse_as.clear();
    for (const auto& t : provable) {
      c.provable.emplace_back(t);
      c.parse_as[Symbol(t)] = Symbol(syntax_typecode);
    }
    c.disjoint_errors = disjoint_errors;
    return c;
  }

  UndefinedPolicy policy() const {
    if (undefined_policy == "blanket") return UndefinedPolicy::Blanket;
    if (undefined_policy == "per-dependency") return UndefinedPolicy::PerDependency;
    throw InputError("undefined-policy must be blanket or per-dependency");
  }

  BodyOrder order() const {
    if (body_order == "ordered") return BodyOrder::Ordered;
    if (body_order == "permutation") return BodyOrder::ModPermutation;
    throw InputError("body-order must be ordered or permutation");
  }

  std::optional<std::uint64_t> kmin_value() const {
    if (kmin == "auto") return std::nullopt;
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(kmin.data(), kmin.data() + kmin.size(), v);
    if (ec != std::errc() || p != kmin.data() + kmin.size() || v == 0)
      throw InputError("kmin must be auto or a positive integer");
    return v;
  }
};

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Run {
public:
  Run(std::string command, const Settings& s, std::ostream& out) : command_(std::move(command)), s_(s), out_(out) {}

  void input(const std::string& path) { inputs_.emplace_back(path, to_hex(sha256(read_bytes(path)))); }

  std::vector<std::string> header() const {
    std::vector<std::string> h{std::string("proofgram ") + kVersion, "command " + command_};
    auto cfg = s_.echo();
    std::string joined;
    for (const auto& l : cfg) joined += l + '\n';
    h.push_back("config-digest " + to_hex(sha256(joined)));
    for (const auto& l : cfg) h.push_back("config " + l);
    for (const auto& [path, digest] : inputs_) h.push_back("input " + path + " sha256 " + digest);
    return h;
  }

  void write_text(const std::string& path, const std::string& body) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    for (const auto& l : header()) f << "# " << l << '\n';
    f << body;
  }

  void write_doc(const std::string& path, const PgtDocument& doc) const { write_pgt(path, doc, header()); }

  std::ostream& out() { return out_; }

private:
  std::string command_;
  const Settings& s_;
  std::ostream& out_;
  std::vector<std::pair<std::string, std::string>> inputs_;
};

bool clauses_known(const PresuppositionBase& base) {
  return std::all_of(base.begin(), base.end(), [](const Presupposition& p) { return p.clause.has_value(); });
}

std::unordered_map<Symbol, Clause> stated_map(const PgtDocument& doc) {
  std::unordered_map<Symbol, Clause> m;
  for (std::size_t i = 0; i < doc.grammar.size(); ++i)
    if (doc.stated[i]) m.emplace(doc.grammar[i].nonterminal, *doc.stated[i]);
  return m;
}

// Stated clauses where given, grammar-MGTs elsewhere when the base allows it.
std::vector<std::optional<Clause>> annotate(const ProofGrammar& g, const PresuppositionBase& base,
                                            const std::unordered_map<Symbol, Clause>& stated, UndefinedPolicy policy) {
  std::vector<std::optional<Clause>> out(g.size());
  std::vector<std::optional<Clause>> gm;
  if (clauses_known(base)) gm = grammar_mgt(g, base, policy);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (auto it = stated.find(g[i].nonterminal); it != stated.end()) out[i] = it->second;
    else if (!gm.empty()) out[i] = gm[i];
  }
  return out;
}

KB stats_kb(const PgtDocument& doc) {
  KB kb{doc.base, {}, doc.grammar};
  if (std::all_of(doc.stated.begin(), doc.stated.end(), [](const auto& c) { return c.has_value(); }))
    for (const auto& c : doc.stated) kb.theorems.push_back(*c);
  return kb;
}

std::vector<Symbol> top_level(const ProofGrammar& g) {
  auto refs = reference_counts(g);
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (refs[i] == 0) out.push_back(g[i].nonterminal);
  return out;
}

// Named productions, or the unreferenced ones when none are named.
std::vector<Symbol> resolve_names(const std::vector<std::string>& given, const ProofGrammar& g) {
  if (given.empty()) return top_level(g);
  std::vector<Symbol> out;
  for (const auto& n : given) {
    Symbol s(n);
    if (!g.defines(s)) throw LookupError("no production named '" + n + "'");
    out.push_back(s);
  }
  return out;
}

std::string summary(const ProofGrammar& g) {
  return "|G| = " + with_separators(grammar_size(g)) + ", N(G) = " + std::to_string(g.size());
}

PgtDocument output_doc(const PgtDocument& in, const ProofGrammar& g, const Settings& s) {
  PgtDocument doc;
  doc.base = in.base;
  doc.grammar = g;
  doc.stated = annotate(g, in.base, stated_map(in), s.policy());
  return doc;
}

// ---------------------------------------------------------------- commands

int cmd_parse(Run& run, const Settings& s, const std::string& db_path) {
  run.input(db_path);
  auto db = read_mm(db_path);
  auto report = verify_database(db, s.mm());
  auto& o = run.out();
  o << "statements " << db.statements.size() << "\n";
  o << "proofs checked " << report.checked << "\n";
  o << "errors " << report.errors.size() << "\n";
  o << "warnings " << report.warnings.size() << "\n";
  o << "incomplete " << report.incomplete.size() << "\n";
  for (const auto& e : report.errors) o << "error " << e.label.str() << ": " << e.message << "\n";
  for (const auto& w : report.warnings) o << "warning " << w.label.str() << ": " << w.message << "\n";
  return report.ok() ? kExitOk : kExitViolations;
}

int cmd_extract(Run& run, const Settings& s, const std::string& db_path, const std::string& out_path) {
  run.input(db_path);
  auto db = read_mm(db_path);
  std::optional<std::vector<Symbol>> roots;
  if (!s.roots.empty()) {
    roots.emplace();
    for (const auto& r : s.roots) roots->emplace_back(r);
  }
  std::optional<Symbol> end;
  if (!s.end_label.empty()) end = Symbol(s.end_label);
  auto ex = extract_kb(db, roots, s.mm(), end);
  auto refs = reference_counts(ex.kb.grammar);
  std::uint64_t ref_sum = 0;
  for (auto r : refs) ref_sum += r;
  auto& o = run.out();
  o << summary(ex.kb.grammar) << ", sum ref = " << with_separators(ref_sum) << "\n";
  o << "excluded " << ex.excluded.size() << "\n";
  o << "with-disjoint " << ex.with_disjoint.size() << "\n";
  run.write_doc(out_path, to_document(ex.kb));
  return kExitOk;
}

int cmd_verify_kb(Run& run, const Settings& s, const std::string& path, bool chain) {
  run.input(path);
  auto doc = read_pgt(path);
  KB kb = to_kb(doc);
  KbVerifyOptions opt;
  opt.order = s.order();
  opt.check_chain = chain;
  opt.edge_budget = s.budget();
  auto report = kb_verify(kb, opt);
  auto& o = run.out();
  o << "theorems " << report.status.size() << "\n";
  o << "ok " << report.ok << "\n";
  o << "strict " << report.strict << "\n";
  o << "violations " << report.violations << "\n";
  o << "undefined " << report.undefined << "\n";
  if (chain) o << "chain-failures " << report.chain_failures << "\n";
  for (std::size_t i = 0; i < report.status.size(); ++i) {
    auto st = report.status[i];
    if (st == TheoremStatus::Violation || st == TheoremStatus::Undefined)
      o << to_string(st) << " " << kb.grammar[i].nonterminal.str() << "\n";
  }
  bool bad = report.violations > 0 || report.undefined > 0 || report.chain_failures > 0;
  return bad ? kExitViolations : kExitOk;
}

int cmd_stats(Run& run, const std::string& path, const std::string& csv) {
  run.input(path);
  auto doc = read_pgt(path);
  auto st = kb_stats(stats_kb(doc));
  run.out() << stats_text(st);
  if (!csv.empty()) run.write_text(csv, stats_csv(st));
  return kExitOk;
}

int cmd_expand(Run& run, const Settings& s, const std::string& path, const std::string& out_path) {
  run.input(path);
  auto doc = read_pgt(path);
  const auto& g = doc.grammar;
  auto names = resolve_names(s.roots, g);
  auto budget = s.budget();
  auto metrics = val_metrics(g);
  Expander ex(g);
  PgtDocument terms;
  terms.base = doc.base;
  auto& o = run.out();
  for (Symbol n : names) {
    auto i = *g.index_of(n);
    o << n.str() << " size " << csv_big(metrics[i].size);
    if (metrics[i].size <= budget) {
      terms.grammar.push_back({n, g[i].arity, ex.value(i)});
      terms.stated.push_back(doc.stated[i]);
    } else {
      o << " over-budget";
    }
    o << "\n";
  }
  if (!out_path.empty()) run.write_doc(out_path, terms);
  return kExitOk;
}

ProofGrammar run_stage(const std::string& stage, const ProofGrammar& g, const PgtDocument& doc, const Settings& s,
                       const SymbolSet& protect, std::ostream& o) {
  if (stage == "treerepair") {
    RepairConfig rc;
    rc.min_occurrences = s.min_occurrences;
    rc.max_arity = s.max_arity;
    rc.batch = s.batch;
    rc.prune = false;
    RepairStats st;
    auto out = treerepair(g, rc, &st);
    o << "  treerepair rounds " << st.rounds << ", fresh productions " << st.replaced << "\n";
    return out;
  }
  if (stage == "prune") return prune(g, protect);
  if (stage == "nonlinear") {
    NonlinearConfig nc;
    nc.guard = parse_guard(s.guard);
    if (nc.guard != NonlinearGuard::None) {
      if (!clauses_known(doc.base)) throw InputError("guard " + s.guard + " needs axiom clauses");
      nc.base = &doc.base;
      for (const auto& [name, clause] : stated_map(doc))
        if (protect.contains(name)) nc.theorems.emplace(name, clause);
    }
    NonlinearStats st;
    auto out = nonlinear_compress(g, protect, nc, &st);
    o << "  nonlinear applied " << st.applied << ", rejected " << st.rejected << "\n";
    return out;
  }
  if (stage == "samevalue") return same_value_reduce(g, protect, s.budget());
  if (stage == "mgtreduce") {
    if (!clauses_known(doc.base)) throw InputError("mgtreduce needs axiom clauses");
    return mgt_reduce(g, doc.base, protect);
  }
  throw InputError("unknown pipeline stage '" + stage + "'");
}

int cmd_compress(Run& run, const Settings& s, const std::string& path, const std::string& out_path) {
  run.input(path);
  auto doc = read_pgt(path);
  for (const auto& stage : s.pipeline)
    if (std::find(kStages.begin(), kStages.end(), stage) == kStages.end())
      throw InputError("unknown pipeline stage '" + stage + "'");
  parse_guard(s.guard);
  auto names = resolve_names(s.protect, doc.grammar);
  SymbolSet protect(names.begin(), names.end());
  auto budget = s.budget();
  auto& o = run.out();
  o << "protected " << names.size() << "\n";
  o << "input: " << summary(doc.grammar) << "\n";
  ProofGrammar g = doc.grammar;
  // Values are compared against `reference`; MGT-based reduction swaps proofs,
  // so after it the stated theorems are checked instead and it becomes the
  // new reference.
  ProofGrammar reference = doc.grammar;
  auto theorems = stated_map(doc);
  std::erase_if(theorems, [&](const auto& kv) { return !protect.contains(kv.first); });
  bool monotone = true;
  for (const auto& stage : s.pipeline) {
    auto next = run_stage(stage, g, doc, s, protect, o);
    if (stage == "mgtreduce") {
      auto lost = unsupported_theorems(next, doc.base, theorems);
      if (!lost.empty()) throw InternalError("mgtreduce lost the stated theorem of " + lost.front().str());
      reference = next;
    } else if (!same_values(reference, next, names, budget)) {
      throw InternalError("stage " + stage + " changed the value of a protected production");
    }
    if (grammar_size(next) > grammar_size(g)) monotone = false;
    g = std::move(next);
    o << stage << ": " << summary(g) << "\n";
  }
  o << "monotone " << (monotone ? "yes" : "no") << "\n";
  if (!out_path.empty()) run.write_doc(out_path, output_doc(doc, g, s));
  return kExitOk;
}

int cmd_recompress(Run& run, const Settings& s, const std::string& path, const std::string& out_path) {
  run.input(path);
  auto doc = read_pgt(path);
  RecompressConfig rc;
  rc.repair.min_occurrences = s.min_occurrences;
  rc.repair.max_arity = s.max_arity;
  rc.repair.batch = s.batch;
  rc.repair.fresh_prefix = s.lemma_prefix;
  rc.nonlinear_cfg.guard = parse_guard(s.guard);
  rc.nonlinear_cfg.fresh_prefix = s.lemma_prefix;
  if (rc.nonlinear_cfg.guard != NonlinearGuard::None) {
    if (!clauses_known(doc.base)) throw InputError("guard " + s.guard + " needs axiom clauses");
    rc.nonlinear_cfg.base = &doc.base;
    rc.nonlinear_cfg.theorems = stated_map(doc);
  }
  auto g = recompress_grammar(doc.grammar, rc);
  std::vector<Symbol> names;
  for (const auto& p : doc.grammar) names.push_back(p.nonterminal);
  if (!same_values(doc.grammar, g, names, s.budget()))
    throw InternalError("recompression changed the value of an original production");
  auto& o = run.out();
  o << "input: " << summary(doc.grammar) << "\n";
  o << "output: " << summary(g) << "\n";
  o << "lemmas " << g.size() - doc.grammar.size() << "\n";
  if (!out_path.empty()) run.write_doc(out_path, output_doc(doc, g, s));
  return kExitOk;
}

int cmd_pdnet(Run& run, const Settings& s, const std::string& path, const std::string& edges, bool fit,
              const std::string& ccdf) {
  run.input(path);
  auto doc = read_pgt(path);
  auto net = build_pdnet(doc.grammar);
  auto degrees = positive_in_degrees(net);
  auto& o = run.out();
  o << "nodes " << net.nodes.size() << "\n";
  o << "edges " << net.edges.size() << "\n";
  o << "edge-occurrences " << net.edge_occurrences() << "\n";
  o << "zero-in-degree " << net.nodes.size() - degrees.size() << "\n";
  if (!edges.empty()) run.write_text(edges, edges_tsv(net));
  if (fit || !ccdf.empty()) {
    auto f = fit_power_law(degrees, s.kmin_value(), parse_power_law_method(s.power_law_method));
    o << std::setprecision(6);
    o << "alpha " << f.alpha << "\n";
    o << "kmin " << f.kmin << (s.kmin == "auto" ? " (auto)" : "") << "\n";
    o << "ks-distance " << f.ks_distance << "\n";
    o << "tail " << f.tail << "\n";
    o << "method " << to_string(f.method) << "\n";
    if (f.degenerate) o << "degenerate yes\n";
    if (!ccdf.empty()) run.write_text(ccdf, ccdf_csv(degrees, f));
  }
  return kExitOk;
}

int cmd_compare(Run& run, const Settings& s, const std::string& a_path, const std::string& b_path,
                const std::vector<std::string>& skip, bool skip_top) {
  run.input(a_path);
  run.input(b_path);
  auto a = read_pgt(a_path);
  auto b = read_pgt(b_path);
  auto ca = annotate(a.grammar, a.base, stated_map(a), s.policy());
  auto cb = annotate(b.grammar, b.base, stated_map(b), s.policy());
  std::unordered_set<Symbol> skipped;
  for (const auto& n : skip) skipped.insert(Symbol(n));
  if (skip_top)
    for (Symbol n : top_level(a.grammar)) skipped.insert(n);
  std::vector<Clause> mine, reference;
  std::unordered_set<std::size_t> exclude;
  std::size_t missing = 0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!ca[i]) {
      missing += !skipped.contains(a.grammar[i].nonterminal);
      continue;
    }
    if (skipped.contains(a.grammar[i].nonterminal)) exclude.insert(mine.size());
    mine.push_back(*ca[i]);
  }
  for (const auto& c : cb)
    if (c) reference.push_back(*c);
  auto ov = compare_clauses(mine, reference, exclude);
  auto& o = run.out();
  o << "considered " << ov.considered << "\n";
  o << "found " << ov.found << "\n";
  o << "without-clause " << missing << "\n";
  o << std::fixed << std::setprecision(2) << "overlap " << ov.percent() << "%\n";
  return kExitOk;
}

int cmd_lemmas(Run& run, const Settings& s, const std::string& path, bool all) {
  run.input(path);
  auto doc = read_pgt(path);
  const auto& g = doc.grammar;
  auto sav = save_values(g);
  auto refs = reference_counts(g);
  auto clauses = annotate(g, doc.base, stated_map(doc), s.policy());
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (all || g[i].nonterminal.name().starts_with(s.lemma_prefix)) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sav[x] > sav[y]; });
  if (order.size() > s.top) order.resize(s.top);
  auto& o = run.out();
  for (auto i : order) {
    o << g[i].nonterminal.str() << " save-value " << csv_big(sav[i]) << " size " << csv_big(term_size(g[i].rhs))
      << " arity " << g[i].arity << " ref " << refs[i] << "\n";
    o << "  " << to_string(g[i].rhs) << "\n";
    o << "  " << (clauses[i] ? to_string(*clauses[i]) : std::string("UNDEFINED")) << "\n";
  }
  return kExitOk;
}

void error_record(std::ostream& err, const char* kind, const std::string& message, int code) {
  nlohmann::json j{{"error", kind}, {"message", message}, {"exit", code}};
  err << j.dump() << "\n";
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Proof grammars: Metamath extraction, MGT verification, compression and statistics", "proofgram"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value settings file; flags override it");
  app.set_version_flag("--version", kVersion);

  auto list = [](CLI::Option* opt) { return opt->delimiter(',')->expected(0, -1); };
  list(app.add_option("--provable", s.provable, "provable typecodes"));
  app.add_option("--syntax-typecode", s.syntax_typecode, "typecode used to parse provable statements");
  app.add_flag("--disjoint-errors", s.disjoint_errors, "treat $d violations as errors");
  app.add_option("--end-label", s.end_label, "last statement considered by extract");
  list(app.add_option("--roots", s.roots, "root labels"));
  list(app.add_option("--protect", s.protect, "productions kept by compression"));
  list(app.add_option("--pipeline", s.pipeline, "compression stages"));
  app.add_option("--min-occurrences", s.min_occurrences, "digram occurrences required for replacement");
  app.add_option("--max-arity", s.max_arity, "largest arity of fresh productions (0: unbounded)");
  app.add_option("--batch", s.batch, "digrams replaced per counting round")->check(CLI::PositiveNumber);
  app.add_option("--guard", s.guard, "nonlinear compression guard: none, mgt-defined, mgt-subsumes");
  app.add_option("--edge-budget", s.edge_budget, "largest expansion compared or emitted literally");
  app.add_option("--body-order", s.body_order, "ordered or permutation");
  app.add_option("--undefined-policy", s.undefined_policy, "blanket or per-dependency");
  app.add_option("--kmin", s.kmin, "power-law kmin or auto");
  app.add_option("--power-law-method", s.power_law_method, "discrete or approximate");
  app.add_option("--lemma-prefix", s.lemma_prefix, "name prefix of fresh lemmas");
  app.add_option("--top", s.top, "lemmas listed");

  std::string in, in2, out_path, csv, edges, ccdf;
  bool chain = false, fit = false, all = false, skip_top = false;
  std::vector<std::string> skip;

  auto* parse = app.add_subcommand("parse", "parse and verify a Metamath database");
  parse->add_option("db", in, "database")->required();
  auto* extract = app.add_subcommand("extract", "extract a KB from a Metamath database");
  extract->add_option("db", in, "database")->required();
  extract->add_option("--out", out_path, "output KB")->required();
  auto* verify = app.add_subcommand("verify-kb", "check stated theorems against their shallow MGTs");
  verify->add_option("kb", in, "KB")->required();
  verify->add_flag("--chain", chain, "also check the MGT instance chain");
  auto* stats = app.add_subcommand("stats", "grammar and KB statistics");
  stats->add_option("kb", in, "KB")->required();
  stats->add_option("--csv", csv, "CSV output");
  auto* expand = app.add_subcommand("expand", "expand productions to proof terms");
  expand->add_option("kb", in, "KB or grammar")->required();
  expand->add_option("--out", out_path, "expanded terms");
  auto* compress = app.add_subcommand("compress", "run a compression pipeline");
  compress->add_option("input", in, "KB, grammar or terms")->required();
  compress->add_option("--out", out_path, "compressed grammar");
  auto* recompress = app.add_subcommand("recompress", "introduce lemmas by grammar re-compression");
  recompress->add_option("kb", in, "KB")->required();
  recompress->add_option("--out", out_path, "recompressed KB");
  auto* pdnet = app.add_subcommand("pdnet", "proof-dependency network and power-law fit");
  pdnet->add_option("kb", in, "KB or grammar")->required();
  pdnet->add_option("--edges", edges, "edge list TSV");
  pdnet->add_flag("--fit", fit, "fit a power law to the in-degrees");
  pdnet->add_option("--ccdf", ccdf, "CCDF CSV");
  auto* compare = app.add_subcommand("compare", "share of theorems of A that are variants of theorems of B");
  compare->add_option("a", in, "KB A")->required();
  compare->add_option("b", in2, "KB B")->required();
  list(compare->add_option("--skip", skip, "productions of A not counted"));
  compare->add_flag("--skip-top-level", skip_top, "do not count unreferenced productions of A");
  auto* lemmas = app.add_subcommand("lemmas", "lemmas ranked by save-value");
  lemmas->add_option("kb", in, "KB")->required();
  lemmas->add_flag("--all", all, "rank every production, not only lemma-prefixed ones");

  std::vector<const char*> argv{"proofgram"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (app.exit(e, out, err) == 0) return kExitOk;
    error_record(err, "usage", e.what(), kExitInput);
    return kExitInput;
  }

  auto* sub = app.get_subcommands().front();
  Run r(sub->get_name(), s, out);
  try {
    if (sub == parse) return cmd_parse(r, s, in);
    if (sub == extract) return cmd_extract(r, s, in, out_path);
    if (sub == verify) return cmd_verify_kb(r, s, in, chain);
    if (sub == stats) return cmd_stats(r, in, csv);
    if (sub == expand) return cmd_expand(r, s, in, out_path);
    if (sub == compress) return cmd_compress(r, s, in, out_path);
    if (sub == recompress) return cmd_recompress(r, s, in, out_path);
    if (sub == pdnet) return cmd_pdnet(r, s, in, edges, fit, ccdf);
    if (sub == compare) return cmd_compare(r, s, in, in2, skip, skip_top);
    if (sub == lemmas) return cmd_lemmas(r, s, in, all);
  } catch (const InternalError& e) {
    error_record(err, "internal", e.what(), kExitInternal);
    return kExitInternal;
  } catch (const LookupError& e) {
    error_record(err, "lookup", e.what(), kExitInput);
    return kExitInput;
  } catch (const InputError& e) {
    error_record(err, "input", e.what(), kExitInput);
    return kExitInput;
  } catch (const PreconditionError& e) {
    error_record(err, "precondition", e.what(), kExitInput);
    return kExitInput;
  } catch (const std::exception& e) {
    error_record(err, "internal", e.what(), kExitInternal);
    return kExitInternal;
  }
  return kExitInternal;
}

} // namespace proofgram::cli
