#include "proofgram/metamath.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

namespace proofgram {

namespace {

SymbolPair ordered_pair(Symbol a, Symbol b) { return a.id() < b.id() ? SymbolPair{a, b} : SymbolPair{b, a}; }

class Tokenizer {
public:
  explicit Tokenizer(std::string_view text) : s_(text) {}

  // Next token outside comments; empty at end of input.
  std::string_view next() {
    for (;;) {
      std::string_view t = raw();
      if (t != "$(") return t;
      std::size_t start_line = line_;
      for (;;) {
        std::string_view c = raw();
        if (c.empty()) throw InputError("line " + std::to_string(start_line) + ": unterminated comment");
        if (c == "$)") break;
        if (c.find("$)") != std::string_view::npos || c.find("$(") != std::string_view::npos)
          throw InputError("line " + std::to_string(line_) + ": malformed comment token '" + std::string(c) + "'");
      }
    }
  }

  std::size_t line() const { return line_; }

private:
  std::string_view raw() {
    while (pos_ < s_.size() && is_space(s_[pos_])) {
      if (s_[pos_] == '\n') ++line_;
      ++pos_;
    }
    std::size_t b = pos_;
    while (pos_ < s_.size() && !is_space(s_[pos_])) ++pos_;
    return s_.substr(b, pos_ - b);
  }
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

class Parser {
public:
  explicit Parser(std::string_view text) : tok_(text) {}

  MmDatabase run() {
    blocks_.push_back({});
    for (;;) {
      std::string_view t = tok_.next();
      if (t.empty()) break;
      if (t == "${") {
        blocks_.push_back({essentials_.size(), disjoint_.size(), {}, {}, {}});
      } else if (t == "$}") {
        if (blocks_.size() == 1) fail("'$}' without matching '${'");
        close_block();
      } else if (t == "$c") {
        if (blocks_.size() != 1) fail("'$c' inside a block");
        for (Symbol s : until_dot()) {
          if (db_.constants.contains(s) || db_.variables.contains(s)) fail("token '" + s.str() + "' redeclared");
          db_.constants.insert(s);
        }
      } else if (t == "$v") {
        for (Symbol s : until_dot()) {
          if (db_.constants.contains(s) || active_vars_.contains(s)) fail("token '" + s.str() + "' redeclared");
          active_vars_.insert(s);
          db_.variables.insert(s);
          blocks_.back().vars.push_back(s);
        }
      } else if (t == "$d") {
        auto vars = until_dot();
        for (Symbol v : vars)
          if (!active_vars_.contains(v)) fail("'$d' on inactive variable '" + v.str() + "'");
        for (std::size_t i = 0; i < vars.size(); ++i)
          for (std::size_t j = i + 1; j < vars.size(); ++j) {
            if (vars[i] == vars[j]) fail("'$d' repeats variable '" + vars[i].str() + "'");
            disjoint_.push_back(ordered_pair(vars[i], vars[j]));
          }
      } else if (t == "$[") {
        fail("file inclusion '$[' is not supported");
      } else if (t[0] == '$') {
        fail("unexpected keyword '" + std::string(t) + "'");
      } else {
        labelled(Symbol(t));
      }
    }
    if (blocks_.size() != 1) fail("unclosed '${' block");
    for (auto i : blocks_.back().hyps) db_.statements[i].scope_end = static_cast<std::uint32_t>(db_.statements.size());
    return std::move(db_);
  }

private:
  struct Block {
    std::size_t essentials_mark = 0;
    std::size_t disjoint_mark = 0;
    std::vector<Symbol> vars;
    std::vector<Symbol> floats;
    std::vector<std::uint32_t> hyps;
  };

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("line " + std::to_string(tok_.line()) + ": " + what);
  }

  std::vector<Symbol> until_dot() {
    std::vector<Symbol> out;
    for (;;) {
      std::string_view t = tok_.next();
      if (t.empty()) fail("unterminated statement");
      if (t == "$.") return out;
      if (t[0] == '$') fail("unexpected keyword '" + std::string(t) + "' in statement");
      out.emplace_back(t);
    }
  }

  void close_block() {
    Block& b = blocks_.back();
    for (Symbol v : b.vars) active_vars_.erase(v);
    for (Symbol v : b.floats) active_float_.erase(v);
    essentials_.resize(b.essentials_mark);
    disjoint_.resize(b.disjoint_mark);
    for (auto i : b.hyps) db_.statements[i].scope_end = static_cast<std::uint32_t>(db_.statements.size());
    blocks_.pop_back();
  }

  void check_math(const std::vector<Symbol>& expr, bool need_floats) {
    if (expr.empty()) fail("empty math string");
    if (!db_.constants.contains(expr[0])) fail("typecode '" + expr[0].str() + "' is not a constant");
    for (std::size_t i = 1; i < expr.size(); ++i) {
      Symbol s = expr[i];
      if (db_.constants.contains(s)) continue;
      if (!active_vars_.contains(s)) fail("undeclared token '" + s.str() + "'");
      if (need_floats && !active_float_.contains(s)) fail("variable '" + s.str() + "' has no active '$f'");
    }
  }

  void labelled(Symbol label) {
    std::string_view kw = tok_.next();
    std::size_t line = tok_.line();
    if (db_.by_label.contains(label)) fail("duplicate label '" + label.str() + "'");
    MmStatement st{};
    st.label = label;
    st.line = line;
    if (kw == "$f") {
      st.kind = MmKind::Floating;
      st.expr = until_dot();
      if (st.expr.size() != 2) fail("'$f' needs a typecode and a variable");
      if (!db_.constants.contains(st.expr[0])) fail("typecode '" + st.expr[0].str() + "' is not a constant");
      Symbol v = st.expr[1];
      if (!active_vars_.contains(v)) fail("'$f' on inactive variable '" + v.str() + "'");
      if (active_float_.contains(v)) fail("variable '" + v.str() + "' already has an active '$f'");
      active_float_.emplace(v, static_cast<std::uint32_t>(db_.statements.size()));
      blocks_.back().floats.push_back(v);
      blocks_.back().hyps.push_back(static_cast<std::uint32_t>(db_.statements.size()));
    } else if (kw == "$e") {
      st.kind = MmKind::Essential;
      st.expr = until_dot();
      check_math(st.expr, true);
      essentials_.push_back(static_cast<std::uint32_t>(db_.statements.size()));
      blocks_.back().hyps.push_back(static_cast<std::uint32_t>(db_.statements.size()));
    } else if (kw == "$a") {
      st.kind = MmKind::Axiom;
      st.expr = until_dot();
      check_math(st.expr, true);
      st.frame = make_frame(st.expr);
    } else if (kw == "$p") {
      st.kind = MmKind::Provable;
      for (;;) {
        std::string_view t = tok_.next();
        if (t.empty()) fail("unterminated '$p'");
        if (t == "$=") break;
        if (t[0] == '$') fail("unexpected keyword '" + std::string(t) + "' in '$p'");
        st.expr.emplace_back(t);
      }
      check_math(st.expr, true);
      st.frame = make_frame(st.expr);
      st.all_disjoint = disjoint_;
      std::sort(st.all_disjoint.begin(), st.all_disjoint.end(), [](const SymbolPair& a, const SymbolPair& b) {
        return std::pair(a.first.id(), a.second.id()) < std::pair(b.first.id(), b.second.id());
      });
      st.all_disjoint.erase(std::unique(st.all_disjoint.begin(), st.all_disjoint.end()), st.all_disjoint.end());
      read_proof(st);
    } else {
      fail("label '" + label.str() + "' followed by '" + std::string(kw) + "'");
    }
    db_.by_label.emplace(label, static_cast<std::uint32_t>(db_.statements.size()));
    db_.statements.push_back(std::move(st));
  }

  void read_proof(MmStatement& st) {
    std::string_view t = tok_.next();
    if (t == "(") {
      st.compressed = true;
      for (;;) {
        t = tok_.next();
        if (t.empty() || t == "$.") fail("unterminated compressed label list");
        if (t == ")") break;
        st.proof_labels.emplace_back(t);
      }
      for (;;) {
        t = tok_.next();
        if (t.empty()) fail("unterminated proof");
        if (t == "$.") break;
        st.proof_letters += t;
      }
      return;
    }
    for (;; t = tok_.next()) {
      if (t.empty()) fail("unterminated proof");
      if (t == "$.") break;
      st.proof_labels.emplace_back(t);
    }
  }

  MmFrame make_frame(const std::vector<Symbol>& expr) {
    std::unordered_set<Symbol> used;
    auto note = [&](const std::vector<Symbol>& e) {
      for (std::size_t i = 1; i < e.size(); ++i)
        if (active_vars_.contains(e[i])) used.insert(e[i]);
    };
    note(expr);
    for (auto e : essentials_) note(db_.statements[e].expr);
    MmFrame f;
    for (const auto& [v, idx] : active_float_)
      if (used.contains(v)) f.hyps.push_back(idx);
    f.hyps.insert(f.hyps.end(), essentials_.begin(), essentials_.end());
    std::sort(f.hyps.begin(), f.hyps.end());
    f.essential = essentials_;
    for (const auto& p : disjoint_)
      if (used.contains(p.first) && used.contains(p.second) &&
          std::find(f.disjoint.begin(), f.disjoint.end(), p) == f.disjoint.end())
        f.disjoint.push_back(p);
    return f;
  }

  Tokenizer tok_;
  MmDatabase db_;
  std::vector<Block> blocks_;
  std::unordered_set<Symbol> active_vars_;
  std::unordered_map<Symbol, std::uint32_t> active_float_;
  std::vector<std::uint32_t> essentials_;
  std::vector<SymbolPair> disjoint_;
};

} // namespace

const MmStatement* MmDatabase::find(Symbol label) const {
  auto it = by_label.find(label);
  return it == by_label.end() ? nullptr : &statements[it->second];
}

std::uint32_t MmDatabase::index_of(Symbol label) const {
  auto it = by_label.find(label);
  if (it == by_label.end()) throw LookupError("unknown label '" + label.str() + "'");
  return it->second;
}

MmDatabase mm_parse(std::string_view text) { return Parser(text).run(); }

MmDatabase read_mm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return mm_parse(ss.str());
}

// ---------------------------------------------------------------- proofs

std::vector<CompressedItem> decode_compressed_numbers(std::string_view letters) {
  std::vector<CompressedItem> out;
  std::uint64_t n = 0;
  bool pending = false;
  for (char c : letters) {
    if (c >= 'A' && c <= 'T') {
      n = n * 20 + static_cast<std::uint64_t>(c - 'A' + 1);
      out.push_back({CompressedItem::Kind::Number, n});
      n = 0;
      pending = false;
    } else if (c >= 'U' && c <= 'Y') {
      n = n * 5 + static_cast<std::uint64_t>(c - 'U' + 1);
      pending = true;
    } else if (c == 'Z' || c == '?') {
      if (pending) throw InputError(std::string("compressed proof: '") + c + "' inside a number");
      out.push_back({c == 'Z' ? CompressedItem::Kind::Tag : CompressedItem::Kind::Unknown, 0});
    } else if (c != ' ' && c != '\n' && c != '\t' && c != '\r') {
      throw InputError(std::string("compressed proof: invalid character '") + c + "'");
    }
  }
  if (pending) throw InputError("compressed proof ends inside a number");
  return out;
}

std::vector<ProofStep> decode_proof(const MmDatabase& db, const MmStatement& stmt) {
  std::vector<ProofStep> steps;
  auto resolve = [&](Symbol label) {
    auto it = db.by_label.find(label);
    if (it == db.by_label.end()) throw ProofError(stmt.label, "proof references unknown label '" + label.str() + "'");
    return it->second;
  };
  if (!stmt.compressed) {
    for (Symbol l : stmt.proof_labels) {
      if (l.name() == "?") steps.push_back({ProofStep::Kind::Unknown});
      else steps.push_back({ProofStep::Kind::Statement, resolve(l)});
    }
    return steps;
  }
  const std::uint64_t m = stmt.frame.hyps.size();
  const std::uint64_t l = stmt.proof_labels.size();
  std::vector<std::uint32_t> labels;
  labels.reserve(l);
  for (Symbol s : stmt.proof_labels) labels.push_back(resolve(s));
  std::uint32_t tags = 0;
  std::vector<CompressedItem> items;
  try {
    items = decode_compressed_numbers(stmt.proof_letters);
  } catch (const InputError& e) {
    throw ProofError(stmt.label, e.what());
  }
  for (const auto& it : items) {
    switch (it.kind) {
      case CompressedItem::Kind::Unknown: steps.push_back({ProofStep::Kind::Unknown}); break;
      case CompressedItem::Kind::Tag:
        if (steps.empty() || steps.back().tag) throw ProofError(stmt.label, "misplaced 'Z'");
        steps.back().tag = true;
        ++tags;
        break;
      case CompressedItem::Kind::Number: {
        std::uint64_t n = it.value;
        if (n <= m) steps.push_back({ProofStep::Kind::Statement, stmt.frame.hyps[n - 1]});
        else if (n <= m + l) steps.push_back({ProofStep::Kind::Statement, labels[n - m - 1]});
        else if (n - m - l - 1 < tags) steps.push_back({ProofStep::Kind::Reuse, static_cast<std::uint32_t>(n - m - l - 1)});
        else throw ProofError(stmt.label, "compressed reference " + std::to_string(n) + " out of range");
        break;
      }
    }
  }
  return steps;
}

bool MmConfig::is_provable(Symbol typecode) const {
  return std::find(provable.begin(), provable.end(), typecode) != provable.end();
}

Symbol MmConfig::syntax_typecode(Symbol typecode) const {
  auto it = parse_as.find(typecode);
  return it == parse_as.end() ? typecode : it->second;
}

namespace {

using Expr = std::shared_ptr<const std::vector<Symbol>>;

struct Entry {
  Expr expr;
  std::optional<ProofTerm> term;
};

std::string render(const std::vector<Symbol>& e) {
  std::string out;
  for (Symbol s : e) {
    if (!out.empty()) out += ' ';
    out += s.name();
  }
  return out;
}

} // namespace

ReplayResult replay_proof(const MmDatabase& db, std::uint32_t idx, const MmConfig& cfg) {
  const MmStatement& stmt = db.statements.at(idx);
  if (stmt.kind != MmKind::Provable) throw PreconditionError("'" + stmt.label.str() + "' is not a '$p' statement");
  ReplayResult result;
  auto steps = decode_proof(db, stmt);
  if (std::any_of(steps.begin(), steps.end(), [](const ProofStep& s) { return s.kind == ProofStep::Kind::Unknown; })) {
    result.incomplete = true;
    result.conclusion = stmt.expr;
    return result;
  }

  std::vector<Entry> stack, saved;
  std::vector<std::pair<Symbol, const std::vector<Symbol>*>> subst;
  auto substitute = [&](const std::vector<Symbol>& e) {
    auto out = std::make_shared<std::vector<Symbol>>();
    out->push_back(e[0]);
    for (std::size_t i = 1; i < e.size(); ++i) {
      auto hit = std::find_if(subst.begin(), subst.end(), [&](const auto& p) { return p.first == e[i]; });
      if (hit == subst.end()) out->push_back(e[i]);
      else out->insert(out->end(), hit->second->begin() + 1, hit->second->end());
    }
    return out;
  };
  auto vars_in = [&](const std::vector<Symbol>& e) {
    std::vector<Symbol> vs;
    for (std::size_t i = 1; i < e.size(); ++i)
      if (db.variables.contains(e[i]) && std::find(vs.begin(), vs.end(), e[i]) == vs.end()) vs.push_back(e[i]);
    return vs;
  };

  for (std::size_t k = 0; k < steps.size(); ++k) {
    const ProofStep& step = steps[k];
    if (step.kind == ProofStep::Kind::Reuse) {
      stack.push_back(saved[step.index]);
      continue;
    }
    const MmStatement& ref = db.statements[step.index];
    std::string where = "step " + std::to_string(k + 1) + " (" + ref.label.str() + ")";
    if (!ref.is_assertion()) {
      if (step.index >= idx || idx >= ref.scope_end) throw ProofError(stmt.label, where + ": hypothesis not in scope");
      Entry e{std::make_shared<const std::vector<Symbol>>(ref.expr), std::nullopt};
      if (ref.kind == MmKind::Essential && cfg.is_provable(ref.typecode())) {
        auto pos = std::find(stmt.frame.essential.begin(), stmt.frame.essential.end(), step.index);
        e.term = ProofTerm::param(static_cast<std::uint32_t>(pos - stmt.frame.essential.begin()) + 1);
      }
      stack.push_back(std::move(e));
    } else {
      if (step.index >= idx) throw ProofError(stmt.label, where + ": assertion used before it is stated");
      const auto& hyps = ref.frame.hyps;
      if (stack.size() < hyps.size()) throw ProofError(stmt.label, where + ": stack underflow");
      std::size_t base = stack.size() - hyps.size();
      subst.clear();
      for (std::size_t h = 0; h < hyps.size(); ++h) {
        const MmStatement& hyp = db.statements[hyps[h]];
        const Entry& e = stack[base + h];
        if (hyp.kind == MmKind::Floating) {
          if ((*e.expr)[0] != hyp.expr[0])
            throw ProofError(stmt.label, where + ": typecode mismatch for " + hyp.label.str() + ", got '" +
                                             render(*e.expr) + "'");
          subst.emplace_back(hyp.expr[1], e.expr.get());
        }
      }
      std::vector<ProofTerm> kids;
      for (std::size_t h = 0; h < hyps.size(); ++h) {
        const MmStatement& hyp = db.statements[hyps[h]];
        if (hyp.kind != MmKind::Essential) continue;
        const Entry& e = stack[base + h];
        auto want = substitute(hyp.expr);
        if (*want != *e.expr)
          throw ProofError(stmt.label, where + ": hypothesis " + hyp.label.str() + " expects '" + render(*want) +
                                           "', got '" + render(*e.expr) + "'");
        if (cfg.is_provable(hyp.typecode())) {
          if (!e.term) throw ProofError(stmt.label, where + ": hypothesis " + hyp.label.str() + " has no proof term");
          kids.push_back(*e.term);
        }
      }
      for (const auto& [x, y] : ref.frame.disjoint) {
        auto sx = std::find_if(subst.begin(), subst.end(), [&](const auto& p) { return p.first == x; });
        auto sy = std::find_if(subst.begin(), subst.end(), [&](const auto& p) { return p.first == y; });
        if (sx == subst.end() || sy == subst.end()) continue;
        for (Symbol a : vars_in(*sx->second))
          for (Symbol b : vars_in(*sy->second)) {
            bool ok = a != b && std::binary_search(stmt.all_disjoint.begin(), stmt.all_disjoint.end(),
                                                   ordered_pair(a, b), [](const SymbolPair& p, const SymbolPair& q) {
                                                     return std::pair(p.first.id(), p.second.id()) <
                                                            std::pair(q.first.id(), q.second.id());
                                                   });
            if (ok) continue;
            std::string msg = where + ": disjoint variable restriction " + x.str() + "," + y.str() + " violated by " +
                              a.str() + "," + b.str();
            if (cfg.disjoint_errors) throw ProofError(stmt.label, msg);
            result.disjoint_violations.push_back(msg);
          }
      }
      Entry out{substitute(ref.expr), std::nullopt};
      if (cfg.is_provable(ref.typecode())) out.term = ProofTerm::node(ref.label, kids);
      stack.resize(base);
      stack.push_back(std::move(out));
    }
    if (step.tag) saved.push_back(stack.back());
  }
  if (stack.size() != 1)
    throw ProofError(stmt.label, "proof leaves " + std::to_string(stack.size()) + " entries on the stack");
  if (*stack[0].expr != stmt.expr)
    throw ProofError(stmt.label, "proof concludes '" + render(*stack[0].expr) + "', expected '" + render(stmt.expr) + "'");
  result.conclusion = *stack[0].expr;
  result.term = stack[0].term;
  return result;
}

MmVerifyReport verify_database(const MmDatabase& db, const MmConfig& cfg) {
  MmVerifyReport report;
  for (std::uint32_t i = 0; i < db.statements.size(); ++i) {
    const MmStatement& st = db.statements[i];
    if (st.kind != MmKind::Provable) continue;
    ++report.checked;
    try {
      auto r = replay_proof(db, i, cfg);
      if (r.incomplete) report.incomplete.push_back(st.label);
      for (auto& w : r.disjoint_violations) report.warnings.push_back({st.label, std::move(w)});
    } catch (const ProofError& e) {
      report.errors.push_back({st.label, e.what()});
    }
  }
  return report;
}

} // namespace proofgram
