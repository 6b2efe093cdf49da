#include "proofgram/pgt.hpp"

#include "proofgram/error.hpp"

#include <fstream>
#include <sstream>

namespace proofgram {

namespace {

enum class Tok { Name, Param, Var, LParen, RParen, Comma, Colon, Arrow, BackArrow, Slash, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

bool name_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
         c == '\'' || c == '-';
}

class Lexer {
public:
  Lexer(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  Token next() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    std::size_t start = pos_;
    if (pos_ >= s_.size()) return {Tok::End, "", start};
    char c = s_[pos_];
    auto single = [&](Tok k) { ++pos_; return Token{k, std::string(1, c), start}; };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case ',': return single(Tok::Comma);
      case ':': return single(Tok::Colon);
      case '/': return single(Tok::Slash);
      default: break;
    }
    if (c == '-' && peek(1) == '>') { pos_ += 2; return {Tok::Arrow, "->", start}; }
    if (c == '<' && peek(1) == '-') { pos_ += 2; return {Tok::BackArrow, "<-", start}; }
    if (c == '$') {
      ++pos_;
      std::size_t b = pos_;
      while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_;
      if (b == pos_) fail("expected digits after '$'", start);
      return {Tok::Param, std::string(s_.substr(b, pos_ - b)), start};
    }
    if (c == '?') {
      ++pos_;
      return {Tok::Var, name(), start};
    }
    return {Tok::Name, name(), start};
  }

  [[noreturn]] void fail(const std::string& what, std::size_t col) const {
    throw InputError("PGT line " + std::to_string(line_) + ", column " + std::to_string(col + 1) + ": " + what);
  }

private:
  char peek(std::size_t ahead) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }

  std::string name() {
    std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '\'') {
      std::string out;
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '\'') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        out += s_[pos_++];
      }
      if (pos_ >= s_.size()) fail("unterminated quoted name", start);
      ++pos_;
      return out;
    }
    while (pos_ < s_.size() && name_char(s_[pos_])) {
      if (s_[pos_] == '-' && peek(1) == '>') break;
      ++pos_;
    }
    if (start == pos_) fail(std::string("unexpected character '") + s_[pos_] + "'", start);
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

class Parser {
public:
  Parser(std::string_view line, std::size_t line_no) : lex_(line, line_no) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() { Token t = cur_; advance(); return t; }

  Token expect(Tok k, const char* what) {
    if (cur_.kind != k) lex_.fail(std::string("expected ") + what + ", found '" + cur_.text + "'", cur_.column);
    return take();
  }

  std::uint32_t number(const char* what) {
    Token t = expect(Tok::Name, what);
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(t.text, &used);
      if (used != t.text.size()) throw std::invalid_argument(t.text);
      return static_cast<std::uint32_t>(v);
    } catch (const std::logic_error&) {
      lex_.fail(std::string("expected ") + what + ", found '" + t.text + "'", t.column);
    }
  }

  ProofTerm proof_term() {
    if (cur_.kind == Tok::Param) {
      Token t = take();
      auto idx = static_cast<std::uint32_t>(std::stoul(t.text));
      if (idx == 0) lex_.fail("parameters are numbered from $1", t.column);
      return ProofTerm::param(idx);
    }
    Token head = expect(Tok::Name, "proof term");
    std::vector<ProofTerm> kids;
    if (cur_.kind == Tok::LParen) {
      take();
      kids.push_back(proof_term());
      while (cur_.kind == Tok::Comma) { take(); kids.push_back(proof_term()); }
      expect(Tok::RParen, "')'");
    }
    return ProofTerm::node(Symbol(head.text), kids);
  }

  FormulaTerm formula_term() {
    if (cur_.kind == Tok::Var) return FormulaTerm::var(Symbol(take().text));
    Token head = expect(Tok::Name, "formula term");
    std::vector<FormulaTerm> args;
    if (cur_.kind == Tok::LParen) {
      take();
      args.push_back(formula_term());
      while (cur_.kind == Tok::Comma) { take(); args.push_back(formula_term()); }
      expect(Tok::RParen, "')'");
    }
    return FormulaTerm::app(Symbol(head.text), args);
  }

  Clause clause() {
    Clause c{formula_term(), {}};
    if (cur_.kind == Tok::BackArrow) {
      take();
      c.body.push_back(formula_term());
      while (cur_.kind == Tok::Comma) { take(); c.body.push_back(formula_term()); }
    }
    return c;
  }

  void end() {
    if (cur_.kind != Tok::End) lex_.fail("unexpected trailing '" + cur_.text + "'", cur_.column);
  }

  [[noreturn]] void fail(const std::string& what) { lex_.fail(what, cur_.column); }

private:
  void advance() { cur_ = lex_.next(); }

  Lexer lex_;
  Token cur_;
};

template <class T, class F>
T parse_single(std::string_view text, F f) {
  Parser p(text, 1);
  T out = f(p);
  p.end();
  return out;
}

} // namespace

ProofTerm parse_proof_term(std::string_view text) {
  return parse_single<ProofTerm>(text, [](Parser& p) { return p.proof_term(); });
}

FormulaTerm parse_formula_term(std::string_view text) {
  return parse_single<FormulaTerm>(text, [](Parser& p) { return p.formula_term(); });
}

Clause parse_clause(std::string_view text) {
  return parse_single<Clause>(text, [](Parser& p) { return p.clause(); });
}

PgtDocument parse_pgt(std::string_view text) {
  PgtDocument doc;
  std::size_t line_no = 0;
  bool leading = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    if (line[first] == '#') {
      if (leading) {
        std::string_view body = line.substr(first + 1);
        if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        doc.comments.emplace_back(body);
      }
      continue;
    }
    leading = false;

    Parser p(line, line_no);
    Token kw = p.expect(Tok::Name, "'axiom' or 'prod'");
    if (kw.text == "axiom") {
      Symbol name(p.expect(Tok::Name, "presupposition name").text);
      p.expect(Tok::Slash, "'/'");
      std::uint32_t arity = p.number("arity");
      std::optional<Clause> clause;
      if (p.peek().kind == Tok::Colon) {
        p.take();
        clause = p.clause();
      }
      p.end();
      doc.base.add(Presupposition{name, arity, std::move(clause)});
    } else if (kw.text == "prod") {
      Symbol name(p.expect(Tok::Name, "nonterminal").text);
      p.expect(Tok::LParen, "'('");
      std::uint32_t arity = p.number("arity");
      p.expect(Tok::RParen, "')'");
      p.expect(Tok::Arrow, "'->'");
      ProofTerm rhs = p.proof_term();
      std::optional<Clause> clause;
      if (p.peek().kind == Tok::Colon) {
        p.take();
        clause = p.clause();
        if (clause->body.size() != arity)
          p.fail("clause of '" + name.str() + "' has " + std::to_string(clause->body.size()) +
                 " body atoms for arity " + std::to_string(arity));
      }
      p.end();
      if (doc.grammar.defines(name)) p.fail("nonterminal '" + name.str() + "' declared twice");
      doc.grammar.push_back({name, arity, rhs});
      doc.stated.push_back(std::move(clause));
    } else {
      throw InputError("PGT line " + std::to_string(line_no) + ": unknown declaration '" + kw.text + "'");
    }
  }
  return doc;
}

PgtDocument read_pgt(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pgt(ss.str());
}

std::string format_pgt(const PgtDocument& doc, const std::vector<std::string>& header) {
  std::string out;
  for (const auto& h : header) out += "# " + h + "\n";
  for (const auto& c : doc.comments) out += "# " + c + "\n";
  for (const auto& p : doc.base) {
    out += "axiom " + quote_name(p.name.name()) + "/" + std::to_string(p.arity);
    if (p.clause) out += " : " + to_string(*p.clause);
    out += '\n';
  }
  for (std::size_t i = 0; i < doc.grammar.size(); ++i) {
    const Production& p = doc.grammar[i];
    out += "prod " + quote_name(p.nonterminal.name()) + "(" + std::to_string(p.arity) + ") -> " + to_string(p.rhs);
    if (i < doc.stated.size() && doc.stated[i]) out += " : " + to_string(*doc.stated[i]);
    out += '\n';
  }
  return out;
}

void write_pgt(const std::filesystem::path& path, const PgtDocument& doc, const std::vector<std::string>& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << format_pgt(doc, header);
}

PgtDocument to_document(const KB& kb) {
  PgtDocument doc;
  doc.base = kb.base;
  doc.grammar = kb.grammar;
  doc.stated.assign(kb.theorems.begin(), kb.theorems.end());
  return doc;
}

KB to_kb(const PgtDocument& doc) {
  KB kb{doc.base, {}, doc.grammar};
  for (std::size_t i = 0; i < doc.grammar.size(); ++i) {
    if (i >= doc.stated.size() || !doc.stated[i])
      throw InputError("production '" + doc.grammar[i].nonterminal.str() + "' has no stated theorem clause");
    kb.theorems.push_back(*doc.stated[i]);
  }
  return kb;
}

} // namespace proofgram
