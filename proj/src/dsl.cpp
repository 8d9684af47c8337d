#include "budget/dsl.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "budget/constraints.hpp"

namespace budget::dsl {

namespace {

std::string located(const std::string& source, Span span, const std::string& message) {
  std::string where = source.empty() ? span.to_string() : source + ":" + span.to_string();
  return where + ": error: " + message;
}

}  // namespace

ParseError::ParseError(const std::string& source, Span span, const std::string& message)
    : std::runtime_error(located(source, span, message)), span_(span), message_(message) {}

bool operator==(const Cond& a, const Cond& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Cond::Kind::Plain:
      return a.lhs == b.lhs;
    case Cond::Kind::Leq:
    case Cond::Kind::Eq:
      return a.lhs == b.lhs && a.rhs == b.rhs;
    case Cond::Kind::And:
      return a.parts == b.parts;
  }
  return false;
}

bool operator==(const TuplixSyntax& a, const TuplixSyntax& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TuplixSyntax::Kind::Eps:
    case TuplixSyntax::Kind::Delta:
      return true;
    case TuplixSyntax::Kind::Entry:
      return a.name == b.name && a.amount == b.amount;
    case TuplixSyntax::Kind::Test:
      return a.cond == b.cond;
    case TuplixSyntax::Kind::Comp:
      return a.children == b.children;
    case TuplixSyntax::Kind::Encap:
      return a.channels == b.channels && a.children == b.children;
    case TuplixSyntax::Kind::Ref:
      return a.name == b.name;
  }
  return false;
}

bool operator==(const BudgetProgram& a, const BudgetProgram& b) {
  if (a.order != b.order) return false;
  if (a.params.size() != b.params.size() || a.defs.size() != b.defs.size() || a.budgets.size() != b.budgets.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].name != b.params[i].name || a.params[i].doc != b.params[i].doc) return false;
  }
  for (std::size_t i = 0; i < a.defs.size(); ++i) {
    if (a.defs[i].name != b.defs[i].name || !(a.defs[i].body == b.defs[i].body)) return false;
  }
  for (std::size_t i = 0; i < a.budgets.size(); ++i) {
    if (a.budgets[i].name != b.budgets[i].name || !(a.budgets[i].body == b.budgets[i].body)) return false;
  }
  return true;
}

const Definition* BudgetProgram::find_def(std::string_view name) const {
  for (const auto& d : defs) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const BudgetDecl* BudgetProgram::find_budget(std::string_view name) const {
  for (const auto& b : budgets) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Ident, Number, String,
  LParen, RParen, LBrace, RBrace, Comma, Assign, Bar,
  Plus, Minus, Star, Slash, Leq, EqEq, AndAnd,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

const std::set<std::string, std::less<>> kKeywords = {"param", "def", "budget", "eps", "delta", "test", "enc", "abs"};

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& source) : text_(text), source_(source) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Span at{line_, col_};
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", at});
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back({Tok::Ident, identifier(), at});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back({Tok::Number, number(), at});
      } else if (c == '"') {
        out.push_back({Tok::String, string_literal(), at});
      } else {
        out.push_back(punct(at));
      }
    }
  }

 private:
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  static bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string identifier() {
    std::string s;
    while (word_char(peek())) {
      s += peek();
      advance();
    }
    while (peek() == ':' && word_char(peek(1))) {
      s += ':';
      advance();
      while (word_char(peek())) {
        s += peek();
        advance();
      }
    }
    return s;
  }

  std::string number() {
    std::string s;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      s += peek();
      advance();
    }
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      s += '.';
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        s += peek();
        advance();
      }
    }
    return s;
  }

  std::string string_literal() {
    Span start{line_, col_};
    advance();
    std::string s;
    for (;;) {
      if (pos_ >= text_.size() || peek() == '\n') throw ParseError(source_, start, "unterminated string");
      char c = peek();
      advance();
      if (c == '"') return s;
      if (c == '\\') {
        if (pos_ >= text_.size()) throw ParseError(source_, start, "unterminated string");
        c = peek();
        advance();
        if (c != '"' && c != '\\') throw ParseError(source_, start, std::string("unknown escape '\\") + c + "'");
      }
      s += c;
    }
  }

  Token punct(Span at) {
    const char c = peek();
    auto single = [&](Tok k) {
      advance();
      return Token{k, std::string(1, c), at};
    };
    auto pair = [&](char second, Tok k) {
      if (peek(1) != second) {
        throw ParseError(source_, at, std::string("unexpected character '") + c + "'");
      }
      advance();
      advance();
      return Token{k, std::string{c, second}, at};
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case ',': return single(Tok::Comma);
      case '|': return single(Tok::Bar);
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      case '*': return single(Tok::Star);
      case '/': return single(Tok::Slash);
      case '<':
        if (peek(1) != '=') throw ParseError(source_, at, "strict comparisons are not supported");
        return pair('=', Tok::Leq);
      case '&': return pair('&', Tok::AndAnd);
      case '=':
        if (peek(1) == '=') return pair('=', Tok::EqEq);
        return single(Tok::Assign);
      default:
        break;
    }
    if (c == '>') throw ParseError(source_, at, "only '<=' comparisons are supported");
    throw ParseError(source_, at, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  const std::string& source_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

const char* describe(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Assign: return "'='";
    case Tok::Bar: return "'|'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Leq: return "'<='";
    case Tok::EqEq: return "'=='";
    case Tok::AndAnd: return "'&&'";
    case Tok::End: return "end of input";
  }
  return "token";
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, BudgetProgram& program)
      : toks_(std::move(tokens)), program_(program) {}

  void run() {
    while (peek().kind != Tok::End) statement();
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at_keyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(program_.source_name, at.span, message);
  }

  Token expect(Tok kind, const char* context) {
    if (peek().kind != kind) {
      fail(peek(), std::string("expected ") + describe(kind) + " " + context + ", found " +
                       (peek().kind == Tok::End ? std::string("end of input") : "'" + peek().text + "'"));
    }
    return take();
  }

  Token name(const char* context) {
    Token t = expect(Tok::Ident, context);
    if (kKeywords.count(t.text)) fail(t, "keyword '" + t.text + "' cannot be used as a name");
    return t;
  }

  Expr note(Expr e, Span span) {
    program_.expr_spans.emplace(e.id(), span);
    return e;
  }

  void statement() {
    const Token& t = peek();
    if (at_keyword("param")) {
      take();
      Token n = name("after 'param'");
      Param p{n.text, std::nullopt, t.span};
      if (peek().kind == Tok::String) p.doc = take().text;
      program_.order.emplace_back(BudgetProgram::StmtKind::Param, program_.params.size());
      program_.params.push_back(std::move(p));
    } else if (at_keyword("def")) {
      Span at = take().span;
      Token n = name("after 'def'");
      expect(Tok::Assign, "in definition");
      Cond body = cond();
      program_.order.emplace_back(BudgetProgram::StmtKind::Def, program_.defs.size());
      program_.defs.push_back({n.text, std::move(body), at});
    } else if (at_keyword("budget")) {
      Span at = take().span;
      Token n = name("after 'budget'");
      expect(Tok::Assign, "in budget declaration");
      TuplixSyntax body = tuplix();
      program_.order.emplace_back(BudgetProgram::StmtKind::Budget, program_.budgets.size());
      program_.budgets.push_back({n.text, std::move(body), at});
    } else {
      fail(t, "expected 'param', 'def' or 'budget', found '" + t.text + "'");
    }
  }

  Cond relation() {
    Span at = peek().span;
    Expr lhs = expr();
    Cond c;
    c.span = at;
    c.lhs = lhs;
    if (peek().kind == Tok::Leq || peek().kind == Tok::EqEq) {
      c.kind = take().kind == Tok::Leq ? Cond::Kind::Leq : Cond::Kind::Eq;
      c.rhs = expr();
    }
    return c;
  }

  Cond cond() {
    Span at = peek().span;
    Cond first = relation();
    if (peek().kind != Tok::AndAnd) return first;
    Cond conj;
    conj.kind = Cond::Kind::And;
    conj.span = at;
    conj.parts.push_back(std::move(first));
    while (peek().kind == Tok::AndAnd) {
      take();
      conj.parts.push_back(relation());
    }
    return conj;
  }

  Expr expr() {
    Span at = peek().span;
    Expr acc = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool plus = take().kind == Tok::Plus;
      Expr rhs = term();
      acc = plus ? note(Expr::add(acc, rhs), at) : note(Expr::add(acc, note(Expr::neg(rhs), at)), at);
    }
    return acc;
  }

  Expr term() {
    Span at = peek().span;
    Expr acc = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const bool times = take().kind == Tok::Star;
      Expr rhs = unary();
      acc = times ? note(Expr::mul(acc, rhs), at) : note(Expr::mul(acc, note(Expr::inv(rhs), at)), at);
    }
    return acc;
  }

  Expr unary() {
    if (peek().kind == Tok::Minus) {
      Span at = take().span;
      return note(Expr::neg(unary()), at);
    }
    return primary();
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        Token n = take();
        return note(Expr::constant(Rational::parse(n.text)), n.span);
      }
      case Tok::LParen: {
        take();
        Expr e = expr();
        expect(Tok::RParen, "to close parenthesis");
        return e;
      }
      case Tok::Ident: {
        if (t.text == "abs") {
          Span at = take().span;
          expect(Tok::LParen, "after 'abs'");
          Expr e = expr();
          expect(Tok::RParen, "to close 'abs('");
          return note(Expr::abs(e), at);
        }
        Token n = name("in expression");
        return note(Expr::var(n.text), n.span);
      }
      default:
        fail(t, std::string("expected an expression, found ") +
                    (t.kind == Tok::End ? "end of input" : "'" + t.text + "'"));
    }
  }

  TuplixSyntax tuplix() {
    Span at = peek().span;
    TuplixSyntax acc = tuplix_primary();
    while (peek().kind == Tok::Bar) {
      take();
      TuplixSyntax rhs = tuplix_primary();
      TuplixSyntax comp;
      comp.kind = TuplixSyntax::Kind::Comp;
      comp.span = at;
      comp.children.push_back(std::move(acc));
      comp.children.push_back(std::move(rhs));
      acc = std::move(comp);
    }
    return acc;
  }

  TuplixSyntax tuplix_primary() {
    TuplixSyntax t;
    t.span = peek().span;
    if (peek().kind == Tok::LParen) {
      take();
      TuplixSyntax inner = tuplix();
      expect(Tok::RParen, "to close parenthesis");
      return inner;
    }
    if (at_keyword("eps")) {
      take();
      t.kind = TuplixSyntax::Kind::Eps;
      return t;
    }
    if (at_keyword("delta")) {
      take();
      t.kind = TuplixSyntax::Kind::Delta;
      return t;
    }
    if (at_keyword("test")) {
      take();
      expect(Tok::LParen, "after 'test'");
      t.kind = TuplixSyntax::Kind::Test;
      t.cond = cond();
      expect(Tok::RParen, "to close 'test('");
      return t;
    }
    if (at_keyword("enc")) {
      take();
      expect(Tok::LBrace, "after 'enc'");
      t.kind = TuplixSyntax::Kind::Encap;
      if (peek().kind != Tok::RBrace) {
        t.channels.push_back(name("in channel set").text);
        while (peek().kind == Tok::Comma) {
          take();
          t.channels.push_back(name("in channel set").text);
        }
      }
      expect(Tok::RBrace, "to close channel set");
      expect(Tok::LParen, "after channel set");
      t.children.push_back(tuplix());
      expect(Tok::RParen, "to close 'enc'");
      return t;
    }
    Token n = name("in budget expression");
    t.name = n.text;
    if (peek().kind == Tok::LParen) {
      take();
      t.kind = TuplixSyntax::Kind::Entry;
      t.amount = expr();
      expect(Tok::RParen, "to close entry");
    } else {
      t.kind = TuplixSyntax::Kind::Ref;
    }
    return t;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  BudgetProgram& program_;
};

// ---------------------------------------------------------------------------
// Name resolution

class Resolver {
 public:
  explicit Resolver(const BudgetProgram& p) : p_(p) {}

  void run() {
    for (std::size_t i = 0; i < p_.order.size(); ++i) {
      const auto [kind, index] = p_.order[i];
      const auto [name, span] = declaration(kind, index);
      if (auto it = decls_.find(name); it != decls_.end()) {
        throw ParseError(p_.source_name, span,
                         "duplicate identifier '" + name + "' (first declared at " + it->second.span.to_string() + ")");
      }
      decls_.emplace(name, Decl{kind, i, span});
    }
    for (std::size_t i = 0; i < p_.order.size(); ++i) {
      const auto [kind, index] = p_.order[i];
      if (kind == BudgetProgram::StmtKind::Def) {
        const auto& d = p_.defs[index];
        check_cond(d.body, i, d.name);
      } else if (kind == BudgetProgram::StmtKind::Budget) {
        check_tuplix(p_.budgets[index].body, i);
      }
    }
  }

 private:
  struct Decl {
    BudgetProgram::StmtKind kind;
    std::size_t position;
    Span span;
  };

  std::pair<std::string, Span> declaration(BudgetProgram::StmtKind kind, std::size_t index) const {
    switch (kind) {
      case BudgetProgram::StmtKind::Param:
        return {p_.params[index].name, p_.params[index].span};
      case BudgetProgram::StmtKind::Def:
        return {p_.defs[index].name, p_.defs[index].span};
      case BudgetProgram::StmtKind::Budget:
        return {p_.budgets[index].name, p_.budgets[index].span};
    }
    return {};
  }

  Span span_of(const Expr& e, Span fallback) const {
    auto it = p_.expr_spans.find(e.id());
    return it == p_.expr_spans.end() ? fallback : it->second;
  }

  void check_expr(const Expr& e, std::size_t position, const std::string& owner, Span fallback) const {
    switch (e.kind()) {
      case Expr::Kind::Const:
        return;
      case Expr::Kind::Var: {
        const Span at = span_of(e, fallback);
        auto it = decls_.find(e.name());
        if (it == decls_.end()) throw ParseError(p_.source_name, at, "reference to undeclared identifier '" + e.name() + "'");
        const Decl& d = it->second;
        if (d.kind == BudgetProgram::StmtKind::Budget) {
          throw ParseError(p_.source_name, at, "budget '" + e.name() + "' used as a value");
        }
        if (d.kind == BudgetProgram::StmtKind::Def && d.position >= position) {
          if (e.name() == owner) {
            throw ParseError(p_.source_name, at, "definition cycle: '" + owner + "' refers to itself");
          }
          throw ParseError(p_.source_name, at,
                           "definition cycle: '" + e.name() + "' is defined later, at " + d.span.to_string());
        }
        if (d.kind == BudgetProgram::StmtKind::Param && d.position >= position) {
          throw ParseError(p_.source_name, at, "param '" + e.name() + "' used before its declaration");
        }
        return;
      }
      case Expr::Kind::Add:
      case Expr::Kind::Mul:
        check_expr(e.lhs(), position, owner, fallback);
        check_expr(e.rhs(), position, owner, fallback);
        return;
      default:
        check_expr(e.arg(), position, owner, fallback);
    }
  }

  void check_cond(const Cond& c, std::size_t position, const std::string& owner) const {
    switch (c.kind) {
      case Cond::Kind::Plain:
        check_expr(c.lhs, position, owner, c.span);
        return;
      case Cond::Kind::Leq:
      case Cond::Kind::Eq:
        check_expr(c.lhs, position, owner, c.span);
        check_expr(c.rhs, position, owner, c.span);
        return;
      case Cond::Kind::And:
        for (const auto& part : c.parts) check_cond(part, position, owner);
        return;
    }
  }

  void check_tuplix(const TuplixSyntax& t, std::size_t position) const {
    switch (t.kind) {
      case TuplixSyntax::Kind::Eps:
      case TuplixSyntax::Kind::Delta:
        return;
      case TuplixSyntax::Kind::Entry:
        check_expr(t.amount, position, "", t.span);
        return;
      case TuplixSyntax::Kind::Test:
        check_cond(t.cond, position, "");
        return;
      case TuplixSyntax::Kind::Comp:
      case TuplixSyntax::Kind::Encap:
        for (const auto& c : t.children) check_tuplix(c, position);
        return;
      case TuplixSyntax::Kind::Ref: {
        auto it = decls_.find(t.name);
        if (it == decls_.end() || it->second.kind != BudgetProgram::StmtKind::Budget ||
            it->second.position >= position) {
          if (it != decls_.end() && it->second.kind != BudgetProgram::StmtKind::Budget) {
            throw ParseError(p_.source_name, t.span, "'" + t.name + "' is not a budget");
          }
          throw ParseError(p_.source_name, t.span, "reference to not-yet-declared budget '" + t.name + "'");
        }
        return;
      }
    }
  }

  const BudgetProgram& p_;
  std::map<std::string, Decl> decls_;
};

}  // namespace

BudgetProgram parse(std::string_view text, std::string source_name) {
  BudgetProgram program;
  program.source_name = std::move(source_name);
  Lexer lexer(text, program.source_name);
  Parser parser(lexer.run(), program);
  parser.run();
  Resolver(program).run();
  return program;
}

// ---------------------------------------------------------------------------
// Printing

std::string to_source(const Cond& c) {
  switch (c.kind) {
    case Cond::Kind::Plain:
      return to_string(c.lhs);
    case Cond::Kind::Leq:
      return to_string(c.lhs) + " <= " + to_string(c.rhs);
    case Cond::Kind::Eq:
      return to_string(c.lhs) + " == " + to_string(c.rhs);
    case Cond::Kind::And: {
      std::string s;
      for (const auto& part : c.parts) {
        if (!s.empty()) s += " && ";
        s += to_source(part);
      }
      return s;
    }
  }
  return {};
}

namespace {

std::string print_tuplix(const TuplixSyntax& t, bool nested) {
  switch (t.kind) {
    case TuplixSyntax::Kind::Eps:
      return "eps";
    case TuplixSyntax::Kind::Delta:
      return "delta";
    case TuplixSyntax::Kind::Entry:
      return t.name + "(" + to_string(t.amount) + ")";
    case TuplixSyntax::Kind::Test:
      return "test(" + to_source(t.cond) + ")";
    case TuplixSyntax::Kind::Comp: {
      std::string s = print_tuplix(t.children[0], false) + " | " + print_tuplix(t.children[1], true);
      return nested ? "(" + s + ")" : s;
    }
    case TuplixSyntax::Kind::Encap: {
      std::string s = "enc{";
      for (std::size_t i = 0; i < t.channels.size(); ++i) {
        if (i) s += ", ";
        s += t.channels[i];
      }
      return s + "}(" + print_tuplix(t.children[0], false) + ")";
    }
    case TuplixSyntax::Kind::Ref:
      return t.name;
  }
  return {};
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_source(const TuplixSyntax& t) { return print_tuplix(t, false); }

std::string to_source(const BudgetProgram& p) {
  std::ostringstream os;
  for (const auto& [kind, index] : p.order) {
    switch (kind) {
      case BudgetProgram::StmtKind::Param: {
        const auto& param = p.params[index];
        os << "param " << param.name;
        if (param.doc) os << ' ' << quote(*param.doc);
        break;
      }
      case BudgetProgram::StmtKind::Def:
        os << "def " << p.defs[index].name << " = " << to_source(p.defs[index].body);
        break;
      case BudgetProgram::StmtKind::Budget:
        os << "budget " << p.budgets[index].name << " = " << to_source(p.budgets[index].body);
        break;
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Elaboration

Expr cond_expr(const Cond& c) {
  switch (c.kind) {
    case Cond::Kind::Plain:
      return c.lhs;
    case Cond::Kind::Leq:
      return leq_expr(c.lhs, c.rhs);
    case Cond::Kind::Eq:
      return eq_expr(c.lhs, c.rhs);
    case Cond::Kind::And: {
      std::vector<Expr> parts;
      for (const auto& part : c.parts) parts.push_back(cond_expr(part));
      return and_expr(parts);
    }
  }
  return c.lhs;
}

namespace {

class Elaborator {
 public:
  explicit Elaborator(const BudgetProgram& p) : p_(p) {
    for (const auto& d : p_.defs) defs_.emplace(d.name, substitute(cond_expr(d.body), defs_));
  }

  const Expr& def(std::string_view name) const {
    auto it = defs_.find(name);
    if (it == defs_.end()) throw std::invalid_argument("unknown definition '" + std::string(name) + "'");
    return it->second;
  }

  Tuplix budget(std::string_view name) {
    if (auto it = budgets_.find(name); it != budgets_.end()) return it->second;
    const BudgetDecl* decl = p_.find_budget(name);
    if (!decl) throw UnknownBudget(std::string(name));
    Tuplix t = build(decl->body);
    budgets_.emplace(std::string(name), t);
    return t;
  }

 private:
  std::string span_text(Span s) const {
    return p_.source_name.empty() ? s.to_string() : p_.source_name + ":" + s.to_string();
  }

  Expr inline_defs(const Expr& e) const { return substitute(e, defs_); }

  /// Named conjuncts of a condition, looking through defs that are
  /// themselves conjunctions.
  void conjuncts(const Cond& c, std::vector<Origin::Part>& out) const {
    if (c.kind == Cond::Kind::And) {
      for (const auto& part : c.parts) conjuncts(part, out);
      return;
    }
    if (c.kind == Cond::Kind::Plain && c.lhs.is_var()) {
      if (const Definition* d = p_.find_def(c.lhs.name())) {
        if (d->body.kind == Cond::Kind::And) {
          conjuncts(d->body, out);
        } else {
          out.push_back({span_text(d->span), d->name, def(d->name)});
        }
        return;
      }
    }
    out.push_back({span_text(c.span), to_source(c), inline_defs(cond_expr(c))});
  }

  Tuplix build(const TuplixSyntax& t) {
    auto origin = [&](std::string text, std::vector<Origin::Part> parts = {}) {
      return std::make_shared<const Origin>(Origin{span_text(t.span), std::move(text), std::move(parts)});
    };
    switch (t.kind) {
      case TuplixSyntax::Kind::Eps:
        return Tuplix::eps();
      case TuplixSyntax::Kind::Delta:
        return Tuplix::delta(origin("delta"));
      case TuplixSyntax::Kind::Entry:
        return Tuplix::entry(t.name, inline_defs(t.amount));
      case TuplixSyntax::Kind::Test: {
        std::vector<Origin::Part> parts;
        conjuncts(t.cond, parts);
        return Tuplix::test(inline_defs(cond_expr(t.cond)), origin(to_source(t.cond), std::move(parts)));
      }
      case TuplixSyntax::Kind::Comp:
        return Tuplix::comp(build(t.children[0]), build(t.children[1]));
      case TuplixSyntax::Kind::Encap: {
        Tuplix::ChannelSet channels(t.channels.begin(), t.channels.end());
        std::string text = "enc{";
        for (const auto& c : channels) text += (text.size() > 4 ? ", " : "") + c;
        return Tuplix::encap(channels, build(t.children[0]), origin(text + "}"));
      }
      case TuplixSyntax::Kind::Ref:
        return budget(t.name);
    }
    return Tuplix::eps();
  }

  const BudgetProgram& p_;
  std::map<std::string, Expr, std::less<>> defs_;
  std::map<std::string, Tuplix, std::less<>> budgets_;
};

}  // namespace

Tuplix elaborate(const BudgetProgram& p, std::string_view budget) {
  Elaborator e(p);
  return e.budget(budget);
}

Expr elaborate_def(const BudgetProgram& p, std::string_view def) {
  Elaborator e(p);
  return e.def(def);
}

std::vector<std::pair<std::string, std::string>> list_params(const BudgetProgram& p) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& param : p.params) out.emplace_back(param.name, param.doc.value_or(""));
  return out;
}

}  // namespace budget::dsl
