#include "sql.hpp"

#include <cctype>
#include <set>

#include "bji/error.hpp"
#include "bji/schema.hpp"

namespace bji::sql {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#' || c == '$';
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      std::size_t l = line, cl = col;
      auto end = text.find("*/", i + 2);
      if (end == std::string_view::npos) throw ParseError("unterminated comment", l, cl);
      advance(end + 2 - i);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      t.kind = Token::Ident;
      t.text = to_lower(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '"' || c == '[') {
      char close = c == '"' ? '"' : ']';
      auto end = text.find(close, i + 1);
      if (end == std::string_view::npos) throw ParseError("unterminated quoted identifier", line, col);
      t.kind = Token::Ident;
      t.text = to_lower(text.substr(i + 1, end - i - 1));
      advance(end + 1 - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          j = k;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      t.kind = Token::Number;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '\'') {
      std::string s;
      std::size_t j = i + 1;
      for (;;) {
        if (j >= text.size()) throw ParseError("unterminated string literal", line, col);
        if (text[j] == '\'') {
          if (j + 1 < text.size() && text[j + 1] == '\'') {
            s += '\'';
            j += 2;
            continue;
          }
          break;
        }
        s += text[j++];
      }
      t.kind = Token::String;
      t.text = s;
      advance(j + 1 - i);
    } else {
      static const char* two[] = {"<=", ">=", "<>", "!=", "||"};
      t.kind = Token::Symbol;
      for (const char* s : two) {
        if (text.substr(i, 2) == s) t.text = s;
      }
      if (t.text.empty()) {
        if (std::string_view("=<>+-*/(),.;%").find(c) == std::string_view::npos) {
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

namespace {

const std::set<std::string> kReserved = {
    "select", "from",  "where", "group", "by",    "having", "order", "and",   "or",     "not",   "in",
    "exists", "between", "like", "is",   "null",  "as",     "on",    "join",  "inner",  "left",  "right",
    "full",   "outer", "cross", "case",  "when",  "then",   "else",  "end",   "union",  "asc",   "desc",
    "create", "view",  "drop",  "distinct", "top", "all",   "intersect", "except", "limit"};

const std::set<std::string> kDatePartFunctions = {"dateadd", "datepart", "datediff", "datename"};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::vector<Statement> statements() {
    std::vector<Statement> out;
    while (!at_end()) {
      if (accept_symbol(";")) continue;
      out.push_back(statement());
    }
    return out;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::End; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& what, const Token& t) const {
    std::string found = t.kind == Token::End ? "end of query" : "'" + t.text + "'";
    throw ParseError(what + ", found " + found, t.line, t.column);
  }

  bool is_keyword(const std::string& kw, std::size_t k = 0) const {
    return peek(k).kind == Token::Ident && peek(k).text == kw;
  }
  bool accept_keyword(const std::string& kw) {
    if (!is_keyword(kw)) return false;
    next();
    return true;
  }
  void expect_keyword(const std::string& kw) {
    if (!accept_keyword(kw)) fail("expected '" + kw + "'", peek());
  }
  bool is_symbol(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Token::Symbol && peek(k).text == s;
  }
  bool accept_symbol(const std::string& s) {
    if (!is_symbol(s)) return false;
    next();
    return true;
  }
  void expect_symbol(const std::string& s) {
    if (!accept_symbol(s)) fail("expected '" + s + "'", peek());
  }
  std::string identifier(const char* what) {
    if (peek().kind != Token::Ident || kReserved.count(peek().text)) fail(std::string("expected ") + what, peek());
    return next().text;
  }
  bool at_alias() const { return peek().kind == Token::Ident && !kReserved.count(peek().text); }

  ExprPtr make(Expr::Kind kind, const Token& at) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->line = at.line;
    e->column = at.column;
    return e;
  }

  Statement statement() {
    Statement st;
    st.line = peek().line;
    st.column = peek().column;
    if (accept_keyword("create")) {
      expect_keyword("view");
      st.kind = Statement::Kind::CreateView;
      st.name = identifier("view name");
      if (accept_symbol("(")) {
        do {
          st.columns.push_back(identifier("column name"));
        } while (accept_symbol(","));
        expect_symbol(")");
      }
      expect_keyword("as");
      st.select = select();
    } else if (accept_keyword("drop")) {
      expect_keyword("view");
      st.kind = Statement::Kind::DropView;
      st.name = identifier("view name");
    } else if (is_keyword("select")) {
      st.select = select();
    } else {
      fail("expected SELECT, CREATE VIEW or DROP VIEW", peek());
    }
    return st;
  }

  SelectPtr select() {
    expect_keyword("select");
    auto s = std::make_shared<Select>();
    if (accept_keyword("distinct")) {
      s->distinct = true;
    } else {
      accept_keyword("all");
    }
    if (accept_keyword("top")) {
      if (peek().kind != Token::Number) fail("expected a row count after TOP", peek());
      next();
    }
    do {
      SelectItem item;
      if (is_symbol("*")) {
        item.expr = make(Expr::Kind::Star, next());
      } else {
        item.expr = expression();
        if (accept_keyword("as")) {
          item.alias = identifier("alias");
        } else if (at_alias()) {
          item.alias = next().text;
        }
      }
      s->items.push_back(std::move(item));
    } while (accept_symbol(","));

    expect_keyword("from");
    s->from.push_back(table_ref(TableRef::Join::Comma));
    for (;;) {
      if (accept_symbol(",")) {
        s->from.push_back(table_ref(TableRef::Join::Comma));
        continue;
      }
      TableRef::Join kind;
      if (accept_keyword("join")) {
        kind = TableRef::Join::Inner;
      } else if (is_keyword("inner")) {
        next();
        expect_keyword("join");
        kind = TableRef::Join::Inner;
      } else if (is_keyword("left") || is_keyword("right") || is_keyword("full")) {
        next();
        accept_keyword("outer");
        expect_keyword("join");
        kind = TableRef::Join::Outer;
      } else if (is_keyword("cross")) {
        next();
        expect_keyword("join");
        kind = TableRef::Join::Cross;
      } else {
        break;
      }
      auto ref = table_ref(kind);
      if (kind != TableRef::Join::Cross) {
        expect_keyword("on");
        ref.on = expression();
      }
      s->from.push_back(std::move(ref));
    }

    if (accept_keyword("where")) s->where = expression();
    if (accept_keyword("group")) {
      expect_keyword("by");
      do {
        s->group_by.push_back(expression());
      } while (accept_symbol(","));
    }
    if (accept_keyword("having")) s->having = expression();
    if (accept_keyword("order")) {
      expect_keyword("by");
      do {
        s->order_by.push_back(expression());
        if (!accept_keyword("asc")) accept_keyword("desc");
      } while (accept_symbol(","));
    }
    if (is_keyword("union") || is_keyword("intersect") || is_keyword("except") || is_keyword("limit")) {
      fail("unsupported construct", peek());
    }
    return s;
  }

  TableRef table_ref(TableRef::Join join) {
    TableRef ref;
    ref.join = join;
    ref.line = peek().line;
    ref.column = peek().column;
    if (accept_symbol("(")) {
      if (!is_keyword("select")) fail("expected a subquery", peek());
      ref.derived = select();
      expect_symbol(")");
      accept_keyword("as");
      ref.alias = identifier("derived table alias");
      if (accept_symbol("(")) {
        do {
          ref.column_aliases.push_back(identifier("column name"));
        } while (accept_symbol(","));
        expect_symbol(")");
      }
      return ref;
    }
    ref.table = identifier("table name");
    if (accept_keyword("as")) {
      ref.alias = identifier("alias");
    } else if (at_alias()) {
      ref.alias = next().text;
    }
    return ref;
  }

  ExprPtr expression() { return disjunction(); }

  ExprPtr disjunction() {
    auto left = conjunction();
    while (is_keyword("or")) {
      auto e = make(Expr::Kind::Binary, next());
      e->op = "or";
      e->args = {left, conjunction()};
      left = e;
    }
    return left;
  }

  ExprPtr conjunction() {
    auto left = negation();
    while (is_keyword("and")) {
      auto e = make(Expr::Kind::Binary, next());
      e->op = "and";
      e->args = {left, negation()};
      left = e;
    }
    return left;
  }

  ExprPtr negation() {
    if (is_keyword("not") && !is_keyword("exists", 1)) {
      auto e = make(Expr::Kind::Unary, next());
      e->op = "not";
      e->args = {negation()};
      return e;
    }
    return predicate();
  }

  ExprPtr predicate() {
    const Token& start = peek();
    if (is_keyword("exists") || (is_keyword("not") && is_keyword("exists", 1))) {
      auto e = make(Expr::Kind::Exists, start);
      e->negated = accept_keyword("not");
      expect_keyword("exists");
      expect_symbol("(");
      e->subquery = select();
      expect_symbol(")");
      return e;
    }
    auto left = additive();
    static const std::set<std::string> cmp = {"=", "<>", "!=", "<", "<=", ">", ">="};
    if (peek().kind == Token::Symbol && cmp.count(peek().text)) {
      auto e = make(Expr::Kind::Compare, peek());
      e->op = next().text;
      e->args = {left, additive()};
      return e;
    }
    bool negated = false;
    if (is_keyword("not") && (is_keyword("between", 1) || is_keyword("in", 1) || is_keyword("like", 1))) {
      next();
      negated = true;
    }
    if (is_keyword("between")) {
      auto e = make(Expr::Kind::Between, next());
      e->negated = negated;
      auto lo = additive();
      expect_keyword("and");
      e->args = {left, lo, additive()};
      return e;
    }
    if (is_keyword("in")) {
      const Token& at = next();
      expect_symbol("(");
      if (is_keyword("select")) {
        auto e = make(Expr::Kind::InSubquery, at);
        e->negated = negated;
        e->args = {left};
        e->subquery = select();
        expect_symbol(")");
        return e;
      }
      auto e = make(Expr::Kind::InList, at);
      e->negated = negated;
      e->args = {left};
      do {
        e->args.push_back(additive());
      } while (accept_symbol(","));
      expect_symbol(")");
      return e;
    }
    if (is_keyword("like")) {
      auto e = make(Expr::Kind::Like, next());
      e->negated = negated;
      e->args = {left, additive()};
      return e;
    }
    if (negated) fail("expected BETWEEN, IN or LIKE after NOT", peek());
    if (is_keyword("is")) {
      auto e = make(Expr::Kind::IsNull, next());
      e->negated = accept_keyword("not");
      expect_keyword("null");
      e->args = {left};
      return e;
    }
    return left;
  }

  ExprPtr additive() {
    auto left = multiplicative();
    while (is_symbol("+") || is_symbol("-") || is_symbol("||")) {
      auto e = make(Expr::Kind::Binary, peek());
      e->op = next().text;
      e->args = {left, multiplicative()};
      left = e;
    }
    return left;
  }

  ExprPtr multiplicative() {
    auto left = unary();
    while (is_symbol("*") || is_symbol("/") || is_symbol("%")) {
      auto e = make(Expr::Kind::Binary, peek());
      e->op = next().text;
      e->args = {left, unary()};
      left = e;
    }
    return left;
  }

  ExprPtr unary() {
    if (is_symbol("-") || is_symbol("+")) {
      auto e = make(Expr::Kind::Unary, peek());
      e->op = next().text;
      e->args = {unary()};
      return e;
    }
    return primary();
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (t.kind == Token::Number || t.kind == Token::String) {
      auto e = make(Expr::Kind::Literal, t);
      e->name = next().text;
      return e;
    }
    if (is_symbol("(")) {
      next();
      if (is_keyword("select")) {
        auto e = make(Expr::Kind::Subquery, t);
        e->subquery = select();
        expect_symbol(")");
        return e;
      }
      auto e = expression();
      expect_symbol(")");
      return e;
    }
    if (t.kind != Token::Ident) fail("expected an expression", t);
    if (t.text == "case") return case_expression();
    if (t.text == "null") {
      auto e = make(Expr::Kind::Literal, next());
      e->name = "null";
      return e;
    }
    if ((t.text == "date" || t.text == "timestamp") && peek(1).kind == Token::String) {
      next();
      auto e = make(Expr::Kind::Literal, t);
      e->name = next().text;
      return e;
    }
    if (kReserved.count(t.text)) fail("expected an expression", t);
    if (is_symbol("(", 1)) return call();

    auto e = make(Expr::Kind::Column, t);
    e->name = next().text;
    if (accept_symbol(".")) {
      e->qualifier = e->name;
      if (is_symbol("*")) fail("qualified '*' is not supported", peek());
      e->name = identifier("column name");
    }
    return e;
  }

  ExprPtr call() {
    auto e = make(Expr::Kind::Call, peek());
    e->name = next().text;
    expect_symbol("(");
    if (e->name == "cast") {
      e->args.push_back(expression());
      expect_keyword("as");
      type_name();
      expect_symbol(")");
      return e;
    }
    if (accept_symbol(")")) return e;
    if (is_symbol("*")) {
      e->args.push_back(make(Expr::Kind::Star, next()));
      expect_symbol(")");
      return e;
    }
    if (accept_keyword("distinct")) e->op = "distinct";
    if (kDatePartFunctions.count(e->name)) {
      // First argument names a date part, not a column.
      auto part = make(Expr::Kind::Literal, peek());
      part->name = identifier("date part");
      e->args.push_back(part);
      if (!accept_symbol(",")) fail("expected ','", peek());
    }
    e->args.push_back(expression());
    if (e->name == "substring" && accept_keyword("from")) {
      e->args.push_back(expression());
      if (accept_keyword("for")) e->args.push_back(expression());
      expect_symbol(")");
      return e;
    }
    while (accept_symbol(",")) e->args.push_back(expression());
    expect_symbol(")");
    return e;
  }

  void type_name() {
    identifier("type name");
    if (accept_symbol("(")) {
      do {
        if (peek().kind != Token::Number) fail("expected a type length", peek());
        next();
      } while (accept_symbol(","));
      expect_symbol(")");
    }
  }

  ExprPtr case_expression() {
    auto e = make(Expr::Kind::Case, next());
    if (!is_keyword("when")) {
      e->op = "simple";
      e->args.push_back(expression());
    }
    if (!is_keyword("when")) fail("expected WHEN", peek());
    while (accept_keyword("when")) {
      e->args.push_back(expression());
      expect_keyword("then");
      e->args.push_back(expression());
    }
    if (accept_keyword("else")) {
      e->name = "else";
      e->args.push_back(expression());
    }
    expect_keyword("end");
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Statement> parse_statements(std::string_view text) { return Parser(tokenize(text)).statements(); }

}  // namespace bji::sql
