#pragma once

// Syntax tree and parser for the star-join SQL dialect of the benchmark workloads.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace bji::sql {

struct Token {
  enum Kind { Ident, Number, String, Symbol, End };
  Kind kind = End;
  std::string text;  // identifiers are lower-cased
  std::size_t line = 1;
  std::size_t column = 1;
};

std::vector<Token> tokenize(std::string_view text);

struct Select;
struct Expr;
using ExprPtr = std::shared_ptr<Expr>;
using SelectPtr = std::shared_ptr<Select>;

struct Expr {
  enum class Kind {
    Column,      // qualifier.name
    Literal,     // name holds the text
    Star,
    Call,        // name(args...)
    Unary,       // op args[0]; op is "-", "+" or "not"
    Binary,      // args[0] op args[1]; op is arithmetic, "and" or "or"
    Compare,     // args[0] op args[1]
    Between,     // args[0] between args[1] and args[2]
    InList,      // args[0] in (args[1..])
    InSubquery,  // args[0] in (subquery)
    Exists,      // exists (subquery)
    Like,        // args[0] like args[1]
    IsNull,      // args[0] is null
    Case,        // args: [operand] when/then pairs [else]
    Subquery,    // scalar (subquery)
  };
  Kind kind = Kind::Literal;
  std::string op;
  std::string qualifier;
  std::string name;
  bool negated = false;
  std::vector<ExprPtr> args;
  SelectPtr subquery;
  std::size_t line = 1;
  std::size_t column = 1;
};

struct SelectItem {
  ExprPtr expr;
  std::string alias;
};

struct TableRef {
  enum class Join { Comma, Inner, Outer, Cross };
  std::string table;  // empty for derived tables
  SelectPtr derived;
  std::string alias;
  std::vector<std::string> column_aliases;
  Join join = Join::Comma;
  ExprPtr on;
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Select {
  bool distinct = false;
  std::vector<SelectItem> items;
  std::vector<TableRef> from;
  ExprPtr where;
  std::vector<ExprPtr> group_by;
  ExprPtr having;
  std::vector<ExprPtr> order_by;
};

struct Statement {
  enum class Kind { Query, CreateView, DropView };
  Kind kind = Kind::Query;
  std::string name;
  std::vector<std::string> columns;
  SelectPtr select;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Throws ParseError with the offending line/column.
std::vector<Statement> parse_statements(std::string_view text);

}  // namespace bji::sql
