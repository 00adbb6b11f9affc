#include "bji/workload.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bji/error.hpp"
#include "sql.hpp"

namespace bji {

const char* to_string(OpClass op) {
  switch (op) {
    case OpClass::Equality:
      return "equality";
    case OpClass::Range:
      return "range";
    case OpClass::InList:
      return "in-list";
    case OpClass::Like:
      return "like";
  }
  return "?";
}

namespace {

using sql::Expr;
using sql::ExprPtr;
using sql::Select;

struct Relation {
  std::string name;  // alias, or table/view name when unaliased
  std::string table_name;
  std::optional<TableId> table;
  std::size_t instance = 0;  // index into ParsedQuery::relations
  std::vector<std::string> derived_columns;
};

struct Scope {
  std::vector<Relation> relations;
  const Scope* parent = nullptr;
  std::set<std::string> select_aliases;
};

struct Resolved {
  bool in_schema = false;
  AttributeId attr = 0;
  std::size_t relation = 0;
};

class Analyzer {
 public:
  Analyzer(const StarSchema& schema, ParsedQuery& q) : schema_(schema), q_(q) {}

  void run(const std::vector<sql::Statement>& statements) {
    bool seen_query = false;
    for (const auto& st : statements) {
      switch (st.kind) {
        case sql::Statement::Kind::CreateView:
          if (schema_.find_table(st.name)) throw ParseError("view '" + st.name + "' shadows a table", st.line, st.column);
          views_[st.name] = &st;
          break;
        case sql::Statement::Kind::DropView:
          views_.erase(st.name);
          break;
        case sql::Statement::Kind::Query:
          if (seen_query) throw ParseError("more than one SELECT statement in one query", st.line, st.column);
          seen_query = true;
          analyze(*st.select, nullptr);
          break;
      }
    }
    if (!seen_query) throw ParseError("query has no SELECT statement", 1, 1);
    finish();
  }

 private:
  // Returns the output column names of `s`.
  std::vector<std::string> analyze(const Select& s, const Scope* parent) {
    Scope scope;
    scope.parent = parent;
    for (const auto& ref : s.from) scope.relations.push_back(relation_for(ref));
    for (const auto& item : s.items) {
      if (!item.alias.empty()) scope.select_aliases.insert(item.alias);
    }

    if (s.where) condition(*s.where, scope);
    for (const auto& ref : s.from) {
      if (!ref.on) continue;
      if (ref.join == sql::TableRef::Join::Outer) {
        collect_columns(*ref.on, scope, false);
      } else {
        condition(*ref.on, scope);
      }
    }
    for (const auto& item : s.items) {
      if (item.expr->kind != Expr::Kind::Star) collect_columns(*item.expr, scope, false);
    }
    for (const auto& g : s.group_by) collect_columns(*g, scope, true);
    for (const auto& o : s.order_by) collect_columns(*o, scope, true);

    std::vector<std::string> names;
    for (const auto& item : s.items) {
      if (!item.alias.empty()) {
        names.push_back(item.alias);
      } else if (item.expr->kind == Expr::Kind::Column) {
        names.push_back(item.expr->name);
      } else {
        names.emplace_back();
      }
    }
    return names;
  }

  Relation relation_for(const sql::TableRef& ref) {
    Relation r;
    if (ref.derived) {
      r.name = ref.alias;
      r.derived_columns = analyze(*ref.derived, nullptr);
      if (!ref.column_aliases.empty()) r.derived_columns = ref.column_aliases;
      return r;
    }
    r.name = ref.alias.empty() ? ref.table : ref.alias;
    r.table_name = ref.table;
    if (auto view = views_.find(ref.table); view != views_.end()) {
      const auto& st = *view->second;
      r.derived_columns = analyze(*st.select, nullptr);
      if (!st.columns.empty()) r.derived_columns = st.columns;
      return r;
    }
    auto tid = schema_.find_table(ref.table);
    if (!tid) throw ParseError("unknown table '" + ref.table + "'", ref.line, ref.column);
    r.table = *tid;
    r.instance = q_.relations.size();
    q_.relations.push_back({*tid, r.name});
    relation_attrs_.emplace_back();
    return r;
  }

  std::optional<Resolved> lookup(const Relation& r, const std::string& column) const {
    if (r.table) {
      if (auto a = schema_.find_attribute(*r.table, column)) return Resolved{true, *a, r.instance};
      return std::nullopt;
    }
    if (std::find(r.derived_columns.begin(), r.derived_columns.end(), column) != r.derived_columns.end()) {
      return Resolved{};
    }
    return std::nullopt;
  }

  Resolved resolve(const Expr& col, const Scope& scope, bool allow_alias) const {
    for (const Scope* s = &scope; s; s = s->parent) {
      if (!col.qualifier.empty()) {
        const Relation* match = nullptr;
        for (const auto& r : s->relations) {
          if (r.name == col.qualifier) match = &r;
        }
        if (!match) {
          for (const auto& r : s->relations) {
            if (r.table_name == col.qualifier) match = &r;
          }
        }
        if (!match) continue;
        if (auto res = lookup(*match, col.name)) return *res;
        throw ParseError("unknown column '" + col.qualifier + "." + col.name + "'", col.line, col.column);
      }
      std::optional<Resolved> found;
      for (const auto& r : s->relations) {
        if (auto res = lookup(r, col.name)) {
          if (found) throw ParseError("ambiguous column '" + col.name + "'", col.line, col.column);
          found = res;
        }
      }
      if (found) return *found;
      if (allow_alias && s == &scope && s->select_aliases.count(col.name)) return Resolved{};
    }
    std::string shown = col.qualifier.empty() ? col.name : col.qualifier + "." + col.name;
    throw ParseError("unresolved column '" + shown + "'", col.line, col.column);
  }

  void note(const Resolved& r) {
    if (r.in_schema) relation_attrs_[r.relation].insert(r.attr);
  }

  void add_predicate(const Resolved& r, OpClass op, std::size_t values) {
    if (!r.in_schema) return;
    note(r);
    referenced_.insert(r.attr);
    q_.predicates.push_back({r.attr, op, values, r.relation});
  }

  // Projection-side columns; subqueries met on the way are analyzed in full.
  void collect_columns(const Expr& e, const Scope& scope, bool allow_alias) {
    switch (e.kind) {
      case Expr::Kind::Column: {
        auto r = resolve(e, scope, allow_alias);
        note(r);
        if (r.in_schema) projected_.insert(r.attr);
        return;
      }
      case Expr::Kind::Subquery:
      case Expr::Kind::Exists:
        analyze(*e.subquery, &scope);
        return;
      case Expr::Kind::InSubquery:
        analyze(*e.subquery, &scope);
        break;
      default:
        break;
    }
    for (const auto& a : e.args) collect_columns(*a, scope, allow_alias);
  }

  // Predicate-side columns of an operand, each recorded with class `op`.
  void operand(const Expr& e, const Scope& scope, OpClass op, std::size_t values) {
    switch (e.kind) {
      case Expr::Kind::Column:
        add_predicate(resolve(e, scope, false), op, values);
        return;
      case Expr::Kind::Subquery:
      case Expr::Kind::Exists:
      case Expr::Kind::InSubquery:
        condition(e, scope);
        return;
      default:
        for (const auto& a : e.args) operand(*a, scope, op, values);
    }
  }

  void condition(const Expr& e, const Scope& scope) {
    switch (e.kind) {
      case Expr::Kind::Binary:
        if (e.op == "and" || e.op == "or") {
          condition(*e.args[0], scope);
          condition(*e.args[1], scope);
          return;
        }
        break;
      case Expr::Kind::Unary:
        if (e.op == "not") {
          condition(*e.args[0], scope);
          return;
        }
        break;
      case Expr::Kind::Compare: {
        const Expr& l = *e.args[0];
        const Expr& r = *e.args[1];
        if (e.op == "=" && l.kind == Expr::Kind::Column && r.kind == Expr::Kind::Column) {
          auto lr = resolve(l, scope, false);
          auto rr = resolve(r, scope, false);
          if (lr.in_schema && rr.in_schema && lr.relation != rr.relation) {
            note(lr);
            note(rr);
            referenced_.insert(lr.attr);
            referenced_.insert(rr.attr);
            q_.joins.push_back({lr.attr, rr.attr, lr.relation, rr.relation});
            return;
          }
        }
        OpClass op = e.op == "=" ? OpClass::Equality : OpClass::Range;
        operand(l, scope, op, 1);
        operand(r, scope, op, 1);
        return;
      }
      case Expr::Kind::Between:
        for (const auto& a : e.args) operand(*a, scope, OpClass::Range, 1);
        return;
      case Expr::Kind::InList: {
        OpClass op = e.negated ? OpClass::Range : OpClass::InList;
        for (const auto& a : e.args) operand(*a, scope, op, e.args.size() - 1);
        return;
      }
      case Expr::Kind::InSubquery:
        operand(*e.args[0], scope, e.negated ? OpClass::Range : OpClass::InList, 0);
        analyze(*e.subquery, &scope);
        return;
      case Expr::Kind::Exists:
      case Expr::Kind::Subquery:
        analyze(*e.subquery, &scope);
        return;
      case Expr::Kind::Like:
        for (const auto& a : e.args) operand(*a, scope, e.negated ? OpClass::Range : OpClass::Like, 1);
        return;
      default:
        break;
    }
    operand(e, scope, OpClass::Range, 1);
  }

  void finish() {
    q_.referenced.assign(referenced_.begin(), referenced_.end());
    q_.projected.assign(projected_.begin(), projected_.end());
    q_.relation_attributes.clear();
    for (const auto& s : relation_attrs_) q_.relation_attributes.emplace_back(s.begin(), s.end());
  }

  const StarSchema& schema_;
  ParsedQuery& q_;
  std::map<std::string, const sql::Statement*> views_;
  std::set<AttributeId> referenced_;
  std::set<AttributeId> projected_;
  std::vector<std::set<AttributeId>> relation_attrs_;
};

}  // namespace

ParsedQuery parse_query(std::string_view text, const StarSchema& schema) {
  ParsedQuery q;
  q.raw_text = std::string(text);
  auto statements = sql::parse_statements(text);
  Analyzer(schema, q).run(statements);
  return q;
}

std::vector<WorkloadEntry> split_workload(std::string_view text) {
  static const std::regex header(R"(^\s*[Qq](\d+)\s*-\s?)");
  std::vector<WorkloadEntry> out;
  std::optional<WorkloadEntry> cur;
  auto flush = [&] {
    if (!cur) return;
    auto& t = cur->text;
    if (t.find_first_not_of(" \t\r\n") != std::string::npos) {
      while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
      // Start the text at its first nonblank line, keeping line numbers right.
      while (!t.empty() && t.front() == '\n') {
        t.erase(0, 1);
        ++cur->line;
      }
      out.push_back(std::move(*cur));
    }
    cur.reset();
  };
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (std::regex_search(line, m, header)) {
      flush();
      cur = WorkloadEntry{"Q" + m[1].str(), lineno, line.substr(m.length(0)) + "\n"};
      continue;
    }
    if (line.find_first_not_of(" \t") != std::string::npos && line.substr(line.find_first_not_of(" \t")) == ";") {
      flush();
      continue;
    }
    if (!cur) cur = WorkloadEntry{"", lineno, ""};
    if (!cur->text.empty() || line.find_first_not_of(" \t") != std::string::npos) {
      if (cur->text.empty()) cur->line = lineno;
      cur->text += line;
      cur->text += '\n';
    }
  }
  flush();
  std::size_t n = 0;
  for (auto& e : out) {
    ++n;
    if (e.label.empty()) e.label = "Q" + std::to_string(n);
  }
  return out;
}

std::vector<ParsedQuery> parse_workload(std::string_view text, const StarSchema& schema) {
  std::vector<ParsedQuery> out;
  for (const auto& entry : split_workload(text)) {
    ParsedQuery q;
    try {
      q = parse_query(entry.text, schema);
    } catch (const ParseError& e) {
      std::string msg = e.what();
      msg = msg.substr(msg.find(": ") + 2);
      throw ParseError(entry.label + ": " + msg, entry.line + e.line() - 1, e.column());
    }
    q.id = out.size() + 1;
    q.label = entry.label;
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<ParsedQuery> load_workload_file(const std::filesystem::path& path, const StarSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read workload '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_workload(ss.str(), schema);
}

std::vector<AttributeId> indexable_attributes(const StarSchema& schema, const std::vector<AttributeId>& attrs) {
  std::set<AttributeId> out;
  for (AttributeId a : attrs) {
    if (schema.is_indexable(a)) out.insert(a);
  }
  return {out.begin(), out.end()};
}

VertexSet ContextMatrix::used_columns() const {
  VertexSet all;
  for (const auto& r : rows) all = set_union(all, r);
  return all;
}

Hypergraph ContextMatrix::hypergraph() const { return Hypergraph(rows); }

double ContextMatrix::total_weight() const {
  double w = 0;
  for (const auto& q : queries) w += q.weight;
  return w;
}

ContextMatrix build_context_matrix(const StarSchema& schema, std::vector<ParsedQuery> queries) {
  ContextMatrix m;
  m.column_count = schema.attributes.size();
  for (auto& q : queries) {
    VertexSet row;
    for (AttributeId a : q.referenced) {
      const auto& attr = schema.attributes[a];
      bool dimension_key = attr.is_key && !schema.is_fact_attribute(a);
      if (dimension_key && schema.dimension_keys == DimensionKeys::Exclude) continue;
      row.push_back(column_of(a));
    }
    bool selective = std::any_of(q.predicates.begin(), q.predicates.end(),
                                 [&](const Predicate& p) { return !schema.attributes[p.attr].is_key; });
    if (row.empty() || !selective) {
      m.warnings.push_back("query " + q.label + " has no selection predicate on a non-key attribute and is left out of the matrix");
      m.dropped.push_back(std::move(q));
      continue;
    }
    if (q.weight < 0) throw ValidationError("query " + q.label + " has a negative weight");
    m.rows.push_back(make_vertex_set(std::move(row)));
    m.queries.push_back(std::move(q));
  }
  if (m.rows.empty()) throw ValidationError("workload has no query with predicate attributes");
  return m;
}

double support(const ContextMatrix& m, const VertexSet& columns) {
  for (Vertex c : columns) {
    if (c < 1 || c > m.column_count) throw std::domain_error("unknown matrix column " + std::to_string(c));
  }
  double total = m.total_weight();
  if (total <= 0) return 0.0;
  double hit = 0;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (is_subset(columns, m.rows[i])) hit += m.queries[i].weight;
  }
  return hit / total;
}

}  // namespace bji
