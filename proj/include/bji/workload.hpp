#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bji/hypergraph.hpp"
#include "bji/schema.hpp"

namespace bji {

enum class OpClass { Equality, Range, InList, Like };

const char* to_string(OpClass op);

// Selection predicate on one attribute. `values` is the IN-list length
// (0 when the list comes from a subquery).
struct Predicate {
  AttributeId attr = 0;
  OpClass op = OpClass::Equality;
  std::size_t values = 1;
  std::size_t relation = 0;
};

struct JoinPredicate {
  AttributeId left = 0;
  AttributeId right = 0;
  std::size_t left_relation = 0;
  std::size_t right_relation = 0;
};

// One occurrence of a catalog table in the query, subqueries included.
struct RelationRef {
  TableId table = 0;
  std::string alias;
};

struct ParsedQuery {
  std::size_t id = 0;
  std::string label;
  std::string raw_text;
  // Attributes of selection and join predicates, sorted.
  std::vector<AttributeId> referenced;
  std::vector<Predicate> predicates;
  std::vector<JoinPredicate> joins;
  // Attributes of SELECT / GROUP BY / ORDER BY lists, sorted.
  std::vector<AttributeId> projected;
  std::vector<RelationRef> relations;
  // Per relation: every attribute referenced through it, sorted.
  std::vector<std::vector<AttributeId>> relation_attributes;
  double weight = 1.0;
};

// Throws ParseError (positions relative to `sql`) or ValidationError.
ParsedQuery parse_query(std::string_view sql, const StarSchema& schema);

struct WorkloadEntry {
  std::string label;
  std::size_t line = 1;  // first line of the text in the file
  std::string text;
};

// Splits on lines holding only ';' and on "Qn - " headers.
std::vector<WorkloadEntry> split_workload(std::string_view text);
std::vector<ParsedQuery> parse_workload(std::string_view text, const StarSchema& schema);
std::vector<ParsedQuery> load_workload_file(const std::filesystem::path& path, const StarSchema& schema);

std::vector<AttributeId> indexable_attributes(const StarSchema& schema, const std::vector<AttributeId>& attrs);

// Matrix columns are numbered by catalog declaration order: column c holds
// attribute c - 1, so hypergraph vertex ids equal the 1-based attribute numbers.
inline Vertex column_of(AttributeId a) { return a + 1; }
inline AttributeId attribute_of(Vertex c) { return c - 1; }

struct ContextMatrix {
  std::vector<ParsedQuery> queries;  // rows kept
  std::vector<ParsedQuery> dropped;  // queries without matrix attributes
  std::size_t column_count = 0;      // size of the attribute legend
  std::vector<VertexSet> rows;       // Uses(Q_i, .) as column numbers
  std::vector<std::string> warnings;

  // Columns used by at least one row.
  VertexSet used_columns() const;
  Hypergraph hypergraph() const;
  double total_weight() const;
};

// Throws ValidationError when no query keeps a nonempty row.
ContextMatrix build_context_matrix(const StarSchema& schema, std::vector<ParsedQuery> queries);

// Weighted fraction of rows containing every column of `columns`.
// Throws std::domain_error for a column outside the legend.
double support(const ContextMatrix& m, const VertexSet& columns);

}  // namespace bji
