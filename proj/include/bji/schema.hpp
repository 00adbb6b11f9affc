#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bji {

using TableId = std::uint32_t;
using AttributeId = std::uint32_t;

enum class TableRole { Fact, Dimension };

struct TableStats {
  std::string name;
  TableRole role = TableRole::Dimension;
  std::uint64_t rows = 0;
  std::uint64_t tuple_width = 1;  // bytes
  std::optional<std::uint64_t> pages;

  friend bool operator==(const TableStats&, const TableStats&) = default;
};

struct AttributeStats {
  TableId table = 0;
  std::string name;
  std::uint64_t cardinality = 1;
  bool is_key = false;

  friend bool operator==(const AttributeStats&, const AttributeStats&) = default;
};

// fk references key; for a star schema fk lives on the fact table.
struct JoinDef {
  AttributeId fk = 0;
  AttributeId key = 0;

  friend bool operator==(const JoinDef&, const JoinDef&) = default;
};

// Whether key columns of dimension tables enter the query/attribute matrix.
enum class DimensionKeys { Include, Exclude };

std::uint64_t pages_of(const TableStats& t, std::uint64_t page_size);

class StarSchema {
 public:
  std::uint64_t page_size = 0;
  std::uint64_t rowid_bits = 80;
  DimensionKeys dimension_keys = DimensionKeys::Include;
  std::vector<TableStats> tables;
  std::vector<AttributeStats> attributes;  // declaration order
  std::vector<JoinDef> joins;

  // Checks every invariant and throws ValidationError naming the offender.
  void validate() const;

  TableId fact_id() const;
  const TableStats& fact() const { return tables.at(fact_id()); }
  const TableStats& table_of(AttributeId a) const { return tables.at(attributes.at(a).table); }
  std::uint64_t pages(TableId t) const { return pages_of(tables.at(t), page_size); }

  // Names are matched case-insensitively.
  std::optional<TableId> find_table(std::string_view name) const;
  std::optional<AttributeId> find_attribute(TableId table, std::string_view name) const;
  // "table.column"
  std::optional<AttributeId> find_qualified(std::string_view qualified) const;

  std::string qualified_name(AttributeId a) const;
  bool is_fact_attribute(AttributeId a) const { return attributes.at(a).table == fact_id(); }
  // Non-key attribute of a dimension table.
  bool is_indexable(AttributeId a) const;
  // Joins leading from the fact table to `table` along a shortest path
  // (declaration order breaks ties). Empty for the fact table itself.
  std::vector<JoinDef> join_path(TableId table) const;

  friend bool operator==(const StarSchema&, const StarSchema&) = default;
};

std::string to_lower(std::string_view s);

StarSchema load_catalog(std::string_view json_text);
StarSchema load_catalog_file(const std::filesystem::path& path);
std::string serialize_catalog(const StarSchema& schema);

}  // namespace bji
