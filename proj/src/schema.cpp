#include "bji/schema.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "bji/error.hpp"

namespace bji {

using nlohmann::json;

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::uint64_t pages_of(const TableStats& t, std::uint64_t page_size) {
  if (t.pages) return *t.pages;
  if (page_size == 0) throw std::invalid_argument("page size must be positive");
  if (t.rows == 0) return 0;
  // rows * width fits comfortably in 128 bits.
  unsigned __int128 bytes = static_cast<unsigned __int128>(t.rows) * t.tuple_width;
  return static_cast<std::uint64_t>((bytes + page_size - 1) / page_size);
}

TableId StarSchema::fact_id() const {
  for (TableId i = 0; i < tables.size(); ++i) {
    if (tables[i].role == TableRole::Fact) return i;
  }
  throw ValidationError("catalog has no fact table");
}

std::optional<TableId> StarSchema::find_table(std::string_view name) const {
  auto n = to_lower(name);
  for (TableId i = 0; i < tables.size(); ++i) {
    if (tables[i].name == n) return i;
  }
  return std::nullopt;
}

std::optional<AttributeId> StarSchema::find_attribute(TableId table, std::string_view name) const {
  auto n = to_lower(name);
  for (AttributeId i = 0; i < attributes.size(); ++i) {
    if (attributes[i].table == table && attributes[i].name == n) return i;
  }
  return std::nullopt;
}

std::optional<AttributeId> StarSchema::find_qualified(std::string_view qualified) const {
  auto dot = qualified.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  auto t = find_table(qualified.substr(0, dot));
  if (!t) return std::nullopt;
  return find_attribute(*t, qualified.substr(dot + 1));
}

std::string StarSchema::qualified_name(AttributeId a) const {
  return tables.at(attributes.at(a).table).name + "." + attributes.at(a).name;
}

bool StarSchema::is_indexable(AttributeId a) const {
  const auto& attr = attributes.at(a);
  return !attr.is_key && tables.at(attr.table).role == TableRole::Dimension;
}

std::vector<JoinDef> StarSchema::join_path(TableId table) const {
  TableId fact = fact_id();
  std::vector<std::optional<JoinDef>> via(tables.size());
  std::vector<bool> seen(tables.size(), false);
  std::deque<TableId> queue{fact};
  seen[fact] = true;
  while (!queue.empty()) {
    TableId t = queue.front();
    queue.pop_front();
    for (const auto& j : joins) {
      TableId a = attributes[j.fk].table;
      TableId b = attributes[j.key].table;
      TableId next;
      if (a == t) {
        next = b;
      } else if (b == t) {
        next = a;
      } else {
        continue;
      }
      if (seen[next]) continue;
      seen[next] = true;
      via[next] = j;
      queue.push_back(next);
    }
  }
  if (!seen.at(table)) throw ValidationError("table '" + tables[table].name + "' is not reachable from the fact table");
  std::vector<JoinDef> path;
  for (TableId t = table; t != fact;) {
    const JoinDef& j = *via[t];
    path.push_back(j);
    TableId a = attributes[j.fk].table;
    t = (a == t) ? attributes[j.key].table : a;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void StarSchema::validate() const {
  if (page_size == 0) throw ValidationError("catalog page_size must be positive");
  if (rowid_bits == 0) throw ValidationError("catalog rowid_bits must be positive");
  std::set<std::string> names;
  std::size_t facts = 0;
  for (const auto& t : tables) {
    if (t.name.empty()) throw ValidationError("table with empty name");
    if (!names.insert(t.name).second) throw ValidationError("duplicate table '" + t.name + "'");
    if (t.tuple_width == 0) throw ValidationError("table '" + t.name + "' has zero tuple_width");
    if (t.pages && t.rows > 0 && *t.pages == 0) throw ValidationError("table '" + t.name + "' has rows but zero pages");
    if (t.role == TableRole::Fact) ++facts;
  }
  if (facts == 0) throw ValidationError("catalog has no fact table");
  if (facts > 1) throw ValidationError("catalog has more than one fact table");
  std::set<std::pair<TableId, std::string>> attr_names;
  for (const auto& a : attributes) {
    if (a.table >= tables.size()) throw ValidationError("attribute '" + a.name + "' references an unknown table");
    const auto& t = tables[a.table];
    if (!attr_names.insert({a.table, a.name}).second) {
      throw ValidationError("duplicate attribute '" + t.name + "." + a.name + "'");
    }
    if (a.cardinality < 1) throw ValidationError("attribute '" + t.name + "." + a.name + "' has cardinality 0");
    if (t.rows > 0 && a.cardinality > t.rows) {
      throw ValidationError("attribute '" + t.name + "." + a.name + "' has cardinality above its table's row count");
    }
  }
  for (const auto& j : joins) {
    if (j.fk >= attributes.size() || j.key >= attributes.size()) throw ValidationError("join references an unknown attribute");
    if (!attributes[j.key].is_key) throw ValidationError("join key side '" + qualified_name(j.key) + "' is not a key");
    if (!attributes[j.fk].is_key) throw ValidationError("join foreign key side '" + qualified_name(j.fk) + "' is not a key");
    if (attributes[j.fk].table == attributes[j.key].table) {
      throw ValidationError("join '" + qualified_name(j.fk) + "' stays within one table");
    }
  }
  for (TableId t = 0; t < tables.size(); ++t) join_path(t);
}

namespace {

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + " is missing '" + key + "'");
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!j.at(key).is_number_unsigned()) throw ValidationError(where + " has an invalid '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + " has an invalid '" + key + "'");
  }
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!j.at(key).is_number_unsigned()) throw ValidationError(where + " has an invalid '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + " has an invalid '" + key + "'");
  }
}

AttributeId resolve_endpoint(const StarSchema& s, const std::string& ref) {
  auto dot = ref.find('.');
  if (dot == std::string::npos) throw ValidationError("join endpoint '" + ref + "' must be table.column");
  auto t = s.find_table(ref.substr(0, dot));
  if (!t) throw ValidationError("join endpoint '" + ref + "' references unknown table '" + ref.substr(0, dot) + "'");
  auto a = s.find_attribute(*t, ref.substr(dot + 1));
  if (!a) throw ValidationError("join endpoint '" + ref + "' references an unknown attribute");
  return *a;
}

}  // namespace

StarSchema load_catalog(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("catalog is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("catalog must be a JSON object");

  StarSchema s;
  s.page_size = required<std::uint64_t>(doc, "page_size", "catalog");
  s.rowid_bits = optional_field<std::uint64_t>(doc, "rowid_bits", "catalog").value_or(80);
  auto keys = optional_field<std::string>(doc, "dimension_keys", "catalog").value_or("include");
  if (keys == "include") {
    s.dimension_keys = DimensionKeys::Include;
  } else if (keys == "exclude") {
    s.dimension_keys = DimensionKeys::Exclude;
  } else {
    throw ValidationError("catalog dimension_keys must be 'include' or 'exclude'");
  }

  for (const auto& jt : required<json>(doc, "tables", "catalog")) {
    TableStats t;
    t.name = to_lower(required<std::string>(jt, "name", "table"));
    std::string where = "table '" + t.name + "'";
    auto role = required<std::string>(jt, "role", where);
    if (role == "fact") {
      t.role = TableRole::Fact;
    } else if (role == "dimension") {
      t.role = TableRole::Dimension;
    } else {
      throw ValidationError(where + " has role '" + role + "', expected fact or dimension");
    }
    t.rows = required<std::uint64_t>(jt, "rows", where);
    t.tuple_width = required<std::uint64_t>(jt, "tuple_width", where);
    t.pages = optional_field<std::uint64_t>(jt, "pages", where);
    s.tables.push_back(std::move(t));
  }

  for (const auto& ja : required<json>(doc, "attributes", "catalog")) {
    auto table = required<std::string>(ja, "table", "attribute");
    AttributeStats a;
    a.name = to_lower(required<std::string>(ja, "name", "attribute"));
    std::string where = "attribute '" + table + "." + a.name + "'";
    auto tid = s.find_table(table);
    if (!tid) throw ValidationError(where + " references unknown table '" + table + "'");
    a.table = *tid;
    a.is_key = optional_field<bool>(ja, "is_key", where).value_or(false);
    auto card = optional_field<std::uint64_t>(ja, "cardinality", where);
    if (!card && !a.is_key) throw ValidationError(where + " is missing 'cardinality'");
    a.cardinality = card.value_or(std::max<std::uint64_t>(1, s.tables[a.table].rows));
    s.attributes.push_back(std::move(a));
  }

  if (doc.contains("joins")) {
    for (const auto& jj : doc.at("joins")) {
      JoinDef j;
      j.fk = resolve_endpoint(s, required<std::string>(jj, "fact_attr", "join"));
      j.key = resolve_endpoint(s, required<std::string>(jj, "dim_attr", "join"));
      s.joins.push_back(j);
    }
  }
  s.validate();
  return s;
}

StarSchema load_catalog_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read catalog '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_catalog(ss.str());
}

std::string serialize_catalog(const StarSchema& s) {
  json doc;
  doc["page_size"] = s.page_size;
  doc["rowid_bits"] = s.rowid_bits;
  doc["dimension_keys"] = s.dimension_keys == DimensionKeys::Include ? "include" : "exclude";
  doc["tables"] = json::array();
  for (const auto& t : s.tables) {
    json jt{{"name", t.name},
            {"role", t.role == TableRole::Fact ? "fact" : "dimension"},
            {"rows", t.rows},
            {"tuple_width", t.tuple_width}};
    if (t.pages) jt["pages"] = *t.pages;
    doc["tables"].push_back(jt);
  }
  doc["attributes"] = json::array();
  for (const auto& a : s.attributes) {
    doc["attributes"].push_back(
        {{"table", s.tables[a.table].name}, {"name", a.name}, {"cardinality", a.cardinality}, {"is_key", a.is_key}});
  }
  doc["joins"] = json::array();
  for (const auto& j : s.joins) {
    doc["joins"].push_back({{"fact_attr", s.qualified_name(j.fk)}, {"dim_attr", s.qualified_name(j.key)}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace bji
