#pragma once

#include <string>
#include <vector>

#include "bji/schema.hpp"

namespace bji {

struct IndexDef {
  std::string name;
  std::vector<AttributeId> attrs;  // sorted, nonempty, all indexable

  friend bool operator==(const IndexDef&, const IndexDef&) = default;
};

struct Configuration {
  std::string engine;
  std::vector<IndexDef> indexes;
  std::vector<std::string> warnings;

  bool empty() const { return indexes.empty(); }
  // Union of index attributes, sorted.
  std::vector<AttributeId> attributes() const;
};

// "bji_<table>_<attribute>"
std::string index_name(const StarSchema& schema, AttributeId attr);

// One mono-attribute index per attribute. Throws std::invalid_argument for a
// non-indexable attribute.
Configuration mono_attribute_configuration(const StarSchema& schema, std::string engine,
                                           std::vector<AttributeId> attrs);

}  // namespace bji
