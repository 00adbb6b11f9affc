#include "bji/configuration.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bji {

std::vector<AttributeId> Configuration::attributes() const {
  std::set<AttributeId> all;
  for (const auto& idx : indexes) all.insert(idx.attrs.begin(), idx.attrs.end());
  return {all.begin(), all.end()};
}

std::string index_name(const StarSchema& schema, AttributeId attr) {
  return "bji_" + schema.table_of(attr).name + "_" + schema.attributes.at(attr).name;
}

Configuration mono_attribute_configuration(const StarSchema& schema, std::string engine,
                                           std::vector<AttributeId> attrs) {
  std::sort(attrs.begin(), attrs.end());
  attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
  Configuration c;
  c.engine = std::move(engine);
  for (AttributeId a : attrs) {
    if (a >= schema.attributes.size() || !schema.is_indexable(a)) {
      throw std::invalid_argument("attribute " + std::to_string(a) + " is not indexable");
    }
    c.indexes.push_back({index_name(schema, a), {a}});
  }
  return c;
}

}  // namespace bji
