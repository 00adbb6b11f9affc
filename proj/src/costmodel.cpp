#include "bji/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace bji {

std::uint64_t index_storage_size(const StarSchema& schema, const IndexDef& idx) {
  unsigned __int128 bits_per_row = schema.rowid_bits;
  for (AttributeId a : idx.attrs) bits_per_row += schema.attributes.at(a).cardinality;
  unsigned __int128 bits = bits_per_row * schema.fact().rows;
  return static_cast<std::uint64_t>((bits + 7) / 8);
}

std::uint64_t index_load_cost(const StarSchema& schema, const IndexDef& idx) {
  std::uint64_t size = index_storage_size(schema, idx);
  return (size + schema.page_size - 1) / schema.page_size;
}

double hash_join_cost(double p_r, double p_s) { return 3.0 * (p_r + p_s); }

double tuple_access_cost(double fact_pages, double n_t) {
  if (fact_pages <= 0) return 0.0;
  return fact_pages * -std::expm1(-n_t / fact_pages);
}

double predicate_selectivity(const StarSchema& schema, const Predicate& p) {
  double card = static_cast<double>(schema.attributes.at(p.attr).cardinality);
  double s = 1.0;
  switch (p.op) {
    case OpClass::Equality:
      s = 1.0 / card;
      break;
    case OpClass::Range:
      s = kRangeSelectivity;
      break;
    case OpClass::Like:
      s = kLikeSelectivity;
      break;
    case OpClass::InList:
      s = p.values == 0 ? kRangeSelectivity : static_cast<double>(p.values) / card;
      break;
  }
  return std::min(1.0, s);
}

namespace {

std::optional<std::size_t> fact_relation(const StarSchema& schema, const ParsedQuery& q) {
  TableId fact = schema.fact_id();
  for (std::size_t r = 0; r < q.relations.size(); ++r) {
    if (q.relations[r].table == fact) return r;
  }
  return std::nullopt;
}

bool has_predicate_on(const ParsedQuery& q, AttributeId a) {
  return std::any_of(q.predicates.begin(), q.predicates.end(), [&](const Predicate& p) { return p.attr == a; });
}

}  // namespace

std::vector<std::size_t> usable_indexes(const StarSchema& schema, const ParsedQuery& q, const Configuration& ci) {
  std::vector<std::size_t> out;
  if (!fact_relation(schema, q)) return out;
  for (std::size_t i = 0; i < ci.indexes.size(); ++i) {
    const auto& attrs = ci.indexes[i].attrs;
    if (std::all_of(attrs.begin(), attrs.end(), [&](AttributeId a) { return has_predicate_on(q, a); })) {
      out.push_back(i);
    }
  }
  return out;
}

namespace {

double fact_tuples_for(const StarSchema& schema, const ParsedQuery& q, const std::set<AttributeId>& indexed) {
  double rows = static_cast<double>(schema.fact().rows);
  double n = rows;
  for (const auto& p : q.predicates) {
    if (indexed.count(p.attr)) n *= predicate_selectivity(schema, p);
  }
  return std::clamp(n, 0.0, rows);
}

std::set<AttributeId> attributes_of(const Configuration& ci, const std::vector<std::size_t>& used) {
  std::set<AttributeId> out;
  for (std::size_t i : used) out.insert(ci.indexes[i].attrs.begin(), ci.indexes[i].attrs.end());
  return out;
}

}  // namespace

double estimate_fact_tuples(const StarSchema& schema, const ParsedQuery& q, const Configuration& ci) {
  return fact_tuples_for(schema, q, attributes_of(ci, usable_indexes(schema, q, ci)));
}

namespace {

// Cost of answering q with exactly the indexes `used` (positions in ci).
QueryCost plan_cost(const StarSchema& schema, const ParsedQuery& q, const Configuration& ci, std::vector<std::size_t> used) {
  const std::size_t n = q.relations.size();
  std::vector<double> pages(n);
  for (std::size_t r = 0; r < n; ++r) pages[r] = static_cast<double>(schema.pages(q.relations[r].table));

  // Distinct joined relation pairs.
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& j : q.joins) {
    pairs.insert({std::min(j.left_relation, j.right_relation), std::max(j.left_relation, j.right_relation)});
  }
  std::vector<std::vector<std::size_t>> neighbours(n);
  for (const auto& [a, b] : pairs) {
    neighbours[a].push_back(b);
    neighbours[b].push_back(a);
  }

  QueryCost out;
  out.used = std::move(used);
  auto indexed = attributes_of(ci, out.used);
  auto fact = fact_relation(schema, q);

  // Relations whose whole contribution is answered by the indexes.
  std::vector<bool> resolved(n, false);
  if (!out.used.empty()) {
    for (std::size_t r = 0; r < n; ++r) {
      if (r == *fact || q.relations[r].table == schema.fact_id()) continue;
      bool filtered = false;
      bool complete = true;
      for (AttributeId a : q.relation_attributes[r]) {
        if (schema.attributes[a].is_key) continue;
        if (indexed.count(a)) {
          filtered = true;
        } else {
          complete = false;
        }
      }
      resolved[r] = filtered && complete;
    }
    // Key-only relations between the fact and resolved relations.
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t r = 0; r < n; ++r) {
        if (resolved[r] || r == *fact || q.relations[r].table == schema.fact_id()) continue;
        const auto& attrs = q.relation_attributes[r];
        if (!std::all_of(attrs.begin(), attrs.end(), [&](AttributeId a) { return schema.attributes[a].is_key; })) {
          continue;
        }
        bool any = false;
        bool all = !neighbours[r].empty();
        for (std::size_t o : neighbours[r]) {
          if (resolved[o]) {
            any = true;
          } else if (o != *fact) {
            all = false;
          }
        }
        if (any && all) {
          resolved[r] = true;
          changed = true;
        }
      }
    }
    out.fact_tuples = fact_tuples_for(schema, q, indexed);
    double cl = tuple_access_cost(pages[*fact], out.fact_tuples);
    out.cost = cl;
    for (std::size_t i : out.used) out.cost += static_cast<double>(index_load_cost(schema, ci.indexes[i]));
    pages[*fact] = cl;
    bool all_resolved = true;
    for (std::size_t r = 0; r < n; ++r) {
      if (r != *fact && !resolved[r]) all_resolved = false;
    }
    out.scenario = all_resolved ? Scenario::Covered : Scenario::PartlyCovered;
  } else {
    out.fact_tuples = static_cast<double>(schema.fact().rows);
  }

  for (const auto& [a, b] : pairs) {
    if (resolved[a] || resolved[b]) continue;
    out.cost += hash_join_cost(pages[a], pages[b]);
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (neighbours[r].empty() && !resolved[r] && !(fact && r == *fact && !out.used.empty())) out.cost += pages[r];
  }
  return out;
}

}  // namespace

QueryCost query_cost(const StarSchema& schema, const ParsedQuery& q, const Configuration& ci) {
  auto usable = usable_indexes(schema, q, ci);
  QueryCost best = plan_cost(schema, q, ci, {});
  if (usable.size() <= kExhaustivePlanLimit) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << usable.size()); ++mask) {
      std::vector<std::size_t> subset;
      for (std::size_t i = 0; i < usable.size(); ++i) {
        if (mask >> i & 1) subset.push_back(usable[i]);
      }
      auto c = plan_cost(schema, q, ci, std::move(subset));
      if (c.cost < best.cost) best = std::move(c);
    }
    return best;
  }
  // Too many applicable indexes: add the most profitable one while any helps.
  for (bool improved = true; improved;) {
    improved = false;
    QueryCost step = best;
    for (std::size_t i : usable) {
      if (std::find(best.used.begin(), best.used.end(), i) != best.used.end()) continue;
      auto subset = best.used;
      subset.push_back(i);
      std::sort(subset.begin(), subset.end());
      auto c = plan_cost(schema, q, ci, std::move(subset));
      if (c.cost < step.cost) step = std::move(c);
    }
    if (step.cost < best.cost) {
      best = std::move(step);
      improved = true;
    }
  }
  return best;
}

double workload_cost(const StarSchema& schema, const std::vector<ParsedQuery>& queries, const Configuration& ci) {
  double total = 0;
  for (const auto& q : queries) total += q.weight * query_cost(schema, q, ci).cost;
  return total;
}

double reduction_rate(double base, double with_idx) {
  if (base == 0) throw std::domain_error("reduction rate is undefined for a zero base cost");
  return 100.0 * (base - with_idx) / base;
}

CostReport cost_report(const StarSchema& schema, const std::vector<ParsedQuery>& queries, const Configuration& ci) {
  CostReport rep;
  rep.engine = ci.engine;
  Configuration none;
  for (const auto& q : queries) {
    QueryCostRow row;
    row.query_id = q.id;
    row.label = q.label;
    row.base = query_cost(schema, q, none).cost;
    auto c = query_cost(schema, q, ci);
    row.with = c.cost;
    row.scenario = c.scenario;
    rep.base_total += q.weight * row.base;
    rep.with_total += q.weight * row.with;
    rep.per_query.push_back(row);
  }
  for (const auto& idx : ci.indexes) {
    auto bytes = index_storage_size(schema, idx);
    rep.storage.emplace_back(idx.name, bytes);
    rep.storage_total += bytes;
  }
  rep.reduction_rate = reduction_rate(rep.base_total, rep.with_total);
  return rep;
}

}  // namespace bji
