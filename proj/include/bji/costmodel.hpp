#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bji/configuration.hpp"
#include "bji/schema.hpp"
#include "bji/workload.hpp"

namespace bji {

// Bytes, rounded up.
std::uint64_t index_storage_size(const StarSchema& schema, const IndexDef& idx);
// Pages, rounded up.
std::uint64_t index_load_cost(const StarSchema& schema, const IndexDef& idx);
double hash_join_cost(double p_r, double p_s);
// fact_pages * (1 - exp(-n_t / fact_pages))
double tuple_access_cost(double fact_pages, double n_t);

// Default selectivities for predicates without a usable cardinality.
inline constexpr double kRangeSelectivity = 1.0 / 3.0;
inline constexpr double kLikeSelectivity = 1.0 / 3.0;

double predicate_selectivity(const StarSchema& schema, const Predicate& p);

// Indexes of `ci` the query can use: an index applies when the query reaches
// the fact table and has a selection predicate on every indexed attribute.
std::vector<std::size_t> usable_indexes(const StarSchema& schema, const ParsedQuery& q, const Configuration& ci);

// Fact rows left after the predicates on every usable index of ci.
double estimate_fact_tuples(const StarSchema& schema, const ParsedQuery& q, const Configuration& ci);

enum class Scenario { NoIndex = 1, Covered = 2, PartlyCovered = 3 };

struct QueryCost {
  double cost = 0;
  Scenario scenario = Scenario::NoIndex;
  std::vector<std::size_t> used;  // positions in ci.indexes
  double fact_tuples = 0;
};

// Plans with every subset of the usable indexes are costed and the cheapest
// one is kept, so an index that would slow a query down is left unused.
QueryCost query_cost(const StarSchema& schema, const ParsedQuery& q, const Configuration& ci);

// Largest usable-index count for which every subset is costed.
inline constexpr std::size_t kExhaustivePlanLimit = 12;

double workload_cost(const StarSchema& schema, const std::vector<ParsedQuery>& queries, const Configuration& ci);
// Throws std::domain_error when base is 0.
double reduction_rate(double base, double with_idx);

struct QueryCostRow {
  std::size_t query_id = 0;
  std::string label;
  double base = 0;
  double with = 0;
  Scenario scenario = Scenario::NoIndex;
};

struct CostReport {
  std::string engine;
  std::vector<QueryCostRow> per_query;
  double base_total = 0;
  double with_total = 0;
  std::vector<std::pair<std::string, std::uint64_t>> storage;  // index name, bytes
  std::uint64_t storage_total = 0;
  double reduction_rate = 0;
};

CostReport cost_report(const StarSchema& schema, const std::vector<ParsedQuery>& queries, const Configuration& ci);

}  // namespace bji
