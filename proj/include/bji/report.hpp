#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bji/costmodel.hpp"
#include "bji/selection.hpp"

namespace bji {

inline const std::vector<std::string> kEngineNames = {"tm-ijb", "close", "dynaclose"};

// Throws std::invalid_argument for an unknown engine name.
void check_engine_name(const std::string& name);

struct AdvisorOptions {
  std::vector<std::string> engines = {"tm-ijb"};
  double minsup = kDefaultMinsup;
  std::optional<std::uint64_t> storage_budget;
};

struct EngineRun {
  std::string engine;
  std::optional<TmIjbResult> tm_ijb;
  std::optional<CloseResult> close;
  std::optional<DynaCloseResult> dynaclose;
  Configuration configuration;
  CostReport cost;
};

struct AdvisorRun {
  ContextMatrix matrix;
  std::vector<ParsedQuery> queries;  // every parsed query, dropped ones included
  CostReport baseline;
  std::vector<EngineRun> engines;
  std::vector<std::string> warnings;
};

// Builds the matrix, runs each engine in order and costs every configuration
// against the whole workload.
AdvisorRun run_advisor(const StarSchema& schema, std::vector<ParsedQuery> queries, const AdvisorOptions& opts);

// One CREATE BITMAP INDEX statement per attribute of the configuration, in
// attribute order. Snowflaked dimensions list the whole join chain.
std::string ddl_statement(const StarSchema& schema, AttributeId attr, const std::string& index_name);
std::string render_ddl(const StarSchema& schema, const Configuration& ci);

// JSON trace: legend, matrix, per-engine decision trace, configuration, costs.
std::string render_json(const StarSchema& schema, const AdvisorRun& run);
std::string render_text(const StarSchema& schema, const AdvisorRun& run);
// One row per query: id,label,base_cost,<engine>...
std::string render_query_csv(const AdvisorRun& run);
// engine,total_cost,storage_bytes,reduction_rate, baseline first.
std::string render_compare_csv(const AdvisorRun& run);
// Names the engine with the lowest total cost (first one on ties).
std::string compare_summary(const AdvisorRun& run);

// Attribute legend and rows, e.g. "c1 = sales.cust_id".
std::string render_matrix(const StarSchema& schema, const ContextMatrix& m);

// Fixed notation used in every report: up to 17 significant digits,
// shortest round-trip form.
std::string format_number(double v);

}  // namespace bji
