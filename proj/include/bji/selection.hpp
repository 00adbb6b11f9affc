#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bji/configuration.hpp"
#include "bji/hypergraph.hpp"
#include "bji/schema.hpp"
#include "bji/workload.hpp"

namespace bji {

inline constexpr double kDefaultMinsup = 0.1;
// Relative gap under which two fitness values count as equal.
inline constexpr double kFitnessTieTolerance = 1e-12;

// pages(dimension of attr) / pages(fact). Throws std::domain_error for fact attributes.
double alpha(const StarSchema& schema, AttributeId attr);

// Arguments below are matrix column numbers (see column_of).
double fitness_tm(const ContextMatrix& m, const StarSchema& schema, const VertexSet& tm);
double fitness_dynaclose(const ContextMatrix& m, const StarSchema& schema, const VertexSet& motif);
std::uint64_t afc_sum(const StarSchema& schema, const VertexSet& tm);

struct TmCandidate {
  VertexSet tm;
  double fitness = 0;
  std::uint64_t afc = 0;
};

struct TmIjbResult {
  SmallestTransversals transversals;
  std::vector<TmCandidate> candidates;  // every smallest TM, lexicographic
  std::vector<VertexSet> fittest;       // TMs sharing the maximal fitness
  VertexSet survivor;
  Configuration configuration;
};

TmIjbResult tm_ijb(const StarSchema& schema, const ContextMatrix& m);

struct ScoredMotif {
  VertexSet attrs;
  double support = 0;
  double score = 0;
};

// Nonempty closed itemsets with support >= minsup, lexicographic by attrs.
// Throws std::invalid_argument unless 0 < minsup <= 1.
std::vector<ScoredMotif> mine_closed_frequent_itemsets(const ContextMatrix& m, double minsup);

struct CloseStep {
  AttributeId attr = 0;
  double support = 0;
  double cost_before = 0;
  double cost_after = 0;
  std::uint64_t storage_bytes = 0;
  bool accepted = false;
  std::string reason;
};

struct CloseResult {
  std::vector<ScoredMotif> motifs;
  std::vector<CloseStep> steps;
  Configuration configuration;
};

CloseResult close_select(const StarSchema& schema, const ContextMatrix& m, double minsup = kDefaultMinsup,
                         std::optional<std::uint64_t> storage_budget = std::nullopt);

struct DynaCloseResult {
  std::vector<ScoredMotif> motifs;  // score = fitness_dynaclose
  std::optional<ScoredMotif> chosen;
  Configuration configuration;
};

DynaCloseResult dynaclose_select(const StarSchema& schema, const ContextMatrix& m, double minsup = kDefaultMinsup);

}  // namespace bji
