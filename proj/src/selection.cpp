#include "bji/selection.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "bji/costmodel.hpp"

namespace bji {

namespace {

// Support threshold slack for values such as 3/30 against 0.1.
constexpr double kSupportEpsilon = 1e-12;

std::vector<AttributeId> indexable_members(const StarSchema& schema, const VertexSet& columns) {
  std::vector<AttributeId> out;
  for (Vertex c : columns) {
    if (schema.is_indexable(attribute_of(c))) out.push_back(attribute_of(c));
  }
  return out;
}

}  // namespace

double alpha(const StarSchema& schema, AttributeId attr) {
  if (schema.is_fact_attribute(attr)) {
    throw std::domain_error("alpha is undefined for fact attribute " + schema.qualified_name(attr));
  }
  auto fact_pages = schema.pages(schema.fact_id());
  if (fact_pages == 0) throw std::domain_error("alpha is undefined for an empty fact table");
  return static_cast<double>(schema.pages(schema.attributes.at(attr).table)) / static_cast<double>(fact_pages);
}

double fitness_tm(const ContextMatrix& m, const StarSchema& schema, const VertexSet& tm) {
  double f = 0;
  for (AttributeId a : indexable_members(schema, tm)) f += support(m, {column_of(a)}) * alpha(schema, a);
  return f;
}

double fitness_dynaclose(const ContextMatrix& m, const StarSchema& schema, const VertexSet& motif) {
  std::size_t n = std::count_if(motif.begin(), motif.end(),
                                [&](Vertex c) { return !schema.attributes.at(attribute_of(c)).is_key; });
  if (n == 0) return 0.0;
  return fitness_tm(m, schema, motif) / static_cast<double>(n);
}

std::uint64_t afc_sum(const StarSchema& schema, const VertexSet& tm) {
  std::uint64_t total = 0;
  for (Vertex c : tm) total += schema.attributes.at(attribute_of(c)).cardinality;
  return total;
}

TmIjbResult tm_ijb(const StarSchema& schema, const ContextMatrix& m) {
  TmIjbResult r;
  r.transversals = smallest_transversals(m.hypergraph());
  double best = 0;
  for (const auto& tm : r.transversals.sets) {
    TmCandidate c{tm, fitness_tm(m, schema, tm), afc_sum(schema, tm)};
    best = std::max(best, c.fitness);
    r.candidates.push_back(std::move(c));
  }
  const TmCandidate* pick = nullptr;
  for (const auto& c : r.candidates) {
    if (c.fitness < best - kFitnessTieTolerance * best) continue;
    r.fittest.push_back(c.tm);
    if (!pick || c.afc < pick->afc) pick = &c;
  }
  if (pick) r.survivor = pick->tm;
  r.configuration = mono_attribute_configuration(schema, "tm-ijb", indexable_members(schema, r.survivor));
  r.configuration.warnings = r.transversals.warnings;
  if (r.configuration.empty()) r.configuration.warnings.push_back("no indexable configuration");
  return r;
}

std::vector<ScoredMotif> mine_closed_frequent_itemsets(const ContextMatrix& m, double minsup) {
  if (!(minsup > 0.0 && minsup <= 1.0)) throw std::invalid_argument("minsup must lie in (0, 1]");
  // Every nonempty closed itemset with positive support is an intersection of rows.
  std::set<VertexSet> closed;
  for (const auto& row : m.rows) {
    std::vector<VertexSet> fresh{row};
    for (const auto& c : closed) fresh.push_back(set_intersection(c, row));
    for (auto& c : fresh) {
      if (!c.empty()) closed.insert(std::move(c));
    }
  }
  std::vector<ScoredMotif> out;
  for (const auto& c : closed) {
    double s = support(m, c);
    if (s + kSupportEpsilon >= minsup) out.push_back({c, s, s});
  }
  return out;
}

CloseResult close_select(const StarSchema& schema, const ContextMatrix& m, double minsup,
                         std::optional<std::uint64_t> storage_budget) {
  CloseResult r;
  r.motifs = mine_closed_frequent_itemsets(m, minsup);
  std::set<AttributeId> pool;
  for (const auto& motif : r.motifs) {
    for (AttributeId a : indexable_members(schema, motif.attrs)) pool.insert(a);
  }
  struct Ranked {
    AttributeId attr;
    double support;
  };
  std::vector<Ranked> ranked;
  for (AttributeId a : pool) ranked.push_back({a, support(m, {column_of(a)})});
  std::sort(ranked.begin(), ranked.end(), [&](const Ranked& x, const Ranked& y) {
    if (x.support != y.support) return x.support > y.support;
    const auto& ax = schema.attributes[x.attr];
    const auto& ay = schema.attributes[y.attr];
    if (ax.name != ay.name) return ax.name < ay.name;
    return schema.table_of(x.attr).name < schema.table_of(y.attr).name;
  });

  std::vector<AttributeId> chosen;
  std::uint64_t storage = 0;
  double cost = workload_cost(schema, m.queries, Configuration{});
  for (const auto& cand : ranked) {
    CloseStep step;
    step.attr = cand.attr;
    step.support = cand.support;
    step.cost_before = cost;
    step.storage_bytes = index_storage_size(schema, IndexDef{index_name(schema, cand.attr), {cand.attr}});
    if (storage_budget && storage + step.storage_bytes > *storage_budget) {
      step.cost_after = cost;
      step.reason = "exceeds storage budget";
      r.steps.push_back(step);
      continue;
    }
    auto trial = chosen;
    trial.push_back(cand.attr);
    step.cost_after = workload_cost(schema, m.queries, mono_attribute_configuration(schema, "close", trial));
    if (step.cost_after < cost) {
      step.accepted = true;
      step.reason = "cost decreases";
      chosen = std::move(trial);
      storage += step.storage_bytes;
      cost = step.cost_after;
      r.steps.push_back(step);
      continue;
    }
    step.reason = "cost does not decrease";
    r.steps.push_back(step);
    break;
  }
  r.configuration = mono_attribute_configuration(schema, "close", chosen);
  if (r.configuration.empty()) r.configuration.warnings.push_back("no indexable configuration");
  return r;
}

DynaCloseResult dynaclose_select(const StarSchema& schema, const ContextMatrix& m, double minsup) {
  DynaCloseResult r;
  r.motifs = mine_closed_frequent_itemsets(m, minsup);
  for (auto& motif : r.motifs) motif.score = fitness_dynaclose(m, schema, motif.attrs);
  for (const auto& motif : r.motifs) {
    if (motif.score <= 0) continue;
    if (!r.chosen || motif.score > r.chosen->score ||
        (motif.score == r.chosen->score && motif.support > r.chosen->support)) {
      r.chosen = motif;
    }
  }
  std::vector<AttributeId> attrs;
  if (r.chosen) attrs = indexable_members(schema, r.chosen->attrs);
  r.configuration = mono_attribute_configuration(schema, "dynaclose", attrs);
  if (r.configuration.empty()) r.configuration.warnings.push_back("no indexable configuration");
  return r;
}

}  // namespace bji
