#include "bji/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bji {

using nlohmann::ordered_json;

void check_engine_name(const std::string& name) {
  if (std::find(kEngineNames.begin(), kEngineNames.end(), name) == kEngineNames.end()) {
    throw std::invalid_argument("unknown engine '" + name + "' (expected tm-ijb, close or dynaclose)");
  }
}

AdvisorRun run_advisor(const StarSchema& schema, std::vector<ParsedQuery> queries, const AdvisorOptions& opts) {
  if (opts.engines.empty()) throw std::invalid_argument("no engine requested");
  for (const auto& e : opts.engines) check_engine_name(e);
  if (!(opts.minsup > 0 && opts.minsup <= 1)) throw std::invalid_argument("minsup must be in (0, 1]");

  AdvisorRun run;
  run.queries = queries;
  run.matrix = build_context_matrix(schema, std::move(queries));
  run.warnings = run.matrix.warnings;
  Configuration none;
  none.engine = "none";
  run.baseline = cost_report(schema, run.queries, none);

  for (const auto& name : opts.engines) {
    EngineRun er;
    er.engine = name;
    if (name == "tm-ijb") {
      er.tm_ijb = tm_ijb(schema, run.matrix);
      er.configuration = er.tm_ijb->configuration;
    } else if (name == "close") {
      er.close = close_select(schema, run.matrix, opts.minsup, opts.storage_budget);
      er.configuration = er.close->configuration;
    } else {
      er.dynaclose = dynaclose_select(schema, run.matrix, opts.minsup);
      er.configuration = er.dynaclose->configuration;
    }
    er.cost = cost_report(schema, run.queries, er.configuration);
    if (opts.storage_budget && er.cost.storage_total > *opts.storage_budget) {
      er.configuration.warnings.push_back("configuration needs " + std::to_string(er.cost.storage_total) +
                                          " bytes, over the storage budget of " +
                                          std::to_string(*opts.storage_budget));
    }
    run.engines.push_back(std::move(er));
  }
  return run;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string ddl_statement(const StarSchema& schema, AttributeId attr, const std::string& index_name) {
  const auto& a = schema.attributes.at(attr);
  const auto& fact = schema.fact().name;
  const auto& dim = schema.tables.at(a.table).name;
  auto path = schema.join_path(a.table);
  std::ostringstream out;
  out << "CREATE BITMAP INDEX " << index_name << " ON " << fact << "(" << dim << "." << a.name << ") FROM " << fact;
  for (const auto& j : path) out << ", " << schema.table_of(j.key).name;
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << (i == 0 ? " WHERE " : " AND ") << schema.qualified_name(path[i].fk) << " = "
        << schema.qualified_name(path[i].key);
  }
  out << ";";
  return out.str();
}

std::string render_ddl(const StarSchema& schema, const Configuration& ci) {
  std::string out;
  for (const auto& idx : ci.indexes) {
    for (AttributeId a : idx.attrs) {
      std::string name = idx.attrs.size() == 1 ? idx.name : index_name(schema, a);
      out += ddl_statement(schema, a, name) + "\n";
    }
  }
  return out;
}

namespace {

ordered_json column_list(const VertexSet& s) { return ordered_json(s); }

ordered_json attribute_names(const StarSchema& schema, const VertexSet& s) {
  auto arr = ordered_json::array();
  for (Vertex c : s) arr.push_back(schema.qualified_name(attribute_of(c)));
  return arr;
}

ordered_json cost_json(const CostReport& r) {
  ordered_json j;
  j["total_cost"] = r.with_total;
  j["baseline_cost"] = r.base_total;
  j["reduction_rate"] = r.reduction_rate;
  j["storage_bytes"] = r.storage_total;
  auto storage = ordered_json::array();
  for (const auto& [name, bytes] : r.storage) storage.push_back({{"index", name}, {"bytes", bytes}});
  j["storage"] = storage;
  auto rows = ordered_json::array();
  for (const auto& q : r.per_query) {
    rows.push_back({{"query", q.label}, {"base", q.base}, {"cost", q.with}, {"scenario", static_cast<int>(q.scenario)}});
  }
  j["per_query"] = rows;
  return j;
}

ordered_json configuration_json(const StarSchema& schema, const Configuration& ci) {
  auto arr = ordered_json::array();
  for (const auto& idx : ci.indexes) {
    auto names = ordered_json::array();
    for (AttributeId a : idx.attrs) names.push_back(schema.qualified_name(a));
    arr.push_back({{"index", idx.name}, {"attributes", names}});
  }
  return arr;
}

ordered_json motifs_json(const StarSchema& schema, const std::vector<ScoredMotif>& motifs, bool with_score) {
  auto arr = ordered_json::array();
  for (const auto& m : motifs) {
    ordered_json j{{"columns", column_list(m.attrs)}, {"attributes", attribute_names(schema, m.attrs)},
                   {"support", m.support}};
    if (with_score) j["score"] = m.score;
    arr.push_back(j);
  }
  return arr;
}

ordered_json engine_trace(const StarSchema& schema, const EngineRun& er) {
  ordered_json t;
  if (er.tm_ijb) {
    const auto& r = *er.tm_ijb;
    t["greedy_bound"] = r.transversals.greedy_bound;
    t["transversality"] = r.transversals.transversality;
    auto cands = ordered_json::array();
    for (const auto& c : r.candidates) {
      cands.push_back({{"columns", column_list(c.tm)},
                       {"attributes", attribute_names(schema, c.tm)},
                       {"fitness", c.fitness},
                       {"afc", c.afc}});
    }
    t["candidates"] = cands;
    auto fittest = ordered_json::array();
    for (const auto& f : r.fittest) fittest.push_back(column_list(f));
    t["fittest"] = fittest;
    t["survivor"] = column_list(r.survivor);
  } else if (er.close) {
    t["motifs"] = motifs_json(schema, er.close->motifs, false);
    auto steps = ordered_json::array();
    for (const auto& s : er.close->steps) {
      steps.push_back({{"attribute", schema.qualified_name(s.attr)},
                       {"support", s.support},
                       {"cost_before", s.cost_before},
                       {"cost_after", s.cost_after},
                       {"storage_bytes", s.storage_bytes},
                       {"accepted", s.accepted},
                       {"reason", s.reason}});
    }
    t["steps"] = steps;
  } else if (er.dynaclose) {
    t["motifs"] = motifs_json(schema, er.dynaclose->motifs, true);
    if (er.dynaclose->chosen) {
      t["chosen"] = motifs_json(schema, {*er.dynaclose->chosen}, true)[0];
    } else {
      t["chosen"] = nullptr;
    }
  }
  return t;
}

}  // namespace

std::string render_json(const StarSchema& schema, const AdvisorRun& run) {
  ordered_json j;
  j["fact"] = schema.fact().name;
  auto legend = ordered_json::array();
  for (AttributeId a = 0; a < schema.attributes.size(); ++a) {
    legend.push_back({{"column", column_of(a)},
                      {"attribute", schema.qualified_name(a)},
                      {"indexable", schema.is_indexable(a)}});
  }
  j["legend"] = legend;
  auto rows = ordered_json::array();
  for (std::size_t i = 0; i < run.matrix.rows.size(); ++i) {
    rows.push_back({{"query", run.matrix.queries[i].label}, {"columns", column_list(run.matrix.rows[i])}});
  }
  j["matrix"] = rows;
  auto dropped = ordered_json::array();
  for (const auto& q : run.matrix.dropped) dropped.push_back(q.label);
  j["dropped"] = dropped;
  j["warnings"] = run.warnings;
  j["baseline_cost"] = cost_json(run.baseline);
  auto engines = ordered_json::array();
  for (const auto& er : run.engines) {
    engines.push_back({{"engine", er.engine},
                       {"trace", engine_trace(schema, er)},
                       {"configuration", configuration_json(schema, er.configuration)},
                       {"warnings", er.configuration.warnings},
                       {"cost", cost_json(er.cost)}});
  }
  j["engines"] = engines;
  return j.dump(2) + "\n";
}

std::string render_matrix(const StarSchema& schema, const ContextMatrix& m) {
  std::ostringstream out;
  auto used = m.used_columns();
  out << "columns (" << m.column_count << " attributes, " << used.size() << " used):\n";
  for (Vertex c : used) {
    out << "  c" << c << " = " << schema.qualified_name(attribute_of(c))
        << (schema.is_indexable(attribute_of(c)) ? "" : " (not indexable)") << "\n";
  }
  out << "rows:\n";
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    out << "  " << m.queries[i].label << " " << to_string(m.rows[i]) << "\n";
  }
  return out.str();
}

std::string render_text(const StarSchema& schema, const AdvisorRun& run) {
  std::ostringstream out;
  out << "workload: " << run.queries.size() << " queries, " << run.matrix.rows.size() << " in the matrix\n";
  for (const auto& w : run.warnings) out << "warning: " << w << "\n";
  out << render_matrix(schema, run.matrix);
  out << "baseline cost: " << format_number(run.baseline.base_total) << " pages\n";
  for (const auto& er : run.engines) {
    out << "\n[" << er.engine << "]\n";
    if (er.tm_ijb) {
      const auto& r = *er.tm_ijb;
      out << "greedy bound " << r.transversals.greedy_bound << ", transversality " << r.transversals.transversality
          << ", " << r.candidates.size() << " smallest minimal transversals\n";
      for (const auto& c : r.candidates) {
        out << "  " << to_string(c.tm) << " fitness " << format_number(c.fitness) << " afc " << c.afc << "\n";
      }
      out << "survivor " << to_string(r.survivor) << "\n";
    } else if (er.close) {
      out << er.close->motifs.size() << " closed frequent itemsets\n";
      for (const auto& m : er.close->motifs) {
        out << "  " << to_string(m.attrs) << " support " << format_number(m.support) << "\n";
      }
      for (const auto& s : er.close->steps) {
        out << "  try " << schema.qualified_name(s.attr) << ": " << format_number(s.cost_before) << " -> "
            << format_number(s.cost_after) << " (" << s.reason << ")\n";
      }
    } else if (er.dynaclose) {
      out << er.dynaclose->motifs.size() << " closed frequent itemsets\n";
      for (const auto& m : er.dynaclose->motifs) {
        out << "  " << to_string(m.attrs) << " support " << format_number(m.support) << " score "
            << format_number(m.score) << "\n";
      }
      if (er.dynaclose->chosen) out << "chosen " << to_string(er.dynaclose->chosen->attrs) << "\n";
    }
    for (const auto& w : er.configuration.warnings) out << "warning: " << w << "\n";
    out << "configuration:";
    if (er.configuration.empty()) out << " (empty)";
    for (AttributeId a : er.configuration.attributes()) out << " " << schema.qualified_name(a);
    out << "\ncost " << format_number(er.cost.with_total) << " pages, storage " << er.cost.storage_total
        << " bytes, reduction " << format_number(er.cost.reduction_rate) << "%\n";
  }
  return out.str();
}

std::string render_query_csv(const AdvisorRun& run) {
  std::ostringstream out;
  out << "id,label,base_cost";
  for (const auto& er : run.engines) out << "," << er.engine;
  out << "\n";
  for (std::size_t i = 0; i < run.baseline.per_query.size(); ++i) {
    const auto& b = run.baseline.per_query[i];
    out << b.query_id << "," << b.label << "," << format_number(b.base);
    for (const auto& er : run.engines) out << "," << format_number(er.cost.per_query[i].with);
    out << "\n";
  }
  return out.str();
}

std::string render_compare_csv(const AdvisorRun& run) {
  std::ostringstream out;
  out << "engine,total_cost,storage_bytes,reduction_rate\n";
  out << "none," << format_number(run.baseline.with_total) << ",0,0\n";
  for (const auto& er : run.engines) {
    out << er.engine << "," << format_number(er.cost.with_total) << "," << er.cost.storage_total << ","
        << format_number(er.cost.reduction_rate) << "\n";
  }
  return out.str();
}

std::string compare_summary(const AdvisorRun& run) {
  if (run.engines.empty()) return "no engine ran";
  const EngineRun* best = &run.engines.front();
  for (const auto& er : run.engines) {
    if (er.cost.with_total < best->cost.with_total) best = &er;
  }
  return "minimum cost: " + best->engine + " (" + format_number(best->cost.with_total) + " pages, " +
         format_number(best->cost.reduction_rate) + "% below no index)";
}

}  // namespace bji
