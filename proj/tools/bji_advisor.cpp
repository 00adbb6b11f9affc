// bji-advisor: bitmap join index advisor.
//
// Exit codes: 0 success (an empty configuration included), 1 usage,
// 2 input validation, 3 internal error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bji/bitmap.hpp"
#include "bji/error.hpp"
#include "bji/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Manifest {
  std::string catalog;
  std::string workload;
  std::vector<std::string> engines;
  double minsup = bji::kDefaultMinsup;
  std::optional<std::uint64_t> storage_budget;
  std::string out;
  std::string format;
  std::string dialect = "annex";
};

void add_input_options(CLI::App* cmd, Manifest& m) {
  cmd->add_option("--catalog", m.catalog, "catalog JSON file")->required();
  cmd->add_option("--workload", m.workload, "workload SQL file")->required();
  cmd->add_option("--minsup", m.minsup, "minimum support for closed itemsets")
      ->check(CLI::Range(0.0, 1.0))
      ->check([](const std::string& s) { return std::stod(s) > 0 ? std::string() : "minsup must be > 0"; });
  cmd->add_option("--storage-budget", m.storage_budget, "index storage budget in bytes");
  cmd->add_option("--out", m.out, "directory for report files");
  cmd->add_option("--dialect", m.dialect, "workload dialect")->check(CLI::IsMember({"annex"}));
}

void add_engine_option(CLI::App* cmd, Manifest& m, std::vector<std::string> def) {
  m.engines = std::move(def);
  cmd->add_option("--engine", m.engines, "tm-ijb, close, dynaclose (comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember(bji::kEngineNames))
      ->capture_default_str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bji::ValidationError("cannot write " + path.string());
  out << text;
}

struct Inputs {
  bji::StarSchema schema;
  std::vector<bji::ParsedQuery> queries;
};

Inputs load_inputs(const Manifest& m) {
  Inputs in;
  in.schema = bji::load_catalog_file(m.catalog);
  in.queries = bji::load_workload_file(m.workload, in.schema);
  return in;
}

bji::AdvisorRun run(const Manifest& m, const bji::StarSchema& schema, std::vector<bji::ParsedQuery> queries) {
  bji::AdvisorOptions opts;
  opts.engines = m.engines;
  opts.minsup = m.minsup;
  opts.storage_budget = m.storage_budget;
  auto r = bji::run_advisor(schema, std::move(queries), opts);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& e : r.engines) {
    for (const auto& w : e.configuration.warnings) std::cerr << "warning: " << e.engine << ": " << w << "\n";
  }
  return r;
}

// Each configuration attribute must yield exactly one statement.
std::string checked_ddl(const bji::StarSchema& schema, const bji::EngineRun& e) {
  auto ddl = bji::render_ddl(schema, e.configuration);
  std::size_t lines = static_cast<std::size_t>(std::count(ddl.begin(), ddl.end(), '\n'));
  if (lines != e.configuration.attributes().size()) {
    throw std::logic_error("DDL for " + e.engine + " does not match its configuration");
  }
  return ddl;
}

void write_reports(const Manifest& m, const bji::StarSchema& schema, const bji::AdvisorRun& r, bool compare) {
  if (m.out.empty()) return;
  fs::path dir(m.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw bji::ValidationError("cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "report.txt", bji::render_text(schema, r));
  write_file(dir / "trace.json", bji::render_json(schema, r));
  write_file(dir / "queries.csv", bji::render_query_csv(r));
  if (compare) write_file(dir / "compare.csv", bji::render_compare_csv(r));
  for (const auto& e : r.engines) write_file(dir / ("indexes-" + e.engine + ".sql"), checked_ddl(schema, e));
}

int cmd_advise(const Manifest& m) {
  auto in = load_inputs(m);
  auto r = run(m, in.schema, std::move(in.queries));
  write_reports(m, in.schema, r, false);
  if (m.format == "json") {
    std::cout << bji::render_json(in.schema, r);
  } else if (m.format == "csv") {
    std::cout << bji::render_query_csv(r);
  } else {
    std::cout << bji::render_text(in.schema, r);
    for (const auto& e : r.engines) std::cout << "\n-- " << e.engine << "\n" << checked_ddl(in.schema, e);
  }
  return 0;
}

int cmd_compare(const Manifest& m) {
  if (m.engines.size() < 2) throw UsageError("compare needs at least two engines");
  auto in = load_inputs(m);
  auto r = run(m, in.schema, std::move(in.queries));
  write_reports(m, in.schema, r, true);
  if (m.format == "json") {
    std::cout << bji::render_json(in.schema, r);
  } else if (m.format == "text") {
    std::cout << bji::render_text(in.schema, r) << "\n" << bji::compare_summary(r) << "\n";
  } else {
    std::cout << bji::render_compare_csv(r) << bji::compare_summary(r) << "\n";
  }
  return 0;
}

int cmd_enumerate(const Manifest& m, bool all) {
  auto in = load_inputs(m);
  auto matrix = bji::build_context_matrix(in.schema, std::move(in.queries));
  for (const auto& w : matrix.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << bji::render_matrix(in.schema, matrix);
  auto h = matrix.hypergraph();
  std::vector<bji::VertexSet> sets;
  if (all) {
    sets = bji::mmcs(h);
    std::cout << sets.size() << " minimal transversals\n";
  } else {
    auto st = bji::smallest_transversals(h);
    for (const auto& w : st.warnings) std::cerr << "warning: " << w << "\n";
    sets = st.sets;
    std::cout << sets.size() << " minimal transversals of size " << st.transversality << " (greedy bound "
              << st.greedy_bound << ")\n";
  }
  for (const auto& s : sets) {
    std::cout << "  " << bji::to_string(s) << " fitness " << bji::format_number(bji::fitness_tm(matrix, in.schema, s))
              << " afc " << bji::afc_sum(in.schema, s) << "\n";
  }
  return 0;
}

void print_index(const bji::BitmapJoinIndex& idx) {
  std::cout << "index " << idx.dimension << "." << idx.attribute << "\n";
  for (const auto& [value, vec] : idx.vectors) std::cout << "  " << value << " " << vec.to_string() << "\n";
}

int cmd_demo(std::optional<std::size_t> rows) {
  bji::ToyStar star;
  if (rows) {
    std::uint64_t seed = 1;
    if (const char* env = std::getenv("ADVISOR_SEED")) {
      try {
        seed = std::stoull(env);
      } catch (const std::exception&) {
        throw bji::ValidationError(std::string("ADVISOR_SEED is not an unsigned integer: ") + env);
      }
    }
    star = bji::random_star(*rows, seed);
    std::cout << "random star, " << *rows << " fact rows, seed " << seed << "\n";
  } else {
    star = bji::ventes_example();
    std::cout << "Ventes example, " << star.fact.size() << " fact rows\n";
  }
  auto indexes = star.build_indexes();
  for (const auto& idx : indexes) print_index(idx);

  bji::BitVector vbf(star.fact.size(), true);
  for (std::size_t i = 0; i < star.predicate.size(); ++i) {
    const auto& p = star.predicate[i];
    auto vb = bji::evaluate_vector(star.fact, indexes, {p});
    std::cout << "VB" << i + 1 << " " << p.dimension << "." << p.attribute << " in (";
    for (std::size_t k = 0; k < p.values.size(); ++k) std::cout << (k ? ", " : "") << p.values[k];
    std::cout << ") " << vb.to_string() << "\n";
    vbf &= vb;
  }
  std::cout << "VBF " << vbf.to_string() << "\n";
  auto result = bji::evaluate(star.fact, indexes, star.predicate);
  auto oracle = bji::naive_join_oracle(star.fact, star.links(), star.predicate);
  std::cout << "rows";
  for (auto r : result) std::cout << " " << r + 1;
  std::cout << "\nnaive join " << (result == oracle ? "agrees" : "DISAGREES") << "\n";
  if (result != oracle) throw std::logic_error("bitmap evaluation differs from the naive join");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bitmap join index advisor"};
  app.require_subcommand(1);

  Manifest m;
  auto* advise = app.add_subcommand("advise", "select a configuration and write reports and DDL");
  add_input_options(advise, m);
  add_engine_option(advise, m, {"tm-ijb"});
  advise->add_option("--format", m.format, "stdout format")->check(CLI::IsMember({"text", "json", "csv"}));

  Manifest cm;
  auto* compare = app.add_subcommand("compare", "cost several engines against the no-index baseline");
  add_input_options(compare, cm);
  add_engine_option(compare, cm, bji::kEngineNames);
  compare->add_option("--format", cm.format, "stdout format")->check(CLI::IsMember({"text", "json", "csv"}));

  Manifest em;
  bool all = false, smallest = false;
  auto* enumerate = app.add_subcommand("enumerate", "list minimal transversals of the workload hypergraph");
  add_input_options(enumerate, em);
  auto* all_flag = enumerate->add_flag("--all", all, "every minimal transversal");
  enumerate->add_flag("--smallest", smallest, "minimal transversals of minimum size (default)")->excludes(all_flag);

  std::optional<std::size_t> rows;
  auto* demo = app.add_subcommand("demo", "bitmap join index walkthrough on a toy star schema");
  demo->add_option("--rows", rows, "random instance with this many fact rows (seed from ADVISOR_SEED)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (advise->parsed()) return cmd_advise(m);
    if (compare->parsed()) return cmd_compare(cm);
    if (enumerate->parsed()) return cmd_enumerate(em, all);
    return cmd_demo(rows);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bji::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
