#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " '" + std::string(BJI_ADVISOR) + "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string inputs(const std::string& name) {
  return "--catalog '" + oracle::data_path(name + "/catalog.json") + "' --workload '" +
         oracle::data_path(name + "/workload.sql") + "'";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("bji_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("advise on SSB emits DDL for d_year and p_brand") {
    auto dir = scratch("advise_ssb");
    auto r = run("advise " + inputs("ssb") + " --engine tm-ijb --out '" + dir.string() + "'");
    CHECK(r.code == 0);
    auto ddl = slurp(dir / "indexes-tm-ijb.sql");
    CHECK(std::count(ddl.begin(), ddl.end(), '\n') == 2);
    CHECK(ddl.find("ON lineorder(dates.d_year)") != std::string::npos);
    CHECK(ddl.find("ON lineorder(part.p_brand)") != std::string::npos);
    CHECK(fs::exists(dir / "trace.json"));
    CHECK(fs::exists(dir / "report.txt"));
    CHECK(fs::exists(dir / "queries.csv"));
    fs::remove_all(dir);
  }

  TEST_CASE("exit codes") {
    CHECK(run("").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("advise --workload x").code == 1);
    CHECK(run("advise " + inputs("ssb") + " --engine nope").code == 1);
    CHECK(run("advise " + inputs("ssb") + " --minsup 0").code == 1);
    CHECK(run("advise " + inputs("ssb") + " --minsup 1.5").code == 1);
    CHECK(run("advise " + inputs("ssb") + " --dialect postgres").code == 1);
    CHECK(run("compare " + inputs("ssb") + " --engine tm-ijb").code == 1);
    CHECK(run("enumerate " + inputs("sales") + " --all --smallest").code == 1);
    CHECK(run("advise --catalog /nonexistent.json --workload x.sql").code == 2);
    CHECK(run("advise --catalog '" + oracle::data_path("ssb/catalog.json") + "' --workload /nonexistent.sql").code ==
          2);
    CHECK(run("--help").code == 0);
  }

  TEST_CASE("empty or unparsable workload is a validation error") {
    auto dir = scratch("bad_workload");
    fs::create_directories(dir);
    std::ofstream(dir / "empty.sql") << "";
    std::ofstream(dir / "bad.sql") << "Q1 - select lo_bogus from lineorder\n";
    auto cat = "--catalog '" + oracle::data_path("ssb/catalog.json") + "'";
    CHECK(run("advise " + cat + " --workload '" + (dir / "empty.sql").string() + "'").code == 2);
    CHECK(run("advise " + cat + " --workload '" + (dir / "bad.sql").string() + "'").code == 2);
    fs::remove_all(dir);
  }

  TEST_CASE("empty configuration exits 0") {
    auto r = run("advise " + inputs("sales") + " --engine close --format json");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"configuration\": []") != std::string::npos);
  }

  TEST_CASE("compare prints the CSV and a summary line") {
    auto r = run("compare " + inputs("ssb"));
    CHECK(r.code == 0);
    CHECK(r.out.rfind("engine,total_cost,storage_bytes,reduction_rate\nnone,", 0) == 0);
    CHECK(r.out.find("\ntm-ijb,") != std::string::npos);
    CHECK(r.out.find("\nclose,") != std::string::npos);
    CHECK(r.out.find("\ndynaclose,") != std::string::npos);
    CHECK(r.out.find("minimum cost: ") != std::string::npos);
  }

  TEST_CASE("reports are byte-identical across runs") {
    auto a = scratch("det_a"), b = scratch("det_b");
    for (const auto& dir : {a, b}) {
      REQUIRE(run("compare " + inputs("tpch") + " --out '" + dir.string() + "'").code == 0);
    }
    for (const char* f : {"trace.json", "compare.csv", "queries.csv", "report.txt", "indexes-close.sql"}) {
      CHECK(slurp(a / f) == slurp(b / f));
      CHECK_FALSE(slurp(a / f).empty());
    }
    CHECK(run("advise " + inputs("ssb") + " --format json").out == run("advise " + inputs("ssb") + " --format json").out);
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("enumerate") {
    auto r = run("enumerate " + inputs("sales") + " --smallest");
    CHECK(r.code == 0);
    CHECK(r.out.find("9 minimal transversals of size 2") != std::string::npos);
    auto all = run("enumerate " + inputs("sales") + " --all");
    CHECK(all.code == 0);
    CHECK(all.out.find("9 minimal transversals\n") != std::string::npos);
    auto dir = scratch("one_edge");
    fs::create_directories(dir);
    std::ofstream(dir / "w.sql") << "Q1 - select count(*) from sales S, channels C\n"
                                    "where S.channel_id = C.channel_id and C.channel_desc = 'Web'\n";
    auto one = run("enumerate --catalog '" + oracle::data_path("sales/catalog.json") + "' --workload '" +
                   (dir / "w.sql").string() + "' --all");
    CHECK(one.out.find("3 minimal transversals\n  {4}") != std::string::npos);
    fs::remove_all(dir);
  }

  TEST_CASE("demo") {
    auto r = run("demo");
    CHECK(r.code == 0);
    CHECK(r.out.find("VBF 101001010001") != std::string::npos);
    CHECK(r.out.find("naive join agrees") != std::string::npos);
    auto zero = run("demo --rows 0");
    CHECK(zero.code == 0);
    CHECK(zero.out.find("VBF \n") != std::string::npos);
    CHECK(zero.out.find("naive join agrees") != std::string::npos);
    auto s1 = run("demo --rows 30", "ADVISOR_SEED=12");
    auto s2 = run("demo --rows 30", "ADVISOR_SEED=12");
    CHECK(s1.code == 0);
    CHECK(s1.out == s2.out);
    CHECK(s1.out.find("seed 12") != std::string::npos);
    CHECK(run("demo --rows 30", "ADVISOR_SEED=abc").code == 2);
  }
}
