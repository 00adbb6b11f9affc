#include <doctest.h>

#include <json.hpp>

#include "bji/error.hpp"
#include "bji/schema.hpp"
#include "oracles.hpp"

using namespace bji;
using nlohmann::json;

namespace {

json tiny_catalog() {
  return json::parse(R"({
    "page_size": 100,
    "tables": [
      {"name": "F", "role": "fact", "rows": 1000, "tuple_width": 10},
      {"name": "D", "role": "dimension", "rows": 10, "tuple_width": 20}
    ],
    "attributes": [
      {"table": "F", "name": "d_id", "is_key": true},
      {"table": "D", "name": "id", "is_key": true},
      {"table": "D", "name": "colour", "cardinality": 4, "is_key": false}
    ],
    "joins": [{"fact_attr": "F.d_id", "dim_attr": "D.id"}]
  })");
}

}  // namespace

TEST_SUITE("schema") {
  TEST_CASE("pages_of") {
    CHECK(pages_of({"c", TableRole::Dimension, 50000, 24, std::nullopt}, 65536) == 19);
    CHECK(pages_of({"c", TableRole::Dimension, 0, 24, std::nullopt}, 65536) == 0);
    CHECK(pages_of({"c", TableRole::Dimension, 150000, 183, std::nullopt}, 8096) == 3391);
    CHECK(pages_of({"c", TableRole::Dimension, 150000, 183, 3397}, 8096) == 3397);
    CHECK(pages_of({"c", TableRole::Dimension, 1, 1, std::nullopt}, 8096) == 1);
    CHECK_THROWS_AS(pages_of({"c", TableRole::Dimension, 1, 1, std::nullopt}, 0), std::invalid_argument);
  }

  TEST_CASE("property: pages_of monotone in rows and width, antitone in page size") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
      std::uint64_t rows = rng() % 10'000'000, width = 1 + rng() % 500, ps = 1 + rng() % 70000;
      TableStats t{"t", TableRole::Dimension, rows, width, std::nullopt};
      auto p = pages_of(t, ps);
      REQUIRE(pages_of({"t", TableRole::Dimension, rows + 1 + rng() % 100, width, std::nullopt}, ps) >= p);
      REQUIRE(pages_of({"t", TableRole::Dimension, rows, width + 1, std::nullopt}, ps) >= p);
      REQUIRE(pages_of(t, ps + 1 + rng() % 100) <= p);
      REQUIRE((rows > 0) == (p >= 1));
    }
  }

  TEST_CASE("SSB catalog") {
    auto s = load_catalog_file(oracle::data_path("ssb/catalog.json"));
    CHECK(s.tables.size() == 5);
    CHECK(s.attributes.size() == 57);
    CHECK(s.fact().name == "lineorder");
    CHECK(s.fact().rows == 6'000'000);
    CHECK(s.pages(s.fact_id()) == 123047);
    auto expect_pages = [&](const char* name, std::uint64_t rows, std::uint64_t pages) {
      auto t = s.find_table(name);
      REQUIRE(t);
      CHECK(s.tables[*t].rows == rows);
      CHECK(s.pages(*t) == pages);
    };
    expect_pages("dates", 2556, 58);
    expect_pages("part", 200000, 4102);
    expect_pages("supplier", 2000, 42);
    expect_pages("customer", 30000, 696);
    CHECK(s.qualified_name(21) == "dates.d_year");
    CHECK(s.qualified_name(53) == "part.p_brand");
    CHECK(s.dimension_keys == DimensionKeys::Exclude);
  }

  TEST_CASE("TPC-H catalog is a snowflake reachable from lineitem") {
    auto s = load_catalog_file(oracle::data_path("tpch/catalog.json"));
    CHECK(s.tables.size() == 8);
    CHECK(s.attributes.size() == 61);
    CHECK(s.fact().name == "lineitem");
    CHECK(s.pages(s.fact_id()) == 105866);
    CHECK(s.pages(*s.find_table("orders")) == 23766);
    CHECK(s.pages(*s.find_table("customer")) == 3397);
    CHECK(s.qualified_name(1) == "nation.n_name");
    CHECK(s.qualified_name(40) == "orders.o_orderdate");
    auto path = s.join_path(*s.find_table("region"));
    REQUIRE(path.size() == 3);
    CHECK(s.table_of(path.front().fk).name == "lineitem");
    CHECK(s.table_of(path.back().key).name == "region");
    CHECK(s.join_path(s.fact_id()).empty());
  }

  TEST_CASE("lookups are case-insensitive") {
    auto s = load_catalog(tiny_catalog().dump());
    CHECK(s.find_table("d") == s.find_table("D"));
    CHECK(s.find_qualified("D.COLOUR") == AttributeId{2});
    CHECK_FALSE(s.find_qualified("D.size"));
    CHECK_FALSE(s.find_qualified("nodot"));
    CHECK(s.is_indexable(2));
    CHECK_FALSE(s.is_indexable(0));
    CHECK_FALSE(s.is_indexable(1));
    CHECK(s.attributes[0].cardinality == 1000);  // key defaults to table rows
    CHECK(s.rowid_bits == 80);
  }

  TEST_CASE("round trip through serialize") {
    for (const char* f : {"ssb/catalog.json", "tpch/catalog.json", "sales/catalog.json", "sales/catalog_prose.json"}) {
      auto s = load_catalog_file(oracle::data_path(f));
      CHECK(load_catalog(serialize_catalog(s)) == s);
    }
  }

  TEST_CASE("validation errors") {
    auto bad = [](auto mutate) {
      auto j = tiny_catalog();
      mutate(j);
      return j.dump();
    };
    CHECK_NOTHROW(load_catalog(tiny_catalog().dump()));
    CHECK_THROWS_AS(load_catalog("{not json"), ValidationError);
    CHECK_THROWS_AS(load_catalog("[]"), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j.erase("page_size"); })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["page_size"] = 0; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["page_size"] = -4; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["tables"][1]["role"] = "fact"; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["tables"][0]["role"] = "dimension"; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["tables"][1]["role"] = "cube"; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["tables"][1]["tuple_width"] = 0; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["attributes"][2]["table"] = "X"; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["attributes"][2]["cardinality"] = 0; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["attributes"][2]["cardinality"] = 11; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["attributes"][2].erase("cardinality"); })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["attributes"].push_back(j["attributes"][2]); })),
                    ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["joins"][0]["dim_attr"] = "D.colour"; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["joins"][0]["dim_attr"] = "Q.id"; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["joins"][0]["dim_attr"] = "D"; })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["joins"] = json::array(); })), ValidationError);
    CHECK_THROWS_AS(load_catalog(bad([](json& j) { j["dimension_keys"] = "maybe"; })), ValidationError);
    CHECK_THROWS_AS(load_catalog_file("/nonexistent/catalog.json"), ValidationError);
  }
}
