#include <doctest.h>

#include <cmath>
#include <random>

#include "bji/costmodel.hpp"
#include "bji/selection.hpp"
#include "oracles.hpp"

using namespace bji;

namespace {

const StarSchema& ssb() {
  static auto s = load_catalog_file(oracle::data_path("ssb/catalog.json"));
  return s;
}

IndexDef mono(const StarSchema& s, const char* qualified) {
  auto a = s.find_qualified(qualified);
  REQUIRE(a);
  return {index_name(s, *a), {*a}};
}

Configuration config(const StarSchema& s, std::initializer_list<const char*> attrs) {
  std::vector<AttributeId> ids;
  for (auto q : attrs) ids.push_back(*s.find_qualified(q));
  return mono_attribute_configuration(s, "test", ids);
}

}  // namespace

TEST_SUITE("costmodel") {
  TEST_CASE("index storage size") {
    auto s = ssb();
    s.rowid_bits = 64;
    s.tables[s.fact_id()].rows = 1000;
    auto& year = s.attributes[*s.find_qualified("dates.d_year")];
    year.cardinality = 8;
    CHECK(index_storage_size(s, mono(s, "dates.d_year")) == 9000);
    CHECK(index_load_cost(s, mono(s, "dates.d_year")) == 2);
    s.tables[s.fact_id()].rows = 0;
    CHECK(index_storage_size(s, mono(s, "dates.d_year")) == 0);
    CHECK(index_load_cost(s, mono(s, "dates.d_year")) == 0);

    CHECK(ssb().attributes[*ssb().find_qualified("dates.d_year")].cardinality == 7);
    CHECK(index_storage_size(ssb(), mono(ssb(), "dates.d_year")) == 65'250'000);
    CHECK(index_load_cost(ssb(), mono(ssb(), "dates.d_year")) == 8060);
  }

  TEST_CASE("storage rounds up to whole bytes") {
    auto s = ssb();
    s.rowid_bits = 1;
    s.tables[s.fact_id()].rows = 3;
    s.attributes[*s.find_qualified("dates.d_year")].cardinality = 2;
    CHECK(index_storage_size(s, mono(s, "dates.d_year")) == 2);  // 9 bits
  }

  TEST_CASE("hash join") {
    CHECK(hash_join_cost(0, 0) == 0);
    CHECK(hash_join_cost(105866, 23766) == 388'896);
    CHECK(hash_join_cost(1, 1) == 6);
  }

  TEST_CASE("tuple access cost") {
    CHECK(tuple_access_cost(1000, 0) == 0);
    CHECK(tuple_access_cost(1000, 1000) == doctest::Approx(1000 * (1 - std::exp(-1.0))));
    CHECK(tuple_access_cost(1000, 1000) == doctest::Approx(632.12).epsilon(1e-4));
    CHECK(tuple_access_cost(1000, 1e9) <= 1000);
    CHECK(tuple_access_cost(1000, 1e9) == doctest::Approx(1000));
    CHECK(tuple_access_cost(0, 50) == 0);
  }

  TEST_CASE("property: tuple access cost monotone and bounded") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 1000; ++i) {
      double pages = 1 + static_cast<double>(rng() % 200000);
      double nt = static_cast<double>(rng() % 10'000'000);
      double more = nt + 1 + static_cast<double>(rng() % 1000);
      double c = tuple_access_cost(pages, nt);
      REQUIRE(c >= 0);
      REQUIRE(c <= pages);
      REQUIRE(tuple_access_cost(pages, more) >= c);
      if (more / pages < 30) REQUIRE(tuple_access_cost(pages, more) > c);
    }
  }

  TEST_CASE("property: storage and load cost monotone in cardinality and fact rows") {
    std::mt19937_64 rng(23);
    auto s = ssb();
    auto a = *s.find_qualified("dates.d_year");
    for (int i = 0; i < 500; ++i) {
      s.attributes[a].cardinality = 1 + rng() % 5000;
      s.tables[s.fact_id()].rows = rng() % 100'000'000;
      auto idx = mono(s, "dates.d_year");
      auto size = index_storage_size(s, idx);
      auto load = index_load_cost(s, idx);
      auto t = s;
      t.attributes[a].cardinality += 1 + rng() % 10;
      REQUIRE(index_storage_size(t, idx) >= size);
      REQUIRE(index_load_cost(t, idx) >= load);
      t = s;
      t.tables[t.fact_id()].rows += 1 + rng() % 1000;
      REQUIRE(index_storage_size(t, idx) >= size);
      REQUIRE(index_load_cost(t, idx) >= load);
    }
  }

  TEST_CASE("selectivity and fact tuple estimate") {
    auto d = oracle::load("sales");
    auto& q = d.queries[0];  // channel_desc = 'Internet'
    auto desc = mono_attribute_configuration(d.schema, "t", {5});
    CHECK(estimate_fact_tuples(d.schema, q, Configuration{}) == 16'260'336);
    CHECK(estimate_fact_tuples(d.schema, q, desc) == doctest::Approx(3'252'067.2));

    auto s = d.schema;
    s.tables[s.fact_id()].rows = 100;
    s.attributes[2].cardinality = 4;
    auto two = parse_query(
        "select count(*) from sales S, channels C, customers U where S.channel_id = C.channel_id "
        "and S.cust_id = U.cust_id and C.channel_desc = 'Web' and U.cust_gender = 'F'",
        s);
    CHECK(estimate_fact_tuples(s, two, mono_attribute_configuration(s, "t", {2, 5})) == doctest::Approx(5));

    Predicate p{5, OpClass::InList, 2, 0};
    CHECK(predicate_selectivity(d.schema, p) == doctest::Approx(0.4));
    p.values = 0;
    CHECK(predicate_selectivity(d.schema, p) == doctest::Approx(1.0 / 3));
    p.values = 9;
    CHECK(predicate_selectivity(d.schema, p) == 1.0);
    p.op = OpClass::Range;
    CHECK(predicate_selectivity(d.schema, p) == doctest::Approx(1.0 / 3));
    p.op = OpClass::Like;
    CHECK(predicate_selectivity(d.schema, p) == doctest::Approx(1.0 / 3));
  }

  TEST_CASE("scenario 1: hash joins only") {
    auto q = parse_query("select sum(lo_revenue) from lineorder, dates where lo_orderdate = d_datekey and lo_tax > 2",
                         ssb());
    auto c = query_cost(ssb(), q, config(ssb(), {"dates.d_year"}));
    CHECK(c.scenario == Scenario::NoIndex);
    CHECK(c.cost == 3.0 * (123047 + 58));
    CHECK(c.cost == 369'315);
    CHECK(c.used.empty());
  }

  TEST_CASE("scenario 2: SSB Q1 with a d_year index") {
    auto d = oracle::load("ssb");
    const auto& q1 = d.queries[0];
    auto none = query_cost(d.schema, q1, Configuration{});
    CHECK(none.cost == 369'315);
    auto with = query_cost(d.schema, q1, config(d.schema, {"dates.d_year"}));
    CHECK(with.scenario == Scenario::Covered);
    double nt = 6'000'000.0 / 7.0;
    double expected = 8060 + 123047 * (1 - std::exp(-nt / 123047));
    CHECK(with.fact_tuples == doctest::Approx(nt));
    CHECK(with.cost == doctest::Approx(expected));
    CHECK(with.cost < none.cost);
  }

  TEST_CASE("scenario 2 cost is index loads plus tuple access") {
    auto d = oracle::load("ssb");
    auto ci = tm_ijb(d.schema, d.matrix).configuration;
    std::size_t covered = 0;
    for (const auto& q : d.queries) {
      auto c = query_cost(d.schema, q, ci);
      if (c.scenario != Scenario::Covered) continue;
      ++covered;
      double loads = 0;
      for (auto i : c.used) loads += static_cast<double>(index_load_cost(d.schema, ci.indexes[i]));
      CHECK(c.cost == doctest::Approx(loads + tuple_access_cost(123047, c.fact_tuples)));
    }
    CHECK(covered > 0);
  }

  TEST_CASE("scenario 3: uncovered dimensions still join") {
    auto q = parse_query(
        "select sum(lo_revenue) from lineorder, dates, part where lo_orderdate = d_datekey "
        "and lo_partkey = p_partkey and d_year = 1997 and p_color = 'red'",
        ssb());
    auto ci = config(ssb(), {"dates.d_year"});
    auto c = query_cost(ssb(), q, ci);
    double base = 3.0 * (123047 + 58) + 3.0 * (123047 + 4102);
    CHECK(query_cost(ssb(), q, Configuration{}).cost == base);
    REQUIRE(c.used.size() == 1);
    CHECK(c.scenario == Scenario::PartlyCovered);
    double cl = tuple_access_cost(123047, 6'000'000.0 / 7.0);
    CHECK(c.cost == doctest::Approx(8060 + cl + 3.0 * (cl + 4102)));
    CHECK(c.cost <= base);
  }

  TEST_CASE("an index that does not pay off is left unused") {
    auto d = oracle::load("sales");
    auto ci = mono_attribute_configuration(d.schema, "t", {2});
    for (const auto& q : d.queries) {
      auto c = query_cost(d.schema, q, ci);
      CHECK(c.cost <= query_cost(d.schema, q, Configuration{}).cost);
    }
  }

  TEST_CASE("property: unrelated index leaves the cost unchanged, weights are linear") {
    auto d = oracle::load("ssb");
    std::vector<AttributeId> indexable;
    for (AttributeId a = 0; a < d.schema.attributes.size(); ++a) {
      if (d.schema.is_indexable(a)) indexable.push_back(a);
    }
    std::mt19937 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<AttributeId> pick;
      for (auto a : indexable) {
        if (rng() % 5 == 0) pick.push_back(a);
      }
      auto ci = mono_attribute_configuration(d.schema, "t", pick);
      for (const auto& q : d.queries) {
        auto extra = indexable[rng() % indexable.size()];
        if (std::binary_search(q.referenced.begin(), q.referenced.end(), extra)) continue;
        if (std::find(pick.begin(), pick.end(), extra) != pick.end()) continue;
        auto more = pick;
        more.push_back(extra);
        auto ci2 = mono_attribute_configuration(d.schema, "t", more);
        REQUIRE(query_cost(d.schema, q, ci2).cost == query_cost(d.schema, q, ci).cost);
      }
      auto weighted = d.queries;
      double expected = 0;
      for (auto& q : weighted) {
        q.weight = static_cast<double>(rng() % 5);
        expected += q.weight * query_cost(d.schema, q, ci).cost;
      }
      REQUIRE(workload_cost(d.schema, weighted, ci) == doctest::Approx(expected));
    }
  }

  TEST_CASE("query without a fact table is scanned") {
    auto q = parse_query("select count(*) from part where p_color = 'red'", ssb());
    auto c = query_cost(ssb(), q, config(ssb(), {"part.p_color"}));
    CHECK(c.cost == 4102);
    CHECK(c.scenario == Scenario::NoIndex);
  }

  TEST_CASE("reduction rate and cost report") {
    CHECK(reduction_rate(200, 100) == 50.0);
    CHECK(reduction_rate(100, 150) == -50.0);
    CHECK_THROWS_AS(reduction_rate(0, 0), std::domain_error);
    auto d = oracle::load("ssb");
    auto empty = cost_report(d.schema, d.queries, Configuration{});
    CHECK(empty.reduction_rate == 0);
    CHECK(empty.with_total == empty.base_total);
    auto ci = config(d.schema, {"dates.d_year", "part.p_brand"});
    auto r = cost_report(d.schema, d.queries, ci);
    double base = 0, with = 0;
    for (const auto& row : r.per_query) {
      base += row.base;
      with += row.with;
    }
    CHECK(r.base_total == doctest::Approx(base));
    CHECK(r.with_total == doctest::Approx(with));
    CHECK(r.reduction_rate == doctest::Approx(100 * (base - with) / base));
    CHECK(r.storage.size() == 2);
    CHECK(r.storage_total == r.storage[0].second + r.storage[1].second);
  }
}
