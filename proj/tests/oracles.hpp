// Independent reference implementations used only by tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bji/hypergraph.hpp"
#include "bji/schema.hpp"
#include "bji/workload.hpp"

namespace oracle {

inline std::string data_path(const std::string& rel) { return std::string(BJI_DATA_DIR) + "/" + rel; }

struct Dataset {
  bji::StarSchema schema;
  std::vector<bji::ParsedQuery> queries;
  bji::ContextMatrix matrix;
};

inline Dataset load(const std::string& name, const std::string& catalog = "catalog.json") {
  Dataset d;
  d.schema = bji::load_catalog_file(data_path(name + "/" + catalog));
  d.queries = bji::load_workload_file(data_path(name + "/workload.sql"), d.schema);
  d.matrix = bji::build_context_matrix(d.schema, d.queries);
  return d;
}

// Vertex subsets as bitmasks over a sorted vertex list.
inline bji::VertexSet from_mask(const std::vector<bji::Vertex>& verts, std::uint32_t mask) {
  bji::VertexSet s;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (mask >> i & 1) s.push_back(verts[i]);
  }
  return s;
}

inline bool hits_all(const std::vector<bji::VertexSet>& edges, const bji::VertexSet& t) {
  for (const auto& e : edges) {
    bool hit = false;
    for (auto v : e) hit = hit || std::binary_search(t.begin(), t.end(), v);
    if (!hit) return false;
  }
  return true;
}

// Every subset of the vertices; keeps transversals none of whose one-smaller
// subsets is a transversal. Sorted lexicographically.
inline std::vector<bji::VertexSet> exhaustive_minimal_transversals(const std::vector<bji::VertexSet>& edges) {
  std::vector<bji::Vertex> verts;
  for (const auto& e : edges) verts.insert(verts.end(), e.begin(), e.end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  std::vector<bji::VertexSet> out;
  for (std::uint32_t mask = 0; mask < (1u << verts.size()); ++mask) {
    auto t = from_mask(verts, mask);
    if (!hits_all(edges, t)) continue;
    bool minimal = true;
    for (std::size_t i = 0; i < t.size() && minimal; ++i) {
      auto smaller = t;
      smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
      if (hits_all(edges, smaller)) minimal = false;
    }
    if (minimal) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<bji::VertexSet> random_edges(std::mt19937& rng, std::size_t max_vertices, std::size_t max_edges) {
  std::size_t n = 1 + rng() % max_vertices;
  std::size_t m = 1 + rng() % max_edges;
  double density = 0.1 + (rng() % 80) / 100.0;
  std::vector<bji::VertexSet> edges;
  for (std::size_t i = 0; i < m; ++i) {
    bji::VertexSet e;
    for (bji::Vertex v = 1; v <= n; ++v) {
      if ((rng() % 1000) / 1000.0 < density) e.push_back(v);
    }
    if (e.empty()) e.push_back(static_cast<bji::Vertex>(1 + rng() % n));
    edges.push_back(e);
  }
  return edges;
}

struct Itemset {
  bji::VertexSet items;
  double support;
};

// Scans every column subset X (as a bitmask) and keeps X when it is frequent
// and equal to the intersection of the rows containing it, i.e. no superset
// has the same support. Support is the plain row fraction.
inline std::vector<Itemset> brute_force_closed(const std::vector<bji::VertexSet>& rows, std::size_t columns,
                                               double minsup) {
  std::vector<std::uint32_t> masks;
  for (const auto& r : rows) {
    std::uint32_t m = 0;
    for (auto c : r) m |= 1u << (c - 1);
    masks.push_back(m);
  }
  std::vector<Itemset> out;
  for (std::uint32_t x = 1; x < (1u << columns); ++x) {
    std::size_t n = 0;
    std::uint32_t closure = ~0u;
    for (auto m : masks) {
      if ((m & x) == x) {
        ++n;
        closure &= m;
      }
    }
    if (n == 0 || closure != x) continue;
    double sup = static_cast<double>(n) / static_cast<double>(rows.size());
    if (sup < minsup - 1e-12) continue;
    bji::VertexSet items;
    for (std::size_t c = 0; c < columns; ++c) {
      if (x >> c & 1) items.push_back(static_cast<bji::Vertex>(c + 1));
    }
    out.push_back({items, sup});
  }
  std::sort(out.begin(), out.end(), [](const Itemset& a, const Itemset& b) { return a.items < b.items; });
  return out;
}

// Matrix over `columns` anonymous attributes, one unit-weight query per row.
inline bji::ContextMatrix matrix_of(const std::vector<bji::VertexSet>& rows, std::size_t columns) {
  bji::ContextMatrix m;
  m.column_count = columns;
  m.rows = rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bji::ParsedQuery q;
    q.id = i + 1;
    q.label = "Q" + std::to_string(i + 1);
    m.queries.push_back(q);
  }
  return m;
}

}  // namespace oracle
