#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bji {

using Vertex = std::uint32_t;

// Sorted, duplicate-free.
using VertexSet = std::vector<Vertex>;

VertexSet make_vertex_set(std::vector<Vertex> v);
bool is_subset(const VertexSet& a, const VertexSet& b);
bool intersects(const VertexSet& a, const VertexSet& b);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
std::string to_string(const VertexSet& s);

class Hypergraph {
 public:
  Hypergraph() = default;
  // Vertex set is the union of the edges.
  explicit Hypergraph(std::vector<VertexSet> edges);
  // Throws std::invalid_argument unless the union of the edges equals `vertices`.
  Hypergraph(VertexSet vertices, std::vector<VertexSet> edges);

  const VertexSet& vertices() const { return vertices_; }
  // Canonical, deduplicated, in first-appearance order.
  const std::vector<VertexSet>& edges() const { return edges_; }
  bool contains(Vertex v) const;

  // One edge per line, space-separated vertex ids.
  std::string dump() const;
  static Hypergraph parse_dump(std::string_view text);

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  VertexSet vertices_;
  std::vector<VertexSet> edges_;
};

// Both throw std::domain_error when t holds a vertex outside h.
bool is_transversal(const Hypergraph& h, const VertexSet& t);
bool is_minimal_transversal(const Hypergraph& h, const VertexSet& t);

// Results below are sorted lexicographically.
std::vector<VertexSet> berge_enumerate(const Hypergraph& h);
std::vector<VertexSet> mmcs(const Hypergraph& h, std::optional<std::size_t> size_cap = std::nullopt);

struct GreedyTransversal {
  std::size_t k = 0;
  VertexSet t;
};

// Greedy upper bound on the transversality number.
GreedyTransversal get_min_transversality(const Hypergraph& h);

struct SmallestTransversals {
  std::size_t greedy_bound = 0;
  std::size_t transversality = 0;
  std::vector<VertexSet> sets;
  std::vector<std::string> warnings;
};

SmallestTransversals smallest_transversals(const Hypergraph& h);

}  // namespace bji
