#include "bji/hypergraph.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bji {

VertexSet make_vertex_set(std::vector<Vertex> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const VertexSet& a, const VertexSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string to_string(const VertexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

namespace {

std::vector<VertexSet> canonical_edges(std::vector<VertexSet> edges) {
  std::vector<VertexSet> out;
  std::set<VertexSet> seen;
  for (auto& e : edges) {
    auto c = make_vertex_set(std::move(e));
    if (c.empty()) throw std::invalid_argument("hypergraph edge is empty");
    if (seen.insert(c).second) out.push_back(std::move(c));
  }
  return out;
}

VertexSet union_of(const std::vector<VertexSet>& edges) {
  VertexSet all;
  for (const auto& e : edges) all.insert(all.end(), e.begin(), e.end());
  return make_vertex_set(std::move(all));
}

void check_members(const Hypergraph& h, const VertexSet& t) {
  for (Vertex v : t) {
    if (!h.contains(v)) throw std::domain_error("vertex " + std::to_string(v) + " is not in the hypergraph");
  }
}

}  // namespace

Hypergraph::Hypergraph(std::vector<VertexSet> edges)
    : edges_(canonical_edges(std::move(edges))) {
  vertices_ = union_of(edges_);
}

Hypergraph::Hypergraph(VertexSet vertices, std::vector<VertexSet> edges)
    : vertices_(make_vertex_set(std::move(vertices))), edges_(canonical_edges(std::move(edges))) {
  if (union_of(edges_) != vertices_) {
    throw std::invalid_argument("union of hypergraph edges differs from its vertex set");
  }
}

bool Hypergraph::contains(Vertex v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::string Hypergraph::dump() const {
  std::ostringstream os;
  for (const auto& e : edges_) {
    for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
    os << '\n';
  }
  return os.str();
}

Hypergraph Hypergraph::parse_dump(std::string_view text) {
  std::vector<VertexSet> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    VertexSet e;
    long long v;
    while (ls >> v) {
      if (v < 0 || v > std::numeric_limits<Vertex>::max()) throw std::invalid_argument("vertex id out of range");
      e.push_back(static_cast<Vertex>(v));
    }
    if (!ls.eof()) throw std::invalid_argument("malformed hypergraph line: " + line);
    if (!e.empty()) edges.push_back(std::move(e));
  }
  return Hypergraph(std::move(edges));
}

bool is_transversal(const Hypergraph& h, const VertexSet& t) {
  check_members(h, t);
  return std::all_of(h.edges().begin(), h.edges().end(), [&](const VertexSet& e) { return intersects(e, t); });
}

bool is_minimal_transversal(const Hypergraph& h, const VertexSet& t) {
  if (!is_transversal(h, t)) return false;
  // Every member needs an edge it alone covers.
  for (Vertex v : t) {
    bool has_critical = false;
    for (const auto& e : h.edges()) {
      if (!std::binary_search(e.begin(), e.end(), v)) continue;
      if (set_intersection(e, t).size() == 1) {
        has_critical = true;
        break;
      }
    }
    if (!has_critical) return false;
  }
  return true;
}

std::vector<VertexSet> berge_enumerate(const Hypergraph& h) {
  std::vector<VertexSet> current{VertexSet{}};
  for (const auto& e : h.edges()) {
    std::set<VertexSet> next;
    for (const auto& t : current) {
      if (intersects(t, e)) {
        next.insert(t);
        continue;
      }
      for (Vertex v : e) next.insert(set_union(t, VertexSet{v}));
    }
    std::vector<VertexSet> candidates(next.begin(), next.end());
    current.clear();
    for (const auto& t : candidates) {
      bool minimal = std::none_of(candidates.begin(), candidates.end(), [&](const VertexSet& o) {
        return o.size() < t.size() && is_subset(o, t);
      });
      if (minimal) current.push_back(t);
    }
  }
  std::sort(current.begin(), current.end());
  return current;
}

namespace {

// Depth-first search over dense vertex indices. cover[f] counts chosen vertices
// in edge f (uncov = edges with cover 0); crit_count[v] counts edges whose only
// chosen vertex is v.
class MmcsSearch {
 public:
  MmcsSearch(const Hypergraph& h, std::optional<std::size_t> cap) : cap_(cap), ids_(h.vertices()) {
    for (const auto& e : h.edges()) {
      std::vector<int> d;
      for (Vertex v : e) d.push_back(index_of(v));
      edges_.push_back(std::move(d));
    }
    vertex_edges_.resize(ids_.size());
    for (int f = 0; f < static_cast<int>(edges_.size()); ++f) {
      for (int v : edges_[f]) vertex_edges_[v].push_back(f);
    }
    cover_.assign(edges_.size(), 0);
    crit_count_.assign(ids_.size(), 0);
    chosen_flag_.assign(ids_.size(), false);
    cand_.assign(ids_.size(), true);
  }

  std::vector<VertexSet> run() {
    search();
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  int index_of(Vertex v) const {
    return static_cast<int>(std::lower_bound(ids_.begin(), ids_.end(), v) - ids_.begin());
  }

  int sole_cover(int f) const {
    for (int u : edges_[f]) {
      if (chosen_flag_[u]) return u;
    }
    throw std::logic_error("edge has no chosen vertex");
  }

  void add(int v) {
    for (int f : vertex_edges_[v]) {
      if (cover_[f] == 0) {
        ++crit_count_[v];
      } else if (cover_[f] == 1) {
        --crit_count_[sole_cover(f)];
      }
      ++cover_[f];
    }
    chosen_flag_[v] = true;
    chosen_.push_back(v);
  }

  void remove(int v) {
    chosen_.pop_back();
    chosen_flag_[v] = false;
    for (int f : vertex_edges_[v]) {
      --cover_[f];
      if (cover_[f] == 0) {
        --crit_count_[v];
      } else if (cover_[f] == 1) {
        ++crit_count_[sole_cover(f)];
      }
    }
  }

  void search() {
    int best = -1;
    std::size_t best_count = 0;
    for (int f = 0; f < static_cast<int>(edges_.size()); ++f) {
      if (cover_[f] != 0) continue;
      std::size_t n = std::count_if(edges_[f].begin(), edges_[f].end(), [&](int v) { return cand_[v]; });
      if (best < 0 || n < best_count) {
        best = f;
        best_count = n;
      }
    }
    if (best < 0) {
      VertexSet t;
      for (int v : chosen_) t.push_back(ids_[v]);
      out_.push_back(make_vertex_set(std::move(t)));
      return;
    }
    if (cap_ && chosen_.size() >= *cap_) return;

    std::vector<int> branch;
    for (int v : edges_[best]) {
      if (cand_[v]) branch.push_back(v);
    }
    for (int v : branch) cand_[v] = false;
    for (int v : branch) {
      add(v);
      bool minimal = std::all_of(chosen_.begin(), chosen_.end(), [&](int u) { return crit_count_[u] > 0; });
      if (minimal) search();
      remove(v);
      cand_[v] = true;
    }
  }

  std::optional<std::size_t> cap_;
  VertexSet ids_;
  std::vector<std::vector<int>> edges_;
  std::vector<std::vector<int>> vertex_edges_;
  std::vector<int> cover_;
  std::vector<int> crit_count_;
  std::vector<bool> chosen_flag_;
  std::vector<bool> cand_;
  std::vector<int> chosen_;
  std::vector<VertexSet> out_;
};

}  // namespace

std::vector<VertexSet> mmcs(const Hypergraph& h, std::optional<std::size_t> size_cap) {
  if (size_cap && *size_cap < 1) throw std::invalid_argument("mmcs size cap must be at least 1");
  return MmcsSearch(h, size_cap).run();
}

GreedyTransversal get_min_transversality(const Hypergraph& h) {
  GreedyTransversal best;
  if (h.edges().empty()) return best;
  best.k = std::numeric_limits<std::size_t>::max();
  for (Vertex x : h.vertices()) {
    VertexSet t{x};
    std::vector<const VertexSet*> remaining;
    for (const auto& e : h.edges()) {
      if (!std::binary_search(e.begin(), e.end(), x)) remaining.push_back(&e);
    }
    while (!remaining.empty()) {
      Vertex pick = 0;
      std::size_t pick_support = 0;
      for (Vertex v : h.vertices()) {
        std::size_t s = std::count_if(remaining.begin(), remaining.end(), [&](const VertexSet* e) {
          return std::binary_search(e->begin(), e->end(), v);
        });
        if (s > pick_support) {
          pick = v;
          pick_support = s;
        }
      }
      t = set_union(t, VertexSet{pick});
      std::erase_if(remaining, [&](const VertexSet* e) { return std::binary_search(e->begin(), e->end(), pick); });
    }
    if (t.size() < best.k) {
      best.k = t.size();
      best.t = t;
    }
  }
  return best;
}

SmallestTransversals smallest_transversals(const Hypergraph& h) {
  SmallestTransversals out;
  if (h.edges().empty()) {
    out.sets = {VertexSet{}};
    return out;
  }
  out.greedy_bound = get_min_transversality(h).k;
  auto all = mmcs(h, out.greedy_bound);
  out.transversality = out.greedy_bound;
  for (const auto& t : all) out.transversality = std::min(out.transversality, t.size());
  for (auto& t : all) {
    if (t.size() == out.transversality) out.sets.push_back(std::move(t));
  }
  if (out.transversality < out.greedy_bound) {
    out.warnings.push_back("greedy transversality bound " + std::to_string(out.greedy_bound) +
                           " exceeds the smallest minimal transversal size " + std::to_string(out.transversality));
  }
  return out;
}

}  // namespace bji
