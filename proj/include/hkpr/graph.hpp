#pragma once

#include "hkpr/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hkpr {

using Vertex = std::uint32_t;
using Volume = std::int64_t;
using Edge = std::pair<Vertex, Vertex>;

/// What was discarded while building a simple graph from raw edges.
struct IngestStats {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Neighbor lists are sorted and free of duplicates and self-loops. Vertices
/// are dense ids 0..n-1; an optional label table maps them back to the names
/// used in the input file.
class Graph {
public:
  Graph() = default;

  /// Builds a graph on `n` vertices. Edges are symmetrized; self-loops and
  /// repeated edges are dropped and counted in `stats` when given.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges, IngestStats* stats = nullptr,
                          std::vector<std::string> labels = {}) {
    detail::require(n <= std::numeric_limits<Vertex>::max(), "graph too large for 32-bit vertex ids");
    detail::require(labels.empty() || labels.size() == n, "label table size must equal vertex count");

    std::vector<Edge> arcs;
    arcs.reserve(2 * edges.size());
    IngestStats local;
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n) {
        throw InvalidArgument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                              ") references a vertex outside 0.." + std::to_string(n ? n - 1 : 0));
      }
      if (u == v) {
        ++local.self_loops_dropped;
        continue;
      }
      arcs.emplace_back(u, v);
      arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    const auto last = std::unique(arcs.begin(), arcs.end());
    local.duplicates_dropped = static_cast<std::size_t>(arcs.end() - last) / 2;
    arcs.erase(last, arcs.end());

    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (const auto& arc : arcs) ++g.offsets_[arc.first + 1];
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
    g.adjacency_.reserve(arcs.size());
    for (const auto& arc : arcs) g.adjacency_.push_back(arc.second);
    g.num_edges_ = arcs.size() / 2;
    g.labels_ = std::move(labels);
    if (stats) *stats = local;
    return g;
  }

  std::size_t num_vertices() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return num_edges_; }
  /// vol(G) = 2m.
  Volume total_volume() const noexcept { return static_cast<Volume>(2 * num_edges_); }

  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  bool has_edge(Vertex u, Vertex v) const noexcept {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  bool contains(Vertex v) const noexcept { return v < num_vertices(); }

  /// Name of `v` in the source file, or its decimal id when unlabeled.
  std::string label(Vertex v) const { return labels_.empty() ? std::to_string(v) : labels_[v]; }

  std::optional<Vertex> find_label(std::string_view name) const {
    if (labels_.empty()) {
      Vertex v = 0;
      const auto* end = name.data() + name.size();
      const auto [ptr, ec] = std::from_chars(name.data(), end, v);
      if (ec == std::errc() && ptr == end && contains(v)) return v;
      return std::nullopt;
    }
    for (std::size_t v = 0; v < labels_.size(); ++v) {
      if (labels_[v] == name) return static_cast<Vertex>(v);
    }
    return std::nullopt;
  }

  void check_vertex(Vertex v) const {
    if (!contains(v)) {
      throw InvalidArgument("vertex " + std::to_string(v) + " out of range for graph on " +
                            std::to_string(num_vertices()) + " vertices");
    }
  }

private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adjacency_;
  std::vector<std::string> labels_;
  std::size_t num_edges_ = 0;
};

/// A subset of the vertices of one graph with its volume cached.
class VertexSet {
public:
  VertexSet() = default;

  VertexSet(const Graph& g, std::vector<Vertex> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (Vertex v : members_) {
      g.check_vertex(v);
      volume_ += static_cast<Volume>(g.degree(v));
    }
  }

  static VertexSet all(const Graph& g) {
    std::vector<Vertex> vs(g.num_vertices());
    for (std::size_t v = 0; v < vs.size(); ++v) vs[v] = static_cast<Vertex>(v);
    return VertexSet(g, std::move(vs));
  }

  std::span<const Vertex> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  Volume volume() const noexcept { return volume_; }

  bool contains(Vertex v) const noexcept { return std::binary_search(members_.begin(), members_.end(), v); }

  VertexSet complement(const Graph& g) const {
    std::vector<Vertex> rest;
    rest.reserve(g.num_vertices() - std::min(g.num_vertices(), members_.size()));
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      if (!contains(static_cast<Vertex>(v))) rest.push_back(static_cast<Vertex>(v));
    }
    return VertexSet(g, std::move(rest));
  }

  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.members_ == b.members_; }

private:
  std::vector<Vertex> members_;
  Volume volume_ = 0;
};

// -----------------------------------------------------------------------------
// Edge-list ingestion
// -----------------------------------------------------------------------------

struct EdgeListGraph {
  Graph graph;
  IngestStats stats;
};

/// Reads whitespace-separated vertex pairs. Lines starting with '#' and blank
/// lines are skipped. Labels are arbitrary tokens, numbered in order of first
/// appearance.
inline EdgeListGraph load_edge_list(std::istream& in) {
  std::unordered_map<std::string, Vertex> ids;
  std::vector<std::string> labels;
  std::vector<Edge> edges;

  auto intern = [&](const std::string& token) {
    auto [it, inserted] = ids.try_emplace(token, static_cast<Vertex>(labels.size()));
    if (inserted) labels.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ParseError(line_no, "expected exactly two vertex labels, got '" + line + "'");
    }
    const Vertex u = intern(a);
    const Vertex v = intern(b);
    edges.emplace_back(u, v);
  }
  if (edges.empty()) throw ParseError(line_no, "edge list is empty");

  EdgeListGraph out;
  const std::size_t n = labels.size();
  out.graph = Graph::from_edges(n, edges, &out.stats, std::move(labels));
  return out;
}

/// Writes one `label label` line per undirected edge, smaller id first.
inline void write_edge_list(const Graph& g, std::ostream& out) {
  for (std::size_t u = 0; u < g.num_vertices(); ++u) {
    for (Vertex v : g.neighbors(static_cast<Vertex>(u))) {
      if (u < v) out << g.label(static_cast<Vertex>(u)) << ' ' << g.label(v) << '\n';
    }
  }
}

// -----------------------------------------------------------------------------
// Set quantities
// -----------------------------------------------------------------------------

inline Volume volume(const Graph& g, const VertexSet& s) {
  Volume vol = 0;
  for (Vertex v : s.members()) {
    g.check_vertex(v);
    vol += static_cast<Volume>(g.degree(v));
  }
  return vol;
}

/// Number of edges with exactly one endpoint in `s`.
inline Volume edge_boundary(const Graph& g, const VertexSet& s) {
  std::vector<char> inside(g.num_vertices(), 0);
  for (Vertex v : s.members()) {
    g.check_vertex(v);
    inside[v] = 1;
  }
  Volume crossing = 0;
  for (Vertex v : s.members()) {
    for (Vertex w : g.neighbors(v)) crossing += inside[w] ? 0 : 1;
  }
  return crossing;
}

/// |boundary(S)| / min(vol(S), vol(V \ S)).
inline double cheeger_ratio(const Graph& g, const VertexSet& s) {
  const Volume vol = volume(g, s);
  const Volume denom = std::min(vol, g.total_volume() - vol);
  if (s.empty() || denom <= 0) {
    throw InvalidArgument("Cheeger ratio undefined: set is empty or one side has zero volume");
  }
  return static_cast<double>(edge_boundary(g, s)) / static_cast<double>(denom);
}

/// Minimum Cheeger ratio over every nonempty subset of `s`, by exhaustive
/// enumeration in Gray-code order. Subsets whose ratio is undefined (zero
/// volume on one side) are skipped.
inline double local_cheeger_brute(const Graph& g, const VertexSet& s) {
  constexpr std::size_t kMaxSize = 20;
  detail::require(!s.empty(), "local Cheeger ratio of an empty set");
  if (s.size() > kMaxSize) {
    throw InvalidArgument("exhaustive local Cheeger ratio limited to " + std::to_string(kMaxSize) +
                          " vertices, got " + std::to_string(s.size()));
  }

  const auto members = s.members();
  std::vector<char> inside(g.num_vertices(), 0);
  const Volume total = g.total_volume();
  Volume vol = 0;
  Volume boundary = 0;
  double best = std::numeric_limits<double>::infinity();

  const std::uint64_t count = std::uint64_t{1} << members.size();
  for (std::uint64_t step = 1; step < count; ++step) {
    const auto bit = static_cast<std::size_t>(__builtin_ctzll(step));
    const Vertex v = members[bit];
    Volume inside_nbrs = 0;
    for (Vertex w : g.neighbors(v)) inside_nbrs += inside[w];
    const auto d = static_cast<Volume>(g.degree(v));
    if (inside[v]) {
      inside[v] = 0;
      vol -= d;
      boundary -= d - 2 * inside_nbrs;
    } else {
      inside[v] = 1;
      vol += d;
      boundary += d - 2 * inside_nbrs;
    }
    const Volume denom = std::min(vol, total - vol);
    if (denom > 0) best = std::min(best, static_cast<double>(boundary) / static_cast<double>(denom));
  }
  if (best == std::numeric_limits<double>::infinity()) {
    throw InvalidArgument("no subset of the set has a defined Cheeger ratio");
  }
  return best;
}

/// Component id per vertex, numbered in order of smallest member.
inline std::vector<std::size_t> connected_components(const Graph& g) {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp(g.num_vertices(), unset);
  std::vector<Vertex> stack;
  std::size_t next = 0;
  for (std::size_t root = 0; root < g.num_vertices(); ++root) {
    if (comp[root] != unset) continue;
    comp[root] = next;
    stack.push_back(static_cast<Vertex>(root));
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g.neighbors(v)) {
        if (comp[w] == unset) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

inline bool is_connected(const Graph& g) {
  const auto comp = connected_components(g);
  return std::all_of(comp.begin(), comp.end(), [](std::size_t c) { return c == 0; });
}

} // namespace hkpr
