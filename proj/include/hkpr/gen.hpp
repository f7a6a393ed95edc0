#pragma once

#include "hkpr/error.hpp"
#include "hkpr/graph.hpp"
#include "hkpr/rng.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace hkpr {

struct GenParams {
  std::size_t n = 100;
  std::size_t d = 5;
  double p = 0.1;
  std::uint64_t rng_seed = 0;

  void validate() const {
    detail::require(d >= 1, "neighbor parameter d must be at least 1");
    detail::require(n > d, "vertex count n must exceed d");
    detail::require(p >= 0.0 && p <= 1.0, "probability p must lie in [0, 1]");
  }
};

namespace detail {

// Mutable adjacency used while growing or rewiring a graph.
class EdgeBuilder {
public:
  explicit EdgeBuilder(std::size_t n) : adj_(n) {}

  bool has_edge(Vertex u, Vertex v) const { return adj_[u].count(v) != 0; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  const std::set<Vertex>& neighbors(Vertex v) const { return adj_[v]; }

  void add(Vertex u, Vertex v) {
    adj_[u].insert(v);
    adj_[v].insert(u);
  }
  void remove(Vertex u, Vertex v) {
    adj_[u].erase(v);
    adj_[v].erase(u);
  }

  Graph build() const {
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < adj_.size(); ++u)
      for (Vertex v : adj_[u])
        if (u < v) edges.emplace_back(static_cast<Vertex>(u), v);
    return Graph::from_edges(adj_.size(), edges);
  }

private:
  std::vector<std::set<Vertex>> adj_;
};

inline Graph watts_strogatz_once(const GenParams& params, SplitMix64& gen) {
  const std::size_t n = params.n;
  const std::size_t half = params.d / 2;
  EdgeBuilder b(n);
  for (std::size_t j = 1; j <= half; ++j)
    for (std::size_t u = 0; u < n; ++u) b.add(static_cast<Vertex>(u), static_cast<Vertex>((u + j) % n));

  // Rewire ring edges (u, u+j) one offset at a time, as in the classic model.
  for (std::size_t j = 1; j <= half; ++j) {
    for (std::size_t ui = 0; ui < n; ++ui) {
      if (uniform01(gen) >= params.p) continue;
      const auto u = static_cast<Vertex>(ui);
      const auto v = static_cast<Vertex>((ui + j) % n);
      if (!b.has_edge(u, v) || b.degree(u) >= n - 1) continue;
      Vertex w = 0;
      do {
        w = static_cast<Vertex>(uniform_below(gen, n));
      } while (w == u || b.has_edge(u, w));
      b.remove(u, v);
      b.add(u, w);
    }
  }
  return b.build();
}

// Preferential attachment growth with an optional triangle-closing step.
// The urn holds each endpoint once per incident edge plus the d initial
// vertices, so draws are proportional to degree.
inline Graph preferential_growth(const GenParams& params, double triangle_prob) {
  const std::size_t n = params.n;
  const std::size_t d = params.d;
  SplitMix64 gen(derive_seed(params.rng_seed, {0x6261}));
  EdgeBuilder b(n);
  std::vector<Vertex> urn;
  for (std::size_t v = 0; v < d; ++v) urn.push_back(static_cast<Vertex>(v));

  auto draw_target = [&](Vertex source) {
    for (;;) {
      const Vertex w = urn[uniform_below(gen, urn.size())];
      if (w != source && !b.has_edge(source, w)) return w;
    }
  };

  for (std::size_t s = d; s < n; ++s) {
    const auto source = static_cast<Vertex>(s);
    Vertex target = draw_target(source);
    b.add(source, target);
    urn.push_back(target);
    for (std::size_t added = 1; added < d; ++added) {
      if (triangle_prob > 0.0 && uniform01(gen) < triangle_prob) {
        std::vector<Vertex> closing;
        for (Vertex w : b.neighbors(target))
          if (w != source && !b.has_edge(source, w)) closing.push_back(w);
        if (!closing.empty()) {
          const Vertex w = closing[uniform_below(gen, closing.size())];
          b.add(source, w);
          urn.push_back(w);
          continue;
        }
      }
      target = draw_target(source);
      b.add(source, target);
      urn.push_back(target);
    }
    for (std::size_t k = 0; k < d; ++k) urn.push_back(source);
  }
  return b.build();
}

} // namespace detail

/// Ring lattice with floor(d/2) neighbors per side, each edge rewired with
/// probability p to a uniformly chosen non-neighbor. Regenerated from a fresh
/// substream until connected, at most 100 attempts.
inline Graph watts_strogatz_connected(const GenParams& params) {
  params.validate();
  detail::require(params.d / 2 >= 1, "Watts-Strogatz needs d >= 2 (at least one neighbor per side)");
  constexpr int kAttempts = 100;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    SplitMix64 gen(derive_seed(params.rng_seed, {0x7773, static_cast<std::uint64_t>(attempt)}));
    Graph g = detail::watts_strogatz_once(params, gen);
    if (is_connected(g)) return g;
  }
  throw Error("Watts-Strogatz: no connected graph after " + std::to_string(kAttempts) + " attempts");
}

/// Barabasi-Albert: d initial isolated vertices, then each new vertex joins d
/// distinct existing vertices drawn proportionally to degree. m = d (n - d).
inline Graph barabasi_albert(const GenParams& params) {
  params.validate();
  return detail::preferential_growth(params, 0.0);
}

/// Holme-Kim powerlaw cluster graph: Barabasi-Albert growth where, after each
/// preferential edge (v, w), the next edge closes a triangle through a random
/// neighbor of w with probability p. m = d (n - d).
inline Graph powerlaw_cluster(const GenParams& params) {
  params.validate();
  return detail::preferential_growth(params, params.p);
}

} // namespace hkpr
