#pragma once

#include "hkpr/error.hpp"
#include "hkpr/graph.hpp"
#include "hkpr/hkpr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace hkpr {

/// Support of a vector sorted by value per degree, descending; equal ratios
/// are ordered by ascending vertex id.
struct RankedList {
  std::vector<Vertex> order;

  std::size_t size() const noexcept { return order.size(); }
  bool empty() const noexcept { return order.empty(); }

  /// The first `i` vertices of the ranking.
  std::vector<Vertex> prefix(std::size_t i) const {
    return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(i, order.size()))};
  }
};

/// One segment S_i of a sweep.
struct SweepPoint {
  std::size_t prefix_size = 0;
  Volume volume = 0;
  Volume boundary = 0;
  double ratio = std::numeric_limits<double>::infinity();
};

namespace detail {

inline void check_support_degree(const Graph& g, Vertex v) {
  if (g.degree(v) == 0) {
    throw InvalidArgument("vertex " + std::to_string(v) + " has positive mass but degree 0");
  }
}

} // namespace detail

inline RankedList rank_by_prob_per_degree(const Graph& g, std::span<const double> values) {
  detail::require(values.size() == g.num_vertices(), "vector length does not match the vertex count");
  RankedList ranked;
  for (std::size_t v = 0; v < values.size(); ++v) {
    if (values[v] > 0.0) {
      detail::check_support_degree(g, static_cast<Vertex>(v));
      ranked.order.push_back(static_cast<Vertex>(v));
    }
  }
  std::vector<double> key(values.size(), 0.0);
  for (Vertex v : ranked.order) key[v] = values[v] / static_cast<double>(g.degree(v));
  std::stable_sort(ranked.order.begin(), ranked.order.end(),
                   [&](Vertex a, Vertex b) { return key[a] > key[b]; });
  return ranked;
}

inline RankedList rank_by_prob_per_degree(const Graph& g, const Distribution& p) {
  return rank_by_prob_per_degree(g, p.values());
}

/// Sample counts are compared exactly by cross-multiplication, so ties in
/// count per degree are resolved by id and never by rounding.
inline RankedList rank_by_prob_per_degree(const Graph& g, const ApproxDistribution& p) {
  detail::require(p.size() == g.num_vertices(), "vector length does not match the vertex count");
  std::vector<std::pair<Vertex, std::uint64_t>> entries(p.counts().begin(), p.counts().end());
  for (const auto& e : entries) detail::check_support_degree(g, e.first);
  std::stable_sort(entries.begin(), entries.end(), [&](const auto& a, const auto& b) {
    __extension__ using u128 = unsigned __int128;
    return static_cast<u128>(a.second) * g.degree(b.first) > static_cast<u128>(b.second) * g.degree(a.first);
  });
  RankedList ranked;
  ranked.order.reserve(entries.size());
  for (const auto& e : entries) ranked.order.push_back(e.first);
  return ranked;
}

/// Cheeger ratio from the pieces; +inf when one side has no volume.
inline double segment_ratio(Volume boundary, Volume vol, Volume total) {
  const Volume denom = std::min(vol, total - vol);
  return denom > 0 ? static_cast<double>(boundary) / static_cast<double>(denom)
                   : std::numeric_limits<double>::infinity();
}

/// Evaluates the segments S_1, S_2, ... of a ranking while vol(S_i) stays at
/// or below `max_volume`. Adding v changes the boundary by d_v minus twice
/// the number of its neighbors already in the segment.
inline std::vector<SweepPoint> sweep_cuts(const Graph& g, const RankedList& ranked, Volume max_volume) {
  if (ranked.empty()) throw InvalidArgument("cannot sweep an empty ranking");
  std::vector<char> inside(g.num_vertices(), 0);
  std::vector<SweepPoint> points;
  const Volume total = g.total_volume();
  Volume vol = 0;
  Volume boundary = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const Vertex v = ranked.order[i];
    g.check_vertex(v);
    detail::require(!inside[v], "ranking lists vertex " + std::to_string(v) + " twice");
    const auto d = static_cast<Volume>(g.degree(v));
    if (vol + d > max_volume) break;
    Volume inside_nbrs = 0;
    for (Vertex w : g.neighbors(v)) inside_nbrs += inside[w];
    inside[v] = 1;
    vol += d;
    boundary += d - 2 * inside_nbrs;
    points.push_back({i + 1, vol, boundary, segment_ratio(boundary, vol, total)});
  }
  return points;
}

/// Minimum Cheeger ratio over sweep segments of volume at most 2 * target_volume;
/// +inf when no segment qualifies.
template <typename Vec>
double sigma_local_cheeger(const Graph& g, const Vec& p, Volume target_volume) {
  detail::require(target_volume >= 1, "target volume must be at least 1");
  const RankedList ranked = rank_by_prob_per_degree(g, p);
  if (ranked.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pt : sweep_cuts(g, ranked, 2 * target_volume)) best = std::min(best, pt.ratio);
  return best;
}

/// Lowest-ratio segment among those with volume at most vol(G)/2; the
/// smallest prefix wins ties.
inline SweepPoint min_ratio_sweep(const Graph& g, const RankedList& ranked) {
  const auto points = sweep_cuts(g, ranked, g.total_volume() / 2);
  if (points.empty()) throw InvalidArgument("no sweep segment has volume at most vol(G)/2");
  const auto best = std::min_element(points.begin(), points.end(),
                                     [](const SweepPoint& a, const SweepPoint& b) { return a.ratio < b.ratio; });
  return *best;
}

template <typename Vec>
SweepPoint min_ratio_sweep(const Graph& g, const Vec& p) {
  return min_ratio_sweep(g, rank_by_prob_per_degree(g, p));
}

// =============================================================================
// Parameter formulas
// =============================================================================

/// Diffusion time for a target cluster: t = ln(2 sqrt(vol) / (1 - eps) + 2 eps s) / phi.
inline double compute_t(double phi, double target_volume, double target_size, double eps) {
  if (!(phi > 0.0)) throw InvalidArgument("target Cheeger ratio phi must be positive");
  detail::require(target_volume > 0.0 && target_size > 0.0, "target volume and size must be positive");
  detail::require(eps >= 0.0 && eps < 1.0, "eps must lie in [0, 1)");
  return std::log(2.0 * std::sqrt(target_volume) / (1.0 - eps) + 2.0 * eps * target_size) / phi;
}

/// Teleport probability for the PageRank comparison: phi^2 / (255 ln(100 sqrt(m))).
inline double compute_alpha(double phi, std::size_t num_edges) {
  detail::require(phi > 0.0, "target Cheeger ratio phi must be positive");
  detail::require(num_edges >= 1, "graph must have at least one edge");
  return phi * phi / (255.0 * std::log(100.0 * std::sqrt(static_cast<double>(num_edges))));
}

/// Diffusion time of the exact heat-kernel comparison sweep: t = 2 ln(s) / phi.
inline double compute_t_exact_sweep(double phi, double target_size) {
  detail::require(phi > 0.0, "target Cheeger ratio phi must be positive");
  detail::require(target_size >= 1.0, "target size must be at least 1");
  return 2.0 * std::log(target_size) / phi;
}

// =============================================================================
// Local clustering
// =============================================================================

struct ClusterParams {
  std::size_t target_size = 1;   // s
  Volume target_volume = 1;      // varsigma
  double target_ratio = 0.1;     // phi
  double eps = 0.1;

  void validate(const Graph& g) const {
    detail::require(target_size >= 1, "target cluster size must be at least 1");
    detail::require(target_volume >= 1, "target cluster volume must be at least 1");
    if (4 * target_volume > g.total_volume()) {
      throw InvalidArgument("target volume " + std::to_string(target_volume) + " exceeds vol(G)/4 = " +
                            std::to_string(static_cast<double>(g.total_volume()) / 4.0));
    }
    detail::require(target_ratio > 0.0 && target_ratio < 1.0, "target Cheeger ratio must lie in (0, 1)");
    detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  }

  /// sqrt(8 phi), the ratio every returned cut is certified against.
  double ratio_bound() const { return std::sqrt(8.0 * target_ratio); }
};

enum class SweepMode {
  /// Stop once a segment exceeds twice the target volume; accept the first
  /// segment inside the volume window whose ratio meets the bound.
  Window,
  /// Sweep up to vol(G)/2 and take the lowest-ratio segment; it is reported
  /// as found when its ratio meets the bound.
  Half,
};

enum class Verdict { Found, NoCutFound };

struct ClusterResult {
  Verdict verdict = Verdict::NoCutFound;
  std::vector<Vertex> cut;
  double ratio = std::numeric_limits<double>::infinity();
  Volume volume = 0;
  double t_used = 0.0;
  ClusterParams params;
  std::uint64_t samples = 0;
  std::uint64_t walk_cap = 0;
  std::size_t support_size = 0;

  bool found() const noexcept { return verdict == Verdict::Found; }
};

struct ClusterOptions {
  SweepMode mode = SweepMode::Window;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> walk_cap;
  unsigned threads = 1;
};

/// Sweeps an approximate heat kernel pagerank vector seeded at `u` with
/// t = compute_t(phi, varsigma, s, eps) and returns a certified cut or a
/// NO_CUT_FOUND verdict.
inline ClusterResult cluster_hkpr(const Graph& g, Vertex u, const ClusterParams& params, std::uint64_t rng_seed,
                                  const ClusterOptions& options = {}) {
  params.validate(g);
  g.check_vertex(u);
  if (g.degree(u) == 0) throw InvalidArgument("seed vertex " + std::to_string(u) + " is isolated");

  ClusterResult result;
  result.params = params;
  result.t_used = compute_t(params.target_ratio, static_cast<double>(params.target_volume),
                            static_cast<double>(params.target_size), params.eps);

  HkprParams hp;
  hp.t = result.t_used;
  hp.eps = params.eps;
  hp.samples = options.samples;
  hp.walk_cap = options.walk_cap;
  hp.rng_seed = rng_seed;
  hp.threads = options.threads;
  result.samples = hp.resolved_samples(g.num_vertices());
  result.walk_cap = hp.resolved_walk_cap();

  const ApproxDistribution approx = hkpr_approx_seed(g, u, hp);
  result.support_size = approx.support_size();
  const RankedList ranked = rank_by_prob_per_degree(g, approx);
  const double bound = params.ratio_bound();

  if (options.mode == SweepMode::Half) {
    const SweepPoint best = min_ratio_sweep(g, ranked);
    result.ratio = best.ratio;
    result.volume = best.volume;
    if (best.ratio <= bound) {
      result.verdict = Verdict::Found;
      result.cut = ranked.prefix(best.prefix_size);
    }
    return result;
  }

  const Volume lo = params.target_volume; // compared as 2*vol >= varsigma
  const Volume hi = 2 * params.target_volume;
  for (const auto& pt : sweep_cuts(g, ranked, hi)) {
    if (2 * pt.volume >= lo && pt.ratio <= bound) {
      result.verdict = Verdict::Found;
      result.cut = ranked.prefix(pt.prefix_size);
      result.ratio = pt.ratio;
      result.volume = pt.volume;
      break;
    }
  }
  if (result.found() && !(2 * result.volume >= lo && result.volume <= hi && result.ratio <= bound)) {
    throw Error("internal: cut outside the certified window");
  }
  return result;
}

// =============================================================================
// Three-way comparison
// =============================================================================

struct LabeledSweep {
  std::string algorithm;
  /// t for the heat-kernel sweeps, alpha for PageRank.
  double parameter = 0.0;
  SweepPoint point;
};

struct ClusterComparison {
  LabeledSweep eps_hkpr;
  LabeledSweep hkpr;
  LabeledSweep pr;
};

/// Lowest-ratio sweeps (volume <= vol(G)/2) over an approximate heat kernel
/// pagerank vector, an exact one with t = 2 ln(s)/phi, and an exact
/// personalized PageRank vector, all seeded at `u`.
inline ClusterComparison compare_clusters(const Graph& g, Vertex u, const ClusterParams& params,
                                          std::uint64_t rng_seed, const ClusterOptions& options = {}) {
  params.validate(g);
  g.check_vertex(u);
  if (g.degree(u) == 0) throw InvalidArgument("seed vertex " + std::to_string(u) + " is isolated");

  ClusterComparison out;
  const Distribution seed = Distribution::indicator(g.num_vertices(), u);

  HkprParams hp;
  hp.t = compute_t(params.target_ratio, static_cast<double>(params.target_volume),
                   static_cast<double>(params.target_size), params.eps);
  hp.eps = params.eps;
  hp.samples = options.samples;
  hp.walk_cap = options.walk_cap;
  hp.rng_seed = rng_seed;
  hp.threads = options.threads;
  out.eps_hkpr = {"eHKPR", hp.t, min_ratio_sweep(g, hkpr_approx_seed(g, u, hp))};

  const double t_exact = compute_t_exact_sweep(params.target_ratio, static_cast<double>(params.target_size));
  out.hkpr = {"HKPR", t_exact, min_ratio_sweep(g, hkpr_exact(g, seed, t_exact))};

  const double alpha = compute_alpha(params.target_ratio, g.num_edges());
  out.pr = {"PR", alpha, min_ratio_sweep(g, pagerank_exact(g, seed, alpha))};
  return out;
}

} // namespace hkpr
