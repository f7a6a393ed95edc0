#pragma once

#include "hkpr/error.hpp"
#include "hkpr/graph.hpp"
#include "hkpr/hkpr.hpp"
#include "hkpr/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace hkpr {

struct ErrorReport {
  double avg_l1 = 0.0;
  double eps_error = 0.0;
  double intersection_difference = 0.0;
  double topk_difference = 0.0;
  std::size_t k_used = 0;
};

inline constexpr std::size_t kDefaultTopK = 10;

/// (1/n) sum_v |exact(v) - approx(v)|
inline double avg_l1_error(std::span<const double> exact, std::span<const double> approx) {
  if (exact.size() != approx.size()) throw InvalidArgument("vectors differ in length");
  if (exact.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t v = 0; v < exact.size(); ++v) total += std::abs(exact[v] - approx[v]);
  return total / static_cast<double>(exact.size());
}

inline double avg_l1_error(const Distribution& exact, const ApproxDistribution& approx) {
  return avg_l1_error(exact.values(), approx.to_dense().values());
}

/// Error in excess of an eps-approximation: on the support of approx,
/// max(|exact - approx| - eps*exact, 0); off it, max(exact - eps, 0).
inline double eps_error(std::span<const double> exact, std::span<const double> approx, double eps) {
  if (exact.size() != approx.size()) throw InvalidArgument("vectors differ in length");
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  double total = 0.0;
  for (std::size_t v = 0; v < exact.size(); ++v) {
    if (approx[v] > 0.0) total += std::max(std::abs(exact[v] - approx[v]) - eps * exact[v], 0.0);
    else total += std::max(exact[v] - eps, 0.0);
  }
  return total;
}

inline double eps_error(const Distribution& exact, const ApproxDistribution& approx, double eps) {
  return eps_error(exact.values(), approx.to_dense().values(), eps);
}

/// Extends a ranking to all n vertices by appending the unranked ones in
/// ascending id order.
inline std::vector<Vertex> pad_ranking(std::span<const Vertex> ranking, std::size_t n) {
  std::vector<char> seen(n, 0);
  std::vector<Vertex> out;
  out.reserve(n);
  for (Vertex v : ranking) {
    detail::require(v < n, "ranked vertex outside the universe");
    detail::require(!seen[v], "ranking lists a vertex twice");
    seen[v] = 1;
    out.push_back(v);
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!seen[v]) out.push_back(static_cast<Vertex>(v));
  return out;
}

/// (1/k) sum_{i<=k} |A_i xor B_i| / (2i), where A_i is the set of the first
/// i entries. Both rankings must be permutations of the same universe.
inline double topk_intersection_difference(std::span<const Vertex> a, std::span<const Vertex> b, std::size_t k) {
  if (a.size() != b.size()) throw InvalidArgument("rankings cover different universes");
  const std::size_t n = a.size();
  if (k > n) throw InvalidArgument("k exceeds the ranking length");
  std::vector<char> in_a(n, 0), in_b(n, 0), universe(n, 0);
  for (Vertex v : a) {
    if (v >= n || universe[v]) throw InvalidArgument("rankings cover different universes");
    universe[v] = 1;
  }
  for (Vertex v : b) {
    if (v >= n || !universe[v] || universe[v] == 2) throw InvalidArgument("rankings cover different universes");
    universe[v] = 2;
  }
  if (k == 0) return 0.0;

  std::size_t common = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const Vertex x = a[i];
    const Vertex y = b[i];
    in_a[x] = 1;
    if (in_b[x]) ++common;
    in_b[y] = 1;
    if (in_a[y]) ++common;
    const double prefix = static_cast<double>(i + 1);
    const double sym_diff = 2.0 * (prefix - static_cast<double>(common));
    total += sym_diff / (2.0 * prefix);
  }
  return total / static_cast<double>(k);
}

inline double intersection_difference(std::span<const Vertex> a, std::span<const Vertex> b) {
  return topk_intersection_difference(a, b, a.size());
}

/// Intersection differences between two rankings of an n-vertex universe,
/// padding each to full length first.
inline double intersection_difference(const RankedList& a, const RankedList& b, std::size_t n) {
  const auto pa = pad_ranking(a.order, n);
  const auto pb = pad_ranking(b.order, n);
  return intersection_difference(pa, pb);
}

inline double topk_intersection_difference(const RankedList& a, const RankedList& b, std::size_t n, std::size_t k) {
  const auto pa = pad_ranking(a.order, n);
  const auto pb = pad_ranking(b.order, n);
  return topk_intersection_difference(pa, pb, k);
}

/// Vertices with a positive value, highest value first, ties by id.
inline RankedList rank_by_value(std::span<const double> values) {
  RankedList ranked;
  for (std::size_t v = 0; v < values.size(); ++v)
    if (values[v] > 0.0) ranked.order.push_back(static_cast<Vertex>(v));
  std::stable_sort(ranked.order.begin(), ranked.order.end(),
                   [&](Vertex a, Vertex b) { return values[a] > values[b]; });
  return ranked;
}

inline RankedList rank_by_value(const Distribution& p) { return rank_by_value(p.values()); }

/// Ranks by raw sample count, so no rounding enters the comparison.
inline RankedList rank_by_value(const ApproxDistribution& p) {
  std::vector<std::pair<Vertex, std::uint64_t>> entries(p.counts().begin(), p.counts().end());
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.second > b.second || (a.second == b.second && a.first < b.first);
  });
  RankedList ranked;
  ranked.order.reserve(entries.size());
  for (const auto& e : entries) ranked.order.push_back(e.first);
  return ranked;
}

/// All four comparison measures of an approximate vector against an exact
/// one. Both rankings order vertices by their vector values.
inline ErrorReport compare_vectors(const Distribution& exact, std::span<const double> approx,
                                   const RankedList& approx_ranking, double eps, std::size_t k = kDefaultTopK) {
  ErrorReport report;
  const std::size_t n = exact.size();
  report.avg_l1 = avg_l1_error(exact.values(), approx);
  report.eps_error = eps_error(exact.values(), approx, eps);
  const RankedList exact_ranking = rank_by_value(exact);
  report.k_used = std::min(k, n);
  report.intersection_difference = intersection_difference(exact_ranking, approx_ranking, n);
  report.topk_difference = topk_intersection_difference(exact_ranking, approx_ranking, n, report.k_used);
  return report;
}

inline ErrorReport compare_vectors(const Distribution& exact, const ApproxDistribution& approx, double eps,
                                   std::size_t k = kDefaultTopK) {
  const Distribution dense = approx.to_dense();
  return compare_vectors(exact, dense.values(), rank_by_value(approx), eps, k);
}

} // namespace hkpr
