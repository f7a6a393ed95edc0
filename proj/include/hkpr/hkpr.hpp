#pragma once

#include "hkpr/error.hpp"
#include "hkpr/graph.hpp"
#include "hkpr/poisson.hpp"
#include "hkpr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hkpr {

// =============================================================================
// Vectors over the vertex set
// =============================================================================

/// Dense nonnegative per-vertex values; a probability vector when it sums to 1.
class Distribution {
public:
  Distribution() = default;
  explicit Distribution(std::vector<double> values) : values_(std::move(values)) {}

  static Distribution zeros(std::size_t n) { return Distribution(std::vector<double>(n, 0.0)); }

  /// chi_u, all mass on one vertex.
  static Distribution indicator(std::size_t n, Vertex u) {
    detail::require(u < n, "indicator vertex out of range");
    std::vector<double> v(n, 0.0);
    v[u] = 1.0;
    return Distribution(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](Vertex v) const noexcept { return values_[v]; }
  double& operator[](Vertex v) noexcept { return values_[v]; }
  std::span<const double> values() const noexcept { return values_; }

  double sum() const noexcept { return std::accumulate(values_.begin(), values_.end(), 0.0); }

  /// Mass on a vertex set.
  double mass(const VertexSet& s) const {
    double total = 0.0;
    for (Vertex v : s.members()) total += values_.at(v);
    return total;
  }

private:
  std::vector<double> values_;
};

/// Sparse sample counts normalized by the number of samples r.
class ApproxDistribution {
public:
  ApproxDistribution() = default;

  /// `counts` holds (vertex, count) pairs; they are sorted and must sum to `samples`.
  ApproxDistribution(std::size_t n, std::uint64_t samples, std::vector<std::pair<Vertex, std::uint64_t>> counts)
      : n_(n), samples_(samples), counts_(std::move(counts)) {
    std::sort(counts_.begin(), counts_.end());
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      detail::require(counts_[i].first < n_, "sample count recorded for an out-of-range vertex");
      detail::require(i == 0 || counts_[i - 1].first != counts_[i].first, "duplicate vertex in sample counts");
      detail::require(counts_[i].second > 0, "zero entries do not belong in the support");
      total += counts_[i].second;
    }
    detail::require(total == samples_, "sample counts must sum to the sample count");
  }

  std::size_t size() const noexcept { return n_; }
  std::uint64_t samples() const noexcept { return samples_; }
  std::span<const std::pair<Vertex, std::uint64_t>> counts() const noexcept { return counts_; }
  std::size_t support_size() const noexcept { return counts_.size(); }

  std::uint64_t count(Vertex v) const noexcept {
    const auto it = std::lower_bound(counts_.begin(), counts_.end(), std::pair<Vertex, std::uint64_t>{v, 0});
    return (it != counts_.end() && it->first == v) ? it->second : 0;
  }

  double value(Vertex v) const noexcept {
    return static_cast<double>(count(v)) / static_cast<double>(samples_);
  }

  Distribution to_dense() const {
    std::vector<double> out(n_, 0.0);
    for (const auto& [v, c] : counts_) out[v] = static_cast<double>(c) / static_cast<double>(samples_);
    return Distribution(std::move(out));
  }

private:
  std::size_t n_ = 0;
  std::uint64_t samples_ = 0;
  std::vector<std::pair<Vertex, std::uint64_t>> counts_;
};

// =============================================================================
// Parameters
// =============================================================================

/// r = ceil((16 / eps^3) ln n), at least 1.
inline std::uint64_t default_sample_count(double eps, std::size_t n) {
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  const double r = std::ceil(16.0 / (eps * eps * eps) * std::log(static_cast<double>(std::max<std::size_t>(n, 1))));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(r));
}

/// K = ceil(c ln(1/eps) / ln ln(1/eps)), at least 1. For eps >= 1/e the
/// denominator is not positive and K = ceil(c ln(1/eps)) is used instead.
inline std::uint64_t default_walk_cap(double eps, double c = 4.0) {
  detail::require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  detail::require(c > 0.0, "walk-length constant must be positive");
  const double log_inv = std::log(1.0 / eps);
  const double loglog = std::log(log_inv);
  const double k = loglog > 0.0 ? c * log_inv / loglog : c * log_inv;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(k)));
}

struct HkprParams {
  double t = 0.0;
  double eps = 0.1;
  /// Sample count r; default_sample_count(eps, n) when unset.
  std::optional<std::uint64_t> samples;
  /// Walk-length cap K; default_walk_cap(eps, walk_cap_constant) when unset.
  std::optional<std::uint64_t> walk_cap;
  double walk_cap_constant = 4.0;
  std::uint64_t rng_seed = 0;
  /// Worker threads for the sampling loop. Output does not depend on it.
  unsigned threads = 1;

  std::uint64_t resolved_samples(std::size_t n) const { return samples ? *samples : default_sample_count(eps, n); }
  std::uint64_t resolved_walk_cap() const { return walk_cap ? *walk_cap : default_walk_cap(eps, walk_cap_constant); }
};

// =============================================================================
// Random walks
// =============================================================================

/// Endpoint of a `steps`-step simple random walk from `u`.
template <typename Gen>
Vertex random_walk(const Graph& g, Vertex u, std::uint64_t steps, Gen& gen) {
  g.check_vertex(u);
  Vertex at = u;
  for (std::uint64_t i = 0; i < steps; ++i) {
    const auto nb = g.neighbors(at);
    if (nb.empty()) throw InvalidArgument("random walk reached isolated vertex " + std::to_string(at));
    at = nb[uniform_below(gen, nb.size())];
  }
  return at;
}

namespace detail {

inline void check_probability_vector(const Graph& g, const Distribution& f) {
  require(f.size() == g.num_vertices(), "distribution length does not match the vertex count");
  double total = 0.0;
  for (std::size_t v = 0; v < f.size(); ++v) {
    const double x = f[static_cast<Vertex>(v)];
    require(std::isfinite(x) && x >= 0.0, "distribution has a negative or non-finite entry");
    require(x == 0.0 || g.degree(static_cast<Vertex>(v)) > 0,
            "distribution puts mass on isolated vertex " + std::to_string(v));
    total += x;
  }
  require(std::abs(total - 1.0) <= 1e-6, "distribution does not sum to 1");
}

// out = in * P, i.e. out(w) = sum_{x ~ w} in(x) / d_x.
inline void step_transition(const Graph& g, std::span<const double> in, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t x = 0; x < in.size(); ++x) {
    if (in[x] == 0.0) continue;
    const auto nb = g.neighbors(static_cast<Vertex>(x));
    const double share = in[x] / static_cast<double>(nb.size());
    for (Vertex w : nb) out[w] += share;
  }
}

} // namespace detail

// =============================================================================
// Exact vectors
// =============================================================================

/// Default truncation tolerance for the exact solvers.
inline constexpr double kExactTolerance = 1e-9;

/// rho_{t,f} = e^{-t} sum_k t^k/k! f P^k, summed up to the first N whose
/// Poisson tail is certified below `tol`.
inline Distribution hkpr_exact(const Graph& g, const Distribution& f, double t, double tol = kExactTolerance) {
  detail::require(t >= 0.0, "temperature t must be nonnegative");
  detail::require(tol > 0.0, "tolerance must be positive");
  detail::check_probability_vector(g, f);
  if (t == 0.0) return f;

  const std::size_t last = poisson_truncation(t, tol);
  const auto weights = poisson_weights(t, last);
  const std::size_t n = g.num_vertices();

  std::vector<double> walk(f.values().begin(), f.values().end());
  std::vector<double> next(n);
  std::vector<double> result(n, 0.0);
  for (std::size_t k = 0;; ++k) {
    for (std::size_t v = 0; v < n; ++v) result[v] += weights[k] * walk[v];
    if (k == last) break;
    detail::step_transition(g, walk, next);
    walk.swap(next);
  }
  return Distribution(std::move(result));
}

namespace detail {

// Solves pr (I - (1-alpha) P) = alpha f with conjugate gradients on the
// symmetric form (I - (1-alpha) D^{-1/2} A D^{-1/2}) z = alpha D^{-1/2} f^T,
// pr = D^{1/2} z. Stops once the fixed-point residual in L1 is below tol/10.
inline std::vector<double> pagerank_cg(const Graph& g, const Distribution& f, double alpha, double tol) {
  const std::size_t n = g.num_vertices();
  std::vector<double> sqrt_deg(n);
  for (std::size_t v = 0; v < n; ++v) sqrt_deg[v] = std::sqrt(static_cast<double>(g.degree(static_cast<Vertex>(v))));

  auto apply = [&](const std::vector<double>& z, std::vector<double>& out) {
    for (std::size_t v = 0; v < n; ++v) {
      if (sqrt_deg[v] == 0.0) {
        out[v] = z[v];
        continue;
      }
      double acc = 0.0;
      for (Vertex w : g.neighbors(static_cast<Vertex>(v))) acc += z[w] / sqrt_deg[w];
      out[v] = z[v] - (1.0 - alpha) * acc / sqrt_deg[v];
    }
  };
  auto residual_l1 = [&](const std::vector<double>& r) {
    double s = 0.0;
    for (std::size_t v = 0; v < n; ++v) s += sqrt_deg[v] * std::abs(r[v]);
    return s;
  };

  std::vector<double> b(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    if (sqrt_deg[v] > 0.0) b[v] = alpha * f[static_cast<Vertex>(v)] / sqrt_deg[v];
  }
  // Start from the stationary direction scaled to unit mass; it is the
  // alpha -> 0 limit, so few iterations are spent on the tiny eigenvalue.
  std::vector<double> z(n, 0.0);
  const double vol = static_cast<double>(g.total_volume());
  for (std::size_t v = 0; v < n; ++v) z[v] = sqrt_deg[v] / vol;

  std::vector<double> r(n), p(n), ap(n);
  apply(z, ap);
  for (std::size_t v = 0; v < n; ++v) r[v] = b[v] - ap[v];
  p = r;
  double rr = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
  const std::size_t max_iter = 20 * n + 1000;
  for (std::size_t it = 0; it < max_iter && residual_l1(r) >= tol / 10.0; ++it) {
    apply(p, ap);
    const double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
    if (!(pap > 0.0)) break;
    const double step = rr / pap;
    for (std::size_t v = 0; v < n; ++v) {
      z[v] += step * p[v];
      r[v] -= step * ap[v];
    }
    const double rr_next = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t v = 0; v < n; ++v) p[v] = r[v] + beta * p[v];
  }

  std::vector<double> pr(n);
  for (std::size_t v = 0; v < n; ++v) pr[v] = std::max(0.0, sqrt_deg[v] * z[v]);
  const double total = std::accumulate(pr.begin(), pr.end(), 0.0);
  if (total > 1.0) {
    for (double& x : pr) x /= total;
  }
  return pr;
}

} // namespace detail

/// Above this many series terms times edges, pagerank_exact switches from the
/// truncated geometric series to a conjugate-gradient solve.
inline constexpr double kPagerankSeriesBudget = 5e7;

/// pr_{alpha,f} = alpha sum_k (1-alpha)^k f P^k. The series is truncated once
/// the remaining mass (1-alpha)^{N+1} drops below `tol`. When that needs more
/// work than kPagerankSeriesBudget (tiny alpha), the same vector is obtained
/// from the linear system pr = alpha f + (1-alpha) pr P instead.
inline Distribution pagerank_exact(const Graph& g, const Distribution& f, double alpha,
                                   double tol = kExactTolerance) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1), got " + std::to_string(alpha));
  detail::require(tol > 0.0, "tolerance must be positive");
  detail::check_probability_vector(g, f);

  const double decay = 1.0 - alpha;
  // smallest N with decay^{N+1} < tol
  const double terms = decay <= 0.0 ? 1.0 : std::floor(std::log(tol) / std::log(decay));
  const double work = (terms + 1.0) * static_cast<double>(g.total_volume() + g.num_vertices());
  if (work > kPagerankSeriesBudget) return Distribution(detail::pagerank_cg(g, f, alpha, tol));

  const std::size_t n = g.num_vertices();
  std::vector<double> walk(f.values().begin(), f.values().end());
  std::vector<double> next(n);
  std::vector<double> result(n, 0.0);
  double weight = alpha;
  double remaining = decay; // (1-alpha)^{k+1}
  for (;;) {
    for (std::size_t v = 0; v < n; ++v) result[v] += weight * walk[v];
    if (remaining < tol) break;
    detail::step_transition(g, walk, next);
    walk.swap(next);
    weight *= decay;
    remaining *= decay;
  }
  return Distribution(std::move(result));
}

/// f_S(u) = d_u / vol(S) on S, zero elsewhere.
inline Distribution degree_seed_dist(const Graph& g, const VertexSet& s) {
  const Volume vol = volume(g, s);
  if (s.empty() || vol <= 0) throw InvalidArgument("seed set must be nonempty with positive volume");
  std::vector<double> out(g.num_vertices(), 0.0);
  for (Vertex v : s.members()) out[v] = static_cast<double>(g.degree(v)) / static_cast<double>(vol);
  return Distribution(std::move(out));
}

// =============================================================================
// Monte-Carlo approximation
// =============================================================================

/// Approximates rho_{t,u} by r walks from u. Each walk draws its length from
/// Poisson(t), truncates it at K, and deposits one unit at its endpoint.
/// Iteration i uses substream(rng_seed, i), so the counts are identical for
/// any thread count.
inline ApproxDistribution hkpr_approx_seed(const Graph& g, Vertex u, const HkprParams& params) {
  if (!(params.eps > 0.0 && params.eps < 1.0)) {
    throw InvalidArgument("eps must lie in (0, 1), got " + std::to_string(params.eps));
  }
  detail::require(params.t >= 0.0, "temperature t must be nonnegative");
  g.check_vertex(u);
  if (g.degree(u) == 0) throw InvalidArgument("seed vertex " + std::to_string(u) + " is isolated");

  const std::uint64_t samples = params.resolved_samples(g.num_vertices());
  const std::uint64_t cap = params.resolved_walk_cap();
  detail::require(samples >= 1, "sample count must be positive");

  using CountMap = std::unordered_map<Vertex, std::uint64_t>;
  auto run_range = [&](std::uint64_t begin, std::uint64_t end, CountMap& counts) {
    for (std::uint64_t i = begin; i < end; ++i) {
      auto gen = substream(params.rng_seed, i);
      const std::uint64_t k = std::min(sample_walk_length(params.t, gen), cap);
      ++counts[random_walk(g, u, k, gen)];
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::uint64_t>(params.threads == 0 ? 1 : params.threads, 1, samples));
  std::vector<CountMap> partial(workers);
  if (workers == 1) {
    run_range(0, samples, partial[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = samples * w / workers;
      const std::uint64_t end = samples * (w + 1) / workers;
      pool.emplace_back(run_range, begin, end, std::ref(partial[w]));
    }
    for (auto& th : pool) th.join();
  }

  CountMap merged = std::move(partial[0]);
  for (unsigned w = 1; w < workers; ++w) {
    for (const auto& [v, c] : partial[w]) merged[v] += c;
  }
  std::vector<std::pair<Vertex, std::uint64_t>> counts(merged.begin(), merged.end());
  return ApproxDistribution(g.num_vertices(), samples, std::move(counts));
}

// =============================================================================
// Approximation certificate
// =============================================================================

struct EpsViolation {
  Vertex vertex;
  double exact;
  double approx;
  /// How far the approximate value lies outside its admissible interval.
  double slack;
};

struct EpsCheck {
  bool ok = true;
  std::vector<EpsViolation> violations;

  explicit operator bool() const noexcept { return ok; }
};

/// Checks the epsilon-approximation conditions on every vertex:
/// (1-eps) rho(v) - eps <= nu(v) <= (1+eps) rho(v) where nu(v) > 0, and
/// rho(v) <= eps where nu(v) = 0. Bounds are inclusive.
inline EpsCheck is_eps_approximate(std::span<const double> exact, std::span<const double> approx, double eps) {
  if (exact.size() != approx.size()) throw InvalidArgument("exact and approximate vectors differ in length");
  EpsCheck check;
  for (std::size_t v = 0; v < exact.size(); ++v) {
    const double rho = exact[v];
    const double nu = approx[v];
    double slack = 0.0;
    if (nu > 0.0) {
      const double lo = (1.0 - eps) * rho - eps;
      const double hi = (1.0 + eps) * rho;
      if (nu < lo) slack = lo - nu;
      else if (nu > hi) slack = nu - hi;
    } else if (rho > eps) {
      slack = rho - eps;
    }
    if (slack > 0.0) check.violations.push_back({static_cast<Vertex>(v), rho, nu, slack});
  }
  check.ok = check.violations.empty();
  return check;
}

inline EpsCheck is_eps_approximate(const Distribution& exact, const ApproxDistribution& approx, double eps) {
  if (exact.size() != approx.size()) throw InvalidArgument("exact and approximate vectors differ in length");
  const Distribution dense = approx.to_dense();
  return is_eps_approximate(exact.values(), dense.values(), eps);
}

} // namespace hkpr
