// Acceptance suite: one PASS/FAIL line per criterion.

#include "hkpr/experiment.hpp"
#include "hkpr/gen.hpp"
#include "hkpr/graph.hpp"
#include "hkpr/hkpr.hpp"
#include "hkpr/metrics.hpp"
#include "hkpr/spectral.hpp"
#include "hkpr/sweep.hpp"
#include "test_support.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace hkpr;
using namespace hkpr::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  // set when the criterion cannot be evaluated in this environment
  bool unavailable = false;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double x, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

constexpr double kEps = 0.1;
constexpr double kT = 84.9;

Graph ba_trial(std::uint64_t trial) { return barabasi_albert({100, 5, 0.0, derive_seed(2024, {trial, 1})}); }

Vertex seed_trial(const Graph& g, std::uint64_t trial) {
  SplitMix64 gen(derive_seed(2024, {trial, 2}));
  return degree_proportional_vertex(g, gen);
}

// ---------------------------------------------------------------------------

Outcome exact_oracles() {
  const double rho2 = hkpr_exact(k2(), Distribution::indicator(2, 0), 1.0, 1e-14)[0];
  const double rho3 = hkpr_exact(k3(), Distribution::indicator(3, 0), 2.0, 1e-14)[0];
  const double e2 = std::abs(rho2 - (1.0 + std::exp(-2.0)) / 2.0);
  const double e3 = std::abs(rho3 - (1.0 / 3.0 + 2.0 / 3.0 * std::exp(-3.0)));
  return {e2 <= 1e-12 && e3 <= 1e-12, "K2 err " + fmt(e2) + ", K3 err " + fmt(e3) + " (tol 1e-12)"};
}

Outcome eps_approximation_rate() {
  int ok = 0;
  std::size_t worst_violations = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const Graph g = ba_trial(trial);
    const Vertex u = seed_trial(g, trial);
    const Distribution exact = hkpr_exact(g, Distribution::indicator(100, u), kT);
    HkprParams hp;
    hp.t = kT;
    hp.eps = kEps;
    hp.rng_seed = derive_seed(2024, {trial, 3});
    const EpsCheck check = is_eps_approximate(exact, hkpr_approx_seed(g, u, hp), kEps);
    ok += check.ok;
    worst_violations = std::max(worst_violations, check.violations.size());
  }
  return {ok >= 16, std::to_string(ok) + "/20 runs eps-approximate (need >= 16); max violating vertices in a run " +
                        std::to_string(worst_violations)};
}

Outcome parameter_formula() {
  const double t = compute_t(0.05, 500, 100, 0.1);
  return {std::abs(t - 84.9) <= 0.05, "compute_t = " + fmt(t, 8) + " (target 84.9 +- 0.05)"};
}

std::optional<std::string> dolphins_path() {
  if (const char* env = std::getenv("HKPR_DOLPHINS_EDGES")) return std::string(env);
  const std::string fixture = std::string(HKPR_FIXTURE_DIR) + "/dolphins.edges";
  if (std::filesystem::exists(fixture)) return fixture;
  return std::nullopt;
}

Outcome clustering_certificate() {
  const auto path = dolphins_path();
  if (!path) {
    Outcome out;
    out.unavailable = true;
    out.detail = "dolphins edge list not available (tests/fixtures/dolphins.edges or HKPR_DOLPHINS_EDGES)";
    return out;
  }
  std::ifstream in(*path);
  const Graph g = load_edge_list(in).graph;
  if (g.num_vertices() != 62 || g.num_edges() != 159) {
    return {false, "dolphins fixture has n=" + std::to_string(g.num_vertices()) + " m=" + std::to_string(g.num_edges()) +
                       ", expected 62/159"};
  }
  const ClusterParams cp{20, 100, 0.08, 0.1};
  const double bound = cp.ratio_bound();
  int found = 0;
  bool certified = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t run = 0; run < 10; ++run) {
    SplitMix64 gen(derive_seed(77, {run}));
    const Vertex u = degree_proportional_vertex(g, gen);
    const ClusterResult res = cluster_hkpr(g, u, cp, derive_seed(77, {run, 1}));
    if (!res.found()) continue;
    ++found;
    certified = certified && res.ratio <= bound;
    best = std::min(best, res.ratio);
  }
  return {certified && best <= 0.25, std::to_string(found) + "/10 FOUND, all certified <= " + fmt(bound) + ": " +
                                         (certified ? "yes" : "no") + ", best ratio " + fmt(best)};
}

struct SmallInstance {
  Graph g;
  VertexSet s;
};

std::vector<SmallInstance> small_instances(std::uint64_t seed, std::size_t max_n) {
  SplitMix64 gen(seed);
  std::vector<SmallInstance> out;
  while (out.size() < 50) {
    Graph g = random_connected(6 + uniform_below(gen, max_n - 5), 0.08 + 0.1 * uniform01(gen), gen);
    auto members = random_small_set(g, 10, gen);
    if (members.empty()) continue;
    VertexSet s(g, std::move(members));
    out.push_back({std::move(g), std::move(s)});
  }
  return out;
}

Outcome mixing_bounds() {
  int checks = 0, lower_violations = 0, upper_violations = 0;
  double min_lower_margin = std::numeric_limits<double>::infinity();
  double min_upper_margin = std::numeric_limits<double>::infinity();
  for (const auto& inst : small_instances(505, 40)) {
    const double phi_star = local_cheeger_brute(inst.g, inst.s);
    const Volume varsigma = inst.s.volume();
    const Distribution f = degree_seed_dist(inst.g, inst.s);
    for (double t : {1.0, 2.0, 5.0}) {
      const Distribution rho = hkpr_exact(inst.g, f, t, 1e-13);
      const double mass = rho.mass(inst.s);
      const double lower = 0.5 * std::exp(-t * phi_star);
      const double phi_sigma = sigma_local_cheeger(inst.g, rho, varsigma);
      const double upper = std::sqrt(static_cast<double>(varsigma)) * std::exp(-t * phi_sigma * phi_sigma / 4.0);
      ++checks;
      lower_violations += !(lower <= mass + 1e-12);
      upper_violations += !(mass <= upper + 1e-12);
      min_lower_margin = std::min(min_lower_margin, mass - lower);
      min_upper_margin = std::min(min_upper_margin, upper - mass);
    }
  }
  return {lower_violations == 0 && upper_violations == 0,
          std::to_string(checks) + " checks, lower violations " + std::to_string(lower_violations) +
              ", upper violations " + std::to_string(upper_violations) + ", min margins " + fmt(min_lower_margin) +
              " / " + fmt(min_upper_margin)};
}

Outcome local_cheeger() {
  int violations = 0;
  double worst_residual = 0.0;
  for (const auto& inst : small_instances(606, 30)) {
    const double phi_star = local_cheeger_brute(inst.g, inst.s);
    const DirichletEigen e = dirichlet_eigen(inst.g, inst.s);
    violations += !(0.5 * phi_star * phi_star <= e.lambda + 1e-12 && e.lambda <= phi_star + 1e-12);
    worst_residual = std::max(worst_residual, e.residual);
  }
  return {violations == 0 && worst_residual <= 1e-10,
          "50 instances, violations " + std::to_string(violations) + ", max residual " + fmt(worst_residual)};
}

Outcome ranking_trend() {
  int improved = 0;
  double mean2 = 0.0, mean10 = 0.0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const Graph g = ba_trial(100 + trial);
    const Vertex u = seed_trial(g, 100 + trial);
    const Distribution exact = hkpr_exact(g, Distribution::indicator(100, u), kT);
    const RankedList exact_rank = rank_by_value(exact);
    auto dist_at = [&](std::uint64_t cap) {
      HkprParams hp;
      hp.t = kT;
      hp.eps = kEps;
      hp.walk_cap = cap;
      hp.rng_seed = derive_seed(2024, {100 + trial, 3});
      return intersection_difference(exact_rank, rank_by_value(hkpr_approx_seed(g, u, hp)), 100);
    };
    const double d2 = dist_at(2), d10 = dist_at(10);
    improved += d10 < d2;
    mean2 += d2 / 20.0;
    mean10 += d10 / 20.0;
  }
  return {improved >= 18, std::to_string(improved) + "/20 trials dist(K=10) < dist(K=2) (need >= 18); mean " +
                              fmt(mean10) + " vs " + fmt(mean2)};
}

Outcome metric_identities() {
  SplitMix64 gen(808);
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + uniform_below(gen, 50);
    std::vector<Vertex> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<Vertex>(i);
    for (std::size_t i = n; i > 1; --i) std::swap(a[i - 1], a[uniform_below(gen, i)]);
    ok = ok && intersection_difference(a, a) == 0.0 && topk_intersection_difference(a, a, std::min<std::size_t>(10, n)) == 0.0;
    std::vector<double> v(n);
    for (double& x : v) x = uniform01(gen);
    ok = ok && avg_l1_error(v, v) == 0.0 && eps_error(v, v, 0.1) == 0.0;
  }
  const std::vector<Vertex> xy{0, 1}, yx{1, 0};
  const double swap = intersection_difference(xy, yx);
  ok = ok && swap == 0.5;
  return {ok, "identities hold on 100 random cases; dist([x,y],[y,x]) = " + fmt(swap)};
}

Outcome sweep_oracle() {
  SplitMix64 gen(909);
  int mismatches = 0, below = 0, ratio_checks = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = random_graph(2 + uniform_below(gen, 99), 0.02 + 0.2 * uniform01(gen), gen);
    std::vector<double> p(g.num_vertices(), 0.0);
    for (Vertex v = 0; v < g.num_vertices(); ++v)
      if (g.degree(v) > 0) p[v] = uniform01(gen);
    const RankedList ranked = rank_by_prob_per_degree(g, p);
    if (ranked.empty()) continue;
    for (const auto& pt : sweep_cuts(g, ranked, g.total_volume())) {
      const VertexSet s(g, ranked.prefix(pt.prefix_size));
      mismatches += pt.boundary != edge_boundary(g, s) || pt.volume != volume(g, s);
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = random_connected(3 + uniform_below(gen, 10), 0.25, gen);
    std::vector<double> p(g.num_vertices());
    for (double& x : p) x = uniform01(gen);
    const RankedList ranked = rank_by_prob_per_degree(g, p);
    if (2 * static_cast<Volume>(g.degree(ranked.order[0])) > g.total_volume()) continue;
    ++ratio_checks;
    below += min_ratio_sweep(g, ranked).ratio < brute_force_graph_ratio(g) - 1e-15;
  }
  return {mismatches == 0 && below == 0, "boundary mismatches " + std::to_string(mismatches) + " over 200 graphs; " +
                                             std::to_string(below) + "/" + std::to_string(ratio_checks) +
                                             " sweeps below brute-force Phi(G)"};
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string(HKPR_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw Error("cannot start " + cmd);
  std::string out;
  std::array<char, 8192> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  if (status != 0) throw Error("command failed: " + cmd + "\n" + out);
  return out;
}

Outcome determinism() {
  const std::string ba = "--model ba --n 100 --d 5 --rng-seed 31";
  const std::vector<std::string> commands{
      "hkpr " + ba + " --t 84.9",
      "hkpr " + ba + " --t 84.9 --exact",
      "rank " + ba + " --t 84.9 --K 1,2,5,10 --trials 3",
      "cluster " + ba + " --phi 0.1 --target-size 20 --target-volume 100 --trials 3",
      "cluster " + ba + " --phi 0.1 --target-size 20 --target-volume 100 --trials 3 --sweep-mode half",
      "compare " + ba + " --phi 0.1 --target-size 20 --target-volume 100 --trials 2",
      "gen --model ws --n 100 --d 5 --p 0.1 --rng-seed 31",
      "gen --model plc --n 100 --d 5 --p 0.1 --rng-seed 31",
  };
  int identical = 0;
  std::string first_diff;
  for (const auto& c : commands) {
    const std::string a = run_cli(c);
    const bool same = a == run_cli(c) && (c.rfind("gen", 0) == 0 || a == run_cli(c + " --threads 4"));
    identical += same;
    if (!same && first_diff.empty()) first_diff = c;
  }
  const bool ok = identical == static_cast<int>(commands.size());
  return {ok, std::to_string(identical) + "/" + std::to_string(commands.size()) +
                  " commands byte-identical across reruns and thread counts" + (ok ? "" : "; differs: " + first_diff)};
}

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact diffusion oracles", 1.0, exact_oracles},
      {2, "eps-approximation rate on BA(100,5)", 60.0, eps_approximation_rate},
      {3, "compute_t parameter formula", 1.0, parameter_formula},
      {4, "clustering certificate on dolphins", 30.0, clustering_certificate},
      {5, "heat kernel mixing bounds", 60.0, mixing_bounds},
      {6, "local Cheeger inequality suite", 30.0, local_cheeger},
      {7, "ranking-quality trend in K", 300.0, ranking_trend},
      {8, "metric identities", 1.0, metric_identities},
      {9, "sweep oracle equivalence", 60.0, sweep_oracle},
      {10, "CLI determinism", 60.0, determinism},
  };

  int failures = 0;
  int unavailable = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = out.pass && !out.unavailable;
    std::string detail = out.detail;
    if (pass && seconds > c.budget_seconds) {
      pass = false;
      detail += "; over time budget";
    }
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << detail << " ["
              << fmt(seconds, 3) << " s of " << fmt(c.budget_seconds, 3) << " s]" << std::endl;
    if (out.unavailable) ++unavailable;
    else if (!pass) ++failures;
  }
  std::cout << "summary: " << (criteria.size() - static_cast<std::size_t>(failures + unavailable)) << " passed, "
            << failures << " failed, " << unavailable << " failed for missing input data" << std::endl;
  return failures == 0 ? 0 : 1;
}
