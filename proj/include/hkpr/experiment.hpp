#pragma once

// Experiment drivers behind the command-line tool. Each driver writes a CSV
// document: '#' comment lines echoing the configuration, a column header,
// then one row per result. Output is a pure function of the configuration.

#include "hkpr/error.hpp"
#include "hkpr/gen.hpp"
#include "hkpr/graph.hpp"
#include "hkpr/hkpr.hpp"
#include "hkpr/metrics.hpp"
#include "hkpr/rng.hpp"
#include "hkpr/sweep.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace hkpr {

enum class SeedSelect { Explicit, Degree };

struct ExperimentConfig {
  std::string command;

  // graph source: exactly one of graph_path / model
  std::optional<std::string> graph_path;
  std::optional<std::string> model; // ws | ba | plc
  std::size_t n = 100;
  std::size_t d = 5;
  double p = 0.1;

  std::optional<std::string> seed_vertex;
  SeedSelect seed_select = SeedSelect::Degree;

  std::optional<double> t;
  double eps = 0.1;
  double phi = 0.05;
  std::size_t target_size = 100;
  Volume target_volume = 500;

  std::vector<std::uint64_t> walk_caps; // --K
  std::optional<std::uint64_t> samples; // --r
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  bool exact = false;
  SweepMode sweep_mode = SweepMode::Window;
  unsigned threads = 1;
  bool timing = false;
  bool control = false;

  void validate() const {
    if (graph_path.has_value() == model.has_value()) {
      throw InvalidArgument("exactly one graph source is required: --graph or --model");
    }
    if (model && *model != "ws" && *model != "ba" && *model != "plc") {
      throw InvalidArgument("unknown model '" + *model + "' (expected ws, ba or plc)");
    }
    detail::require(trials >= 1, "trial count must be at least 1");
    detail::require(seed_select == SeedSelect::Degree || seed_vertex.has_value(),
                    "explicit seed selection needs --seed-vertex");
  }
};

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return ec == std::errc() ? std::string(buf.data(), end) : std::string("nan");
}

namespace detail {

// Independent streams for the pieces of one trial.
enum StreamTag : std::uint64_t { kGraphStream = 1, kSeedVertexStream = 2, kWalkStream = 3 };

inline std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial, StreamTag tag) {
  return derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(trial), tag});
}

inline std::string graph_name(const ExperimentConfig& cfg) {
  if (cfg.graph_path) {
    const auto slash = cfg.graph_path->find_last_of('/');
    return slash == std::string::npos ? *cfg.graph_path : cfg.graph_path->substr(slash + 1);
  }
  std::string name = *cfg.model + "(n=" + std::to_string(cfg.n) + ";d=" + std::to_string(cfg.d);
  if (*cfg.model != "ba") name += ";p=" + format_double(cfg.p);
  return name + ")";
}

inline void write_config_header(std::ostream& out, const ExperimentConfig& cfg) {
  out << "# hkpr " << cfg.command << '\n';
  out << "# graph=" << (cfg.graph_path ? *cfg.graph_path : graph_name(cfg)) << '\n';
  out << "# seed_vertex=" << (cfg.seed_vertex ? *cfg.seed_vertex : "degree-proportional") << '\n';
  out << "# t=" << (cfg.t ? format_double(*cfg.t) : "auto") << " eps=" << format_double(cfg.eps)
      << " phi=" << format_double(cfg.phi) << " target_size=" << cfg.target_size
      << " target_volume=" << cfg.target_volume << '\n';
  out << "# K=";
  if (cfg.walk_caps.empty()) out << "default";
  for (std::size_t i = 0; i < cfg.walk_caps.size(); ++i) out << (i ? "," : "") << cfg.walk_caps[i];
  out << " r=" << (cfg.samples ? std::to_string(*cfg.samples) : "default") << " trials=" << cfg.trials
      << " sweep_mode=" << (cfg.sweep_mode == SweepMode::Window ? "window" : "half")
      << " mode=" << (cfg.exact ? "exact" : "approx") << '\n';
  out << "# master_seed=" << cfg.master_seed << '\n';
}

inline void write_failures(std::ostream& out, const std::vector<std::size_t>& failed,
                           const std::vector<std::string>& reasons) {
  if (failed.empty()) return;
  out << "# failed_trials=";
  for (std::size_t i = 0; i < failed.size(); ++i) out << (i ? "," : "") << failed[i];
  out << '\n';
  for (std::size_t i = 0; i < failed.size(); ++i) out << "# trial " << failed[i] << ": " << reasons[i] << '\n';
}

} // namespace detail

/// The graph used by trial `trial`: the file when one is given, otherwise a
/// fresh draw from the configured model.
inline Graph experiment_graph(const ExperimentConfig& cfg, std::size_t trial) {
  if (cfg.graph_path) {
    std::ifstream in(*cfg.graph_path);
    if (!in) throw InvalidArgument("cannot open graph file " + *cfg.graph_path);
    return load_edge_list(in).graph;
  }
  GenParams gp{cfg.n, cfg.d, cfg.p, detail::trial_seed(cfg, trial, detail::kGraphStream)};
  if (*cfg.model == "ws") return watts_strogatz_connected(gp);
  if (*cfg.model == "ba") return barabasi_albert(gp);
  return powerlaw_cluster(gp);
}

/// Vertex drawn with probability d_v / vol(G).
template <typename Gen>
Vertex degree_proportional_vertex(const Graph& g, Gen& gen) {
  detail::require(g.total_volume() > 0, "graph has no edges");
  auto target = static_cast<Volume>(uniform_below(gen, static_cast<std::uint64_t>(g.total_volume())));
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    target -= static_cast<Volume>(g.degree(static_cast<Vertex>(v)));
    if (target < 0) return static_cast<Vertex>(v);
  }
  return static_cast<Vertex>(g.num_vertices() - 1);
}

inline Vertex experiment_seed_vertex(const ExperimentConfig& cfg, const Graph& g, std::size_t trial) {
  if (cfg.seed_vertex) {
    const auto v = g.find_label(*cfg.seed_vertex);
    if (!v) throw InvalidArgument("seed vertex '" + *cfg.seed_vertex + "' not found in graph");
    return *v;
  }
  SplitMix64 gen(detail::trial_seed(cfg, trial, detail::kSeedVertexStream));
  return degree_proportional_vertex(g, gen);
}

inline double experiment_t(const ExperimentConfig& cfg) {
  return cfg.t ? *cfg.t
               : compute_t(cfg.phi, static_cast<double>(cfg.target_volume), static_cast<double>(cfg.target_size),
                           cfg.eps);
}

/// Walk-length caps for the ranking experiment: the configured list, or
/// about a dozen log-spaced values from 1 to ceil(t).
inline std::vector<std::uint64_t> rank_walk_caps(const ExperimentConfig& cfg, double t) {
  if (!cfg.walk_caps.empty()) return cfg.walk_caps;
  const auto top = static_cast<std::uint64_t>(std::max(1.0, std::ceil(t)));
  std::vector<std::uint64_t> caps;
  constexpr int kPoints = 12;
  for (int i = 0; i < kPoints; ++i) {
    const double x = std::pow(static_cast<double>(top), static_cast<double>(i) / (kPoints - 1));
    const auto k = static_cast<std::uint64_t>(std::llround(x));
    if (caps.empty() || caps.back() != k) caps.push_back(k);
  }
  return caps;
}

/// Exit status convention shared by all drivers.
struct RunStatus {
  std::vector<std::size_t> failed_trials;
  bool ok() const noexcept { return failed_trials.empty(); }
};

// -----------------------------------------------------------------------------
// hkpr: one exact or approximate vector
// -----------------------------------------------------------------------------

inline RunStatus run_hkpr(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const Graph g = experiment_graph(cfg, 0);
  const Vertex u = experiment_seed_vertex(cfg, g, 0);
  const double t = experiment_t(cfg);

  HkprParams hp;
  hp.t = t;
  hp.eps = cfg.eps;
  hp.samples = cfg.samples;
  if (!cfg.walk_caps.empty()) hp.walk_cap = cfg.walk_caps.front();
  hp.rng_seed = detail::trial_seed(cfg, 0, detail::kWalkStream);
  hp.threads = cfg.threads;

  detail::write_config_header(out, cfg);
  out << "# vector=" << (cfg.exact ? "exact" : "approx") << " seed=" << g.label(u) << " t=" << format_double(t)
      << " eps=" << format_double(cfg.eps);
  if (cfg.exact) {
    out << " tol=" << format_double(kExactTolerance) << '\n';
    const Distribution rho = hkpr_exact(g, Distribution::indicator(g.num_vertices(), u), t);
    out << "vertex,value\n";
    for (std::size_t v = 0; v < rho.size(); ++v) {
      const double x = rho[static_cast<Vertex>(v)];
      if (x > 0.0) out << g.label(static_cast<Vertex>(v)) << ',' << format_double(x) << '\n';
    }
  } else {
    out << " r=" << hp.resolved_samples(g.num_vertices()) << " K=" << hp.resolved_walk_cap()
        << " rng_seed=" << hp.rng_seed << '\n';
    const ApproxDistribution approx = hkpr_approx_seed(g, u, hp);
    out << "vertex,value\n";
    for (const auto& [v, c] : approx.counts()) out << g.label(v) << ',' << format_double(approx.value(v)) << '\n';
  }
  return {};
}

// -----------------------------------------------------------------------------
// rank: exact vs. truncated-walk approximation across K
// -----------------------------------------------------------------------------

inline RunStatus run_rank_experiment(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const double t = experiment_t(cfg);
  const auto caps = rank_walk_caps(cfg, t);

  detail::write_config_header(out, cfg);
  out << "trial,graph,seed_vertex,t,K,r,avg_l1,eps_error,dist,dist_10\n";

  struct Sum {
    double l1 = 0, eps = 0, dist = 0, dist_k = 0;
    std::size_t count = 0;
  };
  std::map<std::uint64_t, Sum> sums;
  RunStatus status;
  std::vector<std::string> reasons;
  const std::string name = detail::graph_name(cfg);

  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    std::ostringstream rows;
    std::vector<std::pair<std::uint64_t, ErrorReport>> reports;
    try {
      const Graph g = experiment_graph(cfg, trial);
      const Vertex u = experiment_seed_vertex(cfg, g, trial);
      const Distribution exact = hkpr_exact(g, Distribution::indicator(g.num_vertices(), u), t);
      const std::uint64_t r = cfg.samples ? *cfg.samples : default_sample_count(cfg.eps, g.num_vertices());
      const std::string prefix = std::to_string(trial) + ',' + name + ',' + g.label(u) + ',' + format_double(t) + ',';

      if (cfg.control) {
        const ErrorReport rep =
            compare_vectors(exact, exact.values(), rank_by_value(exact), cfg.eps);
        rows << prefix << "exact," << r << ',' << format_double(rep.avg_l1) << ',' << format_double(rep.eps_error)
             << ',' << format_double(rep.intersection_difference) << ',' << format_double(rep.topk_difference)
             << '\n';
      }
      for (std::uint64_t cap : caps) {
        HkprParams hp;
        hp.t = t;
        hp.eps = cfg.eps;
        hp.samples = r;
        hp.walk_cap = cap;
        hp.rng_seed = detail::trial_seed(cfg, trial, detail::kWalkStream);
        hp.threads = cfg.threads;
        const ErrorReport rep = compare_vectors(exact, hkpr_approx_seed(g, u, hp), cfg.eps);
        reports.emplace_back(cap, rep);
        rows << prefix << cap << ',' << r << ',' << format_double(rep.avg_l1) << ','
             << format_double(rep.eps_error) << ',' << format_double(rep.intersection_difference) << ','
             << format_double(rep.topk_difference) << '\n';
      }
    } catch (const std::exception& e) {
      status.failed_trials.push_back(trial);
      reasons.emplace_back(e.what());
      continue;
    }
    out << rows.str();
    for (const auto& [cap, rep] : reports) {
      auto& s = sums[cap];
      s.l1 += rep.avg_l1;
      s.eps += rep.eps_error;
      s.dist += rep.intersection_difference;
      s.dist_k += rep.topk_difference;
      ++s.count;
    }
  }
  for (std::uint64_t cap : caps) {
    const auto it = sums.find(cap);
    if (it == sums.end()) continue;
    const auto& s = it->second;
    const auto c = static_cast<double>(s.count);
    out << "mean," << name << ",," << format_double(t) << ',' << cap << ',' << (cfg.samples ? std::to_string(*cfg.samples) : "")
        << ',' << format_double(s.l1 / c) << ',' << format_double(s.eps / c) << ',' << format_double(s.dist / c)
        << ',' << format_double(s.dist_k / c) << '\n';
  }
  detail::write_failures(out, status.failed_trials, reasons);
  return status;
}

// -----------------------------------------------------------------------------
// cluster: local clustering with a certified ratio
// -----------------------------------------------------------------------------

inline ClusterParams experiment_cluster_params(const ExperimentConfig& cfg) {
  ClusterParams cp;
  cp.target_size = cfg.target_size;
  cp.target_volume = cfg.target_volume;
  cp.target_ratio = cfg.phi;
  cp.eps = cfg.eps;
  return cp;
}

inline ClusterOptions experiment_cluster_options(const ExperimentConfig& cfg) {
  ClusterOptions opt;
  opt.mode = cfg.sweep_mode;
  opt.samples = cfg.samples;
  if (!cfg.walk_caps.empty()) opt.walk_cap = cfg.walk_caps.front();
  opt.threads = cfg.threads;
  return opt;
}

inline RunStatus run_cluster(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const ClusterParams cp = experiment_cluster_params(cfg);
  const ClusterOptions opt = experiment_cluster_options(cfg);

  detail::write_config_header(out, cfg);
  out << "trial,graph,seed_vertex,t,r,K,verdict,ratio,ratio_bound,volume,size,cut";
  out << (cfg.timing ? ",wall_ms\n" : "\n");

  RunStatus status;
  std::vector<std::string> reasons;
  const std::string name = detail::graph_name(cfg);
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    try {
      const Graph g = experiment_graph(cfg, trial);
      const Vertex u = experiment_seed_vertex(cfg, g, trial);
      const auto start = std::chrono::steady_clock::now();
      const ClusterResult res = cluster_hkpr(g, u, cp, detail::trial_seed(cfg, trial, detail::kWalkStream), opt);
      const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
      std::string cut;
      for (std::size_t i = 0; i < res.cut.size(); ++i) cut += (i ? " " : "") + g.label(res.cut[i]);
      out << trial << ',' << name << ',' << g.label(u) << ',' << format_double(res.t_used) << ',' << res.samples
          << ',' << res.walk_cap << ',' << (res.found() ? "FOUND" : "NO_CUT_FOUND") << ','
          << (res.found() ? format_double(res.ratio) : "") << ',' << format_double(cp.ratio_bound()) << ','
          << (res.found() ? std::to_string(res.volume) : "") << ',' << res.cut.size() << ',' << cut;
      if (cfg.timing) out << ',' << format_double(elapsed.count());
      out << '\n';
    } catch (const std::exception& e) {
      status.failed_trials.push_back(trial);
      reasons.emplace_back(e.what());
    }
  }
  detail::write_failures(out, status.failed_trials, reasons);
  return status;
}

// -----------------------------------------------------------------------------
// compare: approximate HKPR, exact HKPR and PageRank sweeps
// -----------------------------------------------------------------------------

inline RunStatus run_compare(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const ClusterParams cp = experiment_cluster_params(cfg);
  const ClusterOptions opt = experiment_cluster_options(cfg);

  detail::write_config_header(out, cfg);
  out << "trial,graph,seed_vertex,algorithm,parameter,ratio,volume,size,ratio_bound,certified";
  out << (cfg.timing ? ",wall_ms\n" : "\n");

  RunStatus status;
  std::vector<std::string> reasons;
  const std::string name = detail::graph_name(cfg);
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    try {
      const Graph g = experiment_graph(cfg, trial);
      const Vertex u = experiment_seed_vertex(cfg, g, trial);
      const auto start = std::chrono::steady_clock::now();
      const ClusterComparison cmp =
          compare_clusters(g, u, cp, detail::trial_seed(cfg, trial, detail::kWalkStream), opt);
      const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
      for (const LabeledSweep* s : {&cmp.eps_hkpr, &cmp.hkpr, &cmp.pr}) {
        out << trial << ',' << name << ',' << g.label(u) << ',' << s->algorithm << ','
            << format_double(s->parameter) << ',' << format_double(s->point.ratio) << ',' << s->point.volume << ','
            << s->point.prefix_size << ',' << format_double(cp.ratio_bound()) << ','
            << (s->point.ratio <= cp.ratio_bound() ? "yes" : "no");
        if (cfg.timing) out << ',' << format_double(elapsed.count());
        out << '\n';
      }
    } catch (const std::exception& e) {
      status.failed_trials.push_back(trial);
      reasons.emplace_back(e.what());
    }
  }
  detail::write_failures(out, status.failed_trials, reasons);
  return status;
}

// -----------------------------------------------------------------------------
// gen: random graph as an edge list
// -----------------------------------------------------------------------------

inline RunStatus run_gen(const ExperimentConfig& cfg, std::ostream& out) {
  detail::require(cfg.model.has_value() && !cfg.graph_path, "gen needs --model and no --graph");
  cfg.validate();
  const Graph g = experiment_graph(cfg, 0);
  out << "# hkpr gen model=" << detail::graph_name(cfg) << " master_seed=" << cfg.master_seed << '\n';
  out << "# n=" << g.num_vertices() << " m=" << g.num_edges() << '\n';
  write_edge_list(g, out);
  return {};
}

inline RunStatus run_command(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.command == "hkpr") return run_hkpr(cfg, out);
  if (cfg.command == "rank") return run_rank_experiment(cfg, out);
  if (cfg.command == "cluster") return run_cluster(cfg, out);
  if (cfg.command == "compare") return run_compare(cfg, out);
  if (cfg.command == "gen") return run_gen(cfg, out);
  throw InvalidArgument("unknown command '" + cfg.command + "'");
}

} // namespace hkpr
