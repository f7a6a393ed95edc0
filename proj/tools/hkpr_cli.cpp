#include "hkpr/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

void add_graph_options(CLI::App* cmd, hkpr::ExperimentConfig& cfg, std::string& model, std::string& graph) {
  cmd->add_option("--graph", graph, "edge-list file");
  cmd->add_option("--model", model, "random graph model")->check(CLI::IsMember({"ws", "ba", "plc"}));
  cmd->add_option("--n", cfg.n, "vertex count for --model");
  cmd->add_option("--d", cfg.d, "neighbor parameter for --model");
  cmd->add_option("--p", cfg.p, "probability parameter for --model");
}

void add_seed_options(CLI::App* cmd, std::string& seed_vertex, std::string& seed_select) {
  cmd->add_option("--seed-vertex", seed_vertex, "seed vertex label");
  cmd->add_option("--seed-select", seed_select, "seed selection when no --seed-vertex is given")
      ->check(CLI::IsMember({"degree"}));
}

void add_hkpr_options(CLI::App* cmd, hkpr::ExperimentConfig& cfg, double& t, std::uint64_t& r) {
  cmd->add_option("--t", t, "heat kernel temperature (default: derived from phi, target size and volume)");
  cmd->add_option("--eps", cfg.eps, "approximation error");
  cmd->add_option("--r", r, "number of random walks");
  cmd->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
}

void add_cluster_options(CLI::App* cmd, hkpr::ExperimentConfig& cfg) {
  cmd->add_option("--phi", cfg.phi, "target Cheeger ratio");
  cmd->add_option("--target-size", cfg.target_size, "target cluster size s");
  cmd->add_option("--target-volume", cfg.target_volume, "target cluster volume");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat kernel pagerank experiments"};
  app.require_subcommand(1);

  hkpr::ExperimentConfig cfg;
  std::string model, graph, seed_vertex, seed_select, out_path, sweep_mode = "window";
  double t = -1.0;
  std::uint64_t r = 0;
  std::uint64_t master_seed = 0;
  if (const char* env = std::getenv("HKPR_RNG_SEED")) {
    try {
      master_seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: HKPR_RNG_SEED is not an unsigned integer\n";
      return 2;
    }
  }

  auto* hkpr_cmd = app.add_subcommand("hkpr", "exact or approximate heat kernel pagerank vector");
  auto* rank_cmd = app.add_subcommand("rank", "ranking error of truncated walks across K");
  auto* cluster_cmd = app.add_subcommand("cluster", "local cluster with a certified Cheeger ratio");
  auto* compare_cmd = app.add_subcommand("compare", "compare approximate HKPR, exact HKPR and PageRank sweeps");
  auto* gen_cmd = app.add_subcommand("gen", "generate a random graph edge list");

  for (auto* cmd : {hkpr_cmd, rank_cmd, cluster_cmd, compare_cmd, gen_cmd}) {
    add_graph_options(cmd, cfg, model, graph);
    cmd->add_option("--rng-seed", master_seed, "master seed (default: $HKPR_RNG_SEED or 0)");
    cmd->add_option("--out", out_path, "output file (default: stdout)");
  }
  for (auto* cmd : {hkpr_cmd, rank_cmd, cluster_cmd, compare_cmd}) {
    add_seed_options(cmd, seed_vertex, seed_select);
    add_hkpr_options(cmd, cfg, t, r);
    add_cluster_options(cmd, cfg);
  }
  hkpr_cmd->add_option("--K", cfg.walk_caps, "walk length cap")->expected(1);
  cluster_cmd->add_option("--K", cfg.walk_caps, "walk length cap")->expected(1);
  compare_cmd->add_option("--K", cfg.walk_caps, "walk length cap")->expected(1);
  rank_cmd->add_option("--K", cfg.walk_caps, "walk length caps to sweep")->delimiter(',');
  rank_cmd->add_flag("--control", cfg.control, "add an exact-vs-exact row per trial");
  for (auto* cmd : {rank_cmd, cluster_cmd, compare_cmd}) cmd->add_option("--trials", cfg.trials, "trial count");
  auto* exact_flag = hkpr_cmd->add_flag("--exact", cfg.exact, "exact vector");
  hkpr_cmd->add_flag("--approx", "approximate vector (default)")->excludes(exact_flag);
  for (auto* cmd : {cluster_cmd, compare_cmd}) {
    cmd->add_option("--sweep-mode", sweep_mode, "window or half")->check(CLI::IsMember({"window", "half"}));
    cmd->add_flag("--timing", cfg.timing, "append wall-clock milliseconds");
  }

  CLI11_PARSE(app, argc, argv);

  cfg.command = app.get_subcommands().front()->get_name();
  if (!graph.empty()) cfg.graph_path = graph;
  if (!model.empty()) cfg.model = model;
  if (!seed_vertex.empty()) {
    cfg.seed_vertex = seed_vertex;
    cfg.seed_select = hkpr::SeedSelect::Explicit;
  }
  if (t >= 0.0) cfg.t = t;
  if (r > 0) cfg.samples = r;
  cfg.master_seed = master_seed;
  cfg.sweep_mode = sweep_mode == "half" ? hkpr::SweepMode::Half : hkpr::SweepMode::Window;

  try {
    std::ostringstream buffer;
    const hkpr::RunStatus status = hkpr::run_command(cfg, buffer);
    if (out_path.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw hkpr::Error("cannot write " + out_path);
      out << buffer.str();
    }
    if (!status.ok()) {
      std::cerr << "error: " << status.failed_trials.size() << " trial(s) failed:";
      for (std::size_t i : status.failed_trials) std::cerr << ' ' << i;
      std::cerr << '\n';
      return 1;
    }
  } catch (const hkpr::ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
