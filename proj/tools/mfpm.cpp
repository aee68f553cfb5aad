// mfpm: experiment driver for multi-feature budgeted profit maximization.
//
//   mfpm run --config <file>
//   mfpm summarize <csv>
//   mfpm oracle --graph <edge list> [--config <params>] --seeds a,b,c [--budget B]
//   mfpm synth --model ba|er --nodes N [--links k | --edges m] --seed s --out <file>

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include "mfpm/experiment.hpp"
#include "mfpm/generators.hpp"
#include "mfpm/oracle.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& output, int workers) {
  auto config = mfpm::ExperimentConfig::load(config_path);
  if (!output.empty()) config.output = output;
  if (workers > 0) config.workers = static_cast<std::uint32_t>(workers);
  auto rows = mfpm::run_experiment(config);
  mfpm::print_summary(std::cout, mfpm::summarize_rows(rows));
  std::cout << "wrote " << rows.size() << " rows to " << config.output.string() << "\n";
  return 0;
}

int cmd_summarize(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return 1;
  }
  mfpm::print_summary(std::cout, mfpm::summarize(in));
  return 0;
}

int cmd_oracle(const std::string& graph, const std::string& params_path, int q, bool undirected, std::uint64_t seed,
               const std::string& seed_labels, double budget, int max_edges) {
  mfpm::KeyValueConfig kv;
  if (!params_path.empty()) kv = mfpm::KeyValueConfig::load(params_path);
  auto params = mfpm::ParamConfig::from(kv);
  if (q > 0) params.q = static_cast<std::uint32_t>(q);
  if (undirected) params.directed = false;
  if (seed != 0) params.rng_seed = seed;
  auto net = mfpm::load_network(graph, params);
  auto mlg = mfpm::build_multi_level(net);
  mfpm::EnumerationBudget enumeration{max_edges};

  std::map<std::string, mfpm::NodeId> by_label;
  for (mfpm::NodeId u = 0; u < net.node_count(); ++u) by_label[net.label(u)] = u;
  std::vector<mfpm::NodeId> seeds;
  for (const auto& label : mfpm::split_list(seed_labels)) {
    auto it = by_label.find(label);
    if (it == by_label.end()) {
      std::cerr << "error: unknown node label '" << label << "'\n";
      return 1;
    }
    seeds.push_back(it->second);
  }

  std::cout << std::setprecision(12);
  std::cout << "nodes " << net.node_count() << " edges " << net.edge_count() << " q " << net.feature_count() << "\n";
  std::cout << "P(S) = " << mfpm::exact_P(net, mlg, seeds, enumeration) << "\n";
  if (budget >= 0) {
    auto opt = mfpm::exact_optimum(net, mlg, budget, enumeration);
    std::cout << "optimum (B = " << budget << ") = " << opt.value << " with seeds {";
    for (std::size_t k = 0; k < opt.seeds.size(); ++k) std::cout << (k ? "," : "") << net.label(opt.seeds[k]);
    std::cout << "}\n";
  }
  return 0;
}

int cmd_synth(const std::string& model, std::uint32_t nodes, std::uint32_t links, std::uint64_t edges,
              std::uint64_t seed, const std::string& out_path) {
  mfpm::EdgeList list;
  if (model == "ba") {
    list = mfpm::barabasi_albert(nodes, links, seed);
  } else if (model == "er") {
    list = mfpm::erdos_renyi(nodes, edges, seed);
  } else {
    std::cerr << "error: unknown model '" << model << "' (expected ba or er)\n";
    return 1;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  out << "# " << model << " nodes=" << nodes << " seed=" << seed << "\n";
  mfpm::write_edge_list(out, list);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-feature budgeted profit maximization toolkit"};
  app.require_subcommand(1);

  std::string config_path, output;
  int workers = 0;
  auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
  run->add_option("--config", config_path, "Experiment config (key = value)")->required()->check(CLI::ExistingFile);
  run->add_option("--output", output, "Override the output CSV path");
  run->add_option("--workers", workers, "Override the worker count");

  std::string csv_path;
  auto* summarize = app.add_subcommand("summarize", "Summarize a result CSV per policy and budget");
  summarize->add_option("csv", csv_path, "Result CSV")->required();

  std::string graph, params_path, seed_labels;
  int q = 0, max_edges = 20;
  bool undirected = false;
  std::uint64_t param_seed = 0;
  double budget = -1;
  auto* oracle = app.add_subcommand("oracle", "Exact P(S) and optimum on a tiny instance");
  oracle->add_option("--graph", graph, "Edge list")->required()->check(CLI::ExistingFile);
  oracle->add_option("--config", params_path, "Parameter config (q, directed, rng_seed, ...)");
  oracle->add_option("--q", q, "Feature count (overrides config)");
  oracle->add_flag("--undirected", undirected, "Treat the edge list as undirected");
  oracle->add_option("--rng-seed", param_seed, "Parameter RNG seed (overrides config)");
  oracle->add_option("--seeds", seed_labels, "Comma separated seed labels");
  oracle->add_option("--budget", budget, "Also compute the exact optimum under this budget");
  oracle->add_option("--max-edges", max_edges, "Enumeration limit on multi-level edges")->check(CLI::Range(0, 25));

  std::string model = "ba", out_path;
  std::uint32_t nodes = 1000, links = 3;
  std::uint64_t edges = 5000, synth_seed = 1;
  auto* synth = app.add_subcommand("synth", "Write a random edge list");
  synth->add_option("--model", model, "ba (preferential attachment, undirected) or er (directed G(n,m))");
  synth->add_option("--nodes", nodes, "Node count");
  synth->add_option("--links", links, "Links per new node (ba)");
  synth->add_option("--edges", edges, "Edge count (er)");
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--out", out_path, "Output edge list")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, output, workers);
    if (*summarize) return cmd_summarize(csv_path);
    if (*oracle) return cmd_oracle(graph, params_path, q, undirected, param_seed, seed_labels, budget, max_edges);
    if (*synth) return cmd_synth(model, nodes, links, edges, synth_seed, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
