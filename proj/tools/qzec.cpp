#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qzec/cli_commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"zero-error capacity bounds for quantum channels"};
  app.require_subcommand(1);

  std::string validate_file;
  CLI::App* validate = app.add_subcommand(
      "validate", "check a problem file against all operator invariants");
  validate->add_option("file", validate_file, "problem file (JSON)")->required();

  qzec::cli::GraphOptions graph_options;
  CLI::App* graph = app.add_subcommand(
      "graph", "build the characteristic graph and its clique number");
  graph->add_option("file", graph_options.file, "problem file (JSON)")->required();
  graph->add_option("--n", graph_options.power, "also analyze the n-th power graph");
  graph->add_option("--dot", graph_options.dot_path, "write DOT output to this path");
  graph->add_option("--budget", graph_options.budget, "clique search node budget");
  double graph_tol_prob = -1.0;
  graph->add_option("--tol-prob", graph_tol_prob,
                    "probability cutoff for adjacency decisions");

  qzec::cli::CapacityOptions capacity_options;
  CLI::App* capacity = app.add_subcommand(
      "capacity", "certified lower bound on the zero-error capacity");
  capacity->add_option("file", capacity_options.file, "problem file (JSON)");
  capacity->add_option("--channel", capacity_options.channel_name,
                       "zoo channel: pentagon, identity-d<D>, depolarizing-p<P>, "
                       "bitflip-q<Q>");
  capacity->add_option("--nmax", capacity_options.n_max, "block length cap");
  capacity->add_option("--seed", capacity_options.seed, "search seed");
  capacity->add_option("--random-bases", capacity_options.random_bases,
                       "number of seeded random input bases");
  capacity->add_option("--json", capacity_options.json_path,
                       "write the full machine-readable record here");
  capacity->add_option("--budget", capacity_options.budget,
                       "clique search node budget");
  double capacity_tol_prob = -1.0;
  capacity->add_option("--tol-prob", capacity_tol_prob,
                       "probability cutoff for adjacency decisions");

  qzec::cli::VerifyOptions verify_options;
  CLI::App* verify = app.add_subcommand(
      "verify", "machine-check one of the structural propositions");
  verify->add_option("--prop", verify_options.prop, "proposition: 1, 2, 3 or 4")
      ->required();
  verify->add_option("--trials", verify_options.trials, "randomized trial count");
  verify->add_option("--seed", verify_options.seed, "trial seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : qzec::cli::kExitParse;
  }

  if (validate->parsed()) {
    return qzec::cli::cmd_validate(validate_file, std::cout, std::cerr);
  }
  if (graph->parsed()) {
    if (graph_tol_prob > 0.0) graph_options.tol_prob = graph_tol_prob;
    return qzec::cli::cmd_graph(graph_options, std::cout, std::cerr);
  }
  if (capacity->parsed()) {
    if (capacity_tol_prob > 0.0) capacity_options.tol_prob = capacity_tol_prob;
    return qzec::cli::cmd_capacity(capacity_options, std::cout, std::cerr);
  }
  if (verify->parsed()) {
    return qzec::cli::cmd_verify(verify_options, std::cout, std::cerr);
  }
  return qzec::cli::kExitParse;
}
