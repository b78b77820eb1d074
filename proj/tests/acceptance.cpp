// Acceptance suite: each criterion prints one [PASS]/[FAIL] line and the
// binary exits nonzero if any executed criterion fails. Run with no
// arguments for the full battery or with a criterion number (1-10).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qzec/cli_commands.hpp"
#include "qzec/qzec.hpp"

using namespace qzec;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
  void note(const std::string& what) {
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// 1. Pentagon: rate = log2(5)/2 within 1e-6, omega(G) = 2, omega(G^2) = 5
//    with a verified 5-clique certificate, through the capacity command.
Outcome criterion_1() {
  Outcome outcome;
  cli::CapacityOptions options;
  options.channel_name = "pentagon";
  options.n_max = 2;
  const auto json_path =
      std::filesystem::temp_directory_path() / "qzec_acceptance_pentagon.json";
  options.json_path = json_path.string();
  std::ostringstream out;
  std::ostringstream err;
  if (cli::cmd_capacity(options, out, err) != cli::kExitOk) {
    outcome.fail("cmd_capacity exited nonzero: " + err.str());
    return outcome;
  }
  const io::CapacityRecord record = io::parse_capacity_record(read_file(json_path));
  const double expected = 0.5 * std::log2(5.0);
  if (std::abs(record.rate - expected) > 1e-6) {
    outcome.fail("rate " + std::to_string(record.rate));
  }
  if (record.n_star != 2 || record.clique_size != 5) {
    outcome.fail("expected n*=2 K=5, got n*=" + std::to_string(record.n_star) +
                 " K=" + std::to_string(record.clique_size));
  }
  if (out.str().find("rate: 1.160964") == std::string::npos) {
    outcome.fail("printed rate is not 1.160964");
  }
  if (out.str().find("n=1: 2") == std::string::npos ||
      out.str().find("n=2: 5") == std::string::npos) {
    outcome.fail("omega table must show omega(G)=2 and omega(G^2)=5");
  }

  // Rebuild the graph from the record and verify the 5-clique directly.
  std::vector<DensityOperator> states;
  for (const auto& m : record.state_matrices) states.emplace_back(m);
  const InputEnsemble ensemble(std::move(states), record.state_labels);
  const Povm povm(record.dimension, record.povm);
  const KrausChannel channel = cli::zoo_channel("pentagon");
  const Graph g2 =
      graph_power(build_characteristic_graph(channel, ensemble, povm), 2);
  if (record.certificate_vertices.size() != 5 ||
      !verify_clique(g2, record.certificate_vertices)) {
    outcome.fail("certificate is not a verified 5-clique");
  }
  outcome.note("rate 1.160964, omega(G)=2, omega(G^2)=5, certificate verified");
  return outcome;
}

// 2. Qubit dichotomy: over 50 seeded random qubit channels plus the named
//    set, every answer is exactly 0 or exactly 1 bit.
Outcome criterion_2() {
  Outcome outcome;
  std::vector<std::pair<std::string, KrausChannel>> channels;
  rnd::Rng rng(2024);
  std::uniform_int_distribution<int> count(1, 4);
  for (int i = 0; i < 50; ++i) {
    channels.emplace_back("random-" + std::to_string(i),
                          rnd::random_channel(2, count(rng), rng));
  }
  channels.emplace_back("identity", identity_channel(2));
  for (const double q : {0.0, 0.5, 1.0}) {
    channels.emplace_back("bitflip-q" + std::to_string(q), bitflip_channel(q));
  }
  for (const double p : {0.0, 0.3, 1.0}) {
    channels.emplace_back("depolarizing-p" + std::to_string(p),
                          depolarizing_channel(p));
  }

  int ones = 0;
  for (const auto& [name, channel] : channels) {
    const QubitDichotomy q = qubit_dichotomy(channel);
    if (q.capacity_bits != 0 && q.capacity_bits != 1) {
      outcome.fail(name + " returned fractional " + std::to_string(q.capacity_bits));
    }
    if (q.capacity_bits == 1) ++ones;
    // The full search must land on exactly 0 or exactly 1 bit as well, and
    // must agree with the dichotomy answer.
    const CapacityEstimate est = estimate_capacity(channel);
    if (est.rate != 0.0 && est.rate != 1.0) {
      outcome.fail(name + " searched to fractional rate " + std::to_string(est.rate));
    }
    if (est.rate != static_cast<double>(q.capacity_bits)) {
      outcome.fail(name + " search rate disagrees with the dichotomy");
    }
  }

  const std::vector<std::pair<std::string, int>> expected{
      {"identity", 1},          {"bitflip-q" + std::to_string(0.0), 1},
      {"bitflip-q" + std::to_string(0.5), 1},
      {"bitflip-q" + std::to_string(1.0), 1},
      {"depolarizing-p" + std::to_string(0.0), 1},
      {"depolarizing-p" + std::to_string(0.3), 0},
      {"depolarizing-p" + std::to_string(1.0), 0}};
  for (const auto& [name, want] : expected) {
    for (const auto& [channel_name, channel] : channels) {
      if (channel_name != name) continue;
      const QubitDichotomy q = qubit_dichotomy(channel);
      if (q.capacity_bits != want) {
        outcome.fail(name + " expected " + std::to_string(want) + " got " +
                     std::to_string(q.capacity_bits));
      }
    }
  }
  outcome.note(std::to_string(channels.size()) + " channels, " +
               std::to_string(ones) + " with one bit, all answers in {0,1}");
  return outcome;
}

// 3. Proposition 2 equivalence: 500 randomized trials across d in {2,3,4},
//    zero disagreements between POVM non-adjacency and orthogonal outputs.
Outcome criterion_3() {
  Outcome outcome;
  const PropositionSweep sweep = sweep_propositions_2_4({2, 3, 4}, 500, 31);
  if (!sweep.prop2.pass()) {
    outcome.fail(std::to_string(sweep.prop2.violations.size()) + " disagreements: " +
                 sweep.prop2.violations.front());
  }
  if (sweep.prop2.orthogonal_pairs == 0) {
    outcome.fail("no orthogonal pairs sampled; the check was vacuous");
  }
  outcome.note("500 trials, " + std::to_string(sweep.prop2.orthogonal_pairs) +
               " orthogonal pairs, " +
               std::to_string(sweep.prop2.nonadjacent_found) +
               " non-adjacent findings, 0 disagreements");
  return outcome;
}

// 4. Proposition 4 on the same trial stream: every non-adjacent pure pair
//    is orthogonal within 1e-7 and the distance chain closes within 1e-7.
Outcome criterion_4() {
  Outcome outcome;
  const PropositionSweep sweep = sweep_propositions_2_4({2, 3, 4}, 500, 31);
  if (!sweep.prop4.pass()) {
    outcome.fail(std::to_string(sweep.prop4.violations.size()) + " violations: " +
                 sweep.prop4.violations.front());
  }
  if (sweep.prop4.nonadjacent_pairs == 0) {
    outcome.fail("no non-adjacent pure pairs found; the check was vacuous");
  }
  if (sweep.prop4.max_overlap > 1e-7) {
    outcome.fail("max overlap " + std::to_string(sweep.prop4.max_overlap));
  }
  std::ostringstream detail;
  detail << sweep.prop4.nonadjacent_pairs << " non-adjacent pure pairs, max |overlap| "
         << sweep.prop4.max_overlap;
  outcome.note(detail.str());
  return outcome;
}

// 5. Proposition 3: 100 seeded mixed ensembles over zoo channels; purifying
//    never deletes an edge and never decreases omega at n in {1,2}.
Outcome criterion_5() {
  Outcome outcome;
  rnd::Rng rng(55);
  const EmbeddedDmc pent = embed_classical_dmc(pentagon_dmc());
  std::vector<std::pair<KrausChannel, Povm>> instances{
      {pent.channel, pent.povm},
      {identity_channel(2), Povm::computational(2)},
      {identity_channel(3), Povm::computational(3)},
      {bitflip_channel(0.3), Povm::computational(2)},
      {depolarizing_channel(0.5), Povm::computational(2)}};
  for (int i = 0; i < 3; ++i) {
    const EmbeddedDmc embedded = embed_classical_dmc(
        ClassicalDmc(rnd::random_stochastic(3 + i, 3 + i, rng, 0.5)));
    instances.emplace_back(embedded.channel, embedded.povm);
  }

  int failures = 0;
  long long edges_before = 0;
  for (int t = 0; t < 100; ++t) {
    const auto& [channel, povm] = instances[t % instances.size()];
    std::uniform_int_distribution<int> size(2, std::min(5, channel.dim() + 1));
    const InputEnsemble mixed =
        t % 2 == 0 ? block_mixture_ensemble(channel.dim(), rng)
                   : sample_mixed_ensemble(channel.dim(), size(rng), rng);
    const Prop3Report report = verify_proposition_3(channel, mixed, povm);
    edges_before += report.original_edges;
    if (!report.pass()) ++failures;
  }
  if (failures > 0) {
    outcome.fail(std::to_string(failures) + " ensembles lost edges or omega");
  }
  if (edges_before == 0) {
    outcome.fail("every original graph was empty; edge preservation was vacuous");
  }
  outcome.note("100 mixed ensembles purified (" + std::to_string(edges_before) +
               " original edges), edges and omega monotone at n=1,2");
  return outcome;
}

// 6. Classical round-trip: 100 random stochastic matrices up to 8x8
//    reproduce T within 1e-12 and both graph pipelines agree exactly.
Outcome criterion_6() {
  Outcome outcome;
  rnd::Rng rng(66);
  std::uniform_int_distribution<int> size(2, 8);
  std::uniform_real_distribution<double> sparsity(0.0, 0.6);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int l = size(rng);
    const int m = size(rng);
    const ClassicalDmc dmc(rnd::random_stochastic(l, m, rng, sparsity(rng)));
    const EmbeddedDmc embedded = embed_classical_dmc(dmc);
    const TransitionMatrix got =
        transition_matrix(embedded.channel, embedded.ensemble, embedded.povm);
    for (int i = 0; i < l; ++i) {
      for (int k = 0; k < m; ++k) {
        worst = std::max(worst, std::abs(got.prob(i, k) - dmc.prob(i, k)));
      }
    }
    const Graph quantum = build_characteristic_graph(
        embedded.channel, embedded.ensemble, embedded.povm);
    if (quantum.edges() != classical_characteristic_graph(dmc).edges()) {
      outcome.fail("graph mismatch at trial " + std::to_string(t));
    }
  }
  if (worst > 1e-12) {
    outcome.fail("round-trip deviation " + std::to_string(worst));
  }
  std::ostringstream detail;
  detail << "100 matrices, max round-trip deviation " << worst
         << ", graphs identical";
  outcome.note(detail.str());
  return outcome;
}

// 7. Clique solver soundness: 300 random graphs up to 12 vertices agree
//    with subset enumeration; every certificate re-verifies.
Outcome criterion_7() {
  Outcome outcome;
  rnd::Rng rng(77);
  std::uniform_int_distribution<int> vertices(4, 12);
  std::uniform_real_distribution<double> density(0.15, 0.9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    const int n = vertices(rng);
    const double p = density(rng);
    Graph g(n);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (unif(rng) < p) g.add_edge(u, v);
      }
    }
    const CliqueCertificate fast = clique_number(g);
    const CliqueCertificate slow = clique_number_bruteforce(g);
    if (fast.size != slow.size || !fast.exact) {
      outcome.fail("solver disagreed with enumeration at trial " + std::to_string(t));
      break;
    }
    if (!verify_clique(g, fast.vertices) || !verify_clique(g, slow.vertices)) {
      outcome.fail("certificate failed adjacency verification at trial " +
                   std::to_string(t));
      break;
    }
  }
  outcome.note("300 graphs, solver == enumeration, certificates verified");
  return outcome;
}

// 8. Product-law soundness: edges of G^2 coincide exactly with tensor
//    codeword non-adjacency computed through the two-use channel.
Outcome criterion_8() {
  Outcome outcome;
  rnd::Rng rng(88);
  std::uniform_int_distribution<int> dims(2, 4);
  for (int t = 0; t < 50; ++t) {
    const int dim = dims(rng);
    KrausChannel channel = sample_test_channel(dim, rng);
    Povm povm = Povm::computational(dim);
    InputEnsemble ensemble = InputEnsemble::computational_basis(dim);
    switch (t % 3) {
      case 0:
        break;
      case 1:
        povm = rnd::random_projective_povm(dim, rng);
        break;
      default: {
        ensemble = InputEnsemble::from_basis_columns(rnd::random_unitary(dim, rng));
        break;
      }
    }
    const int l = std::min(4, ensemble.size());
    std::vector<DensityOperator> take(ensemble.states().begin(),
                                      ensemble.states().begin() + l);
    const InputEnsemble small(std::move(take));

    const Graph g = build_characteristic_graph(channel, small, povm);
    const Graph g2 = graph_power(g, 2);
    const KrausChannel channel2 = tensor_channel({channel, channel});
    const Povm povm2 = tensor_povm({povm, povm});
    for (int a = 0; a < l * l; ++a) {
      for (int b = a + 1; b < l * l; ++b) {
        const DensityOperator word_a =
            tensor({small.state(a / l), small.state(a % l)});
        const DensityOperator word_b =
            tensor({small.state(b / l), small.state(b % l)});
        const bool physics = non_adjacent(channel2, word_a, word_b, povm2);
        if (physics != g2.has_edge(a, b)) {
          outcome.fail("product law mismatch at trial " + std::to_string(t));
          return outcome;
        }
      }
    }
  }
  outcome.note("50 instances, product edges == tensor non-adjacency");
  return outcome;
}

// 9. Determinism: byte-identical JSON records from two runs on the same
//    problem file and seed.
Outcome criterion_9() {
  Outcome outcome;
  const EmbeddedDmc pent = embed_classical_dmc(pentagon_dmc());
  const auto dir = std::filesystem::temp_directory_path();
  const auto problem_path = dir / "qzec_acceptance_problem.json";
  {
    std::ofstream out(problem_path, std::ios::binary);
    out << io::problem_json(pent.channel, pent.ensemble, pent.povm);
  }
  std::string first;
  std::string second;
  for (std::string* target : {&first, &second}) {
    const auto json_path = dir / ("qzec_acceptance_det_" +
                                  std::to_string(target == &second) + ".json");
    cli::CapacityOptions options;
    options.file = problem_path.string();
    options.seed = 123;
    options.json_path = json_path.string();
    std::ostringstream out;
    std::ostringstream err;
    if (cli::cmd_capacity(options, out, err) != cli::kExitOk) {
      outcome.fail("cmd_capacity exited nonzero: " + err.str());
      return outcome;
    }
    *target = read_file(json_path);
  }
  if (first.empty() || first != second) {
    outcome.fail("records differ between runs");
  }
  outcome.note("two runs, byte-identical records (" +
               std::to_string(first.size()) + " bytes)");
  return outcome;
}

// 10. Identity channels rate exactly log2(d) at n = 1; the fully
//     depolarizing qubit rates exactly zero.
Outcome criterion_10() {
  Outcome outcome;
  for (const int d : {2, 3, 4}) {
    const CapacityEstimate est = estimate_capacity(identity_channel(d));
    if (est.rate != std::log2(static_cast<double>(d)) || est.n_star != 1) {
      outcome.fail("identity d=" + std::to_string(d) + " gave rate " +
                   std::to_string(est.rate) + " at n*=" +
                   std::to_string(est.n_star));
    }
  }
  const CapacityEstimate zero = estimate_capacity(depolarizing_channel(1.0));
  if (zero.rate != 0.0) {
    outcome.fail("depolarizing p=1 gave rate " + std::to_string(zero.rate));
  }
  outcome.note("identity d=2,3,4 exact at n=1; depolarizing p=1 rates 0");
  return outcome;
}

struct Criterion {
  int number;
  std::string name;
  double time_limit_seconds;  // 0 means no stated limit
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "pentagon capacity lower bound", 5.0, criterion_1},
      {2, "qubit dichotomy", 30.0, criterion_2},
      {3, "proposition 2 equivalence", 60.0, criterion_3},
      {4, "proposition 4 orthogonality", 0.0, criterion_4},
      {5, "proposition 3 purification", 0.0, criterion_5},
      {6, "classical round-trip", 0.0, criterion_6},
      {7, "clique solver soundness", 60.0, criterion_7},
      {8, "product-law soundness", 0.0, criterion_8},
      {9, "determinism", 0.0, criterion_9},
      {10, "identity-channel sanity", 0.0, criterion_10},
  };

  int requested = 0;
  if (argc > 1) {
    requested = std::atoi(argv[1]);
    if (requested < 1 || requested > 10) {
      std::cerr << "usage: acceptance [1-10]\n";
      return 2;
    }
  }

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    if (requested != 0 && criterion.number != requested) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (criterion.time_limit_seconds > 0.0 &&
        elapsed > criterion.time_limit_seconds) {
      outcome.fail("runtime " + std::to_string(elapsed) + " s exceeds " +
                   std::to_string(criterion.time_limit_seconds) + " s");
    }
    if (!outcome.pass) ++failures;
    std::ostringstream line;
    line << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion "
         << criterion.number << ": " << criterion.name;
    if (!outcome.detail.empty()) line << " — " << outcome.detail;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << " (" << elapsed << " s)";
    std::cout << line.str() << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
