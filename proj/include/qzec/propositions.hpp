#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qzec/capacity.hpp"
#include "qzec/channels.hpp"
#include "qzec/random.hpp"

namespace qzec {

// ---------------------------------------------------------------------------
// Machine checks for the structural claims the rest of the library leans
// on. Each verifier reports violations instead of asserting, so the CLI
// can turn the outcome into an exit code; a nonempty violation list always
// indicates an implementation bug, never expected behavior.
// ---------------------------------------------------------------------------

/// Seeded test instances. Mixes flavors that genuinely produce
/// non-adjacent pairs (unitaries, dephasings, sparse classical embeddings)
/// with generic noisy channels where non-adjacency is impossible.
inline KrausChannel sample_test_channel(int dim, rnd::Rng& rng) {
  std::uniform_int_distribution<int> family(0, 9);
  switch (family(rng)) {
    case 0:
    case 1:
    case 2:
    case 3: {
      std::uniform_int_distribution<int> count(2, std::max(2, dim));
      return rnd::random_channel(dim, count(rng), rng);
    }
    case 4:
    case 5:
      return KrausChannel(dim, {rnd::random_unitary(dim, rng)}, "unitary");
    case 6:
    case 7: {
      const RealMatrix t = rnd::random_stochastic(dim, dim, rng, 0.5);
      return embed_classical_dmc(ClassicalDmc(t)).channel;
    }
    case 8: {
      // Dephasing in a random basis: outputs commute and supports are
      // basis-aligned.
      const ComplexMatrix u = rnd::random_unitary(dim, rng);
      std::vector<ComplexMatrix> ops;
      for (int k = 0; k < dim; ++k) {
        const ComplexVector c = u.col(k);
        ops.push_back(c * c.adjoint());
      }
      return KrausChannel(dim, std::move(ops), "dephasing");
    }
    default:
      return identity_channel(dim);
  }
}

inline DensityOperator sample_test_state(int dim, rnd::Rng& rng) {
  std::uniform_int_distribution<int> kind(0, 1);
  if (kind(rng) == 0) {
    return DensityOperator::pure(rnd::random_pure_state(dim, rng));
  }
  std::uniform_int_distribution<int> rank(2, std::max(2, dim));
  return rnd::random_density(dim, rank(rng), rng);
}

inline std::pair<DensityOperator, DensityOperator> sample_test_pair(
    int dim, rnd::Rng& rng, bool pure_only) {
  std::uniform_int_distribution<int> kind(0, 2);
  switch (kind(rng)) {
    case 0: {
      // Random orthonormal pairs: the only pairs that can come out
      // non-adjacent under generic channels.
      const auto [a, b] = rnd::random_orthonormal_pair(dim, rng);
      return {DensityOperator::pure(a), DensityOperator::pure(b)};
    }
    case 1: {
      // Distinct basis pairs: the pairs classical embeddings separate.
      std::uniform_int_distribution<int> pick(0, dim - 1);
      const int i = pick(rng);
      int j = pick(rng);
      if (i == j) j = (j + 1) % dim;
      return {DensityOperator::pure(PureState::basis(dim, i)),
              DensityOperator::pure(PureState::basis(dim, j))};
    }
    default:
      if (pure_only) {
        return {DensityOperator::pure(rnd::random_pure_state(dim, rng)),
                DensityOperator::pure(rnd::random_pure_state(dim, rng))};
      }
      return {sample_test_state(dim, rng), sample_test_state(dim, rng)};
  }
}

inline std::vector<Povm> test_povm_battery(const KrausChannel& channel,
                                           const DensityOperator& rho1,
                                           const DensityOperator& rho2,
                                           rnd::Rng& rng) {
  const int d = channel.dim();
  std::vector<Povm> battery;
  battery.push_back(Povm::computational(d));
  const ComplexMatrix mean =
      0.5 * (apply_channel(channel, rho1).matrix() +
             apply_channel(channel, rho2).matrix());
  battery.push_back(Povm::projective(hermitian_eigensystem(mean).eigenvectors));
  battery.push_back(
      output_support_povm(channel, InputEnsemble({rho1, rho2})));
  battery.push_back(rnd::random_projective_povm(d, rng));
  return battery;
}

/// True iff the characteristic graph of (ensemble, POVM) has at least one
/// edge, meaning the channel carries some information with zero error.
/// Cross-checked against the rate at block length one.
inline bool verify_proposition_1(const KrausChannel& channel,
                                 const InputEnsemble& ensemble, const Povm& povm,
                                 double tol_prob = kTol.prob) {
  const Graph g = build_characteristic_graph(channel, ensemble, povm, tol_prob);
  const bool has_edge = g.edge_count() > 0;
  const CapacityEstimate est = rate_for(channel, ensemble, povm, 1, 10'000'000, tol_prob);
  if (has_edge != (est.rate > 0.0)) {
    throw std::logic_error(
        "verify_proposition_1: edge presence and positive rate disagree");
  }
  return has_edge;
}

struct Prop2Report {
  int trials = 0;
  int orthogonal_pairs = 0;   // pairs with orthogonal output subspaces
  int nonadjacent_found = 0;  // (pair, POVM) combinations found non-adjacent
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

namespace detail {

inline void check_prop2_pair(const KrausChannel& channel,
                             const DensityOperator& rho1,
                             const DensityOperator& rho2, rnd::Rng& rng,
                             const Tolerances& tol, Prop2Report& report) {
  const bool orth = orthogonal_outputs(channel, rho1, rho2, tol);
  if (orth) {
    ++report.orthogonal_pairs;
    // Forward direction: the support-projector POVM must separate them,
    // and its two-block coarse graining must answer with certainty.
    const auto povm = support_distinguishing_povm(channel, rho1, rho2, tol);
    if (!povm || !non_adjacent(channel, rho1, rho2, *povm, tol.prob)) {
      report.violations.push_back(
          "orthogonal outputs but support POVM failed to separate the pair");
      return;
    }
    std::vector<int> rest;
    for (int j = 1; j < povm->size(); ++j) rest.push_back(j);
    const Povm coarse = coarse_povm(*povm, {0}, rest);
    const double p1 = transition_probability(channel, rho1, coarse.element(0));
    const double p2 = transition_probability(channel, rho2, coarse.element(1));
    if (std::abs(p1 - 1.0) > tol.num || std::abs(p2 - 1.0) > tol.num) {
      std::ostringstream msg;
      msg << "coarse POVM probabilities not certain: " << p1 << ", " << p2;
      report.violations.push_back(msg.str());
    }
  }
  // Reverse direction: no POVM may separate a pair whose outputs overlap.
  for (const Povm& povm : test_povm_battery(channel, rho1, rho2, rng)) {
    if (non_adjacent(channel, rho1, rho2, povm, tol.prob)) {
      ++report.nonadjacent_found;
      if (!orth) {
        report.violations.push_back(
            "pair non-adjacent under a POVM but output subspaces overlap");
      }
    }
  }
}

}  // namespace detail

/// Randomized bidirectional check of the orthogonality criterion on one
/// channel: non-adjacency under some POVM must coincide with orthogonal
/// output subspaces, in both directions.
inline Prop2Report verify_proposition_2(const KrausChannel& channel, int trials,
                                        std::uint64_t seed,
                                        const Tolerances& tol = kTol) {
  rnd::Rng rng(seed);
  Prop2Report report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const auto [rho1, rho2] = sample_test_pair(channel.dim(), rng, false);
    detail::check_prop2_pair(channel, rho1, rho2, rng, tol, report);
  }
  return report;
}

struct Prop3Report {
  int original_edges = 0;
  int purified_edges = 0;
  long long omega_before_n1 = 0;
  long long omega_after_n1 = 0;
  long long omega_before_n2 = 0;
  long long omega_after_n2 = 0;
  bool edges_preserved = false;
  bool omega_nondecreasing = false;
  bool pass() const { return edges_preserved && omega_nondecreasing; }
};

/// Replaces mixed states by support vectors and checks the characteristic
/// graph only gains: every original edge survives and the clique number
/// never drops at block lengths one and two.
inline Prop3Report verify_proposition_3(const KrausChannel& channel,
                                        const InputEnsemble& mixed_ensemble,
                                        const Povm& povm,
                                        double tol_prob = kTol.prob,
                                        long long budget = 10'000'000) {
  const InputEnsemble pure =
      purify_ensemble(channel, mixed_ensemble, povm, {}, tol_prob);
  const Graph before = build_characteristic_graph(channel, mixed_ensemble, povm, tol_prob);
  const Graph after = build_characteristic_graph(channel, pure, povm, tol_prob);

  Prop3Report report;
  report.original_edges = before.edge_count();
  report.purified_edges = after.edge_count();
  report.edges_preserved = true;
  for (const auto& [u, v] : before.edges()) {
    if (!after.has_edge(u, v)) report.edges_preserved = false;
  }
  report.omega_before_n1 = clique_number(before, budget).size;
  report.omega_after_n1 = clique_number(after, budget).size;
  report.omega_before_n2 = clique_number(graph_power(before, 2), budget).size;
  report.omega_after_n2 = clique_number(graph_power(after, 2), budget).size;
  report.omega_nondecreasing =
      report.omega_after_n1 >= report.omega_before_n1 &&
      report.omega_after_n2 >= report.omega_before_n2;
  return report;
}

struct Prop4Report {
  int trials = 0;
  int nonadjacent_pairs = 0;
  double max_overlap = 0.0;  // over non-adjacent pure pairs
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

namespace detail {

inline void check_prop4_pair(const KrausChannel& channel, const PureState& v1,
                             const PureState& v2, rnd::Rng& rng,
                             const Tolerances& tol, Prop4Report& report) {
  const DensityOperator rho1 = DensityOperator::pure(v1);
  const DensityOperator rho2 = DensityOperator::pure(v2);
  bool found = non_adjacent_some_povm(channel, rho1, rho2, tol);
  if (!found) {
    for (const Povm& povm : test_povm_battery(channel, rho1, rho2, rng)) {
      if (non_adjacent(channel, rho1, rho2, povm, tol.prob)) {
        found = true;
        break;
      }
    }
  }
  if (!found) return;

  ++report.nonadjacent_pairs;
  const double ov = std::abs(overlap(v1, v2));
  report.max_overlap = std::max(report.max_overlap, ov);
  if (ov > tol.orth) {
    report.violations.push_back("non-adjacent pure pair with overlap " +
                                std::to_string(ov));
  }
  const double d_in = trace_distance(rho1, rho2);
  const double d_out = trace_distance(apply_channel(channel, rho1),
                                      apply_channel(channel, rho2));
  if (std::abs(d_out - 1.0) > tol.num) {
    report.violations.push_back("non-adjacent pair with output distance " +
                                std::to_string(d_out));
  }
  // Chain: 1 >= D(inputs) >= D(outputs) = 1, so D(inputs) = 1 too.
  if (d_in > 1.0 + tol.num || d_in < d_out - tol.num || d_in < 1.0 - tol.num) {
    report.violations.push_back("distance chain violated: D_in=" +
                                std::to_string(d_in) +
                                " D_out=" + std::to_string(d_out));
  }
}

}  // namespace detail

/// For every non-adjacent pure pair found, the inputs must be orthogonal
/// and the contractivity chain must close.
inline Prop4Report verify_proposition_4(const KrausChannel& channel, int trials,
                                        std::uint64_t seed,
                                        const Tolerances& tol = kTol) {
  rnd::Rng rng(seed);
  Prop4Report report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const auto [rho1, rho2] = sample_test_pair(channel.dim(), rng, true);
    const PureState v1(dominant_support_vector(rho1));
    const PureState v2(dominant_support_vector(rho2));
    detail::check_prop4_pair(channel, v1, v2, rng, tol, report);
  }
  return report;
}

/// Joint randomized sweep over freshly sampled channels: every trial runs
/// the Proposition 2 pair check, and additionally the Proposition 4 checks
/// when the pair is pure.
struct PropositionSweep {
  Prop2Report prop2;
  Prop4Report prop4;
};

inline PropositionSweep sweep_propositions_2_4(const std::vector<int>& dims,
                                               int trials, std::uint64_t seed,
                                               const Tolerances& tol = kTol) {
  if (dims.empty()) throw std::invalid_argument("sweep needs at least one dimension");
  rnd::Rng rng(seed);
  PropositionSweep sweep;
  sweep.prop2.trials = trials;
  sweep.prop4.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const int dim = dims[t % dims.size()];
    const KrausChannel channel = sample_test_channel(dim, rng);
    const auto [rho1, rho2] = sample_test_pair(dim, rng, true);
    detail::check_prop2_pair(channel, rho1, rho2, rng, tol, sweep.prop2);
    const PureState v1(dominant_support_vector(rho1));
    const PureState v2(dominant_support_vector(rho2));
    detail::check_prop4_pair(channel, v1, v2, rng, tol, sweep.prop4);
  }
  return sweep;
}

/// Seeded mixed ensemble for Proposition 3 style tests: full-ensemble
/// mixtures with eigenvalues bounded away from the support cutoff.
inline InputEnsemble sample_mixed_ensemble(int dim, int size, rnd::Rng& rng) {
  std::vector<DensityOperator> states;
  std::uniform_int_distribution<int> rank(1, std::min(3, dim));
  for (int i = 0; i < size; ++i) {
    states.push_back(rnd::random_density(dim, rank(rng), rng));
  }
  return InputEnsemble(std::move(states));
}

/// Basis-aligned ensemble: pure basis states interleaved with two-level
/// block mixtures. Against classical embeddings the pure members keep
/// genuine edges while the mixed members gain them under purification, so
/// both directions of the Proposition 3 check are exercised.
inline InputEnsemble block_mixture_ensemble(int dim, rnd::Rng& rng) {
  std::uniform_real_distribution<double> weight(0.55, 0.9);
  std::vector<DensityOperator> states;
  for (int i = 0; i < dim; ++i) {
    if (i % 2 == 0) {
      states.push_back(DensityOperator::pure(PureState::basis(dim, i)));
    } else {
      const double w = weight(rng);
      ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
      m(i, i) = w;
      const int j = (i + 1) % dim;
      m(j, j) = 1.0 - w;
      states.push_back(DensityOperator(std::move(m)));
    }
  }
  return InputEnsemble(std::move(states));
}

}  // namespace qzec
