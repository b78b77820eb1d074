#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "qzec/channels.hpp"
#include "qzec/distinguishability.hpp"
#include "qzec/graph.hpp"
#include "qzec/random.hpp"

using namespace qzec;

namespace {

DensityOperator ket0() { return DensityOperator::pure(PureState::basis(2, 0)); }
DensityOperator ket1() { return DensityOperator::pure(PureState::basis(2, 1)); }

DensityOperator plus_projector() {
  ComplexVector v(2);
  v << std::sqrt(0.5), std::sqrt(0.5);
  return DensityOperator::pure(PureState(v));
}

oracle::Mat to_oracle(const ComplexMatrix& m) {
  oracle::Mat out(m.rows(), std::vector<oracle::C>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  }
  return out;
}

// A-set computed entirely with the hand-rolled oracle arithmetic.
std::vector<int> oracle_a_set(const KrausChannel& channel,
                              const DensityOperator& rho, const Povm& povm) {
  std::vector<oracle::Mat> ops;
  for (const auto& e : channel.operators()) ops.push_back(to_oracle(e));
  const oracle::Mat sigma = oracle::apply_kraus(ops, to_oracle(rho.matrix()));
  std::vector<int> outcomes;
  for (int j = 0; j < povm.size(); ++j) {
    const double p = oracle::trace(oracle::mul(sigma, to_oracle(povm.element(j)))).real();
    if (p > kTol.prob) outcomes.push_back(j);
  }
  return outcomes;
}

}  // namespace

TEST_CASE("transition_probability") {
  const KrausChannel id2 = identity_channel(2);
  const Povm comp = Povm::computational(2);
  REQUIRE(transition_probability(id2, ket0(), comp.element(0)) == 1.0);
  REQUIRE(transition_probability(id2, ket0(), comp.element(1)) == 0.0);
  REQUIRE(transition_probability(depolarizing_channel(1.0), ket0(), comp.element(0)) ==
          Catch::Approx(0.5).margin(1e-15));
  REQUIRE_THROWS_AS(transition_probability(id2, ket0(), identity_matrix(3)),
                    std::invalid_argument);
}

TEST_CASE("transition_matrix") {
  SECTION("identity channel with basis inputs is the identity matrix") {
    const TransitionMatrix t = transition_matrix(
        identity_channel(2), InputEnsemble::computational_basis(2),
        Povm::computational(2));
    REQUIRE(t.prob(0, 0) == 1.0);
    REQUIRE(t.prob(0, 1) == 0.0);
    REQUIRE(t.prob(1, 0) == 0.0);
    REQUIRE(t.prob(1, 1) == 1.0);
  }

  SECTION("embedded pentagon reproduces the defining stochastic matrix") {
    const ClassicalDmc dmc = pentagon_dmc();
    const EmbeddedDmc embedded = embed_classical_dmc(dmc);
    const TransitionMatrix t =
        transition_matrix(embedded.channel, embedded.ensemble, embedded.povm);
    for (int i = 0; i < 5; ++i) {
      for (int k = 0; k < 5; ++k) {
        REQUIRE(t.prob(i, k) == Catch::Approx(dmc.prob(i, k)).margin(1e-15));
      }
    }
  }

  SECTION("fully depolarizing is uniform over basis outcomes") {
    const TransitionMatrix t = transition_matrix(
        depolarizing_channel(1.0), InputEnsemble::computational_basis(2),
        Povm::computational(2));
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) {
        REQUIRE(t.prob(i, k) == Catch::Approx(0.5).margin(1e-15));
      }
    }
  }

  SECTION("rows sum to one on random triples") {
    rnd::Rng rng(43);
    for (int trial = 0; trial < 15; ++trial) {
      const int dim = 2 + trial % 3;
      const KrausChannel channel = rnd::random_channel(dim, 1 + trial % 3, rng);
      std::vector<DensityOperator> states;
      for (int i = 0; i < dim; ++i) {
        states.push_back(rnd::random_density(dim, 1 + (trial + i) % dim, rng));
      }
      const TransitionMatrix t = transition_matrix(
          channel, InputEnsemble(std::move(states)), rnd::random_projective_povm(dim, rng));
      for (int r = 0; r < t.inputs(); ++r) {
        REQUIRE(std::abs(t.matrix().row(r).sum() - 1.0) <= kTol.row);
      }
    }
  }
}

TEST_CASE("a_set") {
  const KrausChannel id2 = identity_channel(2);
  const Povm comp = Povm::computational(2);

  SECTION("basis state reaches only its own outcome") {
    REQUIRE(a_set(id2, ket0(), comp).outcomes == std::vector<int>{0});
  }

  SECTION("|+> reaches both computational outcomes") {
    REQUIRE(a_set(id2, plus_projector(), comp).outcomes == std::vector<int>{0, 1});
  }

  SECTION("pentagon basis state 0 reaches outputs 0 and 1") {
    const EmbeddedDmc embedded = embed_classical_dmc(pentagon_dmc());
    const ASet s = a_set(embedded.channel, embedded.ensemble.state(0), embedded.povm);
    REQUIRE(s.outcomes == std::vector<int>{0, 1});
    REQUIRE(oracle_a_set(embedded.channel, embedded.ensemble.state(0),
                         embedded.povm) == s.outcomes);
  }

  SECTION("membership is invariant under POVM element permutation") {
    rnd::Rng rng(47);
    const KrausChannel channel = rnd::random_channel(3, 2, rng);
    const DensityOperator rho = rnd::random_density(3, 2, rng);
    const Povm povm = rnd::random_projective_povm(3, rng);
    const std::vector<int> base = a_set(channel, rho, povm).outcomes;

    // Reverse the element order; outcome j becomes m-1-j.
    std::vector<ComplexMatrix> reversed(povm.elements().rbegin(),
                                        povm.elements().rend());
    const Povm permuted(3, std::move(reversed));
    std::vector<int> expected;
    for (int j : base) expected.push_back(povm.size() - 1 - j);
    std::sort(expected.begin(), expected.end());
    REQUIRE(a_set(channel, rho, permuted).outcomes == expected);
  }
}

TEST_CASE("non_adjacent") {
  const KrausChannel id2 = identity_channel(2);
  const Povm comp = Povm::computational(2);
  REQUIRE(non_adjacent(id2, ket0(), ket1(), comp));
  REQUIRE_FALSE(non_adjacent(id2, ket0(), plus_projector(), comp));

  const EmbeddedDmc pent = embed_classical_dmc(pentagon_dmc());
  REQUIRE(non_adjacent(pent.channel, pent.ensemble.state(0), pent.ensemble.state(2),
                       pent.povm));
  REQUIRE_FALSE(non_adjacent(pent.channel, pent.ensemble.state(0),
                             pent.ensemble.state(1), pent.povm));
}

TEST_CASE("coarse_povm") {
  SECTION("computational POVM split into singletons is unchanged") {
    const Povm coarse = coarse_povm(Povm::computational(2), {0}, {1});
    REQUIRE(max_abs(coarse.element(0) - ket0().matrix()) < 1e-15);
    REQUIRE(max_abs(coarse.element(1) - ket1().matrix()) < 1e-15);
  }

  SECTION("all-but-last versus last gives {1 - M, M}") {
    rnd::Rng rng(53);
    const Povm povm = rnd::random_projective_povm(4, rng);
    const Povm coarse = coarse_povm(povm, {0, 1, 2}, {3});
    REQUIRE(max_abs(coarse.element(0) - (identity_matrix(4) - povm.element(3))) <
            1e-12);
    REQUIRE(max_abs(coarse.element(1) - povm.element(3)) == 0.0);
  }

  SECTION("pentagon basis POVM split {0,1} / {2,3,4}") {
    const EmbeddedDmc pent = embed_classical_dmc(pentagon_dmc());
    const Povm coarse = coarse_povm(pent.povm, {0, 1}, {2, 3, 4});
    ComplexMatrix first = ComplexMatrix::Zero(5, 5);
    first(0, 0) = first(1, 1) = 1.0;
    REQUIRE(max_abs(coarse.element(0) - first) == 0.0);
    REQUIRE(max_abs(coarse.element(1) - (identity_matrix(5) - first)) == 0.0);
  }

  SECTION("bad partitions are rejected") {
    const Povm comp = Povm::computational(3);
    REQUIRE_THROWS_AS(coarse_povm(comp, {0, 1}, {1, 2}), std::invalid_argument);
    REQUIRE_THROWS_AS(coarse_povm(comp, {0}, {2}), std::invalid_argument);
    REQUIRE_THROWS_AS(coarse_povm(comp, {}, {0, 1, 2}), std::invalid_argument);
  }
}

TEST_CASE("orthogonal_outputs") {
  REQUIRE(orthogonal_outputs(identity_channel(2), ket0(), ket1()));
  REQUIRE_FALSE(orthogonal_outputs(depolarizing_channel(1.0), ket0(), ket1()));

  const EmbeddedDmc pent = embed_classical_dmc(pentagon_dmc());
  REQUIRE(orthogonal_outputs(pent.channel, pent.ensemble.state(0),
                             pent.ensemble.state(2)));
  REQUIRE_FALSE(orthogonal_outputs(pent.channel, pent.ensemble.state(0),
                                   pent.ensemble.state(1)));
}

TEST_CASE("support_distinguishing_povm realizes the orthogonality criterion") {
  const EmbeddedDmc pent = embed_classical_dmc(pentagon_dmc());

  SECTION("orthogonal pair gets a separating POVM") {
    const auto povm = support_distinguishing_povm(pent.channel, pent.ensemble.state(0),
                                                  pent.ensemble.state(2));
    REQUIRE(povm.has_value());
    REQUIRE(non_adjacent(pent.channel, pent.ensemble.state(0), pent.ensemble.state(2),
                         *povm));
    // The two-block coarse graining answers with certainty (probabilities 1).
    std::vector<int> rest;
    for (int j = 1; j < povm->size(); ++j) rest.push_back(j);
    const Povm coarse = coarse_povm(*povm, {0}, rest);
    REQUIRE(transition_probability(pent.channel, pent.ensemble.state(0),
                                   coarse.element(0)) ==
            Catch::Approx(1.0).margin(kTol.num));
    REQUIRE(transition_probability(pent.channel, pent.ensemble.state(2),
                                   coarse.element(1)) ==
            Catch::Approx(1.0).margin(kTol.num));
  }

  SECTION("overlapping pair gets nothing") {
    REQUIRE_FALSE(support_distinguishing_povm(pent.channel, pent.ensemble.state(0),
                                              pent.ensemble.state(1))
                      .has_value());
    REQUIRE_FALSE(non_adjacent_some_povm(pent.channel, pent.ensemble.state(0),
                                         pent.ensemble.state(1)));
  }
}

TEST_CASE("output_support_povm is a valid POVM") {
  rnd::Rng rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + trial % 3;
    const KrausChannel channel = rnd::random_channel(dim, 1 + trial % 3, rng);
    std::vector<DensityOperator> states;
    for (int i = 0; i < 3; ++i) {
      states.push_back(rnd::random_density(dim, 1 + (trial + i) % dim, rng));
    }
    // The Povm constructor enforces hermiticity, positivity, completeness.
    const Povm povm = output_support_povm(channel, InputEnsemble(std::move(states)));
    REQUIRE(povm.size() >= 1);
  }
}

TEST_CASE("purify_ensemble") {
  SECTION("pure states are unchanged up to phase") {
    rnd::Rng rng(61);
    const KrausChannel channel = rnd::random_channel(3, 2, rng);
    std::vector<DensityOperator> states;
    for (int i = 0; i < 3; ++i) {
      states.push_back(DensityOperator::pure(rnd::random_pure_state(3, rng)));
    }
    const InputEnsemble ensemble(states);
    const InputEnsemble pure =
        purify_ensemble(channel, ensemble, Povm::computational(3));
    for (int i = 0; i < 3; ++i) {
      REQUIRE(max_abs(pure.state(i).matrix() - states[i].matrix()) < 1e-10);
    }
  }

  SECTION("maximally mixed qubit resolves to |0><0| deterministically") {
    const InputEnsemble mixed({DensityOperator::maximally_mixed(2)});
    const InputEnsemble pure =
        purify_ensemble(identity_channel(2), mixed, Povm::computational(2));
    REQUIRE(max_abs(pure.state(0).matrix() - ket0().matrix()) < 1e-12);
  }

  SECTION("pentagon block mixtures: A-sets shrink or persist, edges never drop") {
    const EmbeddedDmc pent = embed_classical_dmc(pentagon_dmc());
    auto block_mixture = [](int a, int b) {
      ComplexMatrix m = ComplexMatrix::Zero(5, 5);
      m(a, a) = 0.75;
      m(b, b) = 0.25;
      return DensityOperator(m);
    };
    const InputEnsemble mixed({block_mixture(0, 1), block_mixture(2, 3)});
    const InputEnsemble pure = purify_ensemble(pent.channel, mixed, pent.povm);

    for (int i = 0; i < mixed.size(); ++i) {
      const std::vector<int> before =
          oracle_a_set(pent.channel, mixed.state(i), pent.povm);
      const std::vector<int> after =
          oracle_a_set(pent.channel, pure.state(i), pent.povm);
      REQUIRE(std::includes(before.begin(), before.end(), after.begin(),
                            after.end()));
    }

    const Graph before = build_characteristic_graph(pent.channel, mixed, pent.povm);
    const Graph after = build_characteristic_graph(pent.channel, pure, pent.povm);
    REQUIRE(after.edge_count() >= before.edge_count());
    for (const auto& [u, v] : before.edges()) REQUIRE(after.has_edge(u, v));
  }
}

TEST_CASE("unreachable outcomes stay unreachable for support vectors") {
  // For each state and each eigenvector of its support: if the mixture
  // cannot reach an outcome, neither can the eigenvector.
  rnd::Rng rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 3;
    const EmbeddedDmc embedded = embed_classical_dmc(
        ClassicalDmc(rnd::random_stochastic(dim, dim, rng, 0.5)));
    const DensityOperator rho = rnd::random_density(dim, 1 + trial % dim, rng);
    const DensityOperator sigma = apply_channel(embedded.channel, rho);
    const SpectralDecomposition spec = spectral_decompose(rho);
    for (int j = 0; j < embedded.povm.size(); ++j) {
      const double p = trace_of_product(sigma.matrix(), embedded.povm.element(j)).real();
      if (p > 1e-14) continue;
      for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
        if (spec.eigenvalues[i] <= kTol.rank) continue;
        const double pv = transition_probability(
            embedded.channel, DensityOperator::pure(spec.eigenvectors[i]),
            embedded.povm.element(j));
        REQUIRE(pv <= kTol.prob);
      }
    }
  }
}

TEST_CASE("orthogonality criterion against explicit POVM searches") {
  // Both directions of the equivalence on channels that genuinely produce
  // non-adjacent pairs.
  rnd::Rng rng(71);
  int orthogonal_seen = 0;
  int nonadjacent_seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 2 + trial % 3;
    const EmbeddedDmc embedded = embed_classical_dmc(
        ClassicalDmc(rnd::random_stochastic(dim, dim, rng, 0.6)));
    const int i = trial % dim;
    const int j = (trial + 1 + trial / 2) % dim;
    if (i == j) continue;
    const DensityOperator& rho1 = embedded.ensemble.state(i);
    const DensityOperator& rho2 = embedded.ensemble.state(j);
    const bool orth = orthogonal_outputs(embedded.channel, rho1, rho2);
    if (orth) {
      ++orthogonal_seen;
      REQUIRE(non_adjacent_some_povm(embedded.channel, rho1, rho2));
    }
    for (const Povm& povm :
         {embedded.povm, Povm::computational(dim),
          output_support_povm(embedded.channel, InputEnsemble({rho1, rho2}))}) {
      if (non_adjacent(embedded.channel, rho1, rho2, povm)) {
        ++nonadjacent_seen;
        REQUIRE(orth);
      }
    }
  }
  REQUIRE(orthogonal_seen > 0);
  REQUIRE(nonadjacent_seen > 0);
}
