#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qzec/quantum.hpp"

namespace qzec {

class InputEnsemble {
 public:
  explicit InputEnsemble(std::vector<DensityOperator> states,
                         std::vector<std::string> labels = {})
      : states_(std::move(states)), labels_(std::move(labels)) {
    if (states_.empty()) throw std::invalid_argument("ensemble must be nonempty");
    for (const auto& s : states_) {
      if (s.dim() != states_.front().dim()) {
        throw std::invalid_argument("ensemble states must share one dimension");
      }
    }
    if (labels_.empty()) {
      labels_.reserve(states_.size());
      for (std::size_t i = 0; i < states_.size(); ++i) {
        labels_.push_back(std::to_string(i));
      }
    } else if (labels_.size() != states_.size()) {
      throw std::invalid_argument("ensemble label count mismatch");
    }
  }

  static InputEnsemble computational_basis(int dim) {
    std::vector<DensityOperator> states;
    states.reserve(dim);
    for (int k = 0; k < dim; ++k) {
      states.push_back(DensityOperator::pure(PureState::basis(dim, k)));
    }
    return InputEnsemble(std::move(states));
  }

  /// Rank-1 projectors onto the columns of an orthonormal basis.
  static InputEnsemble from_basis_columns(const ComplexMatrix& columns) {
    std::vector<DensityOperator> states;
    states.reserve(columns.cols());
    for (int k = 0; k < columns.cols(); ++k) {
      states.push_back(DensityOperator::pure(PureState(columns.col(k))));
    }
    return InputEnsemble(std::move(states));
  }

  int dim() const { return states_.front().dim(); }
  int size() const { return static_cast<int>(states_.size()); }
  const DensityOperator& state(int i) const { return states_.at(i); }
  const std::vector<DensityOperator>& states() const { return states_; }
  const std::string& label(int i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<DensityOperator> states_;
  std::vector<std::string> labels_;
};

/// Outcome indices with probability above the cutoff, for one input state.
struct ASet {
  int state_index = -1;       // index into the ensemble, -1 when standalone
  std::vector<int> outcomes;  // sorted ascending
};

inline bool disjoint(const ASet& a, const ASet& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.outcomes.size() && j < b.outcomes.size()) {
    if (a.outcomes[i] == b.outcomes[j]) return false;
    if (a.outcomes[i] < b.outcomes[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return true;
}

/// p = tr[E(rho) M], clamped to [0, 1].
inline double transition_probability(const KrausChannel& channel,
                                     const DensityOperator& rho,
                                     const ComplexMatrix& element) {
  if (element.rows() != channel.dim() || element.cols() != channel.dim()) {
    throw std::invalid_argument("transition_probability: dimension mismatch");
  }
  const DensityOperator sigma = apply_channel(channel, rho);
  const double p = trace_of_product(sigma.matrix(), element).real();
  if (p < -kTol.num || p > 1.0 + kTol.num) {
    throw std::runtime_error("transition_probability escaped [0,1]: " +
                             std::to_string(p));
  }
  return std::clamp(p, 0.0, 1.0);
}

class TransitionMatrix {
 public:
  explicit TransitionMatrix(RealMatrix probabilities, double tol_row = kTol.row)
      : p_(std::move(probabilities)) {
    for (int r = 0; r < p_.rows(); ++r) {
      for (int c = 0; c < p_.cols(); ++c) {
        if (p_(r, c) < 0.0 || p_(r, c) > 1.0) {
          throw std::invalid_argument("transition probabilities must lie in [0,1]");
        }
      }
      if (std::abs(p_.row(r).sum() - 1.0) > tol_row) {
        throw std::invalid_argument("transition matrix row " + std::to_string(r) +
                                    " does not sum to 1");
      }
    }
  }

  int inputs() const { return static_cast<int>(p_.rows()); }
  int outputs() const { return static_cast<int>(p_.cols()); }
  double prob(int input, int outcome) const { return p_(input, outcome); }
  const RealMatrix& matrix() const { return p_; }

 private:
  RealMatrix p_;
};

inline TransitionMatrix transition_matrix(const KrausChannel& channel,
                                          const InputEnsemble& ensemble,
                                          const Povm& povm) {
  if (channel.dim() != ensemble.dim() || channel.dim() != povm.dim()) {
    throw std::invalid_argument("transition_matrix: dimension mismatch");
  }
  RealMatrix t(ensemble.size(), povm.size());
  for (int i = 0; i < ensemble.size(); ++i) {
    const DensityOperator sigma = apply_channel(channel, ensemble.state(i));
    for (int j = 0; j < povm.size(); ++j) {
      const double p = trace_of_product(sigma.matrix(), povm.element(j)).real();
      t(i, j) = std::clamp(p, 0.0, 1.0);
    }
  }
  return TransitionMatrix(std::move(t));
}

inline ASet a_set(const KrausChannel& channel, const DensityOperator& rho,
                  const Povm& povm, double tol_prob = kTol.prob) {
  if (channel.dim() != rho.dim() || channel.dim() != povm.dim()) {
    throw std::invalid_argument("a_set: dimension mismatch");
  }
  const DensityOperator sigma = apply_channel(channel, rho);
  ASet out;
  for (int j = 0; j < povm.size(); ++j) {
    const double p = trace_of_product(sigma.matrix(), povm.element(j)).real();
    if (p > tol_prob) out.outcomes.push_back(j);
  }
  return out;
}

inline std::vector<ASet> ensemble_a_sets(const KrausChannel& channel,
                                         const InputEnsemble& ensemble,
                                         const Povm& povm,
                                         double tol_prob = kTol.prob) {
  std::vector<ASet> sets;
  sets.reserve(ensemble.size());
  for (int i = 0; i < ensemble.size(); ++i) {
    ASet s = a_set(channel, ensemble.state(i), povm, tol_prob);
    s.state_index = i;
    sets.push_back(std::move(s));
  }
  return sets;
}

/// Non-adjacency with respect to an explicit POVM: disjoint A-sets.
inline bool non_adjacent(const KrausChannel& channel, const DensityOperator& rho1,
                         const DensityOperator& rho2, const Povm& povm,
                         double tol_prob = kTol.prob) {
  return disjoint(a_set(channel, rho1, povm, tol_prob),
                  a_set(channel, rho2, povm, tol_prob));
}

/// Two-element coarse graining: each block of outcome indices is summed
/// into one element. The blocks must partition {0, ..., m-1}.
inline Povm coarse_povm(const Povm& povm, const std::vector<int>& first_block,
                        const std::vector<int>& second_block) {
  std::vector<char> seen(povm.size(), 0);
  auto absorb = [&](const std::vector<int>& block) {
    if (block.empty()) throw std::invalid_argument("coarse_povm: empty block");
    ComplexMatrix sum = ComplexMatrix::Zero(povm.dim(), povm.dim());
    for (int j : block) {
      if (j < 0 || j >= povm.size()) {
        throw std::invalid_argument("coarse_povm: index out of range");
      }
      if (seen[j]) throw std::invalid_argument("coarse_povm: blocks overlap");
      seen[j] = 1;
      sum += povm.element(j);
    }
    return sum;
  };
  std::vector<ComplexMatrix> elements;
  elements.push_back(absorb(first_block));
  elements.push_back(absorb(second_block));
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw std::invalid_argument("coarse_povm: blocks miss outcome indices");
  }
  return Povm(povm.dim(), std::move(elements));
}

/// True iff the channel sends the two states into orthogonal subspaces.
///
/// Both criteria are evaluated: the support-projector product and the
/// trace distance of the outputs reaching 1. They must agree; disagreement
/// means the numerics cannot be trusted and raises an error.
inline bool orthogonal_outputs(const KrausChannel& channel,
                               const DensityOperator& rho1,
                               const DensityOperator& rho2,
                               const Tolerances& tol = kTol) {
  const DensityOperator sigma1 = apply_channel(channel, rho1);
  const DensityOperator sigma2 = apply_channel(channel, rho2);
  const ComplexMatrix p1 = support_projector(sigma1, tol.rank);
  const ComplexMatrix p2 = support_projector(sigma2, tol.rank);
  const bool projector_orth = max_abs(p1 * p2) <= tol.orth;
  const bool distance_orth = std::abs(trace_distance(sigma1, sigma2) - 1.0) <= tol.num;
  if (projector_orth != distance_orth) {
    throw std::runtime_error(
        "orthogonal_outputs: projector and trace-distance criteria disagree");
  }
  return projector_orth;
}

/// When the outputs are orthogonal, returns the POVM made of the two
/// support projectors plus the complement (dropped when zero); states are
/// guaranteed non-adjacent with respect to it. Otherwise nullopt: no POVM
/// can separate the pair.
inline std::optional<Povm> support_distinguishing_povm(
    const KrausChannel& channel, const DensityOperator& rho1,
    const DensityOperator& rho2, const Tolerances& tol = kTol) {
  if (!orthogonal_outputs(channel, rho1, rho2, tol)) return std::nullopt;
  const ComplexMatrix p1 = support_projector(apply_channel(channel, rho1), tol.rank);
  const ComplexMatrix p2 = support_projector(apply_channel(channel, rho2), tol.rank);
  std::vector<ComplexMatrix> elements{p1, p2};
  const ComplexMatrix rest = identity_matrix(channel.dim()) - p1 - p2;
  if (max_abs(rest) > tol.povm) elements.push_back(rest);
  return Povm(channel.dim(), std::move(elements));
}

/// Convenience "exists a POVM" form of non-adjacency. Equivalent to
/// orthogonal_outputs, realized through the support-projector POVM.
inline bool non_adjacent_some_povm(const KrausChannel& channel,
                                   const DensityOperator& rho1,
                                   const DensityOperator& rho2,
                                   const Tolerances& tol = kTol) {
  const auto povm = support_distinguishing_povm(channel, rho1, rho2, tol);
  if (!povm) return false;
  if (!non_adjacent(channel, rho1, rho2, *povm, tol.prob)) {
    throw std::runtime_error(
        "non_adjacent_some_povm: support POVM failed to separate orthogonal outputs");
  }
  return true;
}

/// Projective POVM built by walking the ensemble outputs and taking, for
/// each, the support of whatever part of it is not yet covered, plus the
/// complement of everything covered. When the outputs have pairwise
/// orthogonal supports this reduces to the plain support projectors plus
/// complement.
inline Povm output_support_povm(const KrausChannel& channel,
                                const InputEnsemble& ensemble,
                                const Tolerances& tol = kTol) {
  const int d = channel.dim();
  ComplexMatrix covered = ComplexMatrix::Zero(d, d);
  std::vector<ComplexMatrix> elements;
  for (int i = 0; i < ensemble.size(); ++i) {
    const ComplexMatrix sigma = apply_channel(channel, ensemble.state(i)).matrix();
    const ComplexMatrix free = identity_matrix(d) - covered;
    ComplexMatrix rem = free * sigma * free;
    rem = 0.5 * (rem + rem.adjoint().eval());
    const HermitianEigensystem eig = hermitian_eigensystem(rem, 10 * kTol.herm);
    ComplexMatrix projector = ComplexMatrix::Zero(d, d);
    int rank = 0;
    for (int k = 0; k < d; ++k) {
      if (eig.eigenvalues(k) > tol.rank) {
        const ComplexVector v = eig.eigenvectors.col(k);
        projector += v * v.adjoint();
        ++rank;
      }
    }
    if (rank > 0) {
      elements.push_back(projector);
      covered += projector;
    }
  }
  const ComplexMatrix rest = identity_matrix(d) - covered;
  if (max_abs(rest) > tol.povm) elements.push_back(rest);
  return Povm(d, std::move(elements));
}

/// Canonical vector in the maximal eigenspace of rho.
///
/// Degenerate maximal eigenvalues leave the eigensolver's basis arbitrary,
/// so the choice is made through the eigenprojector instead: take the
/// computational basis vector with the largest projection (first index on
/// ties), project, normalize, and fix the phase. Basis-independent and
/// deterministic.
inline PureState dominant_support_vector(const DensityOperator& rho,
                                         const Tolerances& tol = kTol) {
  const HermitianEigensystem eig = hermitian_eigensystem(rho.matrix(), tol.herm);
  const double lambda_max = eig.eigenvalues(0);
  ComplexMatrix projector = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (int i = 0; i < rho.dim(); ++i) {
    if (eig.eigenvalues(i) >= lambda_max - 1e-10) {
      const ComplexVector v = eig.eigenvectors.col(i);
      projector += v * v.adjoint();
    }
  }
  int best = 0;
  double best_weight = projector(0, 0).real();
  for (int k = 1; k < rho.dim(); ++k) {
    const double w = projector(k, k).real();
    if (w > best_weight + 1e-12) {
      best_weight = w;
      best = k;
    }
  }
  ComplexVector v = projector.col(best);
  v.normalize();
  return PureState(fix_phase(std::move(v)));
}

using StateSelector = std::function<PureState(const DensityOperator&)>;

/// Replaces every state with a pure state from its support (default: the
/// canonical maximal-eigenvalue vector). Checks that no A-set grows: an
/// outcome that was unreachable from the mixture must stay unreachable
/// from the replacement, so every non-adjacency survives.
inline InputEnsemble purify_ensemble(const KrausChannel& channel,
                                     const InputEnsemble& ensemble,
                                     const Povm& povm,
                                     const StateSelector& selector = {},
                                     double tol_prob = kTol.prob) {
  if (channel.dim() != ensemble.dim() || channel.dim() != povm.dim()) {
    throw std::invalid_argument("purify_ensemble: dimension mismatch");
  }
  std::vector<DensityOperator> pure_states;
  pure_states.reserve(ensemble.size());
  for (int i = 0; i < ensemble.size(); ++i) {
    const PureState v = selector ? selector(ensemble.state(i))
                                 : dominant_support_vector(ensemble.state(i));
    pure_states.push_back(DensityOperator::pure(v));
  }
  for (int i = 0; i < ensemble.size(); ++i) {
    const ASet before = a_set(channel, ensemble.state(i), povm, tol_prob);
    const ASet after = a_set(channel, pure_states[i], povm, tol_prob);
    if (!std::includes(before.outcomes.begin(), before.outcomes.end(),
                       after.outcomes.begin(), after.outcomes.end())) {
      throw std::runtime_error("purify_ensemble: A-set grew for state " +
                               ensemble.label(i));
    }
  }
  return InputEnsemble(std::move(pure_states), ensemble.labels());
}

}  // namespace qzec
