#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qzec/distinguishability.hpp"
#include "qzec/graph.hpp"
#include "qzec/quantum.hpp"

namespace qzec {

class ClassicalDmc {
 public:
  explicit ClassicalDmc(RealMatrix transition, double tol_row = kTol.row)
      : t_(std::move(transition)) {
    if (t_.rows() == 0 || t_.cols() == 0) {
      throw std::invalid_argument("DMC matrix must be nonempty");
    }
    for (int r = 0; r < t_.rows(); ++r) {
      for (int c = 0; c < t_.cols(); ++c) {
        if (!(t_(r, c) >= 0.0 && t_(r, c) <= 1.0)) {
          throw std::invalid_argument("DMC entries must lie in [0,1]");
        }
      }
      if (std::abs(t_.row(r).sum() - 1.0) > tol_row) {
        throw std::invalid_argument("DMC row " + std::to_string(r) +
                                    " does not sum to 1");
      }
    }
  }

  int inputs() const { return static_cast<int>(t_.rows()); }
  int outputs() const { return static_cast<int>(t_.cols()); }
  double prob(int input, int output) const { return t_(input, output); }
  const RealMatrix& matrix() const { return t_; }

 private:
  RealMatrix t_;
};

struct EmbeddedDmc {
  KrausChannel channel;
  InputEnsemble ensemble;
  Povm povm;
};

/// Embeds a classical DMC into a quantum triple of dimension max(l, m):
/// one Kraus operator sqrt(T[j][k]) |k><j| per nonzero entry, basis-state
/// inputs, basis-projector POVM. The transition matrix of the triple
/// reproduces T entry-wise.
///
/// When l > m the unused output dimensions are folded into the last POVM
/// element, which keeps exactly m outcomes; embedded inputs never reach
/// the folded subspace, so no column of T changes. When m > l the inputs
/// outside the embedded basis are routed to |0> to complete the channel.
inline EmbeddedDmc embed_classical_dmc(const ClassicalDmc& dmc) {
  const int l = dmc.inputs();
  const int m = dmc.outputs();
  const int dim = std::max(l, m);

  std::vector<ComplexMatrix> kraus;
  for (int j = 0; j < l; ++j) {
    for (int k = 0; k < m; ++k) {
      const double p = dmc.prob(j, k);
      if (p > 0.0) {
        ComplexMatrix op = ComplexMatrix::Zero(dim, dim);
        op(k, j) = std::sqrt(p);
        kraus.push_back(std::move(op));
      }
    }
  }
  for (int j = l; j < dim; ++j) {
    ComplexMatrix op = ComplexMatrix::Zero(dim, dim);
    op(0, j) = 1.0;
    kraus.push_back(std::move(op));
  }

  std::vector<DensityOperator> states;
  states.reserve(l);
  for (int j = 0; j < l; ++j) {
    states.push_back(DensityOperator::pure(PureState::basis(dim, j)));
  }

  std::vector<ComplexMatrix> elements;
  elements.reserve(m);
  for (int k = 0; k < m; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    e(k, k) = 1.0;
    elements.push_back(std::move(e));
  }
  for (int k = m; k < dim; ++k) {
    elements.back()(k, k) = 1.0;
  }

  return EmbeddedDmc{KrausChannel(dim, std::move(kraus), "embedded-dmc"),
                     InputEnsemble(std::move(states)),
                     Povm(dim, std::move(elements))};
}

/// Shannon's pentagon: input i reaches output i or i+1 (mod 5), each with
/// probability one half.
inline ClassicalDmc pentagon_dmc() {
  RealMatrix t = RealMatrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i) {
    t(i, i) = 0.5;
    t(i, (i + 1) % 5) = 0.5;
  }
  return ClassicalDmc(std::move(t));
}

/// Characteristic graph straight from the stochastic matrix: two inputs
/// are connected iff no output column has positive probability under both.
inline Graph classical_characteristic_graph(const ClassicalDmc& dmc,
                                            double tol_prob = kTol.prob) {
  Graph g(dmc.inputs());
  for (int i = 0; i < dmc.inputs(); ++i) {
    for (int j = i + 1; j < dmc.inputs(); ++j) {
      bool shared = false;
      for (int k = 0; k < dmc.outputs(); ++k) {
        if (dmc.prob(i, k) > tol_prob && dmc.prob(j, k) > tol_prob) {
          shared = true;
          break;
        }
      }
      if (!shared) g.add_edge(i, j);
    }
  }
  return g;
}

inline KrausChannel identity_channel(int dim) {
  if (dim < 2) throw std::invalid_argument("identity_channel: dim must be >= 2");
  return KrausChannel(dim, {identity_matrix(dim)},
                      "identity-d" + std::to_string(dim));
}

namespace detail {

inline ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix y(2, 2);
  y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return y;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

}  // namespace detail

/// {sqrt(1-q) 1, sqrt(q) X}; operators with zero weight are dropped.
inline KrausChannel bitflip_channel(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("bitflip_channel: q must lie in [0,1]");
  }
  std::vector<ComplexMatrix> ops;
  if (q < 1.0) ops.push_back(std::sqrt(1.0 - q) * identity_matrix(2));
  if (q > 0.0) ops.push_back(std::sqrt(q) * detail::pauli_x());
  return KrausChannel(2, std::move(ops), "bitflip-q" + std::to_string(q));
}

/// Qubit depolarizing channel with the Pauli Kraus set
/// {sqrt(1-3p/4) 1, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}.
/// p = 1 sends every state to the maximally mixed state.
inline KrausChannel depolarizing_channel(int dim, double p) {
  if (dim != 2) {
    throw std::invalid_argument("depolarizing_channel: only the qubit form (d = 2)");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("depolarizing_channel: p must lie in [0,1]");
  }
  std::vector<ComplexMatrix> ops;
  if (p < 4.0 / 3.0) ops.push_back(std::sqrt(1.0 - 3.0 * p / 4.0) * identity_matrix(2));
  if (p > 0.0) {
    ops.push_back(std::sqrt(p / 4.0) * detail::pauli_x());
    ops.push_back(std::sqrt(p / 4.0) * detail::pauli_y());
    ops.push_back(std::sqrt(p / 4.0) * detail::pauli_z());
  }
  return KrausChannel(2, std::move(ops), "depolarizing-p" + std::to_string(p));
}

inline KrausChannel depolarizing_channel(double p) {
  return depolarizing_channel(2, p);
}

}  // namespace qzec
