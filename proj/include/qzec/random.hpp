#pragma once

#include <random>
#include <utility>
#include <vector>

#include "qzec/matrix.hpp"
#include "qzec/quantum.hpp"

namespace qzec::rnd {

using Rng = std::mt19937_64;

inline ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m(r, c) = Complex(gauss(rng), gauss(rng));
    }
  }
  return m;
}

// QR of a Ginibre matrix with the R-diagonal phase correction, so the
// distribution is Haar over the unitary group.
inline ComplexMatrix random_unitary(int dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    q.col(i) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

inline PureState random_pure_state(int dim, Rng& rng) {
  ComplexVector v = ginibre(dim, 1, rng).col(0);
  v.normalize();
  return PureState(std::move(v));
}

inline std::pair<PureState, PureState> random_orthonormal_pair(int dim, Rng& rng) {
  const ComplexVector a = random_pure_state(dim, rng).amplitudes();
  ComplexVector b = ginibre(dim, 1, rng).col(0);
  b -= a * a.dot(b);
  b.normalize();
  return {PureState(a), PureState(std::move(b))};
}

// Random mixed state of the given rank. Mixture weights are kept away from
// zero so no eigenvalue lands near the support cutoff.
inline DensityOperator random_density(int dim, int rank, Rng& rng) {
  rank = std::clamp(rank, 1, dim);
  const ComplexMatrix u = random_unitary(dim, rng);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> weights(rank);
  double total = 0.0;
  for (double& w : weights) {
    w = expo(rng) + 0.1;
    total += w;
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < rank; ++i) {
    const ComplexVector v = u.col(i);
    m += (weights[i] / total) * (v * v.adjoint());
  }
  return DensityOperator(std::move(m));
}

// Trace-preserving channel from a Haar-random isometry sliced into
// `kraus_count` blocks of d rows each.
inline KrausChannel random_channel(int dim, int kraus_count, Rng& rng,
                                   std::string label = "random") {
  if (kraus_count < 1) throw std::invalid_argument("random_channel: kraus_count < 1");
  const ComplexMatrix g = ginibre(dim * kraus_count, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix thin_q =
      qr.householderQ() * ComplexMatrix::Identity(dim * kraus_count, dim);
  std::vector<ComplexMatrix> ops;
  ops.reserve(kraus_count);
  for (int a = 0; a < kraus_count; ++a) {
    ops.push_back(thin_q.middleRows(a * dim, dim));
  }
  return KrausChannel(dim, std::move(ops), std::move(label));
}

inline Povm random_projective_povm(int dim, Rng& rng) {
  return Povm::projective(random_unitary(dim, rng));
}

// Row-stochastic matrix. `zero_fraction` of entries are forced to exact
// zero (at least one entry per row stays); surviving entries are bounded
// well away from the adjacency probability cutoff.
inline RealMatrix random_stochastic(int rows, int cols, Rng& rng,
                                    double zero_fraction = 0.0) {
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RealMatrix t(rows, cols);
  for (int r = 0; r < rows; ++r) {
    double total = 0.0;
    int nonzero = 0;
    for (int c = 0; c < cols; ++c) {
      const bool zero = unif(rng) < zero_fraction;
      t(r, c) = zero ? 0.0 : expo(rng) + 0.1;
      if (!zero) ++nonzero;
      total += t(r, c);
    }
    if (nonzero == 0) {
      std::uniform_int_distribution<int> pick(0, cols - 1);
      const int c = pick(rng);
      t(r, c) = 1.0;
      total = 1.0;
    }
    t.row(r) /= total;
  }
  return t;
}

}  // namespace qzec::rnd
