#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qzec/tolerances.hpp"

namespace qzec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kTol.herm) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

inline ComplexMatrix identity_matrix(int dim) {
  return ComplexMatrix::Identity(dim, dim);
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

// tr(a b) without forming the product.
inline Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

// Total order on equal-shaped matrices: row-major scan, real part before
// imaginary part. Lets callers canonicalize operand order where a bitwise
// symmetric result is required.
inline bool lex_less(const ComplexMatrix& a, const ComplexMatrix& b) {
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const Complex& x = a(r, c);
      const Complex& y = b(r, c);
      if (x.real() != y.real()) return x.real() < y.real();
      if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
  }
  return false;
}

// Multiplies v by a unit phase so its largest-magnitude entry becomes real
// positive; the first index wins among equal magnitudes.
inline ComplexVector fix_phase(ComplexVector v) {
  if (v.size() == 0) return v;
  int best = 0;
  double best_mag = std::abs(v(0));
  for (int i = 1; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  if (best_mag > 0.0) {
    v *= std::conj(v(best)) / best_mag;
  }
  return v;
}

struct HermitianEigensystem {
  RealVector eigenvalues;      // descending
  ComplexMatrix eigenvectors;  // matching columns, phase-fixed
};

// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
// descending. Throws if the input is not Hermitian within `tol_herm`.
inline HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& m,
                                                  double tol_herm = kTol.herm) {
  if (!is_hermitian(m, tol_herm)) {
    throw std::invalid_argument("hermitian_eigensystem: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigensystem: eigensolver failed");
  }
  const int n = static_cast<int>(m.rows());
  HermitianEigensystem out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.eigenvectors.col(i) = fix_phase(solver.eigenvectors().col(n - 1 - i));
  }
  return out;
}

inline RealVector hermitian_eigenvalues(const ComplexMatrix& m,
                                        double tol_herm = kTol.herm) {
  if (!is_hermitian(m, tol_herm)) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigenvalues: eigensolver failed");
  }
  return solver.eigenvalues().reverse();
}

}  // namespace qzec
