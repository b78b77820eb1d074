#pragma once

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qzec/matrix.hpp"
#include "qzec/tolerances.hpp"

namespace qzec {

// ---------------------------------------------------------------------------
// Validation reports
//
// Constructors below validate eagerly and throw, but the CLI and the tests
// also need non-throwing reports for deliberately broken inputs, so every
// invariant is first expressed as a named deviation check.
// ---------------------------------------------------------------------------

struct ValidationCheck {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool ok = true;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  void add(std::string name, double deviation, double tolerance) {
    const bool ok = deviation <= tolerance;
    checks.push_back({std::move(name), deviation, tolerance, ok});
  }

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.ok; });
  }

  std::string summary() const {
    std::ostringstream out;
    for (const auto& c : checks) {
      out << "  " << (c.ok ? "pass" : "FAIL") << "  " << c.name
          << "  deviation=" << c.deviation << "  tolerance=" << c.tolerance
          << '\n';
    }
    return out.str();
  }

  // Throws std::invalid_argument naming every failed check.
  void require(const std::string& subject) const {
    if (passed()) return;
    std::ostringstream msg;
    msg << subject << " failed validation:";
    for (const auto& c : checks) {
      if (!c.ok) {
        msg << " [" << c.name << " deviation=" << c.deviation
            << " tolerance=" << c.tolerance << "]";
      }
    }
    throw std::invalid_argument(msg.str());
  }
};

namespace detail {

inline double finite_deviation(const ComplexMatrix& m) {
  return m.allFinite() ? 0.0 : std::numeric_limits<double>::infinity();
}

inline void require_square(const ComplexMatrix& m, const std::string& what, int dim) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream msg;
    msg << what << ": expected " << dim << "x" << dim << " matrix, got "
        << m.rows() << "x" << m.cols();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace detail

inline ValidationReport validate_density_matrix(const ComplexMatrix& m,
                                                const Tolerances& tol = kTol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("density matrix must be square and nonempty");
  }
  ValidationReport report;
  report.add("finite-entries", detail::finite_deviation(m), 0.0);
  report.add("hermiticity", max_abs(m - m.adjoint()), tol.herm);
  report.add("unit-trace", std::abs(m.trace() - Complex(1.0, 0.0)), tol.trace);
  if (report.passed()) {
    const RealVector evals = hermitian_eigenvalues(m, tol.herm);
    report.add("positivity", std::max(0.0, -evals.minCoeff()), tol.psd);
  }
  return report;
}

inline ValidationReport validate_kraus_operators(
    int dim, const std::vector<ComplexMatrix>& operators,
    const Tolerances& tol = kTol) {
  if (dim <= 0) throw std::invalid_argument("channel dimension must be positive");
  if (operators.empty()) {
    throw std::invalid_argument("channel needs at least one Kraus operator");
  }
  ValidationReport report;
  double finite = 0.0;
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (std::size_t a = 0; a < operators.size(); ++a) {
    detail::require_square(operators[a], "Kraus operator " + std::to_string(a), dim);
    finite = std::max(finite, detail::finite_deviation(operators[a]));
    sum += operators[a].adjoint() * operators[a];
  }
  report.add("finite-entries", finite, 0.0);
  report.add("completeness", max_abs(sum - identity_matrix(dim)), tol.tp);
  return report;
}

/// Completeness report for an already-constructed channel. Constructors
/// validate eagerly, so this is mainly useful for printing deviations.
inline ValidationReport validate_channel(const class KrausChannel& channel,
                                         const Tolerances& tol = kTol);

inline ValidationReport validate_povm_elements(
    int dim, const std::vector<ComplexMatrix>& elements,
    const Tolerances& tol = kTol) {
  if (dim <= 0) throw std::invalid_argument("POVM dimension must be positive");
  if (elements.empty()) throw std::invalid_argument("POVM needs at least one element");
  ValidationReport report;
  double finite = 0.0;
  double herm = 0.0;
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (std::size_t j = 0; j < elements.size(); ++j) {
    detail::require_square(elements[j], "POVM element " + std::to_string(j), dim);
    finite = std::max(finite, detail::finite_deviation(elements[j]));
    herm = std::max(herm, max_abs(elements[j] - elements[j].adjoint()));
    sum += elements[j];
  }
  report.add("finite-entries", finite, 0.0);
  report.add("element-hermiticity", herm, tol.herm);
  if (report.passed()) {
    double negativity = 0.0;
    for (const auto& element : elements) {
      const RealVector evals = hermitian_eigenvalues(element, tol.herm);
      negativity = std::max(negativity, -evals.minCoeff());
    }
    report.add("element-positivity", std::max(0.0, negativity), tol.psd);
  }
  report.add("completeness", max_abs(sum - identity_matrix(dim)), tol.povm);
  return report;
}

inline ValidationReport validate_pure_amplitudes(const ComplexVector& v,
                                                 const Tolerances& tol = kTol) {
  if (v.size() == 0) throw std::invalid_argument("pure state must have amplitudes");
  ValidationReport report;
  report.add("finite-entries", v.allFinite() ? 0.0 : std::numeric_limits<double>::infinity(), 0.0);
  report.add("normalization", std::abs(v.norm() - 1.0), tol.norm);
  return report;
}

// ---------------------------------------------------------------------------
// Domain types. Values are immutable after construction and validated
// eagerly; all downstream math assumes the invariants hold.
// ---------------------------------------------------------------------------

class PureState {
 public:
  explicit PureState(ComplexVector amplitudes, const Tolerances& tol = kTol)
      : amps_(std::move(amplitudes)) {
    validate_pure_amplitudes(amps_, tol).require("pure state");
  }

  static PureState basis(int dim, int index) {
    if (index < 0 || index >= dim) {
      throw std::invalid_argument("basis state index out of range");
    }
    ComplexVector v = ComplexVector::Zero(dim);
    v(index) = 1.0;
    return PureState(std::move(v));
  }

  int dim() const { return static_cast<int>(amps_.size()); }
  const ComplexVector& amplitudes() const { return amps_; }

 private:
  ComplexVector amps_;
};

/// Conjugate-linear inner product <u|v>.
inline Complex overlap(const PureState& u, const PureState& v) {
  if (u.dim() != v.dim()) {
    throw std::invalid_argument("overlap: dimension mismatch");
  }
  return u.amplitudes().dot(v.amplitudes());
}

class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix matrix, const Tolerances& tol = kTol)
      : m_(std::move(matrix)) {
    validate_density_matrix(m_, tol).require("density operator");
  }

  static DensityOperator pure(const PureState& v) {
    return DensityOperator(v.amplitudes() * v.amplitudes().adjoint());
  }

  static DensityOperator maximally_mixed(int dim) {
    return DensityOperator(identity_matrix(dim) / static_cast<double>(dim));
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

class KrausChannel {
 public:
  KrausChannel(int dim, std::vector<ComplexMatrix> operators,
               std::string label = "", const Tolerances& tol = kTol)
      : dim_(dim), ops_(std::move(operators)), label_(std::move(label)) {
    validate_kraus_operators(dim_, ops_, tol).require("Kraus channel " + label_);
  }

  int dim() const { return dim_; }
  const std::vector<ComplexMatrix>& operators() const { return ops_; }
  const std::string& label() const { return label_; }

 private:
  int dim_;
  std::vector<ComplexMatrix> ops_;
  std::string label_;
};

class Povm {
 public:
  Povm(int dim, std::vector<ComplexMatrix> elements, const Tolerances& tol = kTol)
      : dim_(dim), elements_(std::move(elements)) {
    validate_povm_elements(dim_, elements_, tol).require("POVM");
  }

  /// One rank-1 projector per computational basis vector.
  static Povm computational(int dim) {
    std::vector<ComplexMatrix> elements;
    elements.reserve(dim);
    for (int k = 0; k < dim; ++k) {
      ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
      e(k, k) = 1.0;
      elements.push_back(std::move(e));
    }
    return Povm(dim, std::move(elements));
  }

  /// One rank-1 projector per column; columns must be orthonormal.
  static Povm projective(const ComplexMatrix& orthonormal_columns) {
    const int dim = static_cast<int>(orthonormal_columns.rows());
    if (orthonormal_columns.cols() != dim) {
      throw std::invalid_argument("projective POVM needs a full orthonormal basis");
    }
    std::vector<ComplexMatrix> elements;
    elements.reserve(dim);
    for (int k = 0; k < dim; ++k) {
      const ComplexVector c = orthonormal_columns.col(k);
      elements.push_back(c * c.adjoint());
    }
    return Povm(dim, std::move(elements));
  }

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const ComplexMatrix& element(int j) const { return elements_.at(j); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

 private:
  int dim_;
  std::vector<ComplexMatrix> elements_;
};

inline ValidationReport validate_channel(const KrausChannel& channel,
                                         const Tolerances& tol) {
  return validate_kraus_operators(channel.dim(), channel.operators(), tol);
}

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // descending; values <= rank cutoff are 0
  std::vector<PureState> eigenvectors;

  ComplexMatrix reconstruct() const {
    const int dim = eigenvectors.empty() ? 0 : eigenvectors.front().dim();
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
      const ComplexVector& v = eigenvectors[i].amplitudes();
      sum += eigenvalues[i] * (v * v.adjoint());
    }
    return sum;
  }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Applies the channel: sum_a E_a rho E_a^dag.
inline DensityOperator apply_channel(const KrausChannel& channel,
                                     const DensityOperator& rho) {
  if (channel.dim() != rho.dim()) {
    throw std::invalid_argument("apply_channel: dimension mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& op : channel.operators()) {
    out += op * rho.matrix() * op.adjoint();
  }
  return DensityOperator(std::move(out));
}

inline SpectralDecomposition spectral_decompose(const DensityOperator& rho,
                                                const Tolerances& tol = kTol) {
  const HermitianEigensystem eig = hermitian_eigensystem(rho.matrix(), tol.herm);
  SpectralDecomposition out;
  const int dim = rho.dim();
  out.eigenvalues.reserve(dim);
  out.eigenvectors.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    const double lambda = eig.eigenvalues(i);
    out.eigenvalues.push_back(lambda > tol.rank ? lambda : 0.0);
    out.eigenvectors.emplace_back(eig.eigenvectors.col(i));
  }
  const double recon_error = max_abs(out.reconstruct() - rho.matrix());
  if (recon_error > tol.recon) {
    throw std::runtime_error("spectral_decompose: reconstruction error " +
                             std::to_string(recon_error));
  }
  return out;
}

/// Projector onto the span of eigenvectors with eigenvalue > tol_rank.
inline ComplexMatrix support_projector(const DensityOperator& rho,
                                       double tol_rank = kTol.rank) {
  const HermitianEigensystem eig = hermitian_eigensystem(rho.matrix());
  ComplexMatrix projector = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (int i = 0; i < rho.dim(); ++i) {
    if (eig.eigenvalues(i) > tol_rank) {
      const ComplexVector v = eig.eigenvectors.col(i);
      projector += v * v.adjoint();
    }
  }
  return projector;
}

/// Trace distance 0.5 tr |a - b|, clamped to [0, 1].
///
/// The operand order is canonicalized before the eigensolve so the result
/// is bitwise symmetric in its arguments.
inline double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  const bool swap = lex_less(b.matrix(), a.matrix());
  const ComplexMatrix diff =
      swap ? ComplexMatrix(a.matrix() - b.matrix()) : ComplexMatrix(b.matrix() - a.matrix());
  const RealVector evals = hermitian_eigenvalues(diff, 2.0 * kTol.herm);
  const double distance = 0.5 * evals.cwiseAbs().sum();
  return std::clamp(distance, 0.0, 1.0);
}

/// Kronecker product of states in list order.
inline DensityOperator tensor(const std::vector<DensityOperator>& states) {
  if (states.empty()) throw std::invalid_argument("tensor: empty state list");
  ComplexMatrix out = states.front().matrix();
  for (std::size_t i = 1; i < states.size(); ++i) {
    out = kron(out, states[i].matrix());
  }
  return DensityOperator(std::move(out));
}

/// Product POVM over all outcome tuples, last index fastest.
inline Povm tensor_povm(const std::vector<Povm>& povms) {
  if (povms.empty()) throw std::invalid_argument("tensor_povm: empty POVM list");
  std::vector<ComplexMatrix> elements = povms.front().elements();
  int dim = povms.front().dim();
  for (std::size_t i = 1; i < povms.size(); ++i) {
    std::vector<ComplexMatrix> next;
    next.reserve(elements.size() * povms[i].size());
    for (const auto& left : elements) {
      for (const auto& right : povms[i].elements()) {
        next.push_back(kron(left, right));
      }
    }
    elements = std::move(next);
    dim *= povms[i].dim();
  }
  return Povm(dim, std::move(elements));
}

/// Product channel with one Kraus operator per operator tuple.
inline KrausChannel tensor_channel(const std::vector<KrausChannel>& channels) {
  if (channels.empty()) throw std::invalid_argument("tensor_channel: empty channel list");
  std::vector<ComplexMatrix> ops = channels.front().operators();
  int dim = channels.front().dim();
  std::string label = channels.front().label();
  for (std::size_t i = 1; i < channels.size(); ++i) {
    std::vector<ComplexMatrix> next;
    next.reserve(ops.size() * channels[i].operators().size());
    for (const auto& left : ops) {
      for (const auto& right : channels[i].operators()) {
        next.push_back(kron(left, right));
      }
    }
    ops = std::move(next);
    dim *= channels[i].dim();
    label += "(x)" + channels[i].label();
  }
  return KrausChannel(dim, std::move(ops), std::move(label));
}

}  // namespace qzec
