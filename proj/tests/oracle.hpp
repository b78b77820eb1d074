#pragma once

// Hand-rolled complex matrix arithmetic used to derive frozen expected
// values independently of the library. Deliberately avoids Eigen and every
// qzec header: plain loops over nested vectors only.

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;

inline Mat zeros(std::size_t n) { return Mat(n, std::vector<C>(n, C{0.0, 0.0})); }

inline Mat mat2(C a, C b, C c, C d) { return {{a, b}, {c, d}}; }

inline Mat mul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  const std::size_t m = b[0].size();
  const std::size_t k = b.size();
  Mat out(n, std::vector<C>(m, C{0.0, 0.0}));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t t = 0; t < k; ++t) {
        out[i][j] += a[i][t] * b[t][j];
      }
    }
  }
  return out;
}

inline Mat dag(const Mat& a) {
  const std::size_t n = a.size();
  const std::size_t m = a[0].size();
  Mat out(m, std::vector<C>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      out[j][i] = std::conj(a[i][j]);
    }
  }
  return out;
}

inline Mat add(const Mat& a, const Mat& b) {
  Mat out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] += b[i][j];
  }
  return out;
}

inline Mat scale(C s, const Mat& a) {
  Mat out = a;
  for (auto& row : out) {
    for (auto& x : row) x *= s;
  }
  return out;
}

inline C trace(const Mat& a) {
  C t{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

inline Mat kron2(const Mat& a, const Mat& b) {
  const std::size_t an = a.size();
  const std::size_t bn = b.size();
  Mat out(an * bn, std::vector<C>(an * bn));
  for (std::size_t i = 0; i < an; ++i) {
    for (std::size_t j = 0; j < an; ++j) {
      for (std::size_t k = 0; k < bn; ++k) {
        for (std::size_t l = 0; l < bn; ++l) {
          out[i * bn + k][j * bn + l] = a[i][j] * b[k][l];
        }
      }
    }
  }
  return out;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
    }
  }
  return worst;
}

// Channel application sum_a E_a rho E_a^dag by raw arithmetic.
inline Mat apply_kraus(const std::vector<Mat>& ops, const Mat& rho) {
  Mat out = zeros(rho.size());
  for (const Mat& e : ops) {
    out = add(out, mul(mul(e, rho), dag(e)));
  }
  return out;
}

// Eigenvalues of a 2x2 Hermitian matrix [[a, b], [conj(b), d]] in closed
// form: ((a+d) +- sqrt((a-d)^2 + 4|b|^2)) / 2.
inline std::pair<double, double> herm2_eigenvalues(const Mat& m) {
  const double a = m[0][0].real();
  const double d = m[1][1].real();
  const double off = std::abs(m[0][1]);
  const double mid = 0.5 * (a + d);
  const double radius = 0.5 * std::sqrt((a - d) * (a - d) + 4.0 * off * off);
  return {mid + radius, mid - radius};
}

inline double trace_distance2(const Mat& x, const Mat& y) {
  Mat diff = add(x, scale(C{-1.0, 0.0}, y));
  const auto [l1, l2] = herm2_eigenvalues(diff);
  return 0.5 * (std::abs(l1) + std::abs(l2));
}

}  // namespace oracle
