#pragma once

namespace qzec {

// Numeric thresholds shared across validation and adjacency decisions.
//
// `prob` gates every "probability strictly greater than zero" test and is
// the single most safety-critical constant here: an outcome probability
// above it counts as genuinely reachable, below it as an exact zero. It
// must sit well above eigensolver noise (~1e-14 for dim <= 32) and well
// below the smallest genuine probability a test instance produces.
struct Tolerances {
  double herm = 1e-8;   // hermiticity: max |A - A^dag|
  double trace = 1e-8;  // |tr rho - 1|
  double psd = 1e-8;    // eigenvalue floor: lambda >= -psd
  double tp = 1e-8;     // channel completeness: max |sum E^dag E - 1|
  double povm = 1e-8;   // POVM completeness: max |sum M - 1|
  double norm = 1e-8;   // pure-state normalization
  double rank = 1e-9;   // eigenvalues <= rank count as zero (support cutoff)
  double prob = 1e-9;   // outcome probabilities <= prob count as zero
  double row = 1e-7;    // stochastic row-sum deviation
  double num = 1e-7;    // generic numeric slack (distances, metric checks)
  double orth = 1e-7;   // orthogonality: overlaps and projector products
  double recon = 1e-7;  // spectral reconstruction error
};

inline constexpr Tolerances kTol{};

}  // namespace qzec
