#pragma once
#include <cstdint>
#include <vector>

#include "ptf/constants.hpp"
#include "ptf/polynomial.hpp"

namespace ptf {

// Random polynomial with every degree-exactly-d coefficient drawn uniformly
// from {-1, +1} and no other terms. Deterministic in the seed.
MultilinearPolynomial sample_from_D(int n, int d, std::uint64_t seed);

// Statistics for one pair (i < j): exact sign distance, and the constant
// term and variance of the product polynomial c = a * b, compared against
// the small-bias / large-variance thresholds
//   |c(0-set)| <= (1/4) * c^-d * C(floor(n/2), d)
//   Var[c] >= (1/12) * C(floor(n/2), d)^2.
struct PairStat {
  int i = 0;
  int j = 0;
  double distance = 0.0;
  double c_constant = 0.0;
  double c_variance = 0.0;
  bool bias_ok = false;
  bool variance_ok = false;
};

struct EnsembleResult {
  int m = 0;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> poly_seeds;
  std::vector<MultilinearPolynomial> polys;
  // Row-major m x m, symmetric, zero diagonal, exact.
  std::vector<double> distance;
  bool has_pairs = false;
  double min_offdiag = 0.0;
  double reference = 0.0;  // c^-d, the separation the theory predicts
  double bias_threshold = 0.0;
  double variance_threshold = 0.0;
  bool odd_n = false;  // floor(n/2) stands in for n/2 in the thresholds
  std::vector<PairStat> pairs;
  double bias_fraction = 0.0;
  double variance_fraction = 0.0;
  double both_fraction = 0.0;

  double at(int i, int j) const { return distance[(std::size_t)i * m + j]; }
};

// Samples m polynomials (per-index derived seeds), measures all pairwise
// sign distances exactly, and records product statistics per pair. The
// threshold fractions are informational; the headline number is the minimum
// off-diagonal distance.
EnsembleResult ensemble_experiment(int m, int n, int d, std::uint64_t seed,
                                   const TheoryConstants& constants);

}  // namespace ptf
