#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptf/constants.hpp"
#include "ptf/polynomial.hpp"

namespace ptf {

enum class CheckFlag { Pass, Fail, Informational, NotApplicable };
enum class CheckMethod { Exact, MonteCarlo };

const char* check_flag_name(CheckFlag f);
const char* check_method_name(CheckMethod m);

// One verifier outcome. Exact reports carry no sampling fields; Monte Carlo
// reports record the seed and sample count that produced them.
struct CheckReport {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  double measured = 0.0;
  double bound = 0.0;
  CheckFlag flag = CheckFlag::Informational;
  CheckMethod method = CheckMethod::Exact;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::string note;
};

struct DistResult {
  double value = 0.0;
  bool exact = true;
  std::int64_t samples = 0;
};

// Fraction of cube points where sign(f) != sign(g), exact when the
// dimension is enumerable and Monte Carlo otherwise.
DistResult dist(const MultilinearPolynomial& f, const MultilinearPolynomial& g,
                const TheoryConstants& constants, std::uint64_t seed = 0);

// Sum of squared transform coefficients of a ±1-valued table must be
// exactly 1. Tables that are not ±1-valued are flagged not-applicable
// rather than failed.
CheckReport parseval_unit_check(const TruthTable& table);

// l4 <= 3^(d/2) * l2 (moment comparison at q = 4). This bound always
// holds, so a failure here means an arithmetic bug, not a calibration
// problem.
CheckReport hypercontractivity_check(const MultilinearPolynomial& p,
                                     const TheoryConstants& constants);

// Exact Pr[|p| >= t * l2] against the reference decay exp(-b * t^(2/d)).
// The decay constant is unknowable, so the report is informational; only
// monotonicity across a t grid is a hard property (asserted by callers).
CheckReport concentration_tail(const MultilinearPolynomial& p, double t,
                               const TheoryConstants& constants);

// Pr[p > c0^-d * l2] > c0^-d for zero-mean p. Asserted at the configured
// c0; on failure the note reports the smallest c0 that would have passed.
CheckReport anticoncentration_check(const MultilinearPolynomial& p,
                                    const TheoryConstants& constants);

// Pr[|p| <= tau] against const * d * tau^(1/(8d)) for unit-variance p.
// Whether p is actually tau-regular is measured and recorded in the params
// rather than enforced, so the verifier can be pointed at near-regular
// instances too.
CheckReport regular_anticoncentration(const MultilinearPolynomial& p,
                                      double tau,
                                      const TheoryConstants& constants);

// Sup gap between the exact Boolean CDF of p and a sampled Gaussian CDF
// (standard normal coordinates), with a 95% DKW sampling band in the params
// and d * max_inf^(1/(8d)) as the informational reference.
CheckReport gaussian_invariance_gap(const MultilinearPolynomial& p,
                                    std::int64_t samples, std::uint64_t seed,
                                    const TheoryConstants& constants);

// Two-sample Kolmogorov distance between equal-weight empirical
// distributions; both inputs must be sorted ascending.
double ks_statistic(std::span<const double> sorted_a,
                    std::span<const double> sorted_b);

// Dense random polynomial: independent N(0,1) coefficients on every mask of
// size at most d. Deterministic in the seed.
MultilinearPolynomial random_polynomial(int n, int d, std::uint64_t seed);

}  // namespace ptf
