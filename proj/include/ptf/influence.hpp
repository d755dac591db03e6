#pragma once
#include <optional>
#include <utility>
#include <vector>

#include "ptf/polynomial.hpp"

namespace ptf {

// Comparison slack for the critical-index inequality, so exact ties (equal
// influences at the boundary tau) resolve consistently under rounding.
inline constexpr double kCriticalIndexSlack = 1e-12;

struct InfluenceProfile {
  // influences[i] = sum of squared coefficients on sets containing
  // variable i+1.
  std::vector<double> influences;
  // Sum over all variables; equals sum_S coeff(S)^2 * |S|.
  double total = 0.0;
  // Sum of squared nonconstant coefficients.
  double variance = 0.0;
  // Variables (1-based) sorted by influence, largest first; ties broken by
  // ascending index. This is the canonical order every head/prefix uses.
  std::vector<int> order;
};

InfluenceProfile influence_profile(const MultilinearPolynomial& p);

// Least i >= 0 such that the (i+1)-st largest influence is at most tau times
// the tail sum from position i+1 on (tail includes that influence). The
// empty-tail convention makes i = #nonzero influences always satisfy the
// inequality, so nullopt (the "never holds" marker) is unreachable; it is
// kept so the caller can treat the value as possibly infinite.
std::optional<int> critical_index(const InfluenceProfile& prof, double tau);
std::optional<int> critical_index(const MultilinearPolynomial& p, double tau);

// Critical index 0.
bool is_tau_regular(const MultilinearPolynomial& p, double tau);
bool is_tau_regular(const InfluenceProfile& prof, double tau);

// sqrt(sum_i Inf_i^2) <= eps * sum_i Inf_i.
bool is_l2_regular(const MultilinearPolynomial& p, double eps);

// Splits p into (head, tail): head keeps the coefficients supported inside
// the K most influential variables (constant term included), tail keeps the
// rest. head + tail == p.
std::pair<MultilinearPolynomial, MultilinearPolynomial> head_tail_split(
    const MultilinearPolynomial& p, int k);

// Sum of influences from sorted position j on (0-based; j = 0 gives the
// total).
double tail_influence_sum(const MultilinearPolynomial& p, int j);

}  // namespace ptf
