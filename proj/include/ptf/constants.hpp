#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptf/errors.hpp"

namespace ptf {

// Tunable constants that the asymptotic statements leave unspecified, plus
// resource knobs. Defaults are calibrated so the desk-scale runs in the
// test suite pass; every report embeds the values actually used.
struct TheoryConstants {
  // Anti-concentration base: Pr[p > c0^-d * |p|_2] > c0^-d for zero-mean
  // degree-d p. The regularity machinery uses c = c0^2 (see c()).
  double c0 = 3.0;
  // Multiplier inside the refined-regularity target tau_tilde * (c_prime *
  // d * ln d * ln(1/tau_tilde))^d = tau.
  double c_prime = 3.0;
  // K in the rounding granularity alpha = tau / (K * n * ln(4/eps))^(d/2).
  double k_granularity = 16.0;
  // Scale factor in tau = (theta * eps / d)^(8d) linking the approximation
  // target to the regularity level, and in the dominant-constant cutoff.
  double theta = 1.0;
  // Multiplier on the per-stage head size alpha = alpha_mult * (d ln ln(1/beta)
  // + d ln d + d).
  double alpha_mult = 1.0;
  // Replaces the derived depth budget when set.
  std::optional<std::int64_t> depth_budget_override;
  // Exhaustive enumeration is refused above this many variables.
  int enumeration_limit = 20;
  // Sample count for Monte Carlo fallbacks and the Gaussian comparison.
  std::int64_t mc_samples = 100000;
  // Scale inside the good-restriction tail cutoff (theta_dfn2 * ln(1/beta))^(-d/2).
  double theta_dfn2 = 1.0;
  // Weight bound exponent: declared bound n^d * (d/eps)^(weight_exp * d).
  // With tau = (theta*eps/d)^(8d) the rounded weight carries a 1/tau^2 =
  // (d/(theta*eps))^(16d) factor, so values below ~17 are unsatisfiable.
  double weight_exp = 20.0;
  // b in the reported concentration bound exp(-b * t^(2/d)).
  double conc_const = 1.0;
  // Leading constant in the regular anti-concentration bound const*d*tau^(1/(8d)).
  double reg_anticonc_const = 10.0;
  // a in the budget shape check: derived budget <= (1/tau)*(d ln(1/tau))^(a*d).
  double depth_exp_mult = 10.0;

  double c() const { return c0 * c0; }

  // Named assignment used by the CLI's --const NAME=VALUE. Throws
  // InvalidInputError for unknown names or out-of-range values.
  void set(const std::string& name, double value);
  void validate() const;

  // (name, value) pairs in a fixed order, for reports.
  std::vector<std::pair<std::string, double>> fields() const;
};

}  // namespace ptf
