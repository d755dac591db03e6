#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "ptf/tree.hpp"

namespace ptf {

struct IntegerTerm {
  std::uint32_t mask = 0;
  std::int64_t coeff = 0;
};

// Multilinear polynomial with exact integer coefficients, the output side
// of the approximator pipeline. Mask and ordering conventions match
// MultilinearPolynomial. Every operation that could overflow is checked and
// raises ResourceError; nothing wraps.
class IntegerPolynomial {
 public:
  IntegerPolynomial(int n, int degree_bound, std::vector<IntegerTerm> terms);

  static IntegerPolynomial zero(int n) { return {n, 0, {}}; }
  static IntegerPolynomial constant(int n, std::int64_t c) {
    return {n, 0, {{0u, c}}};
  }

  int n() const { return n_; }
  int degree_bound() const { return degree_bound_; }
  const std::vector<IntegerTerm>& terms() const { return terms_; }

  std::int64_t coefficient(std::uint32_t mask) const;
  std::int64_t constant_term() const;
  int degree() const;
  bool is_constant() const;

  // Exact value at a cube point (bit i of index set means x_{i+1} = -1).
  // The accumulator is 128-bit, wide enough for any int64 coefficient set.
  __int128 evaluate_cube(std::uint32_t index) const;
  int sign_at(std::uint32_t index) const;

  // Sum of |coeff|, for transform overflow prechecks.
  unsigned __int128 l1() const;

 private:
  int n_;
  int degree_bound_;
  std::vector<IntegerTerm> terms_;
};

// Exact sum of squared coefficients.
unsigned __int128 weight_of(const IntegerPolynomial& q);
std::string weight_string(const IntegerPolynomial& q);
double weight_log2(const IntegerPolynomial& q);

// Table of sign(q(x)) over the full cube via the integer transform.
std::vector<std::int8_t> sign_table(
    const IntegerPolynomial& q,
    int enumeration_limit = kDefaultEnumerationLimit,
    std::size_t* zero_hits = nullptr);

// Indicator of a path: prod_{(i,v) in rho} (1 + v*x_i), expanded. Takes the
// value 2^|rho| on points consistent with rho and 0 elsewhere.
IntegerPolynomial indicator_poly(const Restriction& rho, int n);

// Coefficient granularity for rounding a regular polynomial:
// alpha = tau / (K * n * ln(4/eps))^(d/2) with tau = (theta * eps / d)^(8d).
double rounding_granularity(int n, int d, double eps,
                            const TheoryConstants& constants);

struct IntegerizeResult {
  IntegerPolynomial body;  // doubled when the fallback fired
  std::int64_t constant = 0;
  bool doubled = false;
  int attempts = 0;  // candidate verifications performed

  IntegerizeResult() : body(IntegerPolynomial::zero(1)) {}
};

// Chooses an integer constant m so that the sign of body + m matches the
// sign of body + c/alpha at every point, verified exhaustively over the
// body's support cube. Tries ceil(c/alpha), then floor(c/alpha); if both
// fail, doubles the body and uses the odd constant 2*floor(c/alpha) + 1,
// whose values are all odd hence never zero. The body must have no constant
// term.
IntegerizeResult integerize_constant(const IntegerPolynomial& body, double c,
                                     double alpha,
                                     int enumeration_limit =
                                         kDefaultEnumerationLimit);

// Exhaustive sign-preservation test behind integerize_constant, exposed so
// the candidate order and the fallback can be exercised directly. gamma is
// the real constant in granularity units (c / alpha).
bool constant_choice_preserves_signs(const IntegerPolynomial& body,
                                     double gamma, std::int64_t m,
                                     int enumeration_limit =
                                         kDefaultEnumerationLimit);

// Rounds a variance-1 polynomial to integer coefficient multiples of the
// granularity. If the constant coefficient already dominates,
// |p(0-set)| > (theta * ln(1/eps))^(d/2), the sign is constant and the
// output is that constant. Otherwise every nonconstant coefficient is
// rounded to the nearest granularity multiple and the constant is
// integerized sign-exactly.
IntegerPolynomial round_regular(const MultilinearPolynomial& p, double eps,
                                const TheoryConstants& constants);

// Assembles Q(x) = sum_leaves P_path(x) * q_leaf(x) with exact integer
// arithmetic. leaf_polys is indexed by leaf id (depth-first order). Leaf
// polynomials must not mention their own path variables.
IntegerPolynomial combine_tree(const DecompositionTree& tree,
                               const std::vector<IntegerPolynomial>& leaf_polys);

struct ApproximationCertificate {
  int n = 0;
  int d = 1;
  double epsilon = 0.0;
  double tau = 0.0;  // tree regularity level derived from epsilon
  MultilinearPolynomial target;  // variance-normalized input
  IntegerPolynomial q;
  PathMassReport mass;
  bool budget_exhausted = false;
  int max_depth = 0;
  int degree_achieved = 0;
  std::string weight;  // exact decimal
  double weight_log2 = 0.0;
  // log2 of n^d * 2^(4 depth) * (d/eps)^(w d), the declared weight shape.
  double declared_bound_log2 = 0.0;
  double distance = 0.0;
  bool distance_exact = true;
  std::int64_t distance_samples = 0;
  std::size_t distance_zero_hits = 0;
  bool distance_ok = false;  // distance <= epsilon
  bool bad_mass_ok = false;  // unreached leaf mass within its tau allowance

  ApproximationCertificate()
      : target(MultilinearPolynomial::zero(1)),
        q(IntegerPolynomial::zero(1)) {}
};

// Full pipeline: normalize, decompose at tau = (theta * (eps/2) / d)^(8d),
// round each reachable leaf (constants at close-to-constant leaves, the
// constant 1 at budget-exhausted leaves), combine, measure the sign
// distance to the input.
ApproximationCertificate approximate(const MultilinearPolynomial& p,
                                     double eps,
                                     const TheoryConstants& constants);

}  // namespace ptf
