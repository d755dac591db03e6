#pragma once
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ptf/errors.hpp"
#include "ptf/util.hpp"

namespace ptf {

inline constexpr int kMaxVariables = 30;
inline constexpr int kDefaultEnumerationLimit = 20;

// One Fourier coefficient. Bit i of the mask set means variable i+1 is in
// the monomial, so a term is coeff * prod_{i in mask} x_{i+1}.
struct Term {
  std::uint32_t mask = 0;
  double coeff = 0.0;
};

// Multilinear polynomial over {-1,1}^n in the Fourier (parity monomial)
// basis. Terms are kept sorted by mask with exact zeros pruned; n and the
// degree bound are fixed at construction.
class MultilinearPolynomial {
 public:
  // Validates dimensions, sorts terms by mask, merges duplicates, prunes
  // exact zeros.
  MultilinearPolynomial(int n, int degree_bound, std::vector<Term> terms);

  static MultilinearPolynomial zero(int n) { return {n, 0, {}}; }
  static MultilinearPolynomial constant(int n, double c) {
    return {n, 0, {{0u, c}}};
  }
  static MultilinearPolynomial character(int n, std::uint32_t mask);

  int n() const { return n_; }
  int degree_bound() const { return degree_bound_; }
  const std::vector<Term>& terms() const { return terms_; }

  double coefficient(std::uint32_t mask) const;
  double constant_term() const;
  // Largest |S| among stored terms (0 for a constant or zero polynomial).
  int degree() const;
  bool is_constant() const;

  // Evaluates at an arbitrary real point; x must have exactly n entries.
  double evaluate(std::span<const double> x) const;

  // Evaluates at a hypercube point given by table index: bit i of `index`
  // set means x_{i+1} = -1, so index 0 is the all-+1 point.
  double evaluate_cube(std::uint32_t index) const;

 private:
  int n_;
  int degree_bound_;
  std::vector<Term> terms_;
};

// Dense table of values over {-1,1}^n, indexed by the convention above
// (little-endian, bit i set <=> x_{i+1} = -1).
struct TruthTable {
  int n = 0;
  std::vector<double> values;
};

// Ordered partial assignment (variable, value) with 1-based variables and
// values in {-1,+1}.
class Restriction {
 public:
  Restriction() = default;
  explicit Restriction(std::vector<std::pair<int, int>> fixed);

  void append(int var, int value);
  const std::vector<std::pair<int, int>>& fixed() const { return fixed_; }
  std::size_t size() const { return fixed_.size(); }
  bool empty() const { return fixed_.empty(); }
  bool fixes(int var) const;

  // Bitmask of fixed variables (bit i <=> variable i+1); requires vars <= n.
  std::uint32_t mask(int n) const;

 private:
  std::vector<std::pair<int, int>> fixed_;
};

// Truth table -> Fourier coefficients (exact divide by 2^n after the
// transform). Degree bound of the result is the largest support size seen.
MultilinearPolynomial fwht_analyze(const TruthTable& table);

// Fourier coefficients -> truth table. Refuses n above the enumeration
// limit since the table has 2^n entries.
TruthTable fwht_synthesize(const MultilinearPolynomial& p,
                           int enumeration_limit = kDefaultEnumerationLimit);

// Fixes the variables of rho and returns the polynomial in the same ambient
// dimension (coefficients on fixed variables become zero).
MultilinearPolynomial restricted(const MultilinearPolynomial& p,
                                 const Restriction& rho);

MultilinearPolynomial multiply(const MultilinearPolynomial& a,
                               const MultilinearPolynomial& b);

struct WeightedPoly {
  double scalar;
  const MultilinearPolynomial* poly;
};
MultilinearPolynomial linear_combine(std::span<const WeightedPoly> parts);

struct Norms {
  double l2 = 0.0;
  double l4 = 0.0;
};
// l2 comes from the coefficients (Parseval, exact for any n); l4 enumerates
// the cube and is limited by enumeration_limit.
Norms norms(const MultilinearPolynomial& p,
            int enumeration_limit = kDefaultEnumerationLimit);

// Sum of squared nonconstant coefficients.
double variance_of(const MultilinearPolynomial& p);

// Scales all coefficients (constant included) so the variance becomes 1.
MultilinearPolynomial normalize_variance(const MultilinearPolynomial& p);

// Table of sign(p(x)) over the cube; zero_hits counts values exactly 0.
std::vector<std::int8_t> sign_table(
    const MultilinearPolynomial& p,
    int enumeration_limit = kDefaultEnumerationLimit,
    std::size_t* zero_hits = nullptr);

}  // namespace ptf
