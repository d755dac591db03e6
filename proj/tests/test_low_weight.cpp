// Integer polynomials, sign-exact constant rounding, the leaf combiner,
// and the end-to-end approximator. Hand examples carry exactly computable
// weights and distances; the combiner is checked against the pointwise
// product identity it implements.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "ptf/constants.hpp"
#include "ptf/ensemble.hpp"
#include "ptf/errors.hpp"
#include "ptf/low_weight.hpp"
#include "ptf/polynomial.hpp"
#include "ptf/rng.hpp"
#include "ptf/tree.hpp"
#include "ptf/util.hpp"

using namespace ptf;

namespace {

// Direct term-by-term sign, independent of the transform-based sign_table.
int oracle_sign(const IntegerPolynomial& q, std::uint32_t idx) {
  __int128 acc = 0;
  for (const IntegerTerm& t : q.terms()) {
    acc += (popcount32(t.mask & idx) & 1) ? -(__int128)t.coeff
                                          : (__int128)t.coeff;
  }
  return acc < 0 ? -1 : 1;
}

MultilinearPolynomial scaled_majority3() {
  double c = 1.0 / std::sqrt(3.0);
  return {3, 1, {{0b001, c}, {0b010, c}, {0b100, c}}};
}

}  // namespace

TEST_CASE("weight on hand examples") {
  IntegerPolynomial q(3, 2, {{0b001, 3}, {0b110, -2}});
  CHECK(weight_of(q) == 13);
  CHECK(weight_string(q) == "13");
  CHECK(weight_log2(q) == doctest::Approx(std::log2(13.0)));

  CHECK(weight_of(IntegerPolynomial::zero(4)) == 0);
  CHECK(weight_string(IntegerPolynomial::zero(4)) == "0");
  CHECK(weight_of(IntegerPolynomial::constant(2, -5)) == 25);

  // Squares overflow int64 but not the 128-bit accumulator.
  IntegerPolynomial big(2, 1,
                        {{0b01, 3'000'000'000'000'000'000LL},
                         {0b10, -3'000'000'000'000'000'000LL}});
  CHECK(weight_string(big) == "18000000000000000000000000000000000000");
  CHECK(weight_log2(big) == doctest::Approx(std::log2(1.8e37)).epsilon(1e-12));
}

TEST_CASE("integer polynomial basics") {
  IntegerPolynomial q(3, 2, {{0b011, 2}, {0b100, -1}, {0b000, 1}});
  CHECK(q.degree() == 2);
  CHECK(q.constant_term() == 1);
  CHECK(q.coefficient(0b011) == 2);
  CHECK(q.coefficient(0b111) == 0);
  // At index 0 (all +1): 1 + 2 - 1 = 2. At index 0b100 (x3 = -1): 1 + 2 + 1.
  CHECK((std::int64_t)q.evaluate_cube(0) == 2);
  CHECK((std::int64_t)q.evaluate_cube(0b100) == 4);
  // x1 = -1 flips the pair term: 1 - 2 - 1 = -2.
  CHECK((std::int64_t)q.evaluate_cube(0b001) == -2);
  CHECK(q.sign_at(0b001) == -1);

  // Zero values take sign +1.
  IntegerPolynomial z(2, 1, {{0b01, 1}, {0b10, 1}});
  CHECK((std::int64_t)z.evaluate_cube(0b01) == 0);
  CHECK(z.sign_at(0b01) == 1);

  // Duplicate masks merge with overflow detection.
  IntegerPolynomial merged(2, 1, {{0b01, 5}, {0b01, -2}});
  CHECK(merged.coefficient(0b01) == 3);
  CHECK_THROWS_AS(IntegerPolynomial(2, 1,
                                    {{0b01, INT64_MAX}, {0b01, 1}}),
                  ResourceError);
  CHECK_THROWS_AS(IntegerPolynomial(2, 1, {{0b100, 1}}), InvalidInputError);
}

TEST_CASE("integer sign table matches the term oracle") {
  Rng rng(40);
  std::vector<IntegerTerm> terms;
  for (std::uint32_t mask = 0; mask < (1u << 6); ++mask) {
    if (popcount32(mask) > 3) continue;
    terms.push_back({mask, (std::int64_t)(rng.next_u64() % 21) - 10});
  }
  IntegerPolynomial q(6, 3, std::move(terms));
  std::size_t zeros = 0;
  std::vector<std::int8_t> table = sign_table(q, kDefaultEnumerationLimit,
                                              &zeros);
  REQUIRE(table.size() == 64);
  std::size_t zero_count = 0;
  for (std::uint32_t idx = 0; idx < 64; ++idx) {
    CHECK((int)table[idx] == oracle_sign(q, idx));
    zero_count += q.evaluate_cube(idx) == 0;
  }
  CHECK(zeros == zero_count);

  // The integer transform refuses coefficient mass it cannot hold exactly.
  IntegerPolynomial heavy(2, 1,
                          {{0b01, 3'000'000'000'000'000'000LL},
                           {0b10, 3'000'000'000'000'000'000LL}});
  CHECK_THROWS_AS(sign_table(heavy), ResourceError);
}

TEST_CASE("path indicator takes 2^|rho| on its cylinder and 0 elsewhere") {
  Restriction rho;
  rho.append(3, -1);
  rho.append(6, 1);
  rho.append(2, 1);
  IntegerPolynomial ind = indicator_poly(rho, 6);
  CHECK(ind.terms().size() == 8);
  CHECK(weight_of(ind) == 8);
  for (std::uint32_t idx = 0; idx < 64; ++idx) {
    bool consistent = (idx >> 2 & 1) == 1   // x3 = -1
                      && (idx >> 5 & 1) == 0  // x6 = +1
                      && (idx >> 1 & 1) == 0; // x2 = +1
    CHECK((std::int64_t)ind.evaluate_cube(idx) == (consistent ? 8 : 0));
  }

  IntegerPolynomial empty = indicator_poly(Restriction{}, 4);
  CHECK(empty.is_constant());
  CHECK(empty.constant_term() == 1);

  Restriction one;
  one.append(1, 1);
  IntegerPolynomial single = indicator_poly(one, 4);
  CHECK((std::int64_t)single.evaluate_cube(0) == 2);
  CHECK((std::int64_t)single.evaluate_cube(1) == 0);

  Restriction off;
  off.append(5, 1);
  CHECK_THROWS_AS(indicator_poly(off, 4), InvalidInputError);
}

TEST_CASE("integerizing an exact multiple needs one attempt") {
  IntegerPolynomial body(2, 1, {{0b01, 1}});
  double alpha = 0.125;
  IntegerizeResult r = integerize_constant(body, 3.0 * alpha, alpha);
  CHECK(r.constant == 3);
  CHECK_FALSE(r.doubled);
  CHECK(r.attempts == 1);
}

TEST_CASE("integerizing falls back from ceil to floor on a boundary tie") {
  // body + gamma = x1 + 0.4: positive at x1 = +1, negative at x1 = -1. The
  // ceiling candidate 1 gives -1 + 1 = 0, which signs as +1 and breaks the
  // negative point; the floor candidate 0 preserves both signs.
  IntegerPolynomial body(2, 1, {{0b01, 1}});
  IntegerizeResult r = integerize_constant(body, 0.4, 1.0);
  CHECK(r.constant == 0);
  CHECK(r.attempts == 2);
  CHECK_FALSE(r.doubled);

  CHECK_FALSE(constant_choice_preserves_signs(body, 0.4, 1));
  CHECK(constant_choice_preserves_signs(body, 0.4, 0));

  // Same shape at gamma = 1/2, the knife-edge case.
  IntegerizeResult half = integerize_constant(body, 0.5, 1.0);
  CHECK(half.constant == 0);
  CHECK(half.attempts == 2);
}

TEST_CASE("the doubled odd constant always preserves signs") {
  // The fallback the integerizer keeps in reserve: doubling the body and
  // using the odd constant 2 floor(gamma) + 1 makes every value odd, so no
  // rounding tie can flip a sign. Checked directly over random bodies since
  // the two-candidate path never reaches it.
  Rng rng(81);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<IntegerTerm> terms;
    for (std::uint32_t mask = 1; mask < (1u << 5); ++mask) {
      if (popcount32(mask) > 2) continue;
      std::int64_t c = (std::int64_t)(rng.next_u64() % 9) - 4;
      if (c != 0) terms.push_back({mask, 2 * c});
    }
    IntegerPolynomial doubled(5, 2, std::move(terms));
    double gamma = 10.0 * (rng.uniform01() - 0.5);
    std::int64_t odd = 2 * (std::int64_t)std::floor(gamma) + 1;
    CHECK(constant_choice_preserves_signs(doubled, 2.0 * gamma, odd));
  }
}

TEST_CASE("integerize validates its inputs") {
  IntegerPolynomial body(2, 1, {{0b01, 1}});
  CHECK_THROWS_AS(integerize_constant(body, 1.0, 0.0), InvalidInputError);
  CHECK_THROWS_AS(integerize_constant(body, 1e30, 1e-30), ResourceError);
  IntegerPolynomial with_const(2, 1, {{0b00, 1}, {0b01, 1}});
  CHECK_THROWS_AS(integerize_constant(with_const, 1.0, 1.0),
                  InvalidInputError);
}

TEST_CASE("rounding granularity follows its closed form") {
  TheoryConstants tc;
  for (int d : {1, 2, 3}) {
    for (double eps : {0.1, 0.3}) {
      double tau = std::pow(tc.theta * eps / d, 8.0 * d);
      double want =
          tau / std::pow(tc.k_granularity * 10.0 * std::log(4.0 / eps),
                         0.5 * d);
      CHECK(rounding_granularity(10, d, eps, tc) ==
            doctest::Approx(want).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(rounding_granularity(10, 12, 1e-3, TheoryConstants{}),
                  ResourceError);  // granularity underflows to zero
}

TEST_CASE("rounding a balanced majority keeps its sign everywhere") {
  TheoryConstants tc;
  MultilinearPolynomial p = scaled_majority3();
  IntegerPolynomial q = round_regular(p, 0.3, tc);
  // All three coefficients round to the same integer, so sign(q) is again
  // the majority; the constant stays zero.
  REQUIRE(q.terms().size() == 3);
  std::int64_t k = q.coefficient(0b001);
  CHECK(k > 0);
  CHECK(q.coefficient(0b010) == k);
  CHECK(q.coefficient(0b100) == k);
  CHECK(q.constant_term() == 0);
  CHECK(weight_of(q) == (unsigned __int128)(3 * k * k));

  // The coefficients are the nearest granularity multiples.
  double alpha = rounding_granularity(3, 1, 0.3, tc);
  CHECK(k == std::llround(p.coefficient(0b001) / alpha));

  for (std::uint32_t idx = 0; idx < 8; ++idx) {
    CHECK(q.sign_at(idx) == sign_pm(p.evaluate_cube(idx)));
  }
}

TEST_CASE("rounding respects a dominant constant") {
  TheoryConstants tc;
  // Var = 1, constant 3 above the (theta ln(1/eps))^(d/2) threshold: the
  // sign never flips and the output collapses to that constant.
  MultilinearPolynomial p(3, 1, {{0u, 3.0}, {0b001, 1.0}});
  IntegerPolynomial q = round_regular(p, 0.3, tc);
  CHECK(q.is_constant());
  CHECK(q.constant_term() == 1);

  MultilinearPolynomial m(3, 1, {{0u, -3.0}, {0b001, 1.0}});
  CHECK(round_regular(m, 0.3, tc).constant_term() == -1);
}

TEST_CASE("rounding rejects non-unit variance and saturated ranges") {
  TheoryConstants tc;
  MultilinearPolynomial off(2, 1, {{0b01, 2.0}});
  CHECK_THROWS_AS(round_regular(off, 0.3, tc), InvalidInputError);
  // Tiny eps drives the granularity below representability of the
  // coefficients as int64 multiples.
  CHECK_THROWS_AS(round_regular(scaled_majority3(), 1e-3, tc), ResourceError);
}

TEST_CASE("combining a dictator tree gives 2 x1") {
  TheoryConstants tc;
  MultilinearPolynomial p = MultilinearPolynomial::character(4, 0b0001);
  DecompositionTree tree = build_tree(p, 0.1, tc);
  REQUIRE(tree.leaves.size() == 2);
  std::vector<IntegerPolynomial> leaf_polys;
  for (const LeafInfo* leaf : tree.leaves) {
    leaf_polys.push_back(IntegerPolynomial::constant(4, leaf->sign));
  }
  IntegerPolynomial q = combine_tree(tree, leaf_polys);
  CHECK(q.terms().size() == 1);
  CHECK(q.coefficient(0b0001) == 2);
}

TEST_CASE("combiner satisfies the pointwise product identity") {
  TheoryConstants tc;
  Rng rng(60);
  for (std::uint64_t seed : {301u, 302u}) {
    Rng poly_rng(seed);
    std::vector<Term> src;
    for (std::uint32_t mask = 0; mask < (1u << 6); ++mask) {
      if (popcount32(mask) > 2) continue;
      src.push_back({mask, poly_rng.normal()});
    }
    MultilinearPolynomial p(6, 2, std::move(src));
    DecompositionTree tree = build_tree(p, 0.2, tc);

    // Arbitrary integer leaf data on the free variables of each leaf.
    std::vector<IntegerPolynomial> leaf_polys;
    for (const LeafInfo* leaf : tree.leaves) {
      std::uint32_t free_mask = ((1u << 6) - 1) & ~leaf->path.mask(6);
      std::vector<IntegerTerm> terms;
      for (std::uint32_t mask = 0; mask < (1u << 6); ++mask) {
        if ((mask & ~free_mask) != 0 || popcount32(mask) > 2) continue;
        std::int64_t c = (std::int64_t)(rng.next_u64() % 7) - 3;
        if (c != 0) terms.push_back({mask, c});
      }
      leaf_polys.emplace_back(6, 2, std::move(terms));
    }
    IntegerPolynomial q = combine_tree(tree, leaf_polys);

    for (std::uint32_t idx = 0; idx < 64; ++idx) {
      const LeafInfo& leaf = leaf_for_point(tree, idx);
      __int128 want = (__int128)(std::int64_t{1} << leaf.depth) *
                      leaf_polys[(std::size_t)leaf.id].evaluate_cube(idx);
      CHECK((std::int64_t)q.evaluate_cube(idx) == (std::int64_t)want);
    }
  }
}

TEST_CASE("combiner rejects bad leaf data") {
  TheoryConstants tc;
  MultilinearPolynomial p = MultilinearPolynomial::character(4, 0b0001);
  DecompositionTree tree = build_tree(p, 0.1, tc);

  std::vector<IntegerPolynomial> wrong_count{IntegerPolynomial::constant(4, 1)};
  CHECK_THROWS_AS(combine_tree(tree, wrong_count), InvalidInputError);

  // A leaf polynomial mentioning its own path variable is malformed.
  std::vector<IntegerPolynomial> collide{
      IntegerPolynomial(4, 1, {{0b0001, 1}}),
      IntegerPolynomial::constant(4, 1)};
  CHECK_THROWS_AS(combine_tree(tree, collide), InvalidInputError);

  // Coefficient accumulation is overflow-checked.
  std::vector<IntegerPolynomial> huge{
      IntegerPolynomial::constant(4, 6'000'000'000'000'000'000LL),
      IntegerPolynomial::constant(4, 6'000'000'000'000'000'000LL)};
  CHECK_THROWS_AS(combine_tree(tree, huge), ResourceError);
}

TEST_CASE("approximating a dictator yields 2 x1 exactly") {
  TheoryConstants tc;
  MultilinearPolynomial p = MultilinearPolynomial::character(5, 0b00001);
  ApproximationCertificate cert = approximate(p, 0.2, tc);
  CHECK(cert.d == 1);
  CHECK(cert.tau == doctest::Approx(std::pow(0.1, 8.0)));
  CHECK(cert.q.terms().size() == 1);
  CHECK(cert.q.coefficient(0b00001) == 2);
  CHECK(cert.weight == "4");
  CHECK(cert.distance == 0.0);
  CHECK(cert.distance_exact);
  CHECK(cert.distance_ok);
  CHECK(cert.bad_mass_ok);
  CHECK(cert.max_depth == 1);
  CHECK(cert.weight_log2 <= cert.declared_bound_log2);
}

TEST_CASE("approximating a majority of three is exact at default settings") {
  TheoryConstants tc;
  ApproximationCertificate cert = approximate(scaled_majority3(), 0.3, tc);
  // The tree fully expands (tau is tiny), every leaf is an exact constant,
  // and the combined polynomial reproduces 8 * majority: coefficients 4 on
  // the singletons, -4 on the triple.
  CHECK(cert.distance == 0.0);
  CHECK(cert.distance_ok);
  CHECK(cert.q.coefficient(0b001) == 4);
  CHECK(cert.q.coefficient(0b010) == 4);
  CHECK(cert.q.coefficient(0b100) == 4);
  CHECK(cert.q.coefficient(0b111) == -4);
  CHECK(cert.weight == "64");
  CHECK(cert.mass.mass_close == doctest::Approx(1.0));
  CHECK(cert.weight_log2 <= cert.declared_bound_log2);
}

TEST_CASE("a regular input is rounded at the root without branching") {
  // With theta raised, the derived tree tau is large enough that a random
  // degree-2 polynomial with all +-1 coefficients is already regular: one
  // Regular leaf, and the output is the rounded polynomial itself. All
  // rounded coefficients share one magnitude, so the sign is reproduced
  // exactly and the weight is (number of terms) * k^2.
  TheoryConstants tc;
  tc.set("theta", 18);
  MultilinearPolynomial p = sample_from_D(8, 2, 7001);
  ApproximationCertificate cert = approximate(p, 0.2, tc);
  CHECK(cert.max_depth == 0);
  CHECK(cert.mass.mass_regular == doctest::Approx(1.0));
  CHECK(cert.distance == 0.0);
  CHECK(cert.degree_achieved == 2);

  double alpha = rounding_granularity(8, 2, 0.1, tc);
  std::int64_t k = std::llround((1.0 / std::sqrt(28.0)) / alpha);
  REQUIRE(cert.q.terms().size() == 28);
  for (const IntegerTerm& t : cert.q.terms()) {
    CHECK(std::llabs(t.coeff) == k);
  }
  CHECK(weight_of(cert.q) == (unsigned __int128)(28 * k * k));
}

TEST_CASE("an exhausted budget is reported, not hidden") {
  TheoryConstants tc;
  tc.set("depth_budget_override", 0);
  ApproximationCertificate cert = approximate(scaled_majority3(), 0.3, tc);
  CHECK(cert.budget_exhausted);
  CHECK(cert.mass.mass_bad == doctest::Approx(1.0));
  CHECK_FALSE(cert.bad_mass_ok);
  // The bad region defaults to the constant 1, wrong on half the cube.
  CHECK(cert.q.is_constant());
  CHECK(cert.distance == doctest::Approx(0.5));
  CHECK_FALSE(cert.distance_ok);
}

TEST_CASE("approximate validates its inputs") {
  TheoryConstants tc;
  CHECK_THROWS_AS(approximate(scaled_majority3(), 0.0, tc), InvalidInputError);
  CHECK_THROWS_AS(approximate(scaled_majority3(), 1.5, tc), InvalidInputError);
  CHECK_THROWS_AS(approximate(MultilinearPolynomial::constant(3, 2.0), 0.2,
                              tc),
                  DegenerateInputError);
}
