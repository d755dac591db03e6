// Core polynomial machinery: transform, evaluation, restriction, products,
// norms, text serialization, and the kernels underneath them. The oracles
// here are written straight from the definitions and never call the code
// they check, so a bug in the fast path cannot hide itself.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "ptf/errors.hpp"
#include "ptf/io.hpp"
#include "ptf/kernels.hpp"
#include "ptf/polynomial.hpp"
#include "ptf/rng.hpp"
#include "ptf/util.hpp"

using namespace ptf;

namespace {

// chi_S at a table index. Bit i of the index set means x_{i+1} = -1, so the
// character is -1 exactly when |S ∩ index| is odd.
int chi_at(std::uint32_t s, std::uint32_t index) {
  return (popcount32(s & index) & 1) ? -1 : 1;
}

// O(4^n) transform from the definition: coeff(S) = E_x[f(x) chi_S(x)].
std::vector<double> oracle_coefficients(const std::vector<double>& table,
                                        int n) {
  std::size_t size = std::size_t{1} << n;
  std::vector<double> out(size, 0.0);
  for (std::size_t s = 0; s < size; ++s) {
    double acc = 0.0;
    for (std::size_t x = 0; x < size; ++x) {
      acc += table[x] * chi_at((std::uint32_t)s, (std::uint32_t)x);
    }
    out[s] = acc / (double)size;
  }
  return out;
}

// Term-by-term evaluation at a +-1 point, reading variables directly.
double oracle_eval(const MultilinearPolynomial& p,
                   const std::vector<double>& x) {
  double acc = 0.0;
  for (const Term& t : p.terms()) {
    double m = t.coeff;
    for (int i = 0; i < p.n(); ++i) {
      if (t.mask >> i & 1) m *= x[(std::size_t)i];
    }
    acc += m;
  }
  return acc;
}

std::vector<double> cube_point(int n, std::uint32_t index) {
  std::vector<double> x((std::size_t)n);
  for (int i = 0; i < n; ++i) x[(std::size_t)i] = (index >> i & 1) ? -1.0 : 1.0;
  return x;
}

MultilinearPolynomial random_poly(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Term> terms;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (popcount32(mask) > d) continue;
    terms.push_back({mask, rng.normal()});
  }
  return {n, d, std::move(terms)};
}

}  // namespace

TEST_CASE("transform matches the definitional oracle") {
  Rng rng(11);
  for (int n = 1; n <= 8; ++n) {
    std::size_t size = std::size_t{1} << n;
    TruthTable table{n, {}};
    table.values.resize(size);
    for (double& v : table.values) v = rng.normal();

    MultilinearPolynomial p = fwht_analyze(table);
    std::vector<double> want = oracle_coefficients(table.values, n);
    for (std::uint32_t s = 0; s < size; ++s) {
      CHECK(p.coefficient(s) == doctest::Approx(want[s]).epsilon(1e-12));
    }

    TruthTable back = fwht_synthesize(p);
    REQUIRE(back.values.size() == size);
    for (std::size_t x = 0; x < size; ++x) {
      CHECK(back.values[x] == doctest::Approx(table.values[x]).epsilon(1e-12));
    }
  }
}

TEST_CASE("conjunction of two variables has the classic coefficients") {
  // f = 1 iff x1 = x2 = +1, i.e. table index 0. Known expansion:
  // -1/2 + x1/2 + x2/2 + x1 x2 / 2.
  TruthTable table{2, {1.0, -1.0, -1.0, -1.0}};
  MultilinearPolynomial p = fwht_analyze(table);
  CHECK(p.coefficient(0b00) == doctest::Approx(-0.5));
  CHECK(p.coefficient(0b01) == doctest::Approx(0.5));
  CHECK(p.coefficient(0b10) == doctest::Approx(0.5));
  CHECK(p.coefficient(0b11) == doctest::Approx(0.5));
  CHECK(p.degree() == 2);
}

TEST_CASE("parseval holds for sign tables") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + (int)(rng.next_u64() % 8);
    TruthTable table{n, {}};
    table.values.resize(std::size_t{1} << n);
    for (double& v : table.values) v = rng.pm1();
    MultilinearPolynomial p = fwht_analyze(table);
    double sum = 0.0;
    for (const Term& t : p.terms()) sum += t.coeff * t.coeff;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("evaluate and evaluate_cube agree with the term oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    MultilinearPolynomial p = random_poly(6, 3, seed);
    for (std::uint32_t idx = 0; idx < 64; ++idx) {
      std::vector<double> x = cube_point(6, idx);
      double want = oracle_eval(p, x);
      CHECK(p.evaluate(x) == doctest::Approx(want).epsilon(1e-12));
      CHECK(p.evaluate_cube(idx) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  // Off-cube point exercises the generic path.
  MultilinearPolynomial q(2, 2, {{0b11, 2.0}, {0b01, -1.0}});
  std::vector<double> pt{0.5, 0.25};
  CHECK(q.evaluate(pt) == doctest::Approx(2.0 * 0.5 * 0.25 - 0.5));
  CHECK_THROWS_AS(q.evaluate(std::vector<double>{1.0}), InvalidInputError);
}

TEST_CASE("character factory is a single parity") {
  MultilinearPolynomial chi = MultilinearPolynomial::character(5, 0b10100);
  CHECK(chi.degree() == 2);
  for (std::uint32_t idx = 0; idx < 32; ++idx) {
    CHECK(chi.evaluate_cube(idx) == chi_at(0b10100, idx));
  }
}

TEST_CASE("restriction fixes variables and keeps the ambient dimension") {
  MultilinearPolynomial p = random_poly(6, 3, 99);
  Restriction rho;
  rho.append(2, -1);
  rho.append(5, 1);
  MultilinearPolynomial q = restricted(p, rho);
  CHECK(q.n() == 6);
  // No surviving term may mention a fixed variable.
  for (const Term& t : q.terms()) CHECK((t.mask & rho.mask(6)) == 0);
  // Pointwise match with the original wherever the point agrees with rho.
  for (std::uint32_t idx = 0; idx < 64; ++idx) {
    std::vector<double> x = cube_point(6, idx);
    x[1] = -1.0;
    x[4] = 1.0;
    CHECK(q.evaluate(x) == doctest::Approx(oracle_eval(p, x)).epsilon(1e-12));
  }

  // Hand example: x1 x2 + x2 x3 under x2 = -1 becomes -x1 - x3.
  MultilinearPolynomial h(3, 2, {{0b011, 1.0}, {0b110, 1.0}});
  Restriction fix2;
  fix2.append(2, -1);
  MultilinearPolynomial hr = restricted(h, fix2);
  CHECK(hr.coefficient(0b001) == doctest::Approx(-1.0));
  CHECK(hr.coefficient(0b100) == doctest::Approx(-1.0));
  CHECK(hr.coefficient(0b010) == 0.0);

  CHECK(fix2.fixes(2));
  CHECK_FALSE(fix2.fixes(1));
  CHECK_THROWS_AS(fix2.append(2, 1), InvalidInputError);
  CHECK_THROWS_AS(fix2.append(1, 0), InvalidInputError);
}

TEST_CASE("multiply matches pointwise products") {
  // Shared variable squares away: (x1 x2)(x2 x3) = x1 x3.
  MultilinearPolynomial a = MultilinearPolynomial::character(3, 0b011);
  MultilinearPolynomial b = MultilinearPolynomial::character(3, 0b110);
  MultilinearPolynomial ab = multiply(a, b);
  CHECK(ab.terms().size() == 1);
  CHECK(ab.coefficient(0b101) == doctest::Approx(1.0));

  MultilinearPolynomial p = random_poly(5, 2, 4);
  MultilinearPolynomial q = random_poly(5, 2, 5);
  MultilinearPolynomial pq = multiply(p, q);
  for (std::uint32_t idx = 0; idx < 32; ++idx) {
    double want = p.evaluate_cube(idx) * q.evaluate_cube(idx);
    CHECK(pq.evaluate_cube(idx) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(pq.degree() <= 4);
}

TEST_CASE("linear_combine is pointwise linear") {
  MultilinearPolynomial p = random_poly(4, 2, 21);
  MultilinearPolynomial q = random_poly(4, 3, 22);
  std::vector<WeightedPoly> parts{{2.0, &p}, {-0.5, &q}};
  MultilinearPolynomial r = linear_combine(parts);
  for (std::uint32_t idx = 0; idx < 16; ++idx) {
    double want = 2.0 * p.evaluate_cube(idx) - 0.5 * q.evaluate_cube(idx);
    CHECK(r.evaluate_cube(idx) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("norms against direct cube enumeration") {
  // p = x1 + x2 takes values {2, 0, 0, -2}; E[p^2] = 2, E[p^4] = 8.
  MultilinearPolynomial p(2, 1, {{0b01, 1.0}, {0b10, 1.0}});
  Norms nm = norms(p);
  CHECK(nm.l2 == doctest::Approx(std::sqrt(2.0)));
  CHECK(nm.l4 == doctest::Approx(std::pow(8.0, 0.25)));

  MultilinearPolynomial r = random_poly(6, 3, 7);
  Norms got = norms(r);
  double s2 = 0.0;
  double s4 = 0.0;
  for (std::uint32_t idx = 0; idx < 64; ++idx) {
    double v = r.evaluate_cube(idx);
    s2 += v * v;
    s4 += v * v * v * v;
  }
  CHECK(got.l2 == doctest::Approx(std::sqrt(s2 / 64.0)).epsilon(1e-12));
  CHECK(got.l4 == doctest::Approx(std::pow(s4 / 64.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("variance and normalization") {
  MultilinearPolynomial p(3, 1, {{0u, 5.0}, {0b001, 3.0}});
  CHECK(variance_of(p) == doctest::Approx(9.0));
  MultilinearPolynomial unit = normalize_variance(p);
  CHECK(variance_of(unit) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(unit.constant_term() == doctest::Approx(5.0 / 3.0));
  CHECK_THROWS_AS(normalize_variance(MultilinearPolynomial::constant(3, 2.0)),
                  DegenerateInputError);
}

TEST_CASE("sign_table maps zeros to +1 and counts them") {
  MultilinearPolynomial p(2, 1, {{0b01, 1.0}, {0b10, 1.0}});
  std::size_t zeros = 0;
  std::vector<std::int8_t> s = sign_table(p, kDefaultEnumerationLimit, &zeros);
  REQUIRE(s.size() == 4);
  CHECK(zeros == 2);
  CHECK(s[0] == 1);   // both +1: value 2
  CHECK(s[1] == 1);   // value 0
  CHECK(s[2] == 1);   // value 0
  CHECK(s[3] == -1);  // both -1: value -2
}

TEST_CASE("constructor validates and canonicalizes") {
  CHECK_THROWS_AS(MultilinearPolynomial(0, 0, {}), InvalidInputError);
  CHECK_THROWS_AS(MultilinearPolynomial(31, 0, {}), InvalidInputError);
  CHECK_THROWS_AS(MultilinearPolynomial(2, 3, {}), InvalidInputError);
  // Mask beyond n, term above the degree bound, non-finite coefficient.
  CHECK_THROWS_AS(MultilinearPolynomial(2, 2, {{0b100, 1.0}}),
                  InvalidInputError);
  CHECK_THROWS_AS(MultilinearPolynomial(3, 1, {{0b011, 1.0}}),
                  InvalidInputError);
  CHECK_THROWS_AS(MultilinearPolynomial(2, 1, {{0b01, std::nan("")}}),
                  InvalidInputError);

  MultilinearPolynomial merged(3, 2, {{0b11, 1.0}, {0b11, 1.0}, {0b01, 0.0}});
  CHECK(merged.terms().size() == 1);
  CHECK(merged.coefficient(0b11) == doctest::Approx(2.0));
  CHECK(merged.coefficient(0b01) == 0.0);

  MultilinearPolynomial cancel(3, 2, {{0b11, 1.0}, {0b11, -1.0}});
  CHECK(cancel.terms().empty());
  CHECK(cancel.is_constant());
}

TEST_CASE("text format round-trips exactly") {
  for (std::uint64_t seed : {31u, 32u, 33u}) {
    MultilinearPolynomial p = random_poly(7, 3, seed);
    std::ostringstream os;
    write_polynomial(os, p);
    std::istringstream is(os.str());
    MultilinearPolynomial q = read_polynomial(is);
    CHECK(q.n() == p.n());
    REQUIRE(q.terms().size() == p.terms().size());
    for (std::size_t i = 0; i < p.terms().size(); ++i) {
      CHECK(q.terms()[i].mask == p.terms()[i].mask);
      CHECK(q.terms()[i].coeff == p.terms()[i].coeff);  // bit-exact
    }
  }
}

TEST_CASE("text format rejects malformed input") {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return read_polynomial(is);
  };
  CHECK_THROWS_AS(parse(""), InvalidInputError);
  CHECK_THROWS_AS(parse("n 2\ndegree 1\nterms 2\n1 : 0.5\n"),
                  InvalidInputError);  // fewer terms than declared
  CHECK_THROWS_AS(parse("n 2\ndegree 1\nterms 1\n3 : 0.5\n"),
                  InvalidInputError);  // variable beyond n
  CHECK_THROWS_AS(parse("n 2\ndegree 1\nterms 1\n1 2 : 0.5\n"),
                  InvalidInputError);  // term above declared degree
  CHECK_THROWS_AS(parse("n 2\ndegree 1\nterms 1\n1 : zebra\n"),
                  InvalidInputError);
  // Comments and the constant-term spelling parse fine.
  MultilinearPolynomial ok =
      parse("# comment\nn 2\ndegree 2\nterms 2\n: 0.25\n1 2 : -1\n");
  CHECK(ok.constant_term() == doctest::Approx(0.25));
  CHECK(ok.coefficient(0b11) == doctest::Approx(-1.0));
}

TEST_CASE("parallel kernels agree with the serial reference") {
  // Sizes straddle the internal fork threshold so both paths execute.
  for (std::size_t size : {std::size_t{1} << 6, std::size_t{1} << 15}) {
    Rng rng(size);
    std::vector<double> base(size);
    for (double& v : base) v = rng.normal();

    std::vector<double> a = base;
    std::vector<double> b = base;
    kernels::fwht_seq(a.data(), a.size());
    kernels::fwht_omp(b.data(), b.size());
    // Same butterflies in both variants, so the results are bit-identical.
    CHECK(a == b);

    double s_seq = kernels::sum_pow4_seq(base.data(), base.size());
    double s_omp = kernels::sum_pow4_omp(base.data(), base.size());
    CHECK(s_omp == doctest::Approx(s_seq).epsilon(1e-12));

    std::vector<std::int64_t> ia(size), ib(size);
    for (std::size_t i = 0; i < size; ++i) {
      ia[i] = (std::int64_t)(base[i] * 1000.0);
    }
    ib = ia;
    kernels::fwht_i64_seq(ia.data(), ia.size());
    kernels::fwht_i64_omp(ib.data(), ib.size());
    CHECK(ia == ib);

    std::vector<std::int8_t> sa(size), sb(size);
    for (std::size_t i = 0; i < size; ++i) {
      sa[i] = (std::int8_t)(base[i] < 0 ? -1 : 1);
      sb[i] = (std::int8_t)(base[(size - 1) - i] < 0 ? -1 : 1);
    }
    std::size_t diff = 0;
    for (std::size_t i = 0; i < size; ++i) diff += sa[i] != sb[i];
    CHECK(kernels::count_sign_diff_seq(sa.data(), sb.data(), size) == diff);
    CHECK(kernels::count_sign_diff_omp(sa.data(), sb.data(), size) == diff);

    std::size_t neg = 0, ge = 0, le = 0, gt = 0;
    for (double v : base) {
      neg += v < 0.0;
      ge += std::fabs(v) >= 0.5;
      le += std::fabs(v) <= 0.5;
      gt += v > 0.25;
    }
    std::size_t zero_hits = 99;
    CHECK(kernels::count_negative(base.data(), size, &zero_hits) == neg);
    CHECK(zero_hits == 0);  // continuous draws never land exactly on 0
    CHECK(kernels::count_abs_ge(base.data(), size, 0.5) == ge);
    CHECK(kernels::count_abs_le(base.data(), size, 0.5) == le);
    CHECK(kernels::count_gt(base.data(), size, 0.25) == gt);
  }
}

TEST_CASE("toggling the parallel switch leaves results unchanged") {
  Rng rng(77);
  std::vector<double> v(std::size_t{1} << 15);
  for (double& x : v) x = rng.normal();
  std::vector<double> w = v;

  kernels::set_parallel(false);
  kernels::fwht(v.data(), v.size());
  kernels::set_parallel(true);
  kernels::fwht(w.data(), w.size());
  CHECK(v == w);
}

TEST_CASE("bit utilities") {
  CHECK(sign_pm(0.0) == 1);
  CHECK(sign_pm(-0.0) == 1);
  CHECK(sign_pm(-1e-300) == -1);
  CHECK(sign_pm_int(0) == 1);
  CHECK(sign_pm_int(-3) == -1);

  CHECK(compress_bits(0b101100, 0b101010) == 0b110);
  CHECK(compress_bits(0xffffffffu, 0u) == 0u);
  CHECK(compress_bits(0b1010, 0b1111) == 0b1010);

  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(30, 15) == 155117520u);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(5, 6) == 0);

  CHECK(u128_to_string(0) == "0");
  unsigned __int128 big = (unsigned __int128)1 << 100;
  CHECK(u128_to_string(big) == "1267650600228229401496703205376");
  CHECK(i128_to_string(-(__int128)big) == "-1267650600228229401496703205376");
}

TEST_CASE("rng streams are reproducible and label-separated") {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  CHECK(derive_seed(1, "alpha") != derive_seed(1, "beta"));
  CHECK(derive_seed(1, "alpha", 0) != derive_seed(1, "alpha", 1));
  CHECK(derive_seed(1, "alpha", 7) == derive_seed(1, "alpha", 7));

  Rng u(9);
  double lo = 1.0, hi = 0.0, mean = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double x = u.uniform01();
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    mean += x;
  }
  mean /= 20000.0;
  CHECK(lo > 0.0);
  CHECK(hi <= 1.0);
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));

  Rng g(10);
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double x = g.normal();
    m1 += x;
    m2 += x * x;
  }
  CHECK(std::fabs(m1 / 20000.0) < 0.03);
  CHECK(m2 / 20000.0 == doctest::Approx(1.0).epsilon(0.05));
}
