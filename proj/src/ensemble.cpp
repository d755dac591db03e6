#include "ptf/ensemble.hpp"

#include <cmath>

#include "ptf/kernels.hpp"
#include "ptf/rng.hpp"

namespace ptf {

MultilinearPolynomial sample_from_D(int n, int d, std::uint64_t seed) {
  if (n < 1 || n > kMaxVariables || d < 1 || d > n) {
    throw InvalidInputError("need 1 <= d <= n");
  }
  std::uint64_t count = binomial(n, d);
  if (count > 5'000'000) {
    throw ResourceError("coefficient count " + std::to_string(count) +
                        " too large to materialize");
  }
  Rng rng(seed);
  std::vector<Term> terms;
  terms.reserve((std::size_t)count);
  std::uint64_t mask = (std::uint64_t{1} << d) - 1;
  std::uint64_t end = std::uint64_t{1} << n;
  while (mask < end) {
    terms.push_back({(std::uint32_t)mask, (double)rng.pm1()});
    std::uint64_t u = mask & (~mask + 1);
    std::uint64_t v = mask + u;
    mask = v | (((mask ^ v) / u) >> 2);
  }
  return {n, d, std::move(terms)};
}

EnsembleResult ensemble_experiment(int m, int n, int d, std::uint64_t seed,
                                   const TheoryConstants& constants) {
  if (m < 1) throw InvalidInputError("ensemble size must be positive");
  if (n > constants.enumeration_limit) {
    throw ResourceError("pairwise distances need exhaustive enumeration");
  }
  std::int64_t pair_count = (std::int64_t)m * (m - 1) / 2;
  if (pair_count > 2'000'000) {
    throw ResourceError("pair budget " + std::to_string(pair_count) +
                        " too large");
  }
  constants.validate();

  EnsembleResult res;
  res.m = m;
  res.n = n;
  res.d = d;
  res.seed = seed;
  res.reference = std::pow(constants.c(), -(double)d);
  int nh = n / 2;
  res.odd_n = (n % 2) != 0;
  double bin = (double)binomial(nh, d);
  res.bias_threshold = 0.25 * res.reference * bin;
  res.variance_threshold = bin * bin / 12.0;

  res.poly_seeds.resize((std::size_t)m);
  res.polys.reserve((std::size_t)m);
  std::vector<std::vector<std::int8_t>> signs((std::size_t)m);
  for (int i = 0; i < m; ++i) {
    res.poly_seeds[i] = derive_seed(seed, "ensemble-poly", (std::uint64_t)i);
    res.polys.push_back(sample_from_D(n, d, res.poly_seeds[i]));
    signs[i] = sign_table(res.polys[i], constants.enumeration_limit);
  }

  res.distance.assign((std::size_t)m * m, 0.0);
  res.pairs.resize((std::size_t)pair_count);
  double size = (double)(std::size_t{1} << n);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
  for (std::int64_t pi = 0; pi < pair_count; ++pi) {
    // Unrank the flat pair index to (i, j), i < j.
    std::int64_t rem = pi;
    int i = 0;
    while (rem >= m - 1 - i) {
      rem -= m - 1 - i;
      ++i;
    }
    int j = i + 1 + (int)rem;

    PairStat st;
    st.i = i;
    st.j = j;
    std::size_t diff = kernels::count_sign_diff(signs[i].data(),
                                                signs[j].data(),
                                                signs[i].size());
    st.distance = (double)diff / size;
    MultilinearPolynomial c = multiply(res.polys[i], res.polys[j]);
    st.c_constant = c.constant_term();
    st.c_variance = variance_of(c);
    st.bias_ok = std::abs(st.c_constant) <= res.bias_threshold;
    st.variance_ok = st.c_variance >= res.variance_threshold;
    res.pairs[pi] = st;
  }

  std::int64_t bias_hits = 0;
  std::int64_t var_hits = 0;
  std::int64_t both_hits = 0;
  res.min_offdiag = 1.0;
  for (const PairStat& st : res.pairs) {
    res.distance[(std::size_t)st.i * m + st.j] = st.distance;
    res.distance[(std::size_t)st.j * m + st.i] = st.distance;
    res.min_offdiag = std::min(res.min_offdiag, st.distance);
    bias_hits += st.bias_ok;
    var_hits += st.variance_ok;
    both_hits += st.bias_ok && st.variance_ok;
  }
  if (pair_count > 0) {
    res.has_pairs = true;
    res.bias_fraction = (double)bias_hits / (double)pair_count;
    res.variance_fraction = (double)var_hits / (double)pair_count;
    res.both_fraction = (double)both_hits / (double)pair_count;
  } else {
    res.min_offdiag = 0.0;
  }
  return res;
}

}  // namespace ptf
