#include "ptf/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ptf/influence.hpp"
#include "ptf/kernels.hpp"
#include "ptf/rng.hpp"

namespace ptf {

const char* check_flag_name(CheckFlag f) {
  switch (f) {
    case CheckFlag::Pass:
      return "pass";
    case CheckFlag::Fail:
      return "fail";
    case CheckFlag::Informational:
      return "info";
    case CheckFlag::NotApplicable:
      return "not_applicable";
  }
  return "?";
}

const char* check_method_name(CheckMethod m) {
  return m == CheckMethod::Exact ? "exact" : "monte_carlo";
}

DistResult dist(const MultilinearPolynomial& f, const MultilinearPolynomial& g,
                const TheoryConstants& constants, std::uint64_t seed) {
  if (f.n() != g.n()) {
    throw InvalidInputError("distance requires a shared dimension");
  }
  DistResult out;
  if (f.n() <= constants.enumeration_limit) {
    std::vector<std::int8_t> sf = sign_table(f, constants.enumeration_limit);
    std::vector<std::int8_t> sg = sign_table(g, constants.enumeration_limit);
    std::size_t diff = kernels::count_sign_diff(sf.data(), sg.data(),
                                                sf.size());
    out.value = (double)diff / (double)sf.size();
    return out;
  }
  Rng rng(seed);
  std::uint32_t cube = (std::uint32_t{1} << f.n()) - 1;
  std::int64_t diff = 0;
  for (std::int64_t i = 0; i < constants.mc_samples; ++i) {
    std::uint32_t idx = (std::uint32_t)rng.next_u64() & cube;
    if (sign_pm(f.evaluate_cube(idx)) != sign_pm(g.evaluate_cube(idx))) {
      ++diff;
    }
  }
  out.value = (double)diff / (double)constants.mc_samples;
  out.exact = false;
  out.samples = constants.mc_samples;
  return out;
}

CheckReport parseval_unit_check(const TruthTable& table) {
  CheckReport rep;
  rep.name = "parseval";
  rep.bound = 1.0;
  for (double v : table.values) {
    if (std::abs(v) != 1.0) {
      rep.flag = CheckFlag::NotApplicable;
      rep.note = "table is not ±1-valued";
      return rep;
    }
  }
  MultilinearPolynomial f = fwht_analyze(table);
  double sum = 0.0;
  for (const Term& t : f.terms()) sum += t.coeff * t.coeff;
  rep.measured = sum;
  rep.params = {{"n", (double)table.n}};
  rep.flag = std::abs(sum - 1.0) <= 1e-9 ? CheckFlag::Pass : CheckFlag::Fail;
  return rep;
}

CheckReport hypercontractivity_check(const MultilinearPolynomial& p,
                                     const TheoryConstants& constants) {
  CheckReport rep;
  rep.name = "hypercontractivity";
  int d = std::max(1, p.degree());
  Norms nm = norms(p, constants.enumeration_limit);
  rep.measured = nm.l4;
  rep.bound = std::pow(3.0, 0.5 * d) * nm.l2;
  rep.params = {{"d", (double)d}, {"l2", nm.l2}};
  rep.flag = rep.measured <= rep.bound + 1e-9 ? CheckFlag::Pass
                                              : CheckFlag::Fail;
  if (rep.flag == CheckFlag::Fail) {
    rep.note = "moment comparison violated: arithmetic bug";
  }
  return rep;
}

CheckReport concentration_tail(const MultilinearPolynomial& p, double t,
                               const TheoryConstants& constants) {
  int d = std::max(1, p.degree());
  if (!(t > std::exp((double)d))) {
    throw InvalidInputError("tail threshold must exceed e^d");
  }
  double sq = 0.0;
  for (const Term& term : p.terms()) sq += term.coeff * term.coeff;
  double l2 = std::sqrt(sq);
  TruthTable table = fwht_synthesize(p, constants.enumeration_limit);
  std::size_t hits = kernels::count_abs_ge(table.values.data(),
                                           table.values.size(), t * l2);
  CheckReport rep;
  rep.name = "concentration_tail";
  rep.measured = (double)hits / (double)table.values.size();
  rep.bound = std::exp(-constants.conc_const * std::pow(t, 2.0 / d));
  rep.params = {{"d", (double)d}, {"t", t}, {"l2", l2},
                {"b", constants.conc_const}};
  rep.flag = CheckFlag::Informational;
  return rep;
}

CheckReport anticoncentration_check(const MultilinearPolynomial& p,
                                    const TheoryConstants& constants) {
  if (std::abs(p.constant_term()) > 1e-9) {
    throw InvalidInputError("anticoncentration expects zero mean");
  }
  int d = std::max(1, p.degree());
  double sq = 0.0;
  for (const Term& term : p.terms()) sq += term.coeff * term.coeff;
  double l2 = std::sqrt(sq);
  TruthTable table = fwht_synthesize(p, constants.enumeration_limit);
  double size = (double)table.values.size();

  auto fraction_above = [&](double c0) {
    double thr = std::pow(c0, -(double)d) * l2;
    return (double)kernels::count_gt(table.values.data(),
                                     table.values.size(), thr) /
           size;
  };

  CheckReport rep;
  rep.name = "anticoncentration";
  rep.bound = std::pow(constants.c0, -(double)d);
  rep.measured = fraction_above(constants.c0);
  rep.params = {{"d", (double)d}, {"c0", constants.c0}, {"l2", l2}};
  rep.flag = rep.measured > rep.bound ? CheckFlag::Pass : CheckFlag::Fail;
  if (rep.flag == CheckFlag::Fail) {
    // Calibration data: how far c0 would have to rise for this instance.
    double c0 = constants.c0;
    for (int step = 0; step < 2000; ++step) {
      c0 *= 1.02;
      if (fraction_above(c0) > std::pow(c0, -(double)d)) {
        rep.note = "would pass from c0 = " + std::to_string(c0);
        break;
      }
    }
    if (rep.note.empty()) rep.note = "no passing c0 found";
  }
  return rep;
}

CheckReport regular_anticoncentration(const MultilinearPolynomial& p,
                                      double tau,
                                      const TheoryConstants& constants) {
  if (!(tau > 0.0) || !(tau < 1.0)) {
    throw InvalidInputError("tau must lie in (0, 1)");
  }
  if (std::abs(variance_of(p) - 1.0) > 1e-9) {
    throw InvalidInputError("regular anticoncentration expects unit variance");
  }
  int d = std::max(1, p.degree());
  TruthTable table = fwht_synthesize(p, constants.enumeration_limit);
  std::size_t hits = kernels::count_abs_le(table.values.data(),
                                           table.values.size(), tau);
  CheckReport rep;
  rep.name = "regular_anticoncentration";
  rep.measured = (double)hits / (double)table.values.size();
  rep.bound = constants.reg_anticonc_const * d * std::pow(tau, 1.0 / (8.0 * d));
  rep.params = {{"d", (double)d},
                {"tau", tau},
                {"tau_regular", is_tau_regular(p, tau) ? 1.0 : 0.0},
                {"const", constants.reg_anticonc_const}};
  rep.flag = CheckFlag::Informational;
  rep.note = rep.measured <= rep.bound ? "within bound" : "exceeds bound";
  return rep;
}

double ks_statistic(std::span<const double> sorted_a,
                    std::span<const double> sorted_b) {
  std::size_t na = sorted_a.size();
  std::size_t nb = sorted_b.size();
  if (na == 0 || nb == 0) {
    throw InvalidInputError("empty sample in Kolmogorov distance");
  }
  std::size_t i = 0;
  std::size_t j = 0;
  double sup = 0.0;
  while (i < na || j < nb) {
    double v = std::numeric_limits<double>::infinity();
    if (i < na) v = sorted_a[i];
    if (j < nb) v = std::min(v, sorted_b[j]);
    while (i < na && sorted_a[i] == v) ++i;
    while (j < nb && sorted_b[j] == v) ++j;
    sup = std::max(sup, std::abs((double)i / na - (double)j / nb));
  }
  return sup;
}

CheckReport gaussian_invariance_gap(const MultilinearPolynomial& p,
                                    std::int64_t samples, std::uint64_t seed,
                                    const TheoryConstants& constants) {
  if (std::abs(variance_of(p) - 1.0) > 1e-9) {
    throw InvalidInputError("invariance gap expects unit variance");
  }
  if (samples < 1) throw InvalidInputError("need at least one sample");
  TruthTable table = fwht_synthesize(p, constants.enumeration_limit);
  std::vector<double> boolean_values = table.values;
  std::sort(boolean_values.begin(), boolean_values.end());

  // Gaussian side: chunked streams so the sample set is independent of any
  // later parallelization of this loop.
  constexpr std::int64_t kChunk = 8192;
  std::vector<double> gauss;
  gauss.reserve((std::size_t)samples);
  std::vector<double> x((std::size_t)p.n());
  for (std::int64_t base = 0; base < samples; base += kChunk) {
    Rng rng(derive_seed(seed, "gaussian-chunk", (std::uint64_t)(base / kChunk)));
    std::int64_t stop = std::min(samples, base + kChunk);
    for (std::int64_t s = base; s < stop; ++s) {
      for (double& xi : x) xi = rng.normal();
      gauss.push_back(p.evaluate(x));
    }
  }
  std::sort(gauss.begin(), gauss.end());

  int d = std::max(1, p.degree());
  InfluenceProfile prof = influence_profile(p);
  double max_inf = 0.0;
  for (double v : prof.influences) max_inf = std::max(max_inf, v);

  CheckReport rep;
  rep.name = "gaussian_invariance_gap";
  rep.measured = ks_statistic(boolean_values, gauss);
  rep.bound = d * std::pow(max_inf, 1.0 / (8.0 * d));
  rep.params = {{"d", (double)d},
                {"max_influence", max_inf},
                {"dkw_band", std::sqrt(std::log(2.0 / 0.05) /
                                       (2.0 * (double)samples))}};
  rep.flag = CheckFlag::Informational;
  rep.method = CheckMethod::MonteCarlo;
  rep.samples = samples;
  rep.seed = seed;
  return rep;
}

MultilinearPolynomial random_polynomial(int n, int d, std::uint64_t seed) {
  if (n < 1 || n > kMaxVariables || d < 0 || d > n) {
    throw InvalidInputError("bad dimensions for a random polynomial");
  }
  Rng rng(seed);
  std::vector<Term> terms;
  terms.push_back({0u, rng.normal()});
  for (int k = 1; k <= d; ++k) {
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    std::uint64_t end = std::uint64_t{1} << n;
    while (mask < end) {
      terms.push_back({(std::uint32_t)mask, rng.normal()});
      std::uint64_t u = mask & (~mask + 1);
      std::uint64_t v = mask + u;
      mask = v | (((mask ^ v) / u) >> 2);
    }
  }
  return {n, d, std::move(terms)};
}

}  // namespace ptf
