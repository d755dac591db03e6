#include "ptf/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "ptf/kernels.hpp"

namespace ptf {

namespace {

void check_n(int n) {
  if (n < 1 || n > kMaxVariables) {
    throw InvalidInputError("variable count must be in [1, " +
                            std::to_string(kMaxVariables) + "], got " +
                            std::to_string(n));
  }
}

MultilinearPolynomial from_accumulated(
    int n, std::unordered_map<std::uint32_t, double>&& acc) {
  std::vector<Term> terms;
  terms.reserve(acc.size());
  int deg = 0;
  for (auto& [mask, coeff] : acc) {
    if (coeff == 0.0) continue;
    deg = std::max(deg, popcount32(mask));
    terms.push_back({mask, coeff});
  }
  return {n, deg, std::move(terms)};
}

}  // namespace

MultilinearPolynomial::MultilinearPolynomial(int n, int degree_bound,
                                             std::vector<Term> terms)
    : n_(n), degree_bound_(degree_bound), terms_(std::move(terms)) {
  check_n(n);
  if (degree_bound_ < 0 || degree_bound_ > n_) {
    throw InvalidInputError("degree bound out of range");
  }
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.mask < b.mask; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (t.mask >> n_) {
      throw InvalidInputError("term mentions a variable beyond n");
    }
    if (popcount32(t.mask) > degree_bound_) {
      throw InvalidInputError("term exceeds the degree bound");
    }
    if (!std::isfinite(t.coeff)) {
      throw InvalidInputError("coefficient is not finite");
    }
    if (!merged.empty() && merged.back().mask == t.mask) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
}

MultilinearPolynomial MultilinearPolynomial::character(int n,
                                                       std::uint32_t mask) {
  return {n, popcount32(mask), {{mask, 1.0}}};
}

double MultilinearPolynomial::coefficient(std::uint32_t mask) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), mask,
      [](const Term& t, std::uint32_t m) { return t.mask < m; });
  if (it != terms_.end() && it->mask == mask) return it->coeff;
  return 0.0;
}

double MultilinearPolynomial::constant_term() const {
  if (!terms_.empty() && terms_.front().mask == 0) return terms_.front().coeff;
  return 0.0;
}

int MultilinearPolynomial::degree() const {
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, popcount32(t.mask));
  return d;
}

bool MultilinearPolynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mask == 0);
}

double MultilinearPolynomial::evaluate(std::span<const double> x) const {
  if ((int)x.size() != n_) {
    throw InvalidInputError("point dimension does not match n");
  }
  double acc = 0.0;
  for (const Term& t : terms_) {
    double m = t.coeff;
    std::uint32_t s = t.mask;
    while (s) {
      m *= x[std::countr_zero(s)];
      s &= s - 1;
    }
    acc += m;
  }
  return acc;
}

double MultilinearPolynomial::evaluate_cube(std::uint32_t index) const {
  double acc = 0.0;
  for (const Term& t : terms_) {
    acc += (popcount32(t.mask & index) & 1) ? -t.coeff : t.coeff;
  }
  return acc;
}

Restriction::Restriction(std::vector<std::pair<int, int>> fixed)
    : fixed_(std::move(fixed)) {
  for (std::size_t i = 0; i < fixed_.size(); ++i) {
    auto [var, val] = fixed_[i];
    if (var < 1) throw InvalidInputError("restriction variable must be >= 1");
    if (val != 1 && val != -1) {
      throw InvalidInputError("restriction value must be +1 or -1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (fixed_[j].first == var) {
        throw InvalidInputError("restriction fixes a variable twice");
      }
    }
  }
}

void Restriction::append(int var, int value) {
  if (fixes(var)) throw InvalidInputError("restriction fixes a variable twice");
  if (value != 1 && value != -1) {
    throw InvalidInputError("restriction value must be +1 or -1");
  }
  fixed_.emplace_back(var, value);
}

bool Restriction::fixes(int var) const {
  for (auto& [v, _] : fixed_) {
    if (v == var) return true;
  }
  return false;
}

std::uint32_t Restriction::mask(int n) const {
  std::uint32_t m = 0;
  for (auto& [var, _] : fixed_) {
    if (var > n) throw InvalidInputError("restriction variable beyond n");
    m |= std::uint32_t{1} << (var - 1);
  }
  return m;
}

MultilinearPolynomial fwht_analyze(const TruthTable& table) {
  check_n(table.n);
  std::size_t size = std::size_t{1} << table.n;
  if (table.values.size() != size) {
    throw InvalidInputError("truth table has wrong length");
  }
  std::vector<double> work = table.values;
  kernels::fwht(work.data(), work.size());
  double scale = 1.0 / (double)size;
  std::vector<Term> terms;
  for (std::size_t s = 0; s < size; ++s) {
    double c = work[s] * scale;
    if (c != 0.0) terms.push_back({(std::uint32_t)s, c});
  }
  int deg = 0;
  for (const Term& t : terms) deg = std::max(deg, popcount32(t.mask));
  return {table.n, deg, std::move(terms)};
}

TruthTable fwht_synthesize(const MultilinearPolynomial& p,
                           int enumeration_limit) {
  if (p.n() > enumeration_limit) {
    throw ResourceError("synthesis of 2^" + std::to_string(p.n()) +
                        " values exceeds the enumeration limit " +
                        std::to_string(enumeration_limit));
  }
  std::size_t size = std::size_t{1} << p.n();
  TruthTable out;
  out.n = p.n();
  out.values.assign(size, 0.0);
  for (const Term& t : p.terms()) out.values[t.mask] = t.coeff;
  kernels::fwht(out.values.data(), size);
  return out;
}

MultilinearPolynomial restricted(const MultilinearPolynomial& p,
                                 const Restriction& rho) {
  std::uint32_t rmask = rho.mask(p.n());
  double value_sign[32];
  for (auto& [var, val] : rho.fixed()) value_sign[var - 1] = (double)val;
  std::unordered_map<std::uint32_t, double> acc;
  acc.reserve(p.terms().size());
  for (const Term& t : p.terms()) {
    std::uint32_t fixed_part = t.mask & rmask;
    double c = t.coeff;
    std::uint32_t s = fixed_part;
    while (s) {
      c *= value_sign[std::countr_zero(s)];
      s &= s - 1;
    }
    acc[t.mask & ~rmask] += c;
  }
  return from_accumulated(p.n(), std::move(acc));
}

MultilinearPolynomial multiply(const MultilinearPolynomial& a,
                               const MultilinearPolynomial& b) {
  if (a.n() != b.n()) {
    throw InvalidInputError("operands live on different variable sets");
  }
  std::unordered_map<std::uint32_t, double> acc;
  acc.reserve(a.terms().size() * b.terms().size());
  for (const Term& ta : a.terms()) {
    for (const Term& tb : b.terms()) {
      acc[ta.mask ^ tb.mask] += ta.coeff * tb.coeff;
    }
  }
  return from_accumulated(a.n(), std::move(acc));
}

MultilinearPolynomial linear_combine(std::span<const WeightedPoly> parts) {
  if (parts.empty()) throw InvalidInputError("empty linear combination");
  int n = parts.front().poly->n();
  std::unordered_map<std::uint32_t, double> acc;
  for (const WeightedPoly& wp : parts) {
    if (wp.poly->n() != n) {
      throw InvalidInputError("operands live on different variable sets");
    }
    for (const Term& t : wp.poly->terms()) acc[t.mask] += wp.scalar * t.coeff;
  }
  return from_accumulated(n, std::move(acc));
}

Norms norms(const MultilinearPolynomial& p, int enumeration_limit) {
  double sq = 0.0;
  for (const Term& t : p.terms()) sq += t.coeff * t.coeff;
  TruthTable table = fwht_synthesize(p, enumeration_limit);
  double m4 =
      kernels::sum_pow4(table.values.data(), table.values.size()) /
      (double)table.values.size();
  return {std::sqrt(sq), std::pow(m4, 0.25)};
}

double variance_of(const MultilinearPolynomial& p) {
  double v = 0.0;
  for (const Term& t : p.terms()) {
    if (t.mask != 0) v += t.coeff * t.coeff;
  }
  return v;
}

MultilinearPolynomial normalize_variance(const MultilinearPolynomial& p) {
  double var = variance_of(p);
  if (var <= 0.0) {
    throw DegenerateInputError("cannot normalize a constant polynomial");
  }
  double inv = 1.0 / std::sqrt(var);
  std::vector<Term> terms = p.terms();
  for (Term& t : terms) t.coeff *= inv;
  return {p.n(), p.degree_bound(), std::move(terms)};
}

std::vector<std::int8_t> sign_table(const MultilinearPolynomial& p,
                                    int enumeration_limit,
                                    std::size_t* zero_hits) {
  TruthTable table = fwht_synthesize(p, enumeration_limit);
  std::vector<std::int8_t> signs(table.values.size());
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    signs[i] = (std::int8_t)sign_pm(table.values[i]);
    zeros += table.values[i] == 0.0;
  }
  if (zero_hits) *zero_hits = zeros;
  return signs;
}

}  // namespace ptf
