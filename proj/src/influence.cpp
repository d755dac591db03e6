#include "ptf/influence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ptf {

InfluenceProfile influence_profile(const MultilinearPolynomial& p) {
  InfluenceProfile prof;
  prof.influences.assign(p.n(), 0.0);
  for (const Term& t : p.terms()) {
    double sq = t.coeff * t.coeff;
    if (t.mask != 0) prof.variance += sq;
    std::uint32_t s = t.mask;
    while (s) {
      prof.influences[std::countr_zero(s)] += sq;
      s &= s - 1;
    }
  }
  prof.total = std::accumulate(prof.influences.begin(), prof.influences.end(),
                               0.0);
  prof.order.resize(p.n());
  std::iota(prof.order.begin(), prof.order.end(), 1);
  std::sort(prof.order.begin(), prof.order.end(), [&](int a, int b) {
    double ia = prof.influences[a - 1];
    double ib = prof.influences[b - 1];
    if (ia != ib) return ia > ib;
    return a < b;
  });
  return prof;
}

std::optional<int> critical_index(const InfluenceProfile& prof, double tau) {
  if (tau <= 0.0) throw InvalidInputError("tau must be positive");
  if (prof.variance <= 0.0) {
    throw DegenerateInputError("critical index needs positive variance");
  }
  int n = (int)prof.influences.size();
  std::vector<double> sorted(n);
  for (int i = 0; i < n; ++i) sorted[i] = prof.influences[prof.order[i] - 1];
  // suffix[i] = sum of sorted[i..n-1]; the tail at candidate i starts at the
  // (i+1)-st largest influence, i.e. sorted[i] itself.
  std::vector<double> suffix(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + sorted[i];
  for (int i = 0; i <= n; ++i) {
    double next = i < n ? sorted[i] : 0.0;
    double tail = i < n ? suffix[i] : 0.0;
    if (next <= tau * tail + kCriticalIndexSlack) return i;
  }
  return std::nullopt;
}

std::optional<int> critical_index(const MultilinearPolynomial& p, double tau) {
  return critical_index(influence_profile(p), tau);
}

bool is_tau_regular(const InfluenceProfile& prof, double tau) {
  auto idx = critical_index(prof, tau);
  return idx && *idx == 0;
}

bool is_tau_regular(const MultilinearPolynomial& p, double tau) {
  return is_tau_regular(influence_profile(p), tau);
}

bool is_l2_regular(const MultilinearPolynomial& p, double eps) {
  if (eps <= 0.0) throw InvalidInputError("eps must be positive");
  InfluenceProfile prof = influence_profile(p);
  if (prof.total <= 0.0) {
    throw DegenerateInputError("l2 regularity needs a nonconstant polynomial");
  }
  double sq = 0.0;
  for (double inf : prof.influences) sq += inf * inf;
  return std::sqrt(sq) <= eps * prof.total + kCriticalIndexSlack;
}

std::pair<MultilinearPolynomial, MultilinearPolynomial> head_tail_split(
    const MultilinearPolynomial& p, int k) {
  if (k < 0 || k > p.n()) throw InvalidInputError("head size out of range");
  InfluenceProfile prof = influence_profile(p);
  std::uint32_t head_mask = 0;
  for (int i = 0; i < k; ++i) {
    head_mask |= std::uint32_t{1} << (prof.order[i] - 1);
  }
  std::vector<Term> head;
  std::vector<Term> tail;
  for (const Term& t : p.terms()) {
    if ((t.mask & ~head_mask) == 0) {
      head.push_back(t);
    } else {
      tail.push_back(t);
    }
  }
  MultilinearPolynomial hp(p.n(), p.degree_bound(), std::move(head));
  MultilinearPolynomial tp(p.n(), p.degree_bound(), std::move(tail));
  return {std::move(hp), std::move(tp)};
}

double tail_influence_sum(const MultilinearPolynomial& p, int j) {
  if (j < 0 || j > p.n()) throw InvalidInputError("tail start out of range");
  InfluenceProfile prof = influence_profile(p);
  double s = 0.0;
  for (int i = j; i < p.n(); ++i) s += prof.influences[prof.order[i] - 1];
  return s;
}

}  // namespace ptf
