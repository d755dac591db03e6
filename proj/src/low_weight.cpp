#include "ptf/low_weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "ptf/kernels.hpp"
#include "ptf/rng.hpp"

namespace ptf {

namespace {

constexpr double kIntegerRangeGuard = 4.0e18;  // below 2^63 with margin
constexpr unsigned __int128 kTransformL1Limit =
    (unsigned __int128)1 << 62;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw ResourceError("integer coefficient overflow");
  }
  return out;
}

std::int64_t checked_double(std::int64_t a) { return checked_add(a, a); }

}  // namespace

IntegerPolynomial::IntegerPolynomial(int n, int degree_bound,
                                     std::vector<IntegerTerm> terms)
    : n_(n), degree_bound_(degree_bound), terms_(std::move(terms)) {
  if (n < 1 || n > kMaxVariables) {
    throw InvalidInputError("variable count out of range");
  }
  if (degree_bound < 0 || degree_bound > n) {
    throw InvalidInputError("degree bound out of range");
  }
  for (const IntegerTerm& t : terms_) {
    if (t.mask >> n) {
      throw InvalidInputError("term mentions a variable beyond n");
    }
    if (popcount32(t.mask) > degree_bound_) {
      throw InvalidInputError("term exceeds the degree bound");
    }
  }
  std::sort(terms_.begin(), terms_.end(),
            [](const IntegerTerm& a, const IntegerTerm& b) {
              return a.mask < b.mask;
            });
  std::vector<IntegerTerm> merged;
  merged.reserve(terms_.size());
  for (const IntegerTerm& t : terms_) {
    if (!merged.empty() && merged.back().mask == t.mask) {
      merged.back().coeff = checked_add(merged.back().coeff, t.coeff);
    } else {
      merged.push_back(t);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const IntegerTerm& t) {
                                return t.coeff == 0;
                              }),
               merged.end());
  terms_ = std::move(merged);
}

std::int64_t IntegerPolynomial::coefficient(std::uint32_t mask) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), mask,
                             [](const IntegerTerm& t, std::uint32_t m) {
                               return t.mask < m;
                             });
  return (it != terms_.end() && it->mask == mask) ? it->coeff : 0;
}

std::int64_t IntegerPolynomial::constant_term() const {
  return (!terms_.empty() && terms_.front().mask == 0) ? terms_.front().coeff
                                                       : 0;
}

int IntegerPolynomial::degree() const {
  int d = 0;
  for (const IntegerTerm& t : terms_) d = std::max(d, popcount32(t.mask));
  return d;
}

bool IntegerPolynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().mask == 0);
}

__int128 IntegerPolynomial::evaluate_cube(std::uint32_t index) const {
  __int128 acc = 0;
  for (const IntegerTerm& t : terms_) {
    if (popcount32(t.mask & index) & 1) {
      acc -= t.coeff;
    } else {
      acc += t.coeff;
    }
  }
  return acc;
}

int IntegerPolynomial::sign_at(std::uint32_t index) const {
  return evaluate_cube(index) < 0 ? -1 : 1;
}

unsigned __int128 IntegerPolynomial::l1() const {
  unsigned __int128 acc = 0;
  for (const IntegerTerm& t : terms_) {
    unsigned __int128 mag =
        t.coeff < 0 ? -(unsigned __int128)t.coeff : (unsigned __int128)t.coeff;
    acc += mag;  // cannot overflow: each term is < 2^64, count <= 2^30
  }
  return acc;
}

unsigned __int128 weight_of(const IntegerPolynomial& q) {
  constexpr unsigned __int128 kMax = ~(unsigned __int128)0;
  unsigned __int128 acc = 0;
  for (const IntegerTerm& t : q.terms()) {
    unsigned __int128 mag =
        t.coeff < 0 ? -(unsigned __int128)t.coeff : (unsigned __int128)t.coeff;
    unsigned __int128 sq = mag * mag;
    if (acc > kMax - sq) throw ResourceError("weight overflows 128 bits");
    acc += sq;
  }
  return acc;
}

std::string weight_string(const IntegerPolynomial& q) {
  return u128_to_string(weight_of(q));
}

double weight_log2(const IntegerPolynomial& q) {
  unsigned __int128 w = weight_of(q);
  if (w == 0) return -std::numeric_limits<double>::infinity();
  return (double)std::log2((long double)w);
}

std::vector<std::int8_t> sign_table(const IntegerPolynomial& q,
                                    int enumeration_limit,
                                    std::size_t* zero_hits) {
  if (q.n() > enumeration_limit) {
    throw ResourceError("sign table over 2^" + std::to_string(q.n()) +
                        " points exceeds the enumeration limit");
  }
  if (q.l1() >= kTransformL1Limit) {
    throw ResourceError("integer transform would overflow");
  }
  std::size_t size = std::size_t{1} << q.n();
  std::vector<std::int64_t> values(size, 0);
  for (const IntegerTerm& t : q.terms()) values[t.mask] = t.coeff;
  kernels::fwht_i64(values.data(), size);
  std::vector<std::int8_t> signs(size);
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < size; ++i) {
    if (values[i] == 0) ++zeros;
    signs[i] = (std::int8_t)sign_pm_int(values[i]);
  }
  if (zero_hits) *zero_hits = zeros;
  return signs;
}

IntegerPolynomial indicator_poly(const Restriction& rho, int n) {
  if ((int)rho.size() > n) {
    throw InvalidInputError("restriction fixes more variables than n");
  }
  if (rho.size() > 22) {
    throw ResourceError("indicator expansion over 2^" +
                        std::to_string(rho.size()) + " monomials");
  }
  std::vector<IntegerTerm> terms{{0u, 1}};
  for (auto& [var, val] : rho.fixed()) {
    if (var < 1 || var > n) {
      throw InvalidInputError("restriction variable out of range");
    }
    std::uint32_t bit = std::uint32_t{1} << (var - 1);
    std::size_t count = terms.size();
    terms.reserve(count * 2);
    for (std::size_t i = 0; i < count; ++i) {
      terms.push_back({terms[i].mask | bit, val < 0 ? -terms[i].coeff
                                                    : terms[i].coeff});
    }
  }
  return {n, (int)rho.size(), std::move(terms)};
}

double rounding_granularity(int n, int d, double eps,
                            const TheoryConstants& constants) {
  if (n < 1 || d < 1) throw InvalidInputError("n and d must be positive");
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw InvalidInputError("eps must lie in (0, 1)");
  }
  double tau = std::pow(constants.theta * eps / d, 8.0 * d);
  double denom =
      std::pow(constants.k_granularity * n * std::log(4.0 / eps), 0.5 * d);
  double alpha = tau / denom;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ResourceError("rounding granularity underflowed");
  }
  return alpha;
}

bool constant_choice_preserves_signs(const IntegerPolynomial& body,
                                     double gamma, std::int64_t m,
                                     int enumeration_limit) {
  if (body.constant_term() != 0) {
    throw InvalidInputError("body must have no constant term");
  }
  std::uint32_t support = 0;
  for (const IntegerTerm& t : body.terms()) support |= t.mask;
  int k = popcount32(support);
  if (k > enumeration_limit) {
    throw ResourceError("constant verification exceeds the enumeration limit");
  }
  if (body.l1() >= kTransformL1Limit) {
    throw ResourceError("integer transform would overflow");
  }
  std::size_t size = std::size_t{1} << k;
  std::vector<std::int64_t> values(size, 0);
  for (const IntegerTerm& t : body.terms()) {
    values[compress_bits(t.mask, support)] = t.coeff;
  }
  kernels::fwht_i64(values.data(), size);
  for (std::size_t i = 0; i < size; ++i) {
    int target = sign_pm(gamma + (double)values[i]);
    __int128 cand = (__int128)m + values[i];
    int got = cand < 0 ? -1 : 1;
    if (got != target) return false;
  }
  return true;
}

IntegerizeResult integerize_constant(const IntegerPolynomial& body, double c,
                                     double alpha, int enumeration_limit) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidInputError("granularity must be positive");
  }
  if (body.constant_term() != 0) {
    throw InvalidInputError("body must have no constant term");
  }
  double gamma = c / alpha;
  if (!(std::abs(gamma) < kIntegerRangeGuard)) {
    throw ResourceError("constant exceeds integer range at this granularity");
  }
  IntegerizeResult out;
  out.body = body;
  for (double cand : {std::ceil(gamma), std::floor(gamma)}) {
    ++out.attempts;
    if (constant_choice_preserves_signs(body, gamma, (std::int64_t)cand,
                                        enumeration_limit)) {
      out.constant = (std::int64_t)cand;
      return out;
    }
  }
  // Doubling fallback: every value of 2*body + (2*floor(gamma) + 1) is odd,
  // hence nonzero. The fractional part gamma - floor(gamma) is nonnegative
  // by construction, so the odd constant sits on its side.
  std::vector<IntegerTerm> doubled = body.terms();
  for (IntegerTerm& t : doubled) t.coeff = checked_double(t.coeff);
  out.body = IntegerPolynomial(body.n(), body.degree_bound(),
                               std::move(doubled));
  out.constant = checked_add(
      checked_double((std::int64_t)std::floor(gamma)), 1);
  out.doubled = true;
  ++out.attempts;
  if (!constant_choice_preserves_signs(out.body, 2.0 * gamma, out.constant,
                                       enumeration_limit)) {
    throw InternalError("constant integerization failed after doubling");
  }
  return out;
}

IntegerPolynomial round_regular(const MultilinearPolynomial& p, double eps,
                                const TheoryConstants& constants) {
  constants.validate();
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw InvalidInputError("eps must lie in (0, 1)");
  }
  if (std::abs(variance_of(p) - 1.0) > 1e-9) {
    throw InvalidInputError("rounding expects unit variance");
  }
  int n = p.n();
  int d = std::max(1, p.degree());
  double c_hat = p.constant_term();
  if (std::abs(c_hat) >
      std::pow(constants.theta * std::log(1.0 / eps), 0.5 * d)) {
    return IntegerPolynomial::constant(n, sign_pm(c_hat));
  }
  double alpha = rounding_granularity(n, d, eps, constants);
  std::vector<IntegerTerm> body_terms;
  body_terms.reserve(p.terms().size());
  for (const Term& t : p.terms()) {
    if (t.mask == 0) continue;
    double r = t.coeff / alpha;
    if (!(std::abs(r) < kIntegerRangeGuard)) {
      throw ResourceError("coefficient exceeds integer range after rounding");
    }
    std::int64_t k = std::llround(r);
    if (k != 0) body_terms.push_back({t.mask, k});
  }
  IntegerPolynomial body(n, d, std::move(body_terms));
  IntegerizeResult ir =
      integerize_constant(body, c_hat, alpha, constants.enumeration_limit);
  std::vector<IntegerTerm> terms = ir.body.terms();
  if (ir.constant != 0) terms.push_back({0u, ir.constant});
  return {n, d, std::move(terms)};
}

IntegerPolynomial combine_tree(const DecompositionTree& tree,
                               const std::vector<IntegerPolynomial>& leaf_polys) {
  if (!tree.root) throw InvalidInputError("empty tree");
  if (leaf_polys.size() != tree.leaves.size()) {
    throw InvalidInputError("one approximator per leaf required");
  }
  int n = tree.n;
  bool dense = n <= 22;
  std::vector<std::int64_t> acc_dense;
  if (dense) acc_dense.assign(std::size_t{1} << n, 0);
  std::unordered_map<std::uint32_t, std::int64_t> acc_sparse;

  auto add_at = [&](std::uint32_t mask, std::int64_t delta) {
    std::int64_t& slot = dense ? acc_dense[mask] : acc_sparse[mask];
    if (__builtin_add_overflow(slot, delta, &slot)) {
      throw ResourceError("combined coefficient overflow");
    }
  };

  for (std::size_t i = 0; i < tree.leaves.size(); ++i) {
    const LeafInfo& leaf = *tree.leaves[i];
    const IntegerPolynomial& q = leaf_polys[i];
    if (q.n() != n) {
      throw InvalidInputError("leaf approximator dimension mismatch");
    }
    std::uint32_t path_mask = leaf.path.mask(n);
    std::uint32_t neg_mask = 0;
    for (auto& [var, val] : leaf.path.fixed()) {
      if (val < 0) neg_mask |= std::uint32_t{1} << (var - 1);
    }
    for (const IntegerTerm& t : q.terms()) {
      if (t.mask & path_mask) {
        throw InvalidInputError("leaf approximator mentions a path variable");
      }
    }
    // Expand P_path * q: coefficient of submask s of the path is
    // (-1)^|s ∩ negatives|.
    std::uint32_t s = path_mask;
    while (true) {
      bool flip = popcount32(s & neg_mask) & 1;
      for (const IntegerTerm& t : q.terms()) {
        if (t.coeff == std::numeric_limits<std::int64_t>::min()) {
          throw ResourceError("combined coefficient overflow");
        }
        add_at(t.mask | s, flip ? -t.coeff : t.coeff);
      }
      if (s == 0) break;
      s = (s - 1) & path_mask;
    }
  }

  std::vector<IntegerTerm> terms;
  int degree = 0;
  auto keep = [&](std::uint32_t mask, std::int64_t coeff) {
    if (coeff == 0) return;
    terms.push_back({mask, coeff});
    degree = std::max(degree, popcount32(mask));
  };
  if (dense) {
    for (std::size_t m = 0; m < acc_dense.size(); ++m) {
      keep((std::uint32_t)m, acc_dense[m]);
    }
  } else {
    for (auto& [mask, coeff] : acc_sparse) keep(mask, coeff);
  }
  return {n, degree, std::move(terms)};
}

ApproximationCertificate approximate(const MultilinearPolynomial& p,
                                     double eps,
                                     const TheoryConstants& constants) {
  constants.validate();
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw InvalidInputError("eps must lie in (0, 1)");
  }
  if (variance_of(p) <= 0.0) {
    throw DegenerateInputError("constant input has no sign structure");
  }
  int d = std::max(1, p.degree());
  double tau = std::pow(constants.theta * (eps / 2.0) / d, 8.0 * d);

  ApproximationCertificate cert;
  cert.n = p.n();
  cert.d = d;
  cert.epsilon = eps;
  cert.tau = tau;

  DecompositionTree tree = build_tree(p, tau, constants);
  cert.target = tree.source;

  std::vector<IntegerPolynomial> leaf_polys;
  leaf_polys.reserve(tree.leaves.size());
  for (const LeafInfo* leaf : tree.leaves) {
    switch (leaf->kind) {
      case LeafKind::Regular:
        leaf_polys.push_back(round_regular(normalize_variance(leaf->poly),
                                           eps / 2.0, constants));
        break;
      case LeafKind::CloseToConstant:
        leaf_polys.push_back(IntegerPolynomial::constant(tree.n, leaf->sign));
        break;
      case LeafKind::Bad:
        leaf_polys.push_back(IntegerPolynomial::constant(tree.n, 1));
        break;
    }
  }
  cert.q = combine_tree(tree, leaf_polys);

  cert.mass = path_mass(tree);
  cert.budget_exhausted = tree.budget_exhausted;
  cert.max_depth = cert.mass.max_depth;
  cert.degree_achieved = cert.q.degree();
  cert.weight = weight_string(cert.q);
  cert.weight_log2 = weight_log2(cert.q);
  cert.declared_bound_log2 =
      d * std::log2((double)cert.n) + 4.0 * cert.max_depth +
      constants.weight_exp * d * std::log2(d / eps);

  // The distance is measured against the input as given, not the
  // variance-normalized copy the tree works on. The two agree in exact
  // arithmetic, but normalizing perturbs points where the input is exactly
  // zero, and those must keep the sign(0) = +1 convention.
  if (cert.n <= constants.enumeration_limit) {
    std::vector<std::int8_t> sf = sign_table(p, constants.enumeration_limit);
    std::size_t zq = 0;
    std::vector<std::int8_t> sq =
        sign_table(cert.q, constants.enumeration_limit, &zq);
    std::size_t diff =
        kernels::count_sign_diff(sf.data(), sq.data(), sf.size());
    cert.distance = (double)diff / (double)sf.size();
    cert.distance_zero_hits = zq;
  } else {
    Rng rng(derive_seed(0, "approximate-distance"));
    std::int64_t samples = constants.mc_samples;
    std::uint32_t cube = (std::uint32_t{1} << cert.n) - 1;
    std::int64_t diff = 0;
    for (std::int64_t i = 0; i < samples; ++i) {
      std::uint32_t idx = (std::uint32_t)rng.next_u64() & cube;
      if (sign_pm(p.evaluate_cube(idx)) != cert.q.sign_at(idx)) {
        ++diff;
      }
    }
    cert.distance = (double)diff / (double)samples;
    cert.distance_exact = false;
    cert.distance_samples = samples;
  }
  cert.distance_ok = cert.distance <= eps;
  cert.bad_mass_ok = cert.mass.mass_bad <= tau + 1e-12;
  return cert;
}

}  // namespace ptf
