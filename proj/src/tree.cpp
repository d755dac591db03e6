#include "ptf/tree.hpp"

#include <algorithm>
#include <cmath>

#include "ptf/kernels.hpp"
#include "ptf/rng.hpp"

namespace ptf {

namespace {

// Budgets beyond any reachable depth are clamped here instead of risking
// int64 overflow in the cap products.
constexpr std::int64_t kSaturatedBudget = 4'000'000'000'000'000'000LL;

std::int64_t saturate(double v) {
  if (v >= (double)kSaturatedBudget) return kSaturatedBudget;
  return (std::int64_t)v;
}

// Solves t * (c_prime * d * max(ln d, 1) * ln(1/t))^d = tau for t in (0, tau]
// by bisection. The left factor vanishes as t -> 0 and the bracket is found
// by halving from tau, so the returned root carries residual at double
// precision.
double solve_tau_tilde(int d, double tau, double c_prime) {
  double lnd = std::max(std::log((double)d), 1.0);
  auto h = [&](double t) {
    return t * std::pow(c_prime * d * lnd * std::log(1.0 / t), (double)d) -
           tau;
  };
  double hi = tau;
  if (h(hi) < 0.0) return hi;  // only under exotic constant choices
  double lo = tau;
  while (h(lo) > 0.0 && lo > 1e-300) lo *= 0.5;
  hi = std::min(hi, lo * 2.0);
  if (h(hi) < 0.0) hi = tau;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (h(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

const char* leaf_kind_name(LeafKind k) {
  switch (k) {
    case LeafKind::Regular:
      return "regular";
    case LeafKind::CloseToConstant:
      return "close_to_constant";
    case LeafKind::Bad:
      return "bad";
  }
  return "?";
}

TreeParams derive_parameters(int d, double tau,
                             const TheoryConstants& constants) {
  if (d < 1) throw InvalidInputError("degree must be at least 1");
  if (!(tau > 0.0) || !(tau < 0.5)) {
    throw InvalidInputError("tau must lie in (0, 1/2)");
  }
  constants.validate();
  TreeParams params;
  params.d = d;
  params.tau = tau;
  params.beta = tau;
  params.tau_tilde = solve_tau_tilde(d, tau, constants.c_prime);
  params.alpha =
      constants.alpha_mult *
      (d * std::log(std::log(1.0 / params.beta)) + d * std::log((double)d) +
       d);
  params.per_stage_cap_exact = std::ceil(params.alpha / params.tau_tilde);
  params.per_stage_cap = saturate(params.per_stage_cap_exact);
  double stages =
      std::ceil(2.0 * std::pow(constants.c(), (double)d) * std::log(1.0 / tau));
  params.stage_cap = saturate(stages);
  params.total_budget_exact = params.per_stage_cap_exact * stages;
  params.total_budget = saturate(params.total_budget_exact);
  if (constants.depth_budget_override) {
    params.total_budget = *constants.depth_budget_override;
    params.total_budget_exact = (double)params.total_budget;
    params.budget_overridden = true;
  }
  return params;
}

ConstantDistance distance_to_constant(const MultilinearPolynomial& q,
                                      const TheoryConstants& constants,
                                      std::uint64_t mc_seed) {
  ConstantDistance out;
  std::uint32_t support = 0;
  for (const Term& t : q.terms()) support |= t.mask;
  int k = popcount32(support);
  if (k == 0) {
    out.sign = sign_pm(q.constant_term());
    return out;
  }
  if (k <= constants.enumeration_limit) {
    std::size_t size = std::size_t{1} << k;
    std::vector<double> values(size, 0.0);
    for (const Term& t : q.terms()) {
      values[compress_bits(t.mask, support)] = t.coeff;
    }
    kernels::fwht(values.data(), size);
    std::size_t zeros = 0;
    std::size_t neg = kernels::count_negative(values.data(), size, &zeros);
    out.zero_hits = zeros;
    out.distance_plus = (double)neg / (double)size;
    out.distance_minus = (double)(size - neg) / (double)size;
  } else {
    Rng rng(mc_seed);
    std::int64_t m = constants.mc_samples;
    std::int64_t neg = 0;
    std::uint32_t cube = (q.n() >= 32) ? 0xffffffffu
                                       : ((std::uint32_t{1} << q.n()) - 1);
    for (std::int64_t i = 0; i < m; ++i) {
      std::uint32_t idx = (std::uint32_t)rng.next_u64() & cube;
      double v = q.evaluate_cube(idx);
      if (v == 0.0) ++out.zero_hits;
      if (v < 0.0) ++neg;
    }
    out.exact = false;
    out.samples = m;
    out.distance_plus = (double)neg / (double)m;
    out.distance_minus = 1.0 - out.distance_plus;
  }
  if (out.distance_plus <= out.distance_minus) {
    out.sign = 1;
    out.distance = out.distance_plus;
  } else {
    out.sign = -1;
    out.distance = out.distance_minus;
  }
  return out;
}

namespace {

std::uint64_t path_hash(const Restriction& path) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto& [var, val] : path.fixed()) {
    h = h * 1099511628211ULL + (std::uint64_t)(var * 2 + (val > 0));
  }
  return h;
}

struct Builder {
  const TheoryConstants* constants;
  double tau;
  double beta;
  bool has_params = false;
  TreeParams params;
  bool budget_exhausted = false;

  std::unique_ptr<TreeNode> leaf_node(LeafInfo info) {
    auto node = std::make_unique<TreeNode>();
    node->leaf = std::make_unique<LeafInfo>(std::move(info));
    return node;
  }

  LeafInfo base_leaf(LeafKind kind, const MultilinearPolynomial& q,
                     const Restriction& path, int depth) {
    LeafInfo info;
    info.kind = kind;
    info.depth = depth;
    info.path = path;
    info.poly = q;
    info.critical_index_here = -1;
    return info;
  }

  std::unique_ptr<TreeNode> grow(const MultilinearPolynomial& q,
                                 const Restriction& path, int depth) {
    if (q.is_constant()) {
      LeafInfo info = base_leaf(LeafKind::CloseToConstant, q, path, depth);
      info.sign = sign_pm(q.constant_term());
      info.distance = 0.0;
      return leaf_node(std::move(info));
    }
    InfluenceProfile prof = influence_profile(q);
    auto ci = critical_index(prof, tau);
    if (ci && *ci == 0) {
      LeafInfo info = base_leaf(LeafKind::Regular, q, path, depth);
      info.critical_index_here = 0;
      info.max_influence_ratio =
          prof.influences[prof.order.front() - 1] / prof.total;
      return leaf_node(std::move(info));
    }
    std::int64_t budget =
        has_params ? params.total_budget : kSaturatedBudget;
    if (depth >= budget) {
      budget_exhausted = true;
      return leaf_node(base_leaf(LeafKind::Bad, q, path, depth));
    }
    if (!has_params) {
      throw InvalidInputError(
          "tree would need to branch, which requires tau < 1/2");
    }
    auto ci_fine = critical_index(prof, params.tau_tilde);
    std::int64_t ell = ci_fine ? *ci_fine : q.n();
    std::int64_t m64 = std::min({ell, params.per_stage_cap, budget - depth});
    int m = (int)std::min<std::int64_t>(m64, q.n());
    if (m < 1) {
      throw InternalError("empty branching stage");
    }
    std::vector<int> vars(prof.order.begin(), prof.order.begin() + m);
    return chain(q, path, depth, vars, 0);
  }

  // Builds the binary subtree for one stage, fixing vars[j..] one level at a
  // time. Close-to-constant classification only happens once the whole
  // stage is fixed.
  std::unique_ptr<TreeNode> chain(const MultilinearPolynomial& q,
                                  const Restriction& path, int depth,
                                  const std::vector<int>& vars,
                                  std::size_t j) {
    if (j == vars.size()) {
      if (q.is_constant()) {
        LeafInfo info = base_leaf(LeafKind::CloseToConstant, q, path, depth);
        info.sign = sign_pm(q.constant_term());
        return leaf_node(std::move(info));
      }
      ConstantDistance cd = distance_to_constant(
          q, *constants, derive_seed(path_hash(path), "leaf-distance"));
      if (cd.distance <= beta) {
        LeafInfo info = base_leaf(LeafKind::CloseToConstant, q, path, depth);
        info.sign = cd.sign;
        info.distance = cd.distance;
        info.distance_exact = cd.exact;
        info.distance_samples = cd.samples;
        return leaf_node(std::move(info));
      }
      return grow(q, path, depth);
    }
    auto node = std::make_unique<TreeNode>();
    node->var = vars[j];
    for (int value : {-1, +1}) {
      Restriction step;
      step.append(vars[j], value);
      MultilinearPolynomial qv = restricted(q, step);
      Restriction sub_path = path;
      sub_path.append(vars[j], value);
      auto child = chain(qv, sub_path, depth + 1, vars, j + 1);
      (value < 0 ? node->neg : node->pos) = std::move(child);
    }
    return node;
  }
};

void collect_leaves(TreeNode* node, DecompositionTree& tree) {
  if (node->is_leaf()) {
    node->leaf->id = (int)tree.leaves.size();
    tree.leaves.push_back(node->leaf.get());
    tree.max_depth = std::max(tree.max_depth, node->leaf->depth);
    return;
  }
  collect_leaves(node->neg.get(), tree);
  collect_leaves(node->pos.get(), tree);
}

}  // namespace

DecompositionTree build_tree(const MultilinearPolynomial& p, double tau,
                             const TheoryConstants& constants) {
  if (!(tau > 0.0) || !(tau < 1.0)) {
    throw InvalidInputError("tau must lie in (0, 1)");
  }
  constants.validate();
  DecompositionTree tree;
  tree.n = p.n();
  tree.tau = tau;
  tree.constants = constants;
  tree.source = p.is_constant() ? p : normalize_variance(p);

  Builder builder;
  builder.constants = &constants;
  builder.tau = tau;
  builder.beta = tau;
  if (tau < 0.5 && !p.is_constant()) {
    builder.params = derive_parameters(std::max(1, p.degree()), tau, constants);
    builder.has_params = true;
    tree.params = builder.params;
  }
  tree.root = builder.grow(tree.source, Restriction{}, 0);
  tree.budget_exhausted = builder.budget_exhausted;
  collect_leaves(tree.root.get(), tree);
  return tree;
}

namespace {

void mass_walk(const TreeNode* node, int depth, PathMassReport& report) {
  if (node->is_leaf()) {
    double mass = std::ldexp(1.0, -depth);
    switch (node->leaf->kind) {
      case LeafKind::Regular:
        report.mass_regular += mass;
        ++report.leaves_regular;
        break;
      case LeafKind::CloseToConstant:
        report.mass_close += mass;
        ++report.leaves_close;
        break;
      case LeafKind::Bad:
        report.mass_bad += mass;
        ++report.leaves_bad;
        break;
    }
    report.max_depth = std::max(report.max_depth, depth);
    return;
  }
  mass_walk(node->neg.get(), depth + 1, report);
  mass_walk(node->pos.get(), depth + 1, report);
}

}  // namespace

PathMassReport path_mass(const TreeNode& root) {
  PathMassReport report;
  mass_walk(&root, 0, report);
  report.good_mass = 1.0 - report.mass_bad;
  return report;
}

PathMassReport path_mass(const DecompositionTree& tree) {
  if (!tree.root) throw InvalidInputError("empty tree");
  return path_mass(*tree.root);
}

const LeafInfo& leaf_for_point(const DecompositionTree& tree,
                               std::uint32_t index) {
  const TreeNode* node = tree.root.get();
  if (!node) throw InvalidInputError("empty tree");
  while (!node->is_leaf()) {
    bool negative = (index >> (node->var - 1)) & 1u;
    node = negative ? node->neg.get() : node->pos.get();
  }
  return *node->leaf;
}

int tree_sign_at(const DecompositionTree& tree, std::uint32_t index) {
  const LeafInfo& leaf = leaf_for_point(tree, index);
  return sign_pm(leaf.poly.evaluate_cube(index));
}

CensusReport good_restriction_census(const MultilinearPolynomial& p, int k,
                                     double beta,
                                     const TheoryConstants& constants) {
  if (k < 0 || k > p.n()) throw InvalidInputError("head size out of range");
  if (k > constants.enumeration_limit) {
    throw ResourceError("census over 2^" + std::to_string(k) +
                        " restrictions exceeds the enumeration limit");
  }
  if (!(beta > 0.0) || !(beta < 1.0)) {
    throw InvalidInputError("beta must lie in (0, 1)");
  }
  constants.validate();

  CensusReport report;
  report.k = k;
  report.beta = beta;
  int d = std::max(1, p.degree());
  report.t_star = 1.0 / (2.0 * std::pow(constants.c(), (double)d));
  report.reference_fraction = report.t_star;
  report.tail_cutoff =
      report.t_star *
      std::pow(constants.theta_dfn2 * std::log(1.0 / beta), -0.5 * d);

  InfluenceProfile prof = influence_profile(p);
  report.head_vars.assign(prof.order.begin(), prof.order.begin() + k);

  std::size_t count = std::size_t{1} << k;
  report.records.resize(count);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (std::int64_t a = 0; a < (std::int64_t)count; ++a) {
    CensusRecord rec;
    rec.rho_index = (std::uint32_t)a;
    Restriction rho;
    for (int j = 0; j < k; ++j) {
      rho.append(report.head_vars[j], (a >> j) & 1 ? +1 : -1);
    }
    MultilinearPolynomial p_rho = restricted(p, rho);
    rec.head_value = p_rho.constant_term();
    double tail_sq = 0.0;
    for (const Term& t : p_rho.terms()) {
      if (t.mask != 0) tail_sq += t.coeff * t.coeff;
    }
    rec.tail_l2 = std::sqrt(tail_sq);
    rec.value_ok = std::abs(rec.head_value) >= report.t_star;
    rec.tail_ok = rec.tail_l2 <= report.tail_cutoff;
    rec.good = rec.value_ok && rec.tail_ok;
    if (rec.good) {
      ConstantDistance cd = distance_to_constant(
          p_rho, constants, derive_seed((std::uint64_t)a, "census"));
      rec.distance = sign_pm(rec.head_value) > 0 ? cd.distance_plus
                                                 : cd.distance_minus;
      rec.distance_exact = cd.exact;
    }
    report.records[a] = rec;
  }
  for (const CensusRecord& rec : report.records) {
    if (rec.good) {
      ++report.good_count;
      report.max_good_distance = std::max(report.max_good_distance,
                                          rec.distance);
    }
  }
  report.good_fraction = (double)report.good_count / (double)count;
  return report;
}

}  // namespace ptf
