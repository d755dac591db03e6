#pragma once
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ptf/constants.hpp"
#include "ptf/influence.hpp"
#include "ptf/polynomial.hpp"

namespace ptf {

// Parameters steering the decomposition, derived from (d, tau):
//   beta            closeness target for constant leaves (set to tau)
//   tau_tilde       refined regularity level solving
//                   t * (c_prime * d * max(ln d, 1) * ln(1/t))^d = tau
//   alpha           head-size scale alpha_mult * (d ln ln(1/beta) + d ln d + d)
//   per_stage_cap   ceil(alpha / tau_tilde) variables fixed per stage at most
//   stage_cap       ceil(2 * c^d * ln(1/tau)) stages at most
//   total_budget    per_stage_cap * stage_cap, or the configured override
// Caps are saturated at int64 scale; the exact products are kept as doubles
// for reporting.
struct TreeParams {
  int d = 1;
  double tau = 0.0;
  double beta = 0.0;
  double tau_tilde = 0.0;
  double alpha = 0.0;
  std::int64_t per_stage_cap = 0;
  std::int64_t stage_cap = 0;
  std::int64_t total_budget = 0;
  double per_stage_cap_exact = 0.0;
  double total_budget_exact = 0.0;
  bool budget_overridden = false;
};

TreeParams derive_parameters(int d, double tau, const TheoryConstants& constants);

enum class LeafKind { Regular, CloseToConstant, Bad };

const char* leaf_kind_name(LeafKind k);

struct LeafInfo {
  LeafKind kind = LeafKind::Regular;
  int id = -1;
  int depth = 0;
  Restriction path;
  MultilinearPolynomial poly;  // restriction of the (normalized) source
  // CloseToConstant evidence: the constant and the measured distance to it.
  int sign = 1;
  double distance = 0.0;
  bool distance_exact = true;
  std::int64_t distance_samples = 0;
  // Regular evidence.
  double max_influence_ratio = 0.0;
  // Branching evidence for internal decisions that led here.
  int critical_index_here = 0;

  LeafInfo() : poly(MultilinearPolynomial::zero(1)) {}
};

struct TreeNode {
  int var = 0;  // 1-based; 0 marks a leaf
  std::unique_ptr<TreeNode> neg;  // x_var = -1
  std::unique_ptr<TreeNode> pos;  // x_var = +1
  std::unique_ptr<LeafInfo> leaf;

  bool is_leaf() const { return leaf != nullptr; }
};

struct DecompositionTree {
  int n = 0;
  double tau = 0.0;
  MultilinearPolynomial source;  // variance-normalized input
  // Absent when tau >= 1/2 (allowed as long as no branching was needed).
  std::optional<TreeParams> params;
  TheoryConstants constants;
  std::unique_ptr<TreeNode> root;
  std::vector<const LeafInfo*> leaves;  // depth-first, -1 branch before +1
  int max_depth = 0;
  bool budget_exhausted = false;

  DecompositionTree() : source(MultilinearPolynomial::zero(1)) {}
};

// Grows the decision tree for sign(p). At every node: an (exactly) constant
// polynomial or one beta-close to a constant stops as CloseToConstant; a
// tau-regular one stops as Regular; otherwise the tau_tilde-critical prefix
// of the influence order is branched on, the stage capped by per_stage_cap
// and the remaining depth budget. Budget exhaustion yields Bad leaves.
// Deterministic: same input, same tree.
DecompositionTree build_tree(const MultilinearPolynomial& p, double tau,
                             const TheoryConstants& constants);

struct PathMassReport {
  double mass_regular = 0.0;
  double mass_close = 0.0;
  double mass_bad = 0.0;
  double good_mass = 0.0;  // 1 - mass_bad
  std::int64_t leaves_regular = 0;
  std::int64_t leaves_close = 0;
  std::int64_t leaves_bad = 0;
  int max_depth = 0;
};

PathMassReport path_mass(const TreeNode& root);
PathMassReport path_mass(const DecompositionTree& tree);

// Follows the tree path of a cube point and returns the leaf there.
const LeafInfo& leaf_for_point(const DecompositionTree& tree,
                               std::uint32_t index);
// Sign of the leaf polynomial at that point.
int tree_sign_at(const DecompositionTree& tree, std::uint32_t index);

// Nested text serialization (JSON).
std::string tree_to_json(const DecompositionTree& tree, int indent = -1);

// Distance from sign(q) to the best constant over the free cube of q's
// support; exact when the support is small enough, Monte Carlo otherwise.
struct ConstantDistance {
  int sign = 1;         // closer constant (+1 on ties)
  double distance = 0.0;
  double distance_plus = 0.0;
  double distance_minus = 0.0;
  bool exact = true;
  std::int64_t samples = 0;
  std::size_t zero_hits = 0;
};
ConstantDistance distance_to_constant(const MultilinearPolynomial& q,
                                      const TheoryConstants& constants,
                                      std::uint64_t mc_seed = 0);

// Exhaustive scan of all restrictions of the K most influential variables.
// A restriction is good when the fixed head polynomial clears the value
// cutoff t_star = 1/(2 c^d) and the remaining tail is small in l2:
// tail <= t_star * (theta_dfn2 * ln(1/beta))^(-d/2). For good restrictions
// the distance from sign(p_rho) to the constant sign(head value) is
// measured.
struct CensusRecord {
  std::uint32_t rho_index = 0;  // bit j set <=> head var j fixed to +1
  double head_value = 0.0;
  double tail_l2 = 0.0;
  bool value_ok = false;
  bool tail_ok = false;
  bool good = false;
  double distance = 0.0;  // only meaningful when good
  bool distance_exact = true;
};

struct CensusReport {
  int k = 0;
  double beta = 0.0;
  double t_star = 0.0;
  double tail_cutoff = 0.0;
  double reference_fraction = 0.0;  // 1/(2 c^d)
  std::vector<int> head_vars;
  std::vector<CensusRecord> records;
  std::int64_t good_count = 0;
  double good_fraction = 0.0;
  double max_good_distance = 0.0;
};

CensusReport good_restriction_census(const MultilinearPolynomial& p, int k,
                                     double beta,
                                     const TheoryConstants& constants);

}  // namespace ptf
