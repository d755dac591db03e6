#include "ptf/serialize.hpp"

namespace ptf {

namespace {

json vars_of(std::uint32_t mask) {
  json vars = json::array();
  for (int i = 0; mask; ++i, mask >>= 1) {
    if (mask & 1) vars.push_back(i + 1);
  }
  return vars;
}

}  // namespace

json poly_json(const MultilinearPolynomial& p) {
  json terms = json::array();
  for (const Term& t : p.terms()) {
    terms.push_back({{"vars", vars_of(t.mask)}, {"coeff", t.coeff}});
  }
  return {{"n", p.n()},
          {"degree", p.degree()},
          {"terms", std::move(terms)}};
}

json poly_json(const IntegerPolynomial& q) {
  json terms = json::array();
  for (const IntegerTerm& t : q.terms()) {
    terms.push_back({{"vars", vars_of(t.mask)}, {"coeff", t.coeff}});
  }
  return {{"n", q.n()},
          {"degree", q.degree()},
          {"weight", weight_string(q)},
          {"terms", std::move(terms)}};
}

json restriction_json(const Restriction& rho) {
  json out = json::array();
  for (auto& [var, val] : rho.fixed()) out.push_back({var, val});
  return out;
}

json constants_json(const TheoryConstants& c) {
  json out;
  for (auto& [name, value] : c.fields()) out[name] = value;
  out["depth_budget_override"] =
      c.depth_budget_override ? json(*c.depth_budget_override) : json(nullptr);
  return out;
}

json params_json(const TreeParams& p) {
  return {{"d", p.d},
          {"tau", p.tau},
          {"beta", p.beta},
          {"tau_tilde", p.tau_tilde},
          {"alpha", p.alpha},
          {"per_stage_cap", p.per_stage_cap},
          {"stage_cap", p.stage_cap},
          {"total_budget", p.total_budget},
          {"per_stage_cap_exact", p.per_stage_cap_exact},
          {"total_budget_exact", p.total_budget_exact},
          {"budget_overridden", p.budget_overridden}};
}

json leaf_json(const LeafInfo& leaf) {
  json out{{"id", leaf.id},
           {"kind", leaf_kind_name(leaf.kind)},
           {"depth", leaf.depth},
           {"path", restriction_json(leaf.path)}};
  switch (leaf.kind) {
    case LeafKind::CloseToConstant:
      out["sign"] = leaf.sign;
      out["distance"] = leaf.distance;
      out["distance_exact"] = leaf.distance_exact;
      if (!leaf.distance_exact) out["distance_samples"] = leaf.distance_samples;
      break;
    case LeafKind::Regular:
      out["max_influence_ratio"] = leaf.max_influence_ratio;
      break;
    case LeafKind::Bad:
      break;
  }
  out["polynomial"] = poly_json(leaf.poly);
  return out;
}

namespace {

json node_json(const TreeNode& node) {
  if (node.is_leaf()) return {{"leaf", leaf_json(*node.leaf)}};
  return {{"var", node.var},
          {"neg", node_json(*node.neg)},
          {"pos", node_json(*node.pos)}};
}

}  // namespace

json tree_json(const DecompositionTree& tree) {
  json out{{"n", tree.n},
           {"tau", tree.tau},
           {"max_depth", tree.max_depth},
           {"leaf_count", tree.leaves.size()},
           {"budget_exhausted", tree.budget_exhausted}};
  out["params"] = tree.params ? params_json(*tree.params) : json(nullptr);
  out["source"] = poly_json(tree.source);
  out["root"] = node_json(*tree.root);
  return out;
}

std::string tree_to_json(const DecompositionTree& tree, int indent) {
  return tree_json(tree).dump(indent);
}

json mass_json(const PathMassReport& r) {
  return {{"mass_regular", r.mass_regular},
          {"mass_close", r.mass_close},
          {"mass_bad", r.mass_bad},
          {"good_mass", r.good_mass},
          {"leaves_regular", r.leaves_regular},
          {"leaves_close", r.leaves_close},
          {"leaves_bad", r.leaves_bad},
          {"max_depth", r.max_depth}};
}

json certificate_json(const ApproximationCertificate& cert) {
  json out{{"n", cert.n},
           {"d", cert.d},
           {"epsilon", cert.epsilon},
           {"tau", cert.tau},
           {"distance", cert.distance},
           {"distance_exact", cert.distance_exact},
           {"distance_ok", cert.distance_ok},
           {"bad_mass_ok", cert.bad_mass_ok},
           {"weight", cert.weight},
           {"weight_log2", cert.weight_log2},
           {"declared_bound_log2", cert.declared_bound_log2},
           {"degree_achieved", cert.degree_achieved},
           {"max_depth", cert.max_depth},
           {"budget_exhausted", cert.budget_exhausted},
           {"mass", mass_json(cert.mass)}};
  if (!cert.distance_exact) {
    out["distance_samples"] = cert.distance_samples;
  } else {
    out["distance_zero_hits"] = cert.distance_zero_hits;
  }
  out["approximator"] = poly_json(cert.q);
  return out;
}

json check_json(const CheckReport& rep) {
  json params;
  for (auto& [name, value] : rep.params) params[name] = value;
  json out{{"name", rep.name},
           {"flag", check_flag_name(rep.flag)},
           {"method", check_method_name(rep.method)},
           {"measured", rep.measured},
           {"bound", rep.bound},
           {"params", std::move(params)}};
  if (rep.method == CheckMethod::MonteCarlo) {
    out["samples"] = rep.samples;
    out["seed"] = rep.seed;
  }
  if (!rep.note.empty()) out["note"] = rep.note;
  return out;
}

json ensemble_json(const EnsembleResult& res) {
  json matrix = json::array();
  for (int i = 0; i < res.m; ++i) {
    json row = json::array();
    for (int j = 0; j < res.m; ++j) row.push_back(res.at(i, j));
    matrix.push_back(std::move(row));
  }
  json pairs = json::array();
  for (const PairStat& st : res.pairs) {
    pairs.push_back({{"i", st.i},
                     {"j", st.j},
                     {"distance", st.distance},
                     {"c_constant", st.c_constant},
                     {"c_variance", st.c_variance},
                     {"bias_ok", st.bias_ok},
                     {"variance_ok", st.variance_ok}});
  }
  return {{"m", res.m},
          {"n", res.n},
          {"d", res.d},
          {"seed", res.seed},
          {"poly_seeds", res.poly_seeds},
          {"reference", res.reference},
          {"bias_threshold", res.bias_threshold},
          {"variance_threshold", res.variance_threshold},
          {"odd_n", res.odd_n},
          {"has_pairs", res.has_pairs},
          {"min_offdiag", res.min_offdiag},
          {"bias_fraction", res.bias_fraction},
          {"variance_fraction", res.variance_fraction},
          {"both_fraction", res.both_fraction},
          {"matrix", std::move(matrix)},
          {"pairs", std::move(pairs)}};
}

}  // namespace ptf
