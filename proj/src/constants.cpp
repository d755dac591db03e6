#include "ptf/constants.hpp"

#include <cmath>

namespace ptf {

void TheoryConstants::set(const std::string& name, double value) {
  if (!std::isfinite(value)) {
    throw InvalidInputError("constant '" + name + "' must be finite");
  }
  auto positive = [&](double v) {
    if (v <= 0.0) {
      throw InvalidInputError("constant '" + name + "' must be positive");
    }
    return v;
  };
  if (name == "c0") {
    if (value <= 1.0) throw InvalidInputError("c0 must exceed 1");
    c0 = value;
  } else if (name == "c_prime") {
    c_prime = positive(value);
  } else if (name == "k_granularity") {
    k_granularity = positive(value);
  } else if (name == "theta") {
    theta = positive(value);
  } else if (name == "alpha_mult") {
    alpha_mult = positive(value);
  } else if (name == "depth_budget_override") {
    if (value < 0.0 || value != std::floor(value)) {
      throw InvalidInputError("depth_budget_override must be a nonnegative integer");
    }
    depth_budget_override = (std::int64_t)value;
  } else if (name == "enumeration_limit") {
    if (value < 1.0 || value > 30.0 || value != std::floor(value)) {
      throw InvalidInputError("enumeration_limit must be an integer in [1, 30]");
    }
    enumeration_limit = (int)value;
  } else if (name == "mc_samples") {
    if (value < 1.0 || value != std::floor(value)) {
      throw InvalidInputError("mc_samples must be a positive integer");
    }
    mc_samples = (std::int64_t)value;
  } else if (name == "theta_dfn2") {
    theta_dfn2 = positive(value);
  } else if (name == "weight_exp") {
    weight_exp = positive(value);
  } else if (name == "conc_const") {
    conc_const = positive(value);
  } else if (name == "reg_anticonc_const") {
    reg_anticonc_const = positive(value);
  } else if (name == "depth_exp_mult") {
    depth_exp_mult = positive(value);
  } else {
    throw InvalidInputError("unknown constant '" + name + "'");
  }
}

void TheoryConstants::validate() const {
  if (c0 <= 1.0 || c_prime <= 0.0 || k_granularity <= 0.0 || theta <= 0.0 ||
      alpha_mult <= 0.0 || conc_const <= 0.0 || reg_anticonc_const <= 0.0 ||
      weight_exp <= 0.0 || theta_dfn2 <= 0.0 || depth_exp_mult <= 0.0) {
    throw InvalidInputError("theory constants must be positive (c0 > 1)");
  }
  if (enumeration_limit < 1 || enumeration_limit > 30 || mc_samples < 1) {
    throw InvalidInputError("bad resource limits in theory constants");
  }
  if (depth_budget_override && *depth_budget_override < 0) {
    throw InvalidInputError("depth budget override must be nonnegative");
  }
}

std::vector<std::pair<std::string, double>> TheoryConstants::fields() const {
  std::vector<std::pair<std::string, double>> out = {
      {"c0", c0},
      {"c", c()},
      {"c_prime", c_prime},
      {"k_granularity", k_granularity},
      {"theta", theta},
      {"alpha_mult", alpha_mult},
      {"enumeration_limit", (double)enumeration_limit},
      {"mc_samples", (double)mc_samples},
      {"theta_dfn2", theta_dfn2},
      {"weight_exp", weight_exp},
      {"conc_const", conc_const},
      {"reg_anticonc_const", reg_anticonc_const},
      {"depth_exp_mult", depth_exp_mult},
  };
  if (depth_budget_override) {
    out.emplace_back("depth_budget_override", (double)*depth_budget_override);
  }
  return out;
}

}  // namespace ptf
