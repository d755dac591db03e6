// Command-line front end: decompose | approximate | verify | ensemble.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptf/commands.hpp"

namespace {

void apply_override(ptf::RunConfig& cfg, const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ptf::InvalidInputError("constant override must be NAME=VALUE, got '" +
                                 text + "'");
  }
  std::string name = text.substr(0, eq);
  std::string value = text.substr(eq + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ptf::InvalidInputError("bad numeric value in '" + text + "'");
  }
  if (used != value.size()) {
    throw ptf::InvalidInputError("bad numeric value in '" + text + "'");
  }
  cfg.constants.set(name, v);
  cfg.overrides.emplace_back(name, value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-degree polynomial threshold function toolkit"};
  app.require_subcommand(1);

  ptf::RunConfig cfg;
  std::string generate_spec;
  std::string format = "human";
  std::string out_path;
  std::vector<std::string> const_overrides;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", cfg.input_path, "polynomial file to load");
    cmd->add_option("--generate", generate_spec,
                    "generate a random input, spec n:d:seed");
    cmd->add_option("--tau", cfg.tau, "regularity level");
    cmd->add_option("--epsilon", cfg.epsilon, "approximation target");
    cmd->add_option("--seed", cfg.seed, "master seed for sampling");
    cmd->add_option("--format", format, "human or records");
    cmd->add_option("--out", out_path, "write the report to a file");
    cmd->add_option("--const", const_overrides,
                    "override a theory constant, NAME=VALUE (repeatable)");
    return cmd;
  };

  add_common(app.add_subcommand("decompose",
                                "grow the regularity decision tree"));
  add_common(app.add_subcommand("approximate",
                                "build a low-weight integer approximator"));
  CLI::App* verify = add_common(
      app.add_subcommand("verify", "run the analytic-bound check battery"));
  verify->add_option("--check", cfg.check, "run a single named check");
  CLI::App* ensemble = add_common(
      app.add_subcommand("ensemble", "pairwise-distance ensemble experiment"));
  ensemble->add_option("--size", cfg.ensemble_size, "ensemble size M");
  ensemble->add_option("--n", cfg.ensemble_n, "variables per polynomial");
  ensemble->add_option("--d", cfg.ensemble_d, "degree of every coefficient");

  CLI11_PARSE(app, argc, argv);

  try {
    if (const char* env = std::getenv("PTF_ENUM_LIMIT")) {
      cfg.constants.set("enumeration_limit", std::atof(env));
    }
    for (const std::string& text : const_overrides) apply_override(cfg, text);
    cfg.command = app.get_subcommands().front()->get_name();
    if (!generate_spec.empty()) {
      cfg.generate = ptf::parse_generate_spec(generate_spec);
    }
    if (format == "records") {
      cfg.format = ptf::OutputFormat::Records;
    } else if (format != "human") {
      throw ptf::InvalidInputError("format must be 'human' or 'records'");
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) {
      std::cerr << "error: cannot open '" << out_path << "' for writing\n";
      return 2;
    }
    return ptf::run_command(cfg, file, std::cerr);
  }
  return ptf::run_command(cfg, std::cout, std::cerr);
}
