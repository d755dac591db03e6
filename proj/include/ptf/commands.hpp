#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptf/constants.hpp"
#include "ptf/polynomial.hpp"

namespace ptf {

struct GenerateSpec {
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
};

// Parses "n:d:seed".
GenerateSpec parse_generate_spec(const std::string& text);

enum class OutputFormat { Human, Records };

// Everything a run depends on. Reports echo it back (constants included)
// so any output can be reproduced from its own header.
struct RunConfig {
  std::string command;  // decompose | approximate | verify | ensemble
  std::string input_path;
  std::optional<GenerateSpec> generate;
  double tau = 0.1;
  double epsilon = 0.2;
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::Human;
  std::string check;  // restrict verify to one named check
  int ensemble_size = 32;
  int ensemble_n = 12;
  int ensemble_d = 2;
  TheoryConstants constants;
  // Raw --const NAME=VALUE pairs, echoed in the header.
  std::vector<std::pair<std::string, std::string>> overrides;
};

MultilinearPolynomial resolve_input(const RunConfig& cfg);

// Command bodies. Each writes its report to `out` and returns the exit
// status of its contract (0 on success, 1 on contract failure); anything
// malformed or oversized propagates as an exception.
int run_decompose(const RunConfig& cfg, std::ostream& out);
int run_approximate(const RunConfig& cfg, std::ostream& out);
int run_verify(const RunConfig& cfg, std::ostream& out);
int run_ensemble(const RunConfig& cfg, std::ostream& out);

// Dispatch plus error mapping: 0/1 from the command contract, 2 invalid or
// degenerate input, 3 resource limit, 4 internal error.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace ptf
