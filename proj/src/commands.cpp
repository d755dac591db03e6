#include "ptf/commands.hpp"

#include <cmath>
#include <ctime>
#include <ostream>
#include <sstream>

#include "ptf/checks.hpp"
#include "ptf/ensemble.hpp"
#include "ptf/io.hpp"
#include "ptf/low_weight.hpp"
#include "ptf/rng.hpp"
#include "ptf/serialize.hpp"
#include "ptf/tree.hpp"

namespace ptf {

namespace {

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json header_json(const RunConfig& cfg) {
  json overrides = json::array();
  for (auto& [name, value] : cfg.overrides) {
    overrides.push_back({{"name", name}, {"value", value}});
  }
  json gen = nullptr;
  if (cfg.generate) {
    gen = {{"n", cfg.generate->n},
           {"d", cfg.generate->d},
           {"seed", cfg.generate->seed}};
  }
  return {{"record", "header"},
          {"timestamp", timestamp_utc()},
          {"command", cfg.command},
          {"input", cfg.input_path.empty() ? json(nullptr)
                                           : json(cfg.input_path)},
          {"generate", std::move(gen)},
          {"tau", cfg.tau},
          {"epsilon", cfg.epsilon},
          {"seed", cfg.seed},
          {"check", cfg.check.empty() ? json(nullptr) : json(cfg.check)},
          {"ensemble",
           {{"m", cfg.ensemble_size},
            {"n", cfg.ensemble_n},
            {"d", cfg.ensemble_d}}},
          {"constants", constants_json(cfg.constants)},
          {"overrides", std::move(overrides)}};
}

void emit(std::ostream& out, const json& record) {
  out << record.dump() << '\n';
}

void human_check_line(std::ostream& out, const CheckReport& rep) {
  out << "  [" << check_flag_name(rep.flag) << "] " << rep.name
      << ": measured " << rep.measured << " vs bound " << rep.bound;
  if (rep.method == CheckMethod::MonteCarlo) {
    out << " (" << rep.samples << " samples, seed " << rep.seed << ")";
  }
  if (!rep.note.empty()) out << " -- " << rep.note;
  out << '\n';
}

}  // namespace

GenerateSpec parse_generate_spec(const std::string& text) {
  GenerateSpec spec;
  std::istringstream in(text);
  char c1 = 0;
  char c2 = 0;
  if (!(in >> spec.n >> c1 >> spec.d >> c2 >> spec.seed) || c1 != ':' ||
      c2 != ':' || !in.eof()) {
    throw InvalidInputError("generator spec must be n:d:seed, got '" + text +
                            "'");
  }
  return spec;
}

MultilinearPolynomial resolve_input(const RunConfig& cfg) {
  if (cfg.generate) {
    return random_polynomial(cfg.generate->n, cfg.generate->d,
                             cfg.generate->seed);
  }
  if (!cfg.input_path.empty()) return load_polynomial(cfg.input_path);
  throw InvalidInputError("no input: pass --input FILE or --generate n:d:seed");
}

int run_decompose(const RunConfig& cfg, std::ostream& out) {
  MultilinearPolynomial p = resolve_input(cfg);
  DecompositionTree tree = build_tree(p, cfg.tau, cfg.constants);
  PathMassReport mass = path_mass(tree);
  int exit_code = mass.good_mass >= 1.0 - cfg.tau ? 0 : 1;

  if (cfg.format == OutputFormat::Records) {
    emit(out, header_json(cfg));
    emit(out, {{"record", "params"},
               {"params", tree.params ? params_json(*tree.params)
                                      : json(nullptr)}});
    emit(out, {{"record", "tree"}, {"tree", tree_json(tree)}});
    json m = mass_json(mass);
    m["record"] = "mass";
    emit(out, m);
    emit(out, {{"record", "result"},
               {"good_mass", mass.good_mass},
               {"budget_exhausted", tree.budget_exhausted},
               {"exit", exit_code}});
    return exit_code;
  }

  out << "decompose: n=" << tree.n << " tau=" << tree.tau << '\n';
  if (tree.params) {
    const TreeParams& tp = *tree.params;
    out << "params: d=" << tp.d << " tau_tilde=" << tp.tau_tilde
        << " alpha=" << tp.alpha << " per_stage_cap=" << tp.per_stage_cap
        << " stage_cap=" << tp.stage_cap
        << " total_budget=" << tp.total_budget
        << (tp.budget_overridden ? " (override)" : "") << '\n';
  } else {
    out << "params: none (tau >= 1/2, no branching allowed)\n";
  }
  out << "leaves: " << tree.leaves.size() << " (regular "
      << mass.leaves_regular << ", close " << mass.leaves_close << ", bad "
      << mass.leaves_bad << "), max depth " << mass.max_depth << '\n';
  out << "mass: regular " << mass.mass_regular << ", close "
      << mass.mass_close << ", bad " << mass.mass_bad << ", good "
      << mass.good_mass << '\n';
  if (tree.budget_exhausted) out << "depth budget exhausted\n";
  out << "verdict: good mass " << mass.good_mass
      << (exit_code == 0 ? " >= " : " < ") << 1.0 - cfg.tau
      << (exit_code == 0 ? " -> ok" : " -> FAIL") << '\n';
  return exit_code;
}

int run_approximate(const RunConfig& cfg, std::ostream& out) {
  MultilinearPolynomial p = resolve_input(cfg);
  ApproximationCertificate cert = approximate(p, cfg.epsilon, cfg.constants);
  int exit_code = cert.distance_ok ? 0 : 1;

  if (cfg.format == OutputFormat::Records) {
    emit(out, header_json(cfg));
    json c = certificate_json(cert);
    c["record"] = "certificate";
    emit(out, c);
    emit(out, {{"record", "result"},
               {"distance", cert.distance},
               {"distance_ok", cert.distance_ok},
               {"bad_mass_ok", cert.bad_mass_ok},
               {"exit", exit_code}});
    return exit_code;
  }

  out << "approximate: n=" << cert.n << " d=" << cert.d
      << " epsilon=" << cert.epsilon << " tau=" << cert.tau << '\n';
  out << "tree: max depth " << cert.max_depth << ", leaves "
      << (cert.mass.leaves_regular + cert.mass.leaves_close +
          cert.mass.leaves_bad)
      << " (regular " << cert.mass.leaves_regular << ", close "
      << cert.mass.leaves_close << ", bad " << cert.mass.leaves_bad
      << "), bad mass " << cert.mass.mass_bad << '\n';
  out << "approximator: degree " << cert.degree_achieved << ", weight "
      << cert.weight << " (log2 " << cert.weight_log2
      << "), declared bound log2 " << cert.declared_bound_log2 << '\n';
  out << "distance: " << cert.distance
      << (cert.distance_exact
              ? " (exact)"
              : " (monte carlo, " + std::to_string(cert.distance_samples) +
                    " samples)")
      << (exit_code == 0 ? " <= " : " > ") << cert.epsilon
      << (exit_code == 0 ? " -> ok" : " -> FAIL") << '\n';
  return exit_code;
}

namespace {

const char* const kCheckNames[] = {
    "parseval",        "hypercontractivity",        "concentration",
    "anticoncentration", "regular_anticoncentration", "gaussian_gap"};

bool known_check(const std::string& name) {
  for (const char* c : kCheckNames) {
    if (name == c) return true;
  }
  return false;
}

MultilinearPolynomial drop_constant(const MultilinearPolynomial& p) {
  std::vector<Term> terms;
  for (const Term& t : p.terms()) {
    if (t.mask != 0) terms.push_back(t);
  }
  return {p.n(), p.degree_bound(), std::move(terms)};
}

CheckReport not_applicable(const char* name, const char* why) {
  CheckReport rep;
  rep.name = name;
  rep.flag = CheckFlag::NotApplicable;
  rep.note = why;
  return rep;
}

}  // namespace

int run_verify(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.check.empty() && !known_check(cfg.check)) {
    throw InvalidInputError("unknown check '" + cfg.check + "'");
  }
  MultilinearPolynomial p = resolve_input(cfg);
  const TheoryConstants& tc = cfg.constants;
  auto want = [&](const char* name) {
    return cfg.check.empty() || cfg.check == name;
  };

  std::vector<CheckReport> reports;
  // Hard checks fail the run; the rest are informational by construction.
  std::vector<bool> hard;
  auto push = [&](CheckReport rep, bool is_hard) {
    reports.push_back(std::move(rep));
    hard.push_back(is_hard);
  };

  if (want("parseval")) {
    std::vector<std::int8_t> signs = sign_table(p, tc.enumeration_limit);
    TruthTable table;
    table.n = p.n();
    table.values.assign(signs.begin(), signs.end());
    push(parseval_unit_check(table), true);
  }
  if (want("hypercontractivity")) {
    push(hypercontractivity_check(p, tc), true);
  }
  if (want("concentration")) {
    int d = std::max(1, p.degree());
    double ed = std::exp((double)d);
    double prev = 2.0;
    double worst_increase = 0.0;
    for (double factor : {1.05, 1.5, 3.0}) {
      CheckReport rep = concentration_tail(p, ed * factor, tc);
      worst_increase = std::max(worst_increase, rep.measured - prev);
      prev = rep.measured;
      push(std::move(rep), false);
    }
    CheckReport mono;
    mono.name = "concentration_monotone";
    mono.measured = worst_increase;
    mono.bound = 0.0;
    mono.flag = worst_increase <= 0.0 ? CheckFlag::Pass : CheckFlag::Fail;
    push(std::move(mono), true);
  }
  if (want("anticoncentration")) {
    MultilinearPolynomial centered = drop_constant(p);
    if (centered.terms().empty()) {
      push(not_applicable("anticoncentration", "input is constant"), true);
    } else {
      push(anticoncentration_check(centered, tc), true);
    }
  }
  if (want("regular_anticoncentration")) {
    if (variance_of(p) <= 0.0) {
      push(not_applicable("regular_anticoncentration", "input is constant"),
           false);
    } else {
      push(regular_anticoncentration(normalize_variance(p), cfg.tau, tc),
           false);
    }
  }
  if (want("gaussian_gap")) {
    if (variance_of(p) <= 0.0) {
      push(not_applicable("gaussian_gap", "input is constant"), false);
    } else {
      push(gaussian_invariance_gap(normalize_variance(p), tc.mc_samples,
                                   derive_seed(cfg.seed, "gaussian-gap"), tc),
           false);
    }
  }

  int hard_failures = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (hard[i] && reports[i].flag == CheckFlag::Fail) ++hard_failures;
  }
  int exit_code = hard_failures == 0 ? 0 : 1;

  if (cfg.format == OutputFormat::Records) {
    emit(out, header_json(cfg));
    for (std::size_t i = 0; i < reports.size(); ++i) {
      json rec = check_json(reports[i]);
      rec["record"] = "check";
      rec["hard"] = (bool)hard[i];
      emit(out, rec);
    }
    emit(out, {{"record", "result"},
               {"checks", reports.size()},
               {"hard_failures", hard_failures},
               {"exit", exit_code}});
    return exit_code;
  }

  out << "verify: n=" << p.n() << " degree=" << p.degree() << '\n';
  for (const CheckReport& rep : reports) human_check_line(out, rep);
  out << "verdict: " << hard_failures << " hard failure(s)"
      << (exit_code == 0 ? " -> ok" : " -> FAIL") << '\n';
  return exit_code;
}

int run_ensemble(const RunConfig& cfg, std::ostream& out) {
  EnsembleResult res = ensemble_experiment(cfg.ensemble_size, cfg.ensemble_n,
                                           cfg.ensemble_d, cfg.seed,
                                           cfg.constants);
  int exit_code = (!res.has_pairs || res.min_offdiag > 0.0) ? 0 : 1;

  if (cfg.format == OutputFormat::Records) {
    emit(out, header_json(cfg));
    json rec = ensemble_json(res);
    rec["record"] = "ensemble";
    emit(out, rec);
    emit(out, {{"record", "result"},
               {"min_offdiag", res.min_offdiag},
               {"exit", exit_code}});
    return exit_code;
  }

  out << "ensemble: m=" << res.m << " n=" << res.n << " d=" << res.d
      << " seed=" << res.seed << '\n';
  if (res.has_pairs) {
    out << "min off-diagonal distance: " << res.min_offdiag
        << " (reference c^-d = " << res.reference << ")\n";
    out << "small-bias fraction: " << res.bias_fraction
        << ", large-variance fraction: " << res.variance_fraction
        << ", both: " << res.both_fraction
        << (res.odd_n ? " (odd n: thresholds use floor(n/2))" : "") << '\n';
  } else {
    out << "no pairs (m < 2)\n";
  }
  out << "verdict: " << (exit_code == 0 ? "ok" : "FAIL") << '\n';
  return exit_code;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "decompose") return run_decompose(cfg, out);
    if (cfg.command == "approximate") return run_approximate(cfg, out);
    if (cfg.command == "verify") return run_verify(cfg, out);
    if (cfg.command == "ensemble") return run_ensemble(cfg, out);
    throw InvalidInputError("unknown command '" + cfg.command + "'");
  } catch (const InvalidInputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateInputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace ptf
