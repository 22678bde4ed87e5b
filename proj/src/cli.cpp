#include "probent/cli.hpp"

#include "probent/scenarios.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace probent {

namespace {

std::string fixed(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string axis_text(Vec3 v) {
  for (int k = 0; k < 3; ++k) {
    if (std::abs(v(k)) < 5e-5) v(k) = 0.0;  // no "-0.0000"
  }
  return "(" + fixed(v.x()) + ", " + fixed(v.y()) + ", " + fixed(v.z()) + ")";
}

bool acts_on_probe(const PauliPairHamiltonian& h) {
  return h.coupling.cwiseAbs().maxCoeff() > 0.0 || h.local_probe.cwiseAbs().maxCoeff() > 0.0;
}

void print_form(std::ostream& out, const CommutingForm& f) {
  out << "  " << to_string(f.pair) << ": " << fixed(f.strength) << " (s" << system_qubit(f.pair)
      << " . " << axis_text(f.self_axis) << ") (s3 . " << axis_text(f.probe_axis) << ")";
  if (f.local_self_strength != 0.0) {
    out << " + " << fixed(f.local_self_strength) << " s" << system_qubit(f.pair) << " . "
        << axis_text(f.local_self_axis);
  }
  if (f.local_probe_strength != 0.0) {
    out << " + " << fixed(f.local_probe_strength) << " s3 . " << axis_text(f.probe_axis);
  }
  out << "\n";
}

int cmd_classify(const HamiltonianSpec& spec, std::ostream& out) {
  const EvolutionPlan plan = plan_for(spec);
  const bool trivial = !acts_on_probe(spec.h13) || !acts_on_probe(spec.h23);
  if (plan.commuting) {
    out << (trivial ? "commuting (trivially)" : "commuting") << "\n";
  } else {
    out << "noncommuting\n";
  }
  out << "commutator norm ||[H13,H23]||_F = " << sci(plan.commutator_norm) << "\n";
  if (plan.commuting) {
    try {
      const auto [f13, f23] = canonical_commuting_form(spec.h13, spec.h23);
      out << "canonical form (shared probe axis " << axis_text(f13.probe_axis) << "):\n";
      print_form(out, f13);
      print_form(out, f23);
    } catch (const HamiltonianError& e) {
      out << "no canonical form: " << e.what() << "\n";
    }
    if (!plan.fastpath) out << "closed-form evolution unavailable: " << plan.fastpath_note << "\n";
    return kExitOk;
  }
  const Eigensystem es = hermitian_eig(plan.hamiltonian_total);
  const bool in_g = !spec.preset.empty() && spec.g != 0.0;
  const double unit = in_g ? spec.g : 1.0;
  std::vector<std::pair<double, int>> levels;
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    const double v = es.values(k);
    if (!levels.empty() && std::abs(levels.back().first - v) <= 1e-9 * std::max(1.0, std::abs(v))) {
      ++levels.back().second;
    } else {
      levels.emplace_back(v, 1);
    }
  }
  out << levels.size() << " distinct eigenvalues of H13 + H23" << (in_g ? " (units of g)" : "")
      << ":\n";
  for (const auto& [value, mult] : levels) {
    double shown = value / unit;
    if (std::abs(shown) < 1e-12) shown = 0.0;
    out << "  " << fixed(shown, 6) << "  x" << mult << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              const std::optional<std::string>& fastpath, const std::optional<std::uint64_t>& seed,
              std::ostream& out) {
  const ScenarioConfig cfg = load_config(config_path);
  const FastpathMode mode = fastpath ? parse_fastpath_mode(*fastpath) : cfg.fastpath;
  SweepResult result = run_sweep(cfg, mode);
  result.seed = seed;
  emit_csv(result, out_path);
  out << "scenario " << result.name << ": " << result.rows.size() << " rows -> " << out_path
      << "\n";
  out << (result.commuting ? "commuting" : "noncommuting") << ", commutator norm "
      << sci(result.commutator_norm) << ", evolution "
      << (result.used_fastpath ? "closed form" : "exact") << "\n";
  return kExitOk;
}

void print_counterexample(const Counterexample& c, std::ostream& out) {
  out << "first counterexample: trial " << c.trial << " (trial seed " << c.trial_seed << ")\n";
  out << "  " << c.message << "\n";
  if (!c.details.is_null()) out << c.details.dump(2) << "\n";
}

int cmd_suite(const std::string& name, std::size_t trials, std::uint64_t seed, std::ostream& out) {
  const SuiteSummary s = property_suite(name, trials, seed);
  out << "suite " << s.name << ": " << s.passed << "/" << s.trials << " trials passed (seed "
      << s.seed << ")\n";
  if (s.statistic) out << s.statistic_label << ": " << format_double(*s.statistic) << "\n";
  out << "worst margin: " << format_double(s.worst) << "\n";
  if (!s.aggregate_ok) out << "aggregate requirement failed: " << s.aggregate_note << "\n";
  if (s.first_failure) print_counterexample(*s.first_failure, out);
  if (s.ok()) return kExitOk;
  out << "replay: probent suite " << s.name << " --trials " << s.trials << " --seed " << s.seed
      << "\n";
  return kExitViolation;
}

int cmd_periodicity(int k, int l, std::size_t trials, std::uint64_t seed, std::ostream& out) {
  const PeriodicityResult r = residual_periodicity_check(k, l, trials, seed);
  out << "|a|/|b| = " << k << "/" << l << ": tau_123 returns at |a|t = " << k << " pi/2 in "
      << r.passed << "/" << r.trials << " trials (seed " << seed << ")\n";
  out << "max |tau_123(t*) - tau_123(0)| = " << sci(r.max_deviation) << "\n";
  out << "max deviation at t*/2: " << sci(periodicity_witness(k, l, 0.5, trials, seed)) << "\n";
  if (r.first_failure) print_counterexample(*r.first_failure, out);
  if (r.ok()) return kExitOk;
  out << "replay: probent periodicity --k " << k << " --l " << l << " --trials " << trials
      << " --seed " << seed << "\n";
  return kExitViolation;
}

nlohmann::json qnd_config(double gt) {
  return {{"name", "qnd_demo"},
          {"hamiltonian", {{"preset", "qnd_zz"}, {"g", 1.0}}},
          {"initial_state", {{"class", "fully_separable"}, {"reference_axis", {1.0, 0.0, 0.0}}}},
          {"time_grid", {{"t_start", gt}, {"t_end", gt}, {"steps", 1}}},
          {"measurement", {{"basis_axis", {1.0, 0.0, 0.0}}}}};
}

int cmd_qnd_demo(double gt, const std::optional<std::string>& out_path, std::ostream& out) {
  if (!(gt >= 0.0) || !std::isfinite(gt)) throw ConfigError("gt", "must be finite and >= 0");
  const ScenarioConfig cfg = parse_config(qnd_config(gt));
  const SweepResult result = run_sweep(cfg);
  const SweepRow& row = result.rows.front();
  out << "QND interaction H = (g/4) (s1z s3z + s2z s3z), J_z = sz/2 per photonic qubit\n";
  out << "initial state |+x +x +x>, gt = " << format_double(gt) << "\n";
  out << "pre-measurement tangle_12: " << fixed(row.report.tangle_12) << "\n";
  out << "probe measured along x:\n";
  out << "  outcome  probability  conditional tangle_12\n";
  for (const OutcomeSummary& o : *row.outcomes) {
    out << "  " << o.label << "        " << fixed(o.probability) << "       "
        << (o.conditional_tangle ? fixed(*o.conditional_tangle) : std::string("undefined"))
        << "\n";
  }
  for (const OutcomeSummary& o : *row.outcomes) {
    if (o.label == "+") {
      out << "conditional tangle (+x): "
          << (o.conditional_tangle ? fixed(*o.conditional_tangle) : std::string("undefined"))
          << "\n";
    }
  }
  if (out_path) {
    emit_csv(result, *out_path);
    out << "wrote " << *out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement dynamics of two qubits coupled through a shared probe qubit",
               "probent"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_path;
  std::optional<std::string> out_opt;
  std::optional<std::string> fastpath;
  std::optional<std::uint64_t> seed;
  std::uint64_t suite_seed = 1;
  std::size_t trials = 1000;
  std::string suite_name;
  std::string preset;
  double g = 1.0;
  double gt = std::numbers::pi;
  std::optional<int> m_index;
  int k = 1;
  int l = 2;

  auto* sweep = app.add_subcommand("sweep", "Evolve a scenario over its time grid and write CSV");
  sweep->add_option("--config", config_path, "Scenario JSON file")->required();
  sweep->add_option("--out", out_path, "CSV output path")->required();
  sweep->add_option("--fastpath", fastpath, "Override the config: auto, on or off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  sweep->add_option("--seed", seed, "Recorded in the CSV comment line");

  auto* suite = app.add_subcommand("suite", "Run a randomized property suite");
  suite->add_option("name", suite_name, "Suite name")->required();
  suite->add_option("--trials", trials, "Number of trials")->capture_default_str();
  suite->add_option("--seed", suite_seed, "Suite seed")->capture_default_str();

  auto* classify = app.add_subcommand("classify", "Commutation analysis of H13 and H23");
  auto* classify_config = classify->add_option("--config", config_path, "Scenario JSON file");
  auto* classify_preset =
      classify->add_option("--preset", preset, "qnd_zz or heisenberg_chain instead of a config");
  classify->add_option("--g", g, "Coupling for --preset")->capture_default_str();
  classify_config->excludes(classify_preset);

  auto* qnd = app.add_subcommand("qnd-demo", "Probe-mediated entangling of two atoms");
  auto* gt_opt = qnd->add_option("--gt", gt, "Dimensionless interaction time gt");
  auto* m_opt = qnd->add_option("--m", m_index, "Use gt = pi (2m + 1)");
  gt_opt->excludes(m_opt);
  qnd->add_option("--out", out_opt, "Optional CSV output path");

  auto* periodicity =
      app.add_subcommand("periodicity", "Return of tau_123 for commensurate couplings");
  periodicity->add_option("--k", k, "Numerator of |a|/|b|")->capture_default_str();
  periodicity->add_option("--l", l, "Denominator of |a|/|b|")->capture_default_str();
  periodicity->add_option("--trials", trials, "Number of trials")->capture_default_str();
  periodicity->add_option("--seed", suite_seed, "Seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "probent: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(config_path, out_path, fastpath, seed, out);
    if (suite->parsed()) return cmd_suite(suite_name, trials, suite_seed, out);
    if (classify->parsed()) {
      HamiltonianSpec spec;
      if (!preset.empty()) {
        spec = parse_hamiltonian({{"preset", preset}, {"g", g}});
      } else if (!config_path.empty()) {
        const nlohmann::json j = read_config_json(config_path);
        if (!j.is_object() || !j.contains("hamiltonian")) {
          throw ConfigError("hamiltonian", "missing required key (in " + config_path + ")");
        }
        spec = parse_hamiltonian(j.at("hamiltonian"));
      } else {
        throw ConfigError("", "classify needs --config or --preset");
      }
      return cmd_classify(spec, out);
    }
    if (qnd->parsed()) {
      if (m_index) {
        if (*m_index < 0) throw ConfigError("m", "must be >= 0");
        gt = std::numbers::pi * (2.0 * *m_index + 1.0);
      }
      return cmd_qnd_demo(gt, out_opt, out);
    }
    if (periodicity->parsed()) return cmd_periodicity(k, l, trials, suite_seed, out);
  } catch (const ConfigError& e) {
    err << "probent: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SuiteError& e) {
    err << "probent: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "probent: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "probent: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"probent"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace probent
