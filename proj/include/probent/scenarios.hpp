#pragma once

// Declarative scenarios (Hamiltonian + initial state + time grid), time
// sweeps with CSV output, and randomized property suites that check the
// entanglement claims for the commuting and Heisenberg models.

#include "probent/evolution.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace probent {

/// Malformed or inconsistent scenario configuration. `path` names the
/// offending key, e.g. "initial_state.a".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SuiteError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 0.0;
  int steps = 1;

  /// `steps` equally spaced points including both ends (just t_start when
  /// steps == 1).
  std::vector<double> points() const;
};

struct HamiltonianSpec {
  std::string preset;  // "qnd_zz", "heisenberg_chain" or empty for explicit tensors
  double g = 0.0;
  PauliPairHamiltonian h13;
  PauliPairHamiltonian h23;
};

struct MeasurementSpec {
  Vec3 basis_axis = Vec3::UnitX();
  std::optional<double> at_time;
};

/// Report columns in CSV order.
const std::vector<std::string>& report_fields();

struct ScenarioConfig {
  std::string name;
  HamiltonianSpec hamiltonian;
  std::string state_class;
  PureState3 initial_state = PureState3::from_amplitudes(ket(0));
  TimeGrid time_grid;
  std::vector<std::string> measures = report_fields();
  std::optional<MeasurementSpec> measurement;
  FastpathMode fastpath = FastpathMode::kAuto;
  /// The parsed document, kept for hashing and diagnostics.
  nlohmann::json source;
};

HamiltonianSpec parse_hamiltonian(const nlohmann::json& j, const std::string& path = "hamiltonian");
PureState3 parse_initial_state(const nlohmann::json& j, std::string* class_name = nullptr,
                               const std::string& path = "initial_state");
ScenarioConfig parse_config(const nlohmann::json& j);
/// Reads and parses a config file; a missing or unreadable file is a
/// ConfigError naming the path.
nlohmann::json read_config_json(const std::string& path);
ScenarioConfig load_config(const std::string& path);

FastpathMode parse_fastpath_mode(const std::string& s);
std::string to_string(FastpathMode mode);

/// FNV-1a over the canonical (sorted-key) JSON dump.
std::uint64_t config_hash(const nlohmann::json& j);

struct OutcomeSummary {
  std::string label;
  double probability = 0.0;
  std::optional<double> conditional_tangle;
};

struct SweepRow {
  double t = 0.0;
  EntanglementReport report;
  std::optional<std::vector<OutcomeSummary>> outcomes;
};

struct SweepResult {
  std::string name;
  std::vector<std::string> measures = report_fields();
  bool has_measurement = false;
  bool commuting = false;
  double commutator_norm = 0.0;
  bool used_fastpath = false;
  std::uint64_t config_hash = 0;
  std::optional<std::uint64_t> seed;
  std::vector<SweepRow> rows;
};

EvolutionPlan plan_for(const HamiltonianSpec& spec);

/// Evolves, reduces and measures at every grid point.
SweepResult run_sweep(const ScenarioConfig& cfg);
SweepResult run_sweep(const ScenarioConfig& cfg, FastpathMode mode);

double report_field(const EntanglementReport& r, const std::string& field);

/// Header, optional comment line, one row per grid point; floats at 17
/// significant digits.
void emit_csv(const SweepResult& result, std::ostream& out);
void emit_csv(const SweepResult& result, const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::optional<std::string> comment;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::istream& in);
std::string format_double(double x);

// ---------------------------------------------------------------- sampling

/// Deterministic per-trial seed derived from a suite seed.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

using Rng = std::mt19937_64;

Vec3 random_unit_axis(Rng& rng);
/// Normalized complex Gaussian pair.
CVector random_qubit_state(Rng& rng);
/// exp(-i gamma n.sigma) from a normalized Gaussian quadruple.
LocalRotation random_rotation(Rng& rng, int qubit);
/// Normalized complex Gaussian vector of length `dim`.
CVector random_complex_vector(Rng& rng, int dim);
/// Commuting pair in canonical form: unit axes on the sphere, coupling
/// strengths in (0, 2], local fields parallel to the coupling axes.
std::pair<PauliPairHamiltonian, PauliPairHamiltonian> random_commuting_pair(Rng& rng);
std::pair<PauliPairHamiltonian, PauliPairHamiltonian> commuting_pair(
    const Vec3& self1, double strength1, const Vec3& self2, double strength2, const Vec3& probe,
    double local1 = 0.0, double local2 = 0.0, double local_probe1 = 0.0,
    double local_probe2 = 0.0);

// ---------------------------------------------------------------- suites

struct Counterexample {
  std::uint64_t trial = 0;
  std::uint64_t trial_seed = 0;
  std::string message;
  nlohmann::json details;
};

struct SuiteSummary {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t passed = 0;
  double worst = 0.0;  // largest violation margin (or deviation) seen
  /// Suite-specific statistic, e.g. the largest tangle reached.
  std::optional<double> statistic;
  std::string statistic_label;
  /// Suite-level requirement beyond per-trial checks.
  bool aggregate_ok = true;
  std::string aggregate_note;
  std::optional<Counterexample> first_failure;

  bool ok() const { return passed == trials && aggregate_ok; }
};

const std::vector<std::string>& suite_names();
SuiteSummary property_suite(const std::string& name, std::size_t trials, std::uint64_t seed);

struct PeriodicityResult {
  int k = 1;
  int l = 1;
  std::size_t trials = 0;
  std::size_t passed = 0;
  double max_deviation = 0.0;
  std::optional<Counterexample> first_failure;
  bool ok() const { return passed == trials; }
};

/// With |a|/|b| = k/l, tau_123 at |a| t = k pi/2 equals tau_123(0).
PeriodicityResult residual_periodicity_check(int k, int l, std::size_t trials,
                                             std::uint64_t seed);

/// Largest |tau_123(t) - tau_123(0)| found at t = fraction * k pi / (2|a|).
double periodicity_witness(int k, int l, double fraction, std::size_t trials, std::uint64_t seed);

}  // namespace probent
