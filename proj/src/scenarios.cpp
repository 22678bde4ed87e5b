#include "probent/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace probent {

using nlohmann::json;

// ---------------------------------------------------------------- config

namespace {

std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  require_object(j, path);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(join_path(path, key), "unknown key");
  }
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(join_path(path, key), "missing required key");
  return j.at(key);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& path) {
  return j.contains(key) ? as_number(j.at(key), join_path(path, key)) : fallback;
}

cplx as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {as_number(j, path), 0.0};
  if (j.is_array() && j.size() == 2) {
    return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
  }
  throw ConfigError(path, "expected a number or a [re, im] pair");
}

CVector as_complex_vector(const json& j, int size, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != size) {
    throw ConfigError(path, "expected an array of " + std::to_string(size) + " entries");
  }
  CVector v(size);
  for (int k = 0; k < size; ++k) v(k) = as_complex(j[k], path + "[" + std::to_string(k) + "]");
  return v;
}

Vec3 as_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(path, "expected an array of 3 numbers");
  return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]"),
          as_number(j[2], path + "[2]")};
}

Vec3 as_axis(const json& j, const std::string& path) {
  const Vec3 v = as_vec3(j, path);
  if (!(v.norm() > 0.0)) throw ConfigError(path, "axis must be nonzero");
  return v.normalized();
}

PauliPairHamiltonian parse_pair(const json& j, Pair pair, const std::string& path) {
  check_keys(j, {"coupling", "local_self", "local_probe"}, path);
  PauliPairHamiltonian h;
  h.pair = pair;
  if (j.contains("coupling")) {
    const json& c = j.at("coupling");
    const std::string cp = join_path(path, "coupling");
    if (!c.is_array() || c.size() != 3) throw ConfigError(cp, "expected a 3x3 array");
    for (int i = 0; i < 3; ++i) {
      const Vec3 row = as_vec3(c[i], cp + "[" + std::to_string(i) + "]");
      h.coupling.row(i) = row.transpose();
    }
  }
  if (j.contains("local_self")) h.local_self = as_vec3(j.at("local_self"), join_path(path, "local_self"));
  if (j.contains("local_probe")) {
    h.local_probe = as_vec3(j.at("local_probe"), join_path(path, "local_probe"));
  }
  return h;
}

CVector qubit_state_field(const json& j, const std::string& state_key, const std::string& axis_key,
                          const std::string& path) {
  if (j.contains(state_key) && j.contains(axis_key)) {
    throw ConfigError(join_path(path, state_key), "give either '" + state_key + "' or '" +
                                                      axis_key + "', not both");
  }
  if (j.contains(axis_key)) {
    return axis_eigenbasis(as_axis(j.at(axis_key), join_path(path, axis_key))).plus;
  }
  if (j.contains(state_key)) return as_complex_vector(j.at(state_key), 2, join_path(path, state_key));
  return ket(0, 2);
}

}  // namespace

const std::vector<std::string>& report_fields() {
  static const std::vector<std::string> fields{"tangle_12", "concurrence_12", "eof_12",
                                               "residual_tangle", "purity_12"};
  return fields;
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> out;
  if (steps <= 0) return out;
  out.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    out.push_back(t_start);
    return out;
  }
  const double dt = (t_end - t_start) / static_cast<double>(steps - 1);
  for (int k = 0; k < steps; ++k) out.push_back(k + 1 == steps ? t_end : t_start + k * dt);
  return out;
}

HamiltonianSpec parse_hamiltonian(const json& j, const std::string& path) {
  require_object(j, path);
  HamiltonianSpec spec;
  if (j.contains("preset")) {
    check_keys(j, {"preset", "g"}, path);
    const json& p = j.at("preset");
    if (!p.is_string()) throw ConfigError(join_path(path, "preset"), "expected a string");
    spec.preset = p.get<std::string>();
    spec.g = as_number(require(j, "g", path), join_path(path, "g"));
    if (spec.preset == "qnd_zz") {
      std::tie(spec.h13, spec.h23) = qnd_zz(spec.g);
    } else if (spec.preset == "heisenberg_chain") {
      std::tie(spec.h13, spec.h23) = heisenberg_chain(spec.g);
    } else {
      throw ConfigError(join_path(path, "preset"),
                        "unknown preset '" + spec.preset + "' (qnd_zz, heisenberg_chain)");
    }
    return spec;
  }
  check_keys(j, {"h13", "h23"}, path);
  spec.h13 = parse_pair(require(j, "h13", path), Pair::k13, join_path(path, "h13"));
  spec.h23 = parse_pair(require(j, "h23", path), Pair::k23, join_path(path, "h23"));
  return spec;
}

PureState3 parse_initial_state(const json& j, std::string* class_name, const std::string& path) {
  require_object(j, path);
  const json& cls = require(j, "class", path);
  if (!cls.is_string()) throw ConfigError(join_path(path, "class"), "expected a string");
  const std::string name = cls.get<std::string>();
  if (class_name) *class_name = name;
  auto field = [&](const std::string& key) { return join_path(path, key); };
  try {
    if (name == "fully_separable") {
      check_keys(j, {"class", "rotations", "reference_axis", "reference_axes"}, path);
      std::array<LocalRotation, 3> rots;
      for (int k = 0; k < 3; ++k) rots[k].qubit = k + 1;
      if (j.contains("rotations")) {
        const json& r = j.at("rotations");
        if (!r.is_array() || r.size() != 3) {
          throw ConfigError(field("rotations"), "expected 3 rotations (qubits 1, 2, 3)");
        }
        for (int k = 0; k < 3; ++k) {
          const std::string rp = field("rotations") + "[" + std::to_string(k) + "]";
          check_keys(r[k], {"angle", "axis"}, rp);
          rots[k].angle = number_or(r[k], "angle", 0.0, rp);
          if (r[k].contains("axis")) rots[k].axis = as_axis(r[k].at("axis"), rp + ".axis");
        }
      }
      std::array<Vec3, 3> reference{Vec3::UnitZ(), Vec3::UnitZ(), Vec3::UnitZ()};
      if (j.contains("reference_axis") && j.contains("reference_axes")) {
        throw ConfigError(field("reference_axis"), "give reference_axis or reference_axes");
      }
      if (j.contains("reference_axis")) {
        const Vec3 axis = as_axis(j.at("reference_axis"), field("reference_axis"));
        reference = {axis, axis, axis};
      }
      if (j.contains("reference_axes")) {
        const json& ra = j.at("reference_axes");
        if (!ra.is_array() || ra.size() != 3) {
          throw ConfigError(field("reference_axes"), "expected 3 axes");
        }
        for (int k = 0; k < 3; ++k) {
          reference[k] = as_axis(ra[k], field("reference_axes") + "[" + std::to_string(k) + "]");
        }
      }
      return fully_separable(rots[0], rots[1], rots[2], reference);
    }
    if (name == "bipartite_12") {
      check_keys(j, {"class", "a", "b", "probe", "probe_axis"}, path);
      return bipartite_12(as_number(require(j, "a", path), field("a")),
                          as_number(require(j, "b", path), field("b")),
                          qubit_state_field(j, "probe", "probe_axis", path));
    }
    if (name == "bipartite_23" || name == "bipartite_13") {
      check_keys(j, {"class", "a", "b", "spectator", "spectator_axis"}, path);
      const double a = as_number(require(j, "a", path), field("a"));
      const double b = as_number(require(j, "b", path), field("b"));
      const CVector spectator = qubit_state_field(j, "spectator", "spectator_axis", path);
      return name == "bipartite_23" ? bipartite_23(a, b, spectator) : bipartite_13(a, b, spectator);
    }
    if (name == "ghz_general") {
      check_keys(j, {"class", "a", "b"}, path);
      return ghz_general(as_number(require(j, "a", path), field("a")),
                         as_number(require(j, "b", path), field("b")));
    }
    if (name == "zrt") {
      check_keys(j, {"class", "a", "b", "c", "d"}, path);
      return zrt(as_complex(require(j, "a", path), field("a")),
                 as_complex(require(j, "b", path), field("b")),
                 as_complex(require(j, "c", path), field("c")),
                 as_complex(require(j, "d", path), field("d")));
    }
    if (name == "triple") {
      check_keys(j, {"class", "f", "g", "h"}, path);
      return triple(as_complex(require(j, "f", path), field("f")),
                    as_complex(require(j, "g", path), field("g")),
                    as_complex(require(j, "h", path), field("h")));
    }
    if (name == "raw_amplitudes") {
      check_keys(j, {"class", "amplitudes", "normalize"}, path);
      const CVector amps = as_complex_vector(require(j, "amplitudes", path), 8, field("amplitudes"));
      bool normalize = false;
      if (j.contains("normalize")) {
        if (!j.at("normalize").is_boolean()) throw ConfigError(field("normalize"), "expected a boolean");
        normalize = j.at("normalize").get<bool>();
      }
      return normalize ? PureState3::normalized(amps) : PureState3::from_amplitudes(amps);
    }
  } catch (const StateError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join_path(path, "class"),
                    "unknown state class '" + name +
                        "' (fully_separable, bipartite_12, bipartite_23, bipartite_13, "
                        "ghz_general, zrt, triple, raw_amplitudes)");
}

FastpathMode parse_fastpath_mode(const std::string& s) {
  if (s == "auto") return FastpathMode::kAuto;
  if (s == "on") return FastpathMode::kOn;
  if (s == "off") return FastpathMode::kOff;
  throw ConfigError("fastpath", "expected auto, on or off, got '" + s + "'");
}

std::string to_string(FastpathMode mode) {
  switch (mode) {
    case FastpathMode::kOn:
      return "on";
    case FastpathMode::kOff:
      return "off";
    case FastpathMode::kAuto:
      break;
  }
  return "auto";
}

ScenarioConfig parse_config(const json& j) {
  check_keys(j, {"name", "hamiltonian", "initial_state", "time_grid", "measures", "measurement",
                 "fastpath"},
             "");
  ScenarioConfig cfg;
  cfg.source = j;
  const json& name = require(j, "name", "");
  if (!name.is_string()) throw ConfigError("name", "expected a string");
  cfg.name = name.get<std::string>();
  cfg.hamiltonian = parse_hamiltonian(require(j, "hamiltonian", ""));
  cfg.initial_state = parse_initial_state(require(j, "initial_state", ""), &cfg.state_class);

  const json& grid = require(j, "time_grid", "");
  check_keys(grid, {"t_start", "t_end", "steps"}, "time_grid");
  cfg.time_grid.t_start = as_number(require(grid, "t_start", "time_grid"), "time_grid.t_start");
  cfg.time_grid.t_end = as_number(require(grid, "t_end", "time_grid"), "time_grid.t_end");
  const json& steps = require(grid, "steps", "time_grid");
  if (!steps.is_number_integer()) throw ConfigError("time_grid.steps", "expected an integer");
  const auto step_count = steps.get<long long>();
  if (step_count < 1 || step_count > 10'000'000) {
    throw ConfigError("time_grid.steps", "must be between 1 and 10^7");
  }
  cfg.time_grid.steps = static_cast<int>(step_count);
  if (cfg.time_grid.t_end < cfg.time_grid.t_start) {
    throw ConfigError("time_grid.t_end", "must be >= t_start");
  }

  if (j.contains("measures")) {
    const json& m = j.at("measures");
    if (!m.is_array() || m.empty()) throw ConfigError("measures", "expected a non-empty array");
    std::set<std::string> chosen;
    for (std::size_t k = 0; k < m.size(); ++k) {
      const std::string mp = "measures[" + std::to_string(k) + "]";
      if (!m[k].is_string()) throw ConfigError(mp, "expected a string");
      const std::string f = m[k].get<std::string>();
      const auto& all = report_fields();
      if (std::find(all.begin(), all.end(), f) == all.end()) {
        throw ConfigError(mp, "unknown measure '" + f + "'");
      }
      chosen.insert(f);
    }
    cfg.measures.clear();
    for (const auto& f : report_fields()) {
      if (chosen.count(f)) cfg.measures.push_back(f);
    }
  }

  if (j.contains("measurement")) {
    const json& m = j.at("measurement");
    check_keys(m, {"basis_axis", "at_time"}, "measurement");
    MeasurementSpec spec;
    if (m.contains("basis_axis")) spec.basis_axis = as_axis(m.at("basis_axis"), "measurement.basis_axis");
    if (m.contains("at_time")) spec.at_time = as_number(m.at("at_time"), "measurement.at_time");
    cfg.measurement = spec;
  }

  if (j.contains("fastpath")) {
    if (!j.at("fastpath").is_string()) throw ConfigError("fastpath", "expected a string");
    cfg.fastpath = parse_fastpath_mode(j.at("fastpath").get<std::string>());
  }
  return cfg;
}

json read_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "config file '" + path + "' is not valid JSON: " + e.what());
  }
}

ScenarioConfig load_config(const std::string& path) {
  const json j = read_config_json(path);
  try {
    return parse_config(j);
  } catch (const ConfigError& e) {
    throw ConfigError(e.path(), std::string(e.what()) + " (in " + path + ")");
  }
}

std::uint64_t config_hash(const json& j) {
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---------------------------------------------------------------- sweeps

EvolutionPlan plan_for(const HamiltonianSpec& spec) { return make_plan(spec.h13, spec.h23); }

double report_field(const EntanglementReport& r, const std::string& field) {
  if (field == "tangle_12") return r.tangle_12;
  if (field == "concurrence_12") return r.concurrence_12;
  if (field == "eof_12") return r.eof_12;
  if (field == "residual_tangle") return r.residual_tangle;
  if (field == "purity_12") return r.purity_12;
  throw std::invalid_argument("unknown report field '" + field + "'");
}

namespace {

std::vector<OutcomeSummary> summarize_measurement(const PureState3& psi, const Vec3& axis) {
  std::vector<OutcomeSummary> out;
  for (const ProbeOutcome& o : measure_probe(psi, axis_eigenbasis(axis))) {
    OutcomeSummary s{o.label, o.probability, std::nullopt};
    if (o.conditional) s.conditional_tangle = pure_state_tangle(*o.conditional);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const ScenarioConfig& cfg) { return run_sweep(cfg, cfg.fastpath); }

SweepResult run_sweep(const ScenarioConfig& cfg, FastpathMode mode) {
  const EvolutionPlan plan = plan_for(cfg.hamiltonian);
  if (mode == FastpathMode::kOn && !plan.fastpath) {
    std::ostringstream msg;
    msg << "fastpath requested but unavailable: " << plan.fastpath_note
        << " [commutator norm " << plan.commutator_norm << "]";
    throw ConfigError("fastpath", msg.str());
  }
  SweepResult result;
  result.name = cfg.name;
  result.measures = cfg.measures;
  result.commuting = plan.commuting;
  result.commutator_norm = plan.commutator_norm;
  result.used_fastpath = mode != FastpathMode::kOff && plan.fastpath.has_value();
  result.config_hash = config_hash(cfg.source);
  result.has_measurement = cfg.measurement.has_value();

  const std::vector<double> times = cfg.time_grid.points();
  std::optional<std::size_t> measured_row;
  if (cfg.measurement && cfg.measurement->at_time) {
    const double target = *cfg.measurement->at_time;
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (std::abs(times[k] - target) <= 1e-9 * std::max(1.0, std::abs(target))) {
        measured_row = k;
        break;
      }
    }
    if (!measured_row) throw ConfigError("measurement.at_time", "time is not on the time grid");
  }

  result.rows.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const PureState3 psi = evolve(plan, cfg.initial_state, t, mode);
    SweepRow row;
    row.t = t;
    row.report = report(psi);
    if (cfg.measurement && (!measured_row || *measured_row == k)) {
      row.outcomes = summarize_measurement(psi, cfg.measurement->basis_axis);
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit_csv(const SweepResult& result, std::ostream& out) {
  out << "t";
  for (const auto& f : result.measures) out << "," << f;
  if (result.has_measurement) {
    for (int k = 0; k < 2; ++k) out << ",outcome_label,outcome_prob,conditional_tangle";
  }
  out << "\n";
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(result.config_hash));
  out << "# scenario=" << result.name << " config_hash=0x" << hash;
  if (result.seed) out << " seed=" << *result.seed;
  out << "\n";
  for (const SweepRow& row : result.rows) {
    out << format_double(row.t);
    for (const auto& f : result.measures) out << "," << format_double(report_field(row.report, f));
    if (result.has_measurement) {
      for (int k = 0; k < 2; ++k) {
        if (row.outcomes && static_cast<int>(row.outcomes->size()) > k) {
          const OutcomeSummary& o = (*row.outcomes)[k];
          out << "," << o.label << "," << format_double(o.probability) << ",";
          if (o.conditional_tangle) out << format_double(*o.conditional_tangle);
        } else {
          out << ",,,";
        }
      }
    }
    out << "\n";
  }
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  emit_csv(result, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

CsvTable parse_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) return table;
  table.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!table.comment) table.comment = line;
      continue;
    }
    table.rows.push_back(split(line));
  }
  return table;
}

// ---------------------------------------------------------------- sampling

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vec3 random_unit_axis(Rng& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    const Vec3 v(normal(rng), normal(rng), normal(rng));
    if (v.norm() > 1e-8) return v.normalized();
  }
}

CVector random_complex_vector(Rng& rng, int dim) {
  std::normal_distribution<double> normal;
  for (;;) {
    CVector v(dim);
    for (int k = 0; k < dim; ++k) v(k) = cplx(normal(rng), normal(rng));
    if (v.norm() > 1e-8) return v.normalized();
  }
}

CVector random_qubit_state(Rng& rng) { return random_complex_vector(rng, 2); }

LocalRotation random_rotation(Rng& rng, int qubit) {
  std::normal_distribution<double> normal;
  Eigen::Vector4d q;
  do {
    q = Eigen::Vector4d(normal(rng), normal(rng), normal(rng), normal(rng));
  } while (q.norm() < 1e-8);
  q.normalize();
  LocalRotation r;
  r.qubit = qubit;
  r.angle = std::acos(std::clamp(q(0), -1.0, 1.0));
  const Vec3 v = q.tail<3>();
  r.axis = v.norm() > 1e-12 ? Vec3(v.normalized()) : Vec3::UnitZ();
  return r;
}

std::pair<PauliPairHamiltonian, PauliPairHamiltonian> commuting_pair(
    const Vec3& self1, double strength1, const Vec3& self2, double strength2, const Vec3& probe,
    double local1, double local2, double local_probe1, double local_probe2) {
  PauliPairHamiltonian h13;
  h13.pair = Pair::k13;
  h13.coupling = strength1 * self1 * probe.transpose();
  h13.local_self = local1 * self1;
  h13.local_probe = local_probe1 * probe;
  PauliPairHamiltonian h23;
  h23.pair = Pair::k23;
  h23.coupling = strength2 * self2 * probe.transpose();
  h23.local_self = local2 * self2;
  h23.local_probe = local_probe2 * probe;
  return {h13, h23};
}

std::pair<PauliPairHamiltonian, PauliPairHamiltonian> random_commuting_pair(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  const Vec3 a = random_unit_axis(rng);
  const Vec3 b = random_unit_axis(rng);
  const Vec3 j = random_unit_axis(rng);
  const double sa = 2.0 * (1.0 - unit(rng));
  const double sb = 2.0 * (1.0 - unit(rng));
  const double la = sym(rng);
  const double lb = sym(rng);
  const double pa = sym(rng);
  const double pb = sym(rng);
  return commuting_pair(a, sa, b, sb, j, la, lb, pa, pb);
}

// ---------------------------------------------------------------- suites

namespace {

constexpr double kSlack = tol::physics;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const PauliPairHamiltonian& h) {
  json coupling = json::array();
  for (int i = 0; i < 3; ++i) coupling.push_back(to_json(Vec3(h.coupling.row(i).transpose())));
  return {{"coupling", coupling}, {"local_self", to_json(h.local_self)},
          {"local_probe", to_json(h.local_probe)}};
}

json to_json(const PureState3& psi) {
  json amps = json::array();
  for (int k = 0; k < 8; ++k) amps.push_back(json::array({psi[k].real(), psi[k].imag()}));
  return {{"class", "raw_amplitudes"}, {"amplitudes", amps}};
}

// A replayable scenario for one trial.
json scenario_json(const std::string& name, const PauliPairHamiltonian& h13,
                   const PauliPairHamiltonian& h23, const PureState3& psi, double t) {
  return {{"name", name},
          {"hamiltonian", {{"h13", to_json(h13)}, {"h23", to_json(h23)}}},
          {"initial_state", to_json(psi)},
          {"time_grid", {{"t_start", 0.0}, {"t_end", t}, {"steps", 2}}}};
}

struct Trial {
  bool pass = true;
  double margin = 0.0;     // how far past the bound (or deviation); <= 0 is comfortable
  double statistic = 0.0;  // suite-specific observable
  std::string message;
  json details;
};

using TrialFn = std::function<Trial(Rng&, std::uint64_t)>;

struct SuiteDef {
  TrialFn run;
  std::string statistic_label;
  // Optional suite-level requirement on the maximum statistic.
  std::function<bool(double, std::string&)> aggregate;
};

double tangle12(const PureState3& psi) { return tangle(reduced_state_12(psi)); }

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::pair<double, double> random_schmidt(Rng& rng) {
  const double u = uniform(rng, 0.0, 1.0);
  return {std::sqrt(u), std::sqrt(1.0 - u)};
}

Trial bound_trial(const std::string& name, const EvolutionPlan& plan, const PureState3& psi,
                  double t, double value, double bound, const std::string& what) {
  Trial tr;
  tr.margin = value - bound;
  tr.pass = tr.margin <= kSlack;
  tr.statistic = value;
  if (!tr.pass) {
    std::ostringstream msg;
    msg << what << ": " << format_double(value) << " exceeds bound " << format_double(bound);
    tr.message = msg.str();
    tr.details = scenario_json(name, plan.h13, plan.h23, psi, t);
  }
  return tr;
}

const std::map<std::string, SuiteDef>& registry() {
  static const std::map<std::string, SuiteDef> suites = [] {
    std::map<std::string, SuiteDef> s;

    s["separable_stays_separable"] = {[](Rng& rng, std::uint64_t) {
      auto [h13, h23] = random_commuting_pair(rng);
      const EvolutionPlan plan = make_plan(h13, h23);
      const PureState3 psi = fully_separable(random_rotation(rng, 1), random_rotation(rng, 2),
                                             random_rotation(rng, 3), random_unit_axis(rng));
      const double t = uniform(rng, 0.0, kTwoPi);
      return bound_trial("separable_stays_separable", plan, psi, t,
                         tangle12(evolve(plan, psi, t)), 0.0, "tangle_12(t)");
    }, "max tangle_12(t)", nullptr};

    s["bipartite12_nonincreasing"] = {[](Rng& rng, std::uint64_t) {
      auto [h13, h23] = random_commuting_pair(rng);
      const EvolutionPlan plan = make_plan(h13, h23);
      const auto [a, b] = random_schmidt(rng);
      PureState3 psi = bipartite_12(a, b, random_qubit_state(rng));
      psi = apply_local(random_rotation(rng, 1), psi);
      psi = apply_local(random_rotation(rng, 2), psi);
      const double t = uniform(rng, 0.0, kTwoPi);
      const double e0 = eof_from_tangle(tangle12(psi));
      const double et = eof_from_tangle(tangle12(evolve(plan, psi, t)));
      return bound_trial("bipartite12_nonincreasing", plan, psi, t, et, e0, "EoF(t)");
    }, "max EoF(t)", nullptr};

    auto stays_separable = [](bool pair23) {
      return [pair23](Rng& rng, std::uint64_t) {
        auto [h13, h23] = random_commuting_pair(rng);
        const EvolutionPlan plan = make_plan(h13, h23);
        const auto [a, b] = random_schmidt(rng);
        const CVector spectator = random_qubit_state(rng);
        const PureState3 psi = pair23 ? bipartite_23(a, b, spectator) : bipartite_13(a, b, spectator);
        const double t = uniform(rng, 0.0, kTwoPi);
        const std::string name =
            pair23 ? "bipartite23_stays_separable" : "bipartite13_stays_separable";
        Trial tr = bound_trial(name, plan, psi, t, tangle12(evolve(plan, psi, t)), 0.0,
                               "tangle_12(t)");
        const double t0 = tangle12(psi);
        if (tr.pass && t0 > kSlack) {
          tr.pass = false;
          tr.margin = t0;
          tr.message = "initial tangle_12 is " + format_double(t0);
          tr.details = scenario_json(name, plan.h13, plan.h23, psi, t);
        }
        return tr;
      };
    };
    s["bipartite23_stays_separable"] = {stays_separable(true), "max tangle_12(t)", nullptr};
    s["bipartite13_stays_separable"] = {stays_separable(false), "max tangle_12(t)", nullptr};

    s["ghz_may_entangle"] = {
        [](Rng& rng, std::uint64_t) {
          auto [h13, h23] = random_commuting_pair(rng);
          const EvolutionPlan plan = make_plan(h13, h23);
          const auto [a, b] = random_schmidt(rng);
          const PureState3 psi = ghz_general(a, b);
          const double t = uniform(rng, 0.0, kTwoPi);
          const double tau0 = tangle12(psi);
          const double taut = tangle12(evolve(plan, psi, t));
          // Entanglement can only be gained: tau(t) >= tau(0) = 0.
          Trial tr = bound_trial("ghz_may_entangle", plan, psi, t, tau0, taut, "tangle_12(0)");
          tr.statistic = taut;
          return tr;
        },
        "max tangle_12(t)",
        [](double max_tangle, std::string& note) {
          note = "needs at least one trial with tangle_12(t) > 0.01";
          return max_tangle > 0.01;
        }};

    s["triple_overlap_bound"] = {[](Rng& rng, std::uint64_t) {
      auto [h13, h23] = random_commuting_pair(rng);
      const EvolutionPlan plan = make_plan(h13, h23);
      const CVector fgh = random_complex_vector(rng, 3);
      const PureState3 psi = triple(fgh(0), fgh(1), fgh(2));
      const double t = uniform(rng, 0.0, kTwoPi);
      // tau(t) <= tau(0) (|c|^4 + |d|^4) with R3|+> = c|+> + d|->, i.e. c is
      // the overlap of the probe-axis eigenvector |+>_j with logical |0>_3.
      // At t = 0 this already fails whenever 0 < |c| < 1.
      const double c2 = std::norm(axis_eigenbasis(plan.fastpath->probe_axis()).plus(0));
      const double tau0 = tangle12(psi);
      const double bound = tau0 * (c2 * c2 + (1.0 - c2) * (1.0 - c2));
      Trial tr = bound_trial("triple_overlap_bound", plan, psi, t, tangle12(evolve(plan, psi, t)),
                             bound, "tangle_12(t)");
      if (!tr.pass) tr.details["c_squared"] = c2;
      return tr;
    }, "max tangle_12(t)", nullptr};

    s["triple_nonincreasing"] = {[](Rng& rng, std::uint64_t) {
      auto [h13, h23] = random_commuting_pair(rng);
      const EvolutionPlan plan = make_plan(h13, h23);
      const CVector fgh = random_complex_vector(rng, 3);
      const PureState3 psi = triple(fgh(0), fgh(1), fgh(2));
      const double t = uniform(rng, 0.0, kTwoPi);
      return bound_trial("triple_nonincreasing", plan, psi, t, tangle12(evolve(plan, psi, t)),
                         tangle12(psi), "tangle_12(t)");
    }, "max tangle_12(t)", nullptr};

    s["parity_residual_conserved"] = {[](Rng& rng, std::uint64_t) {
      auto [h13, h23] = random_commuting_pair(rng);
      const EvolutionPlan plan = make_plan(h13, h23);
      const bool even = std::bernoulli_distribution(0.5)(rng);
      const std::array<int, 4> sector =
          even ? std::array<int, 4>{0b000, 0b110, 0b101, 0b011}
               : std::array<int, 4>{0b111, 0b001, 0b010, 0b100};
      const CVector w = random_complex_vector(rng, 4);
      CVector e = CVector::Zero(8);
      for (int k = 0; k < 4; ++k) e(sector[k]) = w(k);
      const PureState3 psi = from_eigenbasis(e, plan.fastpath->basis());
      const double t = uniform(rng, 0.0, kTwoPi);
      const double r0 = residual_tangle_lambda(psi);
      const double rt = residual_tangle_lambda(evolve(plan, psi, t));
      const double expected = 16.0 * std::abs(w(0) * w(1) * w(2) * w(3));
      Trial tr;
      tr.margin = std::max(std::abs(rt - r0), std::abs(r0 - expected));
      tr.pass = tr.margin <= kSlack;
      tr.statistic = r0;
      if (!tr.pass) {
        tr.message = "tau_123(0)=" + format_double(r0) + " tau_123(t)=" + format_double(rt) +
                     " 16|a a a a|=" + format_double(expected);
        tr.details = scenario_json("parity_residual_conserved", plan.h13, plan.h23, psi, t);
      }
      return tr;
    }, "max tau_123(0)", nullptr};

    s["residual_routes_agree"] = {[](Rng& rng, std::uint64_t) {
      const PureState3 psi = PureState3::normalized(random_complex_vector(rng, 8));
      const double l = residual_tangle_lambda(psi);
      const double p = residual_tangle_poly(psi);
      const double c = residual_tangle_ckw_oracle(psi);
      Trial tr;
      tr.margin = std::max({std::abs(l - p), std::abs(l - c), std::abs(p - c)});
      tr.pass = tr.margin <= kSlack;
      tr.statistic = l;
      if (!tr.pass) {
        tr.message = "lambda=" + format_double(l) + " poly=" + format_double(p) +
                     " ckw=" + format_double(c);
        tr.details = {{"initial_state", to_json(psi)}};
      }
      return tr;
    }, "max tau_123", nullptr};

    s["heisenberg_13_nondecreasing"] = {[](Rng& rng, std::uint64_t) {
      const double g = 2.0 * (1.0 - uniform(rng, 0.0, 1.0));
      auto [h13, h23] = heisenberg_chain(g);
      const EvolutionPlan plan = make_plan(h13, h23);
      const auto [a, b] = random_schmidt(rng);
      const PureState3 psi = bipartite_13(a, b, random_qubit_state(rng));
      const double t = uniform(rng, 0.0, kTwoPi);
      const double taut = tangle12(evolve(plan, psi, t));
      // tau(t) >= tau(0) = 0
      Trial tr = bound_trial("heisenberg_13_nondecreasing", plan, psi, t, tangle12(psi),
                             std::min(taut, 0.0), "tangle_12(0)");
      tr.statistic = taut;
      return tr;
    }, "max tangle_12(t)", nullptr};

    s["heisenberg_symmetric_stationary"] = {[](Rng& rng, std::uint64_t) {
      const double g = 2.0 * (1.0 - uniform(rng, 0.0, 1.0));
      auto [h13, h23] = heisenberg_chain(g);
      const EvolutionPlan plan = make_plan(h13, h23);
      const CVector q = random_qubit_state(rng);
      const PureState3 psi = PureState3::from_amplitudes(kron(kron(q, q), q), tol::spectral);
      const double t = uniform(rng, 0.0, kTwoPi);
      const double dev =
          (reduced_state_12(evolve(plan, psi, t)).matrix() - reduced_state_12(psi).matrix())
              .cwiseAbs()
              .maxCoeff();
      Trial tr;
      tr.margin = dev;
      tr.pass = dev <= tol::spectral;
      tr.statistic = dev;
      if (!tr.pass) {
        tr.message = "rho_12 moved by " + format_double(dev);
        tr.details = scenario_json("heisenberg_symmetric_stationary", plan.h13, plan.h23, psi, t);
      }
      return tr;
    }, "max |rho_12(t) - rho_12(0)|", nullptr};

    s["fastpath_matches_exact"] = {[](Rng& rng, std::uint64_t) {
      auto [h13, h23] = random_commuting_pair(rng);
      const EvolutionPlan plan = make_plan(h13, h23);
      const PureState3 psi = PureState3::normalized(random_complex_vector(rng, 8));
      const double t = uniform(rng, 0.0, kTwoPi);
      const cplx overlap = evolve_fastpath(plan, psi, t).amplitudes().dot(
          evolve_exact(plan, psi, t).amplitudes());
      Trial tr;
      tr.margin = 1.0 - std::norm(overlap);
      tr.pass = tr.margin <= tol::spectral;
      tr.statistic = tr.margin;
      if (!tr.pass) {
        tr.message = "fidelity " + format_double(std::norm(overlap));
        tr.details = scenario_json("fastpath_matches_exact", plan.h13, plan.h23, psi, t);
      }
      return tr;
    }, "max infidelity", nullptr};

    s["local_unitary_invariance"] = {[](Rng& rng, std::uint64_t) {
      const PureState3 psi = PureState3::normalized(random_complex_vector(rng, 8));
      const int qubit = std::uniform_int_distribution<int>(1, 3)(rng);
      const PureState3 rotated = apply_local(random_rotation(rng, qubit), psi);
      const EntanglementReport r0 = report(psi);
      const EntanglementReport r1 = report(rotated);
      Trial tr;
      for (const auto& f : report_fields()) {
        tr.margin = std::max(tr.margin, std::abs(report_field(r0, f) - report_field(r1, f)));
      }
      tr.pass = tr.margin <= kSlack;
      tr.statistic = tr.margin;
      if (!tr.pass) {
        tr.message = "report changed by " + format_double(tr.margin);
        tr.details = {{"initial_state", to_json(psi)}, {"qubit", qubit}};
      }
      return tr;
    }, "max report change", nullptr};

    return s;
  }();
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, def] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteSummary property_suite(const std::string& name, std::size_t trials, std::uint64_t seed) {
  const auto& reg = registry();
  const auto it = reg.find(name);
  if (it == reg.end()) throw SuiteError("unknown suite '" + name + "'");
  if (trials < 1) throw SuiteError("trials must be >= 1");
  const SuiteDef& def = it->second;

  SuiteSummary summary;
  summary.name = name;
  summary.seed = seed;
  summary.trials = trials;
  summary.statistic_label = def.statistic_label;
  summary.worst = -std::numeric_limits<double>::infinity();
  double max_stat = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trials; ++k) {
    const std::uint64_t ts = trial_seed(seed, k);
    Rng rng(ts);
    Trial tr = def.run(rng, ts);
    summary.worst = std::max(summary.worst, tr.margin);
    max_stat = std::max(max_stat, tr.statistic);
    if (tr.pass) {
      ++summary.passed;
    } else if (!summary.first_failure) {
      summary.first_failure = Counterexample{k, ts, tr.message, tr.details};
    }
  }
  summary.statistic = max_stat;
  if (def.aggregate) summary.aggregate_ok = def.aggregate(max_stat, summary.aggregate_note);
  return summary;
}

namespace {

void check_ratio(int k, int l) {
  if (k < 1 || l < 1) throw SuiteError("k and l must be >= 1");
  if (std::gcd(k, l) != 1) throw SuiteError("k and l must be coprime");
}

struct PeriodicTrial {
  EvolutionPlan plan;
  PureState3 psi = PureState3::from_amplitudes(ket(0));
  double return_time = 0.0;
};

PeriodicTrial periodic_trial(int k, int l, std::uint64_t ts) {
  Rng rng(ts);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  const Vec3 a = random_unit_axis(rng);
  const Vec3 b = random_unit_axis(rng);
  const Vec3 j = random_unit_axis(rng);
  const double sa = 2.0 * (1.0 - unit(rng));
  const double sb = sa * static_cast<double>(l) / static_cast<double>(k);
  const double la = sym(rng);
  const double lb = sym(rng);
  const double pa = sym(rng);
  const double pb = sym(rng);
  auto [h13, h23] = commuting_pair(a, sa, b, sb, j, la, lb, pa, pb);
  PeriodicTrial trial;
  trial.plan = make_plan(h13, h23);
  trial.psi = PureState3::normalized(random_complex_vector(rng, 8));
  trial.return_time = static_cast<double>(k) * std::numbers::pi / (2.0 * sa);
  return trial;
}

}  // namespace

PeriodicityResult residual_periodicity_check(int k, int l, std::size_t trials,
                                             std::uint64_t seed) {
  check_ratio(k, l);
  PeriodicityResult result;
  result.k = k;
  result.l = l;
  result.trials = trials;
  for (std::size_t n = 0; n < trials; ++n) {
    const std::uint64_t ts = trial_seed(seed, n);
    const PeriodicTrial trial = periodic_trial(k, l, ts);
    const double r0 = residual_tangle_lambda(trial.psi);
    const double rt = residual_tangle_lambda(evolve(trial.plan, trial.psi, trial.return_time));
    const double dev = std::abs(rt - r0);
    result.max_deviation = std::max(result.max_deviation, dev);
    if (dev <= kSlack) {
      ++result.passed;
    } else if (!result.first_failure) {
      result.first_failure =
          Counterexample{n, ts, "tau_123 deviates by " + format_double(dev),
                         scenario_json("periodicity", trial.plan.h13, trial.plan.h23, trial.psi,
                                       trial.return_time)};
    }
  }
  return result;
}

double periodicity_witness(int k, int l, double fraction, std::size_t trials, std::uint64_t seed) {
  check_ratio(k, l);
  double best = 0.0;
  for (std::size_t n = 0; n < trials; ++n) {
    const PeriodicTrial trial = periodic_trial(k, l, trial_seed(seed, n));
    const double r0 = residual_tangle_lambda(trial.psi);
    const double rt =
        residual_tangle_lambda(evolve(trial.plan, trial.psi, fraction * trial.return_time));
    best = std::max(best, std::abs(rt - r0));
  }
  return best;
}

}  // namespace probent
