#include "probent/scenarios.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace probent;
using nlohmann::json;

namespace {

EvolutionPlan plan_from(const std::string& hamiltonian_json) {
  return plan_for(parse_hamiltonian(json::parse(hamiltonian_json)));
}

py::dict to_dict(const EntanglementReport& r) {
  py::dict d;
  for (const auto& f : report_fields()) d[py::str(f)] = report_field(r, f);
  return d;
}

}  // namespace

PYBIND11_MODULE(_probent, m) {
  m.doc() = "Entanglement of two qubits coupled through a shared probe qubit";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<StateError>(m, "StateError", PyExc_ValueError);
  py::register_exception<MeasureError>(m, "MeasureError", PyExc_ValueError);
  py::register_exception<SuiteError>(m, "SuiteError", PyExc_ValueError);
  py::register_exception<EvolutionError>(m, "EvolutionError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("tangle", [](const CMatrix& rho) { return tangle(DensityMatrix2::from_matrix(rho)); },
        py::arg("rho"));
  m.def("concurrence",
        [](const CMatrix& rho) { return concurrence(DensityMatrix2::from_matrix(rho)); },
        py::arg("rho"));
  m.def("eof_from_tangle", &eof_from_tangle, py::arg("tau"));
  m.def("residual_tangle",
        [](const CVector& psi) { return residual_tangle_lambda(PureState3::from_amplitudes(psi)); },
        py::arg("psi"));
  m.def("report", [](const CVector& psi) { return to_dict(report(PureState3::from_amplitudes(psi))); },
        py::arg("psi"));
  m.def("reduced_state_12",
        [](const CVector& psi) { return reduced_state_12(PureState3::from_amplitudes(psi)).matrix(); },
        py::arg("psi"));

  m.def("_classify", [](const std::string& hamiltonian_json) {
    const EvolutionPlan plan = plan_from(hamiltonian_json);
    py::dict d;
    d["commuting"] = plan.commuting;
    d["commutator_norm"] = plan.commutator_norm;
    d["closed_form"] = plan.fastpath.has_value();
    d["note"] = plan.fastpath_note;
    if (plan.fastpath) {
      const Vec3& j = plan.fastpath->probe_axis();
      d["probe_axis"] = py::make_tuple(j.x(), j.y(), j.z());
    }
    return d;
  });
  m.def("_evolve", [](const std::string& hamiltonian_json, const CVector& psi, double t,
                      const std::string& fastpath) {
    const EvolutionPlan plan = plan_from(hamiltonian_json);
    return evolve(plan, PureState3::from_amplitudes(psi), t, parse_fastpath_mode(fastpath))
        .amplitudes();
  });
  m.def("_sweep_csv", [](const std::string& config_json, const std::optional<std::string>& fastpath) {
    const ScenarioConfig cfg = parse_config(json::parse(config_json));
    const SweepResult r = run_sweep(cfg, fastpath ? parse_fastpath_mode(*fastpath) : cfg.fastpath);
    std::ostringstream out;
    emit_csv(r, out);
    return out.str();
  });

  m.def("suite_names", &suite_names);
  m.def(
      "property_suite",
      [](const std::string& name, std::size_t trials, std::uint64_t seed) {
        const SuiteSummary s = property_suite(name, trials, seed);
        py::dict d;
        d["name"] = s.name;
        d["trials"] = s.trials;
        d["passed"] = s.passed;
        d["ok"] = s.ok();
        d["worst"] = s.worst;
        d["statistic"] = s.statistic;
        if (s.first_failure) {
          d["first_failure"] = py::dict(py::arg("trial") = s.first_failure->trial,
                                        py::arg("trial_seed") = s.first_failure->trial_seed,
                                        py::arg("message") = s.first_failure->message,
                                        py::arg("details") = s.first_failure->details.dump());
        }
        return d;
      },
      py::arg("name"), py::arg("trials") = 1000, py::arg("seed") = 1);
}
