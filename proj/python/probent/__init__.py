"""Entanglement of two qubits coupled through a shared probe qubit."""

import json

from ._probent import (
    ConfigError,
    EvolutionError,
    IoError,
    MeasureError,
    StateError,
    SuiteError,
    concurrence,
    eof_from_tangle,
    property_suite,
    reduced_state_12,
    report,
    residual_tangle,
    suite_names,
    tangle,
)
from . import _probent


def classify(hamiltonian):
    """Commutation analysis of a hamiltonian section, e.g. {"preset": "qnd_zz", "g": 1}."""
    return _probent._classify(json.dumps(hamiltonian))


def evolve(hamiltonian, psi, t, fastpath="auto"):
    """exp(-i H t) psi for the 8 complex amplitudes psi."""
    return _probent._evolve(json.dumps(hamiltonian), psi, float(t), fastpath)


def sweep_csv(config, fastpath=None):
    """Runs a scenario config (a dict) and returns the CSV text."""
    return _probent._sweep_csv(json.dumps(config), fastpath)


__all__ = [
    "ConfigError", "EvolutionError", "IoError", "MeasureError", "StateError", "SuiteError",
    "classify", "concurrence", "eof_from_tangle", "evolve", "property_suite",
    "reduced_state_12", "report", "residual_tangle", "suite_names", "sweep_csv", "tangle",
]
