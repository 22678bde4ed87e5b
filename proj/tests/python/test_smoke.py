import csv
import io
import math

import numpy as np
import pytest

import probent


def plus_x():
    return np.array([1, 1], dtype=complex) / math.sqrt(2)


def test_bell_state_measures():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / math.sqrt(2)
    rho = np.outer(bell, bell.conj())
    assert probent.tangle(rho) == pytest.approx(1.0, abs=1e-12)
    assert probent.concurrence(rho) == pytest.approx(1.0, abs=1e-12)
    assert probent.eof_from_tangle(1.0) == pytest.approx(1.0)


def test_ghz_residual_tangle():
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1 / math.sqrt(2)
    assert probent.residual_tangle(ghz) == pytest.approx(1.0, abs=1e-12)
    r = probent.report(ghz)
    assert r["tangle_12"] == pytest.approx(0.0, abs=1e-12)
    assert set(r) == {"tangle_12", "concurrence_12", "eof_12", "residual_tangle", "purity_12"}


def test_classify_presets():
    qnd = probent.classify({"preset": "qnd_zz", "g": 1.0})
    assert qnd["commuting"] and qnd["closed_form"]
    assert qnd["probe_axis"] == pytest.approx((0.0, 0.0, 1.0))
    heis = probent.classify({"preset": "heisenberg_chain", "g": 1.0})
    assert not heis["commuting"]
    assert heis["commutator_norm"] == pytest.approx(math.sqrt(192))


def test_qnd_evolution_matches_numpy():
    psi0 = np.kron(np.kron(plus_x(), plus_x()), plus_x())
    z = np.diag([1.0, -1.0])
    i2 = np.eye(2)
    h = 0.25 * (np.kron(np.kron(z, i2), z) + np.kron(np.kron(i2, z), z))
    t = 1.3
    w, v = np.linalg.eigh(h)
    expected = v @ np.diag(np.exp(-1j * w * t)) @ v.conj().T @ psi0
    for mode in ("on", "off"):
        out = probent.evolve({"preset": "qnd_zz", "g": 1.0}, psi0, t, fastpath=mode)
        assert np.allclose(out, expected, atol=1e-12)


def test_sweep_csv_round_trip():
    config = {
        "name": "heis",
        "hamiltonian": {"preset": "heisenberg_chain", "g": 1.0},
        "initial_state": {"class": "bipartite_12", "a": 1.0, "b": 0.0, "probe_axis": [1, 0, 0]},
        "time_grid": {"t_start": 0.0, "t_end": math.pi, "steps": 33},
        "measures": ["tangle_12"],
    }
    text = probent.sweep_csv(config)
    assert text == probent.sweep_csv(config)
    rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
    assert rows[0] == ["t", "tangle_12"]
    for t, tau in rows[1:]:
        assert float(tau) == pytest.approx(16 / 81 * math.sin(3 * float(t)) ** 4, abs=1e-9)


def test_config_errors_raise_value_error():
    with pytest.raises(ValueError, match="initial_state"):
        probent.sweep_csv({"name": "x", "hamiltonian": {"preset": "qnd_zz", "g": 1}})
    with pytest.raises(probent.ConfigError):
        probent.classify({"preset": "nope", "g": 1})


def test_property_suite():
    assert "separable_stays_separable" in probent.suite_names()
    s = probent.property_suite("separable_stays_separable", trials=50, seed=3)
    assert s["ok"] and s["passed"] == 50
    bad = probent.property_suite("triple_overlap_bound", trials=100, seed=1)
    assert not bad["ok"]
    assert "hamiltonian" in bad["first_failure"]["details"]
    with pytest.raises(ValueError):
        probent.property_suite("nope", 10, 1)
