import json

import numpy as np
import pytest
from scipy.linalg import expm

import qwalk


def test_version():
    assert qwalk.__version__ == "0.1.0"


def test_graph_roundtrip():
    g = qwalk.graph({"family": "line", "n": 3})
    assert g["edges"] == [[1, 2, 1.0], [2, 3, 1.0]]
    with pytest.raises(ValueError):
        qwalk.graph({"family": "nope"})


def test_propagation_against_scipy():
    h = qwalk.coupling_matrix({"family": "dendrimer", "G": 2})
    t = [0.3, 2.0]
    p = qwalk.propagate_quantum(h, 1, t)
    c = qwalk.propagate_classical(h, 1, t)
    for i, ti in enumerate(t):
        np.testing.assert_allclose(p[:, i], np.abs(expm(-1j * h * ti)[:, 1]) ** 2, atol=1e-12)
        np.testing.assert_allclose(c[:, i], expm(-h * ti)[:, 1], atol=1e-12)


def test_ring_lta_and_traps():
    h = qwalk.coupling_matrix({"family": "ring", "n": 9})
    np.testing.assert_allclose(qwalk.long_time_average(h), qwalk.ring_lta_closed(9), atol=1e-12)
    count, plateau = qwalk.dark_state_count(300, 10, "periodic")
    assert count == 29 and plateau == pytest.approx(0.1)
    hr = qwalk.coupling_matrix({"family": "ring", "n": 20})
    s = qwalk.quantum_survival(hr, [9, 19], 1.0, [0.0, 1e5])
    assert s[0] == pytest.approx(1.0)
    assert s[1] == pytest.approx(plateau_of(20, 2))


def plateau_of(n, m):
    return qwalk.dark_state_count(n, m, "periodic")[1]


def test_wigner_marginal():
    w = qwalk.wigner_ring(11, 5, 2.0)
    h = qwalk.coupling_matrix({"family": "ring", "n": 11})
    np.testing.assert_allclose(w.sum(axis=1), qwalk.propagate_quantum(h, 5, [2.0])[:, 0], atol=1e-12)


def test_dephasing_conserves_probability():
    p = qwalk.gurvitz_populations(10, 0.1, 1, [0.0, 5.0, 50.0])
    np.testing.assert_allclose(p.sum(axis=0), 1.0, atol=1e-12)


def test_scenario_run(tmp_path):
    manifest = qwalk.run_scenario({"scenario": "ring-lta", "output_dir": str(tmp_path), "params": {"n": 7}})
    assert manifest["scenario"] == "ring-lta"
    assert (tmp_path / "manifest.json").exists()
    assert json.loads((tmp_path / "manifest.json").read_text())["config_hash"] == manifest["config_hash"]
    with pytest.raises(ValueError):
        qwalk.run_scenario({"scenario": "ring-lta", "bogus": 1})


def test_check():
    passed, summary, items = qwalk.check(1)
    assert passed and "[PASS]" in summary and items
