import math

import numpy as np
import pytest

import segal_quant as sq


def test_realization_two():
    r = sq.construct_unique_realization(sq.FrequencySpec([(2.0, 1)]))
    np.testing.assert_allclose(r.G, np.diag([0.5, 2.0]))
    np.testing.assert_allclose(r.J, [[0.0, 2.0], [-0.5, 0.0]])
    np.testing.assert_allclose(r.H, np.diag([2.0, 2.0]))


def test_axioms_pass():
    spec = sq.FrequencySpec.from_frequencies([1.0, 2.0])
    r = sq.construct_unique_realization(spec)
    report = sq.verify_axioms(r.G, r.W, sq.build_generator(spec))
    assert all(entry["pass"] for entry in report.values())


def test_identity_metric_fails():
    spec = sq.FrequencySpec([(2.0, 1)])
    w = np.array([[0.0, 1.0], [-1.0, 0.0]])
    report = sq.verify_axioms(np.eye(2), w, sq.build_generator(spec))
    assert not report["A-antisymmetry"]["pass"]


def test_weighted_axioms():
    spec = sq.FrequencySpec([(1.0, 1), (3.0, 2)], sq.gauss_legendre(0.5, 2.0, 4))
    r = sq.construct_unique_realization(spec)
    a = sq.build_generator(spec)
    report = sq.verify_axioms(r.G, r.W, a, ccr_target=sq.standard_symplectic(spec.weights))
    assert all(entry["pass"] for entry in report.values())
    assert not sq.verify_axioms(r.G, r.W, a)["CCR"]["pass"]


def test_uniqueness_scan_degenerate():
    spec = sq.FrequencySpec([(3.0, 2)])
    result = sq.uniqueness_scan(spec, restarts=16, seed=3)
    assert len(result["solutions"]) == 1
    np.testing.assert_allclose(result["solutions"][0]["G"], np.diag([1 / 3, 1 / 3, 3, 3]), atol=1e-8)


def test_flow_matches_expm():
    spec = sq.FrequencySpec.from_frequencies([0.5, 3.0])
    a = sq.build_generator(spec)
    np.testing.assert_allclose(sq.flow_closed_form(spec, 2.3), sq.flow_expm(a, 2.3), atol=1e-12)


def test_evolve_conserves():
    spec = sq.FrequencySpec([(2.0, 1)])
    r = sq.construct_unique_realization(spec)
    out = sq.evolve(r, np.array([2.0, 0.0]), np.array([0.0, 1.0]), [0.0, math.pi / 4])
    np.testing.assert_allclose(out["states"][1], [0.0, 1.0], atol=1e-15)
    assert out["max_energy_drift"] < 1e-14


def test_fock():
    fock = sq.build_fock(sq.FrequencySpec([(2.0, 1)]), 3)
    np.testing.assert_allclose(fock["spectrum"], [0, 2, 4, 6])
    assert fock["ccr_below_top"] < 1e-12
    assert sq.fock_dimension(3, 4) == 35


def test_errors():
    with pytest.raises(sq.SpecError, match="nonpositive frequency"):
        sq.FrequencySpec([(0.0, 1)])
    with pytest.raises(sq.ResourceError):
        sq.build_fock(sq.FrequencySpec.from_frequencies([1.0, 2.0]), 5, memory_budget=1024)
    assert issubclass(sq.SpecError, sq.Error)


def test_run_cli(tmp_path):
    config = tmp_path / "c.json"
    config.write_text('{"spec": {"discrete": [{"omega": 1}, {"omega": 2}]}}')
    out = tmp_path / "r.json"
    assert sq.run_cli(["verify", "--config", str(config), "--out", str(out)]) == 0
    assert out.exists()
