import cmath
import math

import numpy as np
import pytest

import layered_elastica as le


def medium(rho_minus=2.7, dim=2):
    return le.ElasticMedium(lambda_=1.3, mu=0.9, rho_plus=1.0, rho_minus=rho_minus, omega=1.7, dim=dim)


def test_medium_round_trip():
    m = medium()
    k = m.wavenumbers()
    assert k["kp_plus"] == pytest.approx(1.7 / math.sqrt(3.1))
    assert k["ks_minus"] == pytest.approx(1.7 * math.sqrt(2.7 / 0.9))
    r = le.ElasticMedium.from_json(m.to_json())
    assert r.rho_minus == 2.7
    with pytest.raises(le.LayeredElasticaError):
        le.ElasticMedium(lambda_=1.3, mu=-1.0, rho_plus=1.0, rho_minus=1.0, omega=1.0)


def test_beta_branch():
    assert abs(le.beta(0.0, 1.0) - (-1j)) < 1e-15
    assert abs(le.beta(2.0, 1.0) - math.sqrt(3.0)) < 1e-15


def test_green2d_reciprocity_and_degeneracy():
    m = medium()
    x, y = np.array([0.4, 0.7]), np.array([-0.3, -0.5])
    a, b = le.green2d(x, y, m), le.green2d(y, x, m)
    assert a.shape == (2, 2) and a.dtype == np.complex128
    assert np.max(np.abs(a - b.T)) < 1e-7
    eq = medium(rho_minus=1.0)
    g = le.green2d(np.array([0.4, 0.7]), np.array([-0.3, 0.5]), eq)
    assert np.all(np.isfinite(g))


def test_green3d_symmetry():
    m = medium(dim=3)
    x, y = np.array([0.3, -0.2, 0.5]), np.array([-0.1, 0.4, -0.6])
    a, b = le.green3d(x, y, m), le.green3d(y, x, m)
    assert a.shape == (3, 3)
    assert np.max(np.abs(a - b.T)) < 1e-6


def test_far_fields():
    m = medium()
    y = np.array([0.2, 0.5])
    assert abs(le.far_field2d("p", 1, math.pi / 2, y, m)) < 1e-15
    assert abs(le.far_field2d("s", 2, 1.0, y, m)) > 0.0
    with pytest.raises(le.LayeredElasticaError):
        le.far_field2d("p", 1, 1e-4, y, m)
    keys = le.coefficient_keys3d()
    assert "R_{p,3}" in keys
    v = le.far_field3d("R_{p,3}", 0.8, 0.3, np.array([0.2, -0.1, 0.5]), medium(dim=3))
    assert cmath.isfinite(v)
    assert "corrected" in le.transcription_summary()


def test_verify_suite():
    assert le.suite_names()[0] == "stress-identity"
    r = le.run_suite("stress-identity", seed=7)
    assert r["pass"] is True
    assert r["max_error"] < 1e-13
    with pytest.raises(le.LayeredElasticaError):
        le.run_suite("no-such-suite")


def test_flat_solve():
    m = medium()
    s = le.solve(m, '{"type": "flat"}', z=np.array([0.3, 1.0]), a=np.array([1.0, 0.3 + 0.2j]), R=3.0, nodes=64, ppw=6)
    assert s.residual < 1e-8
    assert s.transmission()["displacement_jump"] < 1e-12
    x = np.array([0.5, -0.8])
    assert s.field(x).shape == (2,)
    assert np.all(np.isfinite(s.exterior(np.array([3.5, 0.4]))))
