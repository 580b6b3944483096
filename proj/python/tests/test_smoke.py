import cmath

import numpy as np
import pytest

import curvecalc as cc


def test_sqrt_of_diagonal():
    A = np.diag([4.0, 9.0]).astype(complex)
    r, stats = cc.evaluate(cc.principal_power(0.5), A, np.ones(2, dtype=complex))
    assert np.allclose(r, [2, 3], atol=1e-6)
    assert stats["converged"]


def test_matches_oracle():
    rng = np.random.default_rng(3)
    V = np.eye(3) * 2 + 0.3 * rng.standard_normal((3, 3))
    A = V @ np.diag([0.7, 1.5, 2.6]) @ np.linalg.inv(V)
    u = rng.standard_normal(3) + 0j
    f = cc.principal_log()
    r, _ = cc.evaluate(f, A.astype(complex), u)
    assert np.linalg.norm(r - cc.oracle(A.astype(complex), f, u)) < 1e-6


def test_named_forms_and_curves():
    c = cc.Curve([-1, 1])
    assert c.length == pytest.approx(2.0)
    z = 2j
    assert abs(cc.curve_power(c, 1 / 3)(z) - ((z - 1) / (z + 1)) ** (1 / 3)) < 1e-6
    assert abs(cc.principal_power(0.5)(4) - 2) < 1e-6
    nf = cc.NormalForm.from_json(cc.principal_log().to_json())
    assert abs(nf(3) - cmath.log(3)) < 1e-8


def test_errors():
    with pytest.raises(cc.ParseError):
        cc.NormalForm.from_json("{")
    A = np.diag([-1.0, 4.0]).astype(complex)
    with pytest.raises(cc.ResolventFailure) as info:
        cc.evaluate(cc.principal_log(), A, np.ones(2, dtype=complex), domain_check=True)
    assert abs(info.value.node - 0.5) < 1e-9


def test_suite():
    ok, rows = cc.run_suite("resolvent", n=20, seed=7)
    assert ok
    assert rows and all(r["criterion"] == 1 for r in rows)
    assert "resolvent" in cc.suite_names()
