import json
import warnings

import numpy as np
import pytest

from hcyclic.analysis import Tolerances, analyze


def test_example2_report(ex2):
    rep = analyze(ex2, source="ex2")
    assert rep.passed and rep.h == 3
    assert rep.partition == [[1, 2], [3, 4], [5, 6]]
    d = rep.to_dict()
    json.dumps(d)      # plain JSON types only
    assert d["schema"] == 1 and d["exit_code"] == 0
    mult = sorted(s["multiplicity"] for s in d["spectrum"])
    assert sum(mult) == 6
    bases = sorted(complex(*o["base"]).real for o in d["orbits"])
    assert bases[-1] == pytest.approx(1.0)
    total = sum(np.array([complex(*z) for z in c["matrix"]["entries"]]).reshape(6, 6)
                for c in d["components"])
    np.testing.assert_allclose(total, ex2, atol=1e-12)
    assert all(c.passed for c in rep.checks)
    text = rep.render_text()
    assert "status: ok (exit 0)" in text


def test_primitive_and_reducible():
    rep = analyze(np.ones((3, 3)))
    assert rep.exit_code == 3 and "primitive" in rep.error
    assert analyze(np.ones((3, 3)), allow_primitive=True).exit_code == 0
    assert analyze(np.array([[1.0, 1.0], [0.0, 1.0]])).exit_code == 3


def test_strict_tolerance_fails_checks(ex2):
    rep = analyze(ex2, tol=Tolerances(chain_tol=1e-30))
    assert rep.exit_code == 5
    assert any(not c.passed for c in rep.checks)


def test_signed_matrix_has_no_perron(rng):
    A = np.zeros((4, 4))
    A[:2, 2:] = rng.standard_normal((2, 2))
    A[2:, :2] = rng.standard_normal((2, 2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = analyze(A)
    assert rep.h == 2 and rep.perron is None
