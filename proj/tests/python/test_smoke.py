import math

import numpy as np
import pytest

import gapcert


def test_sym_eigvals_matches_numpy():
    rng = np.random.default_rng(3)
    m = rng.standard_normal((6, 6))
    s = (m + m.T) / 2
    assert np.allclose(gapcert.sym_eigvals(s), np.linalg.eigvalsh(s), atol=1e-12)


def test_diag_gap_is_sound():
    a = np.diag([1.0, 2.0])
    b = np.array([[0.5, 0.0], [0.0, 0.5]])
    c = np.diag([3.0, 1.5])
    cert = gapcert.diag_gap(a, b, c)
    lo, hi = cert["interval"]
    h = np.block([[a, b], [b.T, -c]])
    eigs = np.linalg.eigvalsh(h)
    assert not np.any((eigs > lo + 1e-12) & (eigs < hi - 1e-12))


def test_stokes_intervals_nest():
    a = np.diag([1.0, 2.0])
    b = np.array([[1.0, 0.2], [0.0, 1.5]])
    minimal = gapcert.minimal_intervals(a, b)
    ruwa = gapcert.ruwa_intervals(a, b)
    assert ruwa["i_plus"][0] <= minimal["i_plus"][0] + 1e-12
    assert minimal["i_minus"][1] <= ruwa["i_minus"][1] + 1e-12


def test_secular_matches_dense():
    roots = gapcert.secular_solve(10, 2.0)
    h = gapcert.build_Hc(10, 2.0)
    eigs = np.sort(np.abs(np.linalg.eigvalsh(h)))[::2]
    assert np.allclose(np.sort(2.0 * np.sqrt(roots["eigenvalues"])), eigs, atol=1e-9)


def test_spurious_root_is_tiny():
    roots = gapcert.secular_solve(50, 0.5)
    assert roots["hyp_root"] is not None
    assert roots["hyp_root"][1] < -60.0
    est = gapcert.spurious_estimate(50, 0.5)
    assert math.isclose(est["alpha0"], math.log(2.0))


def test_bottcher_norms():
    r = gapcert.counterexample_suite()
    assert abs(r["bottcher_norm"] - 21.177) < 1e-3
    assert abs(r["bottcher_inv_norm"] - 43.774) < 1e-3


def test_errors_raise_value_error():
    with pytest.raises(ValueError):
        gapcert.diag_gap(np.eye(2), np.eye(3), np.eye(2))
