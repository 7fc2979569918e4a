"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import staglab

SQRT3 = math.sqrt(3.0)


def test_paper_example_solve():
    inst = staglab.paper_example()
    assert inst["expected_stagnation_steps"] == []
    rep = staglab.solve(inst["matrix"], inst["rhs"])
    assert rep["schema"] == "staglab-report/1"
    it2 = rep["iterations"][1]
    assert it2["m"] == 2
    assert abs(it2["resnorm"] - 1.0 / SQRT3) < 1e-12
    sigmas = sorted(h["sigma"].real for h in it2["harmonic"])
    assert abs(sigmas[0] + SQRT3) < 1e-12
    assert abs(sigmas[1] - SQRT3) < 1e-12
    assert not it2["stagnated"]
    assert it2["predicates_consistent"]
    assert rep["status"] == "breakdown"


def test_cyclic_shift_stagnates():
    inst = staglab.cyclic_shift_instance(5)
    assert inst["expected_stagnation_steps"] == [1, 2, 3, 4]
    rep = staglab.solve(inst["matrix"], inst["rhs"])
    resnorms = [e["resnorm"] for e in rep["iterations"]]
    assert resnorms[:4] == [1.0, 1.0, 1.0, 1.0]
    assert resnorms[4] < 1e-13
    assert all(e["stagnated"] for e in rep["iterations"][:4])
    assert all(h["is_infinite"]
               for e in rep["iterations"][:4]
               for h in e["harmonic"])


def test_verify_battery():
    inst = staglab.planted_singular_hessenberg(6, [3], 7)
    res = staglab.verify(inst["matrix"], inst["rhs"],
                         inst["expected_stagnation_steps"])
    assert res["ok"], res["violations"]
    assert res["checks"] > 50


def test_kernels():
    h = np.array([[1, 1], [1, 0], [0, 1]], dtype=complex)
    x, resnorm = staglab.qr_hessenberg_ls(h, np.array([1, 0, 0], dtype=complex))
    assert np.allclose(x, [1 / 3, 1 / 3], atol=1e-13)
    assert abs(resnorm - 1.0 / SQRT3) < 1e-13

    sigma, v, u = staglab.smallest_singular_triplet(
        np.array([[1, 1], [1, 0]], dtype=complex))
    assert abs(sigma - (math.sqrt(5.0) - 1.0) / 2.0) < 1e-13
    m = np.array([[1, 1], [1, 0]], dtype=complex)
    assert abs(np.linalg.norm(m @ v) - sigma) < 1e-12
    assert abs(np.linalg.norm(m.conj().T @ u) - sigma) < 1e-12

    pairs = staglab.solve_pencil(
        np.array([[2, 1], [1, 2]], dtype=complex),
        np.array([[1, 1], [1, 0]], dtype=complex))
    assert abs(pairs[0]["sigma"] - SQRT3) < 1e-12
    assert abs(pairs[1]["sigma"] + SQRT3) < 1e-12

    x = staglab.back_substitute(
        np.array([[2, 0], [0, 4]], dtype=complex),
        np.array([2, 4], dtype=complex))
    assert np.allclose(x, [1, 1])


def test_harmonic_and_roots_agree():
    inst = staglab.paper_example()
    pairs = staglab.harmonic_ritz(inst["matrix"], inst["rhs"], 2)
    sigmas = sorted(p["sigma"].real for p in pairs if not p["is_infinite"])
    roots = staglab.residual_polynomial_roots(inst["matrix"], inst["rhs"], 2)
    roots = sorted(r.real for r in roots)
    assert np.allclose(sigmas, roots, atol=1e-10)
    hr = pairs[0]["harmonic_residual"]
    ref = np.array([-0.5, 0.5, 0.5], dtype=complex)
    cosangle = abs(np.vdot(ref, hr)) / (np.linalg.norm(ref) * np.linalg.norm(hr))
    assert cosangle > 1 - 1e-12


def test_infinite_pairs_on_nilpotent_pencil():
    eye = np.eye(3, dtype=complex)
    shift = np.zeros((3, 3), dtype=complex)
    shift[0, 1] = 1.0
    shift[1, 2] = 1.0
    pairs = staglab.solve_pencil(eye, shift)
    assert all(p["is_infinite"] for p in pairs)
    assert all(p["sigma"] is None for p in pairs)


def test_error_translation():
    with pytest.raises(ValueError):
        staglab.solve(np.eye(2, dtype=complex), np.zeros(2, dtype=complex))
    with pytest.raises(ValueError):
        staglab.qr_hessenberg_ls(np.eye(3, dtype=complex),
                                 np.zeros(3, dtype=complex))
