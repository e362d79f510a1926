import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qpixl.codec import AngleVector, Domain
from qpixl.errors import DomainError
from qpixl.walsh import Direction, apply_angles, gray_code, gray_permute, sfwht, solve_angles

H2 = np.array([[1.0, 1.0], [1.0, -1.0]])


def dense_hadamard(n):
    return reduce(np.kron, [H2] * n, np.eye(1))


def dense_gray(n):
    """P with (P v)[gray(l)] = v[l], built from a bitwise Gray code."""
    N = 1 << n
    P = np.zeros((N, N))
    for l in range(N):
        bits = format(l, f"0{max(n, 1)}b")
        g = bits[0] + "".join("1" if a != b else "0" for a, b in zip(bits, bits[1:]))
        P[int(g, 2), l] = 1.0
    return P


def test_gray_code_sequence():
    assert [gray_code(k) for k in range(8)] == [0, 1, 3, 2, 6, 7, 5, 4]
    with pytest.raises(ValueError):
        gray_code(-1)


def test_two_qubit_gray_matrix_literal():
    assert np.array_equal(dense_gray(2), [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ])


def test_forward_sfwht_of_pi_impulse(backend):
    v = np.array([math.pi, 0.0, 0.0, 0.0])
    sfwht(v, Direction.FORWARD, backend)
    assert np.allclose(v, math.pi / 4, atol=1e-15)


@pytest.mark.parametrize("n", range(0, 7))
def test_sfwht_matches_dense_hadamard(n, backend, rng):
    v = rng.normal(size=1 << n)
    H = dense_hadamard(n)
    fwd = sfwht(v.copy(), Direction.FORWARD, backend)
    inv = sfwht(v.copy(), Direction.INVERSE, backend)
    assert np.allclose(fwd, H @ v / (1 << n), atol=1e-13)
    assert np.allclose(inv, H @ v, atol=1e-13)


@pytest.mark.parametrize("n", range(0, 9))
def test_gray_permute_matches_dense(n, backend, rng):
    v = rng.normal(size=1 << n)
    P = dense_gray(n)
    assert np.array_equal(gray_permute(v.copy(), Direction.FORWARD, backend), P @ v)
    assert np.array_equal(gray_permute(v.copy(), Direction.INVERSE, backend), P.T @ v)


def solve_by_elimination(A, b):
    """Gaussian elimination with partial pivoting."""
    A = A.astype(float).copy()
    b = b.astype(float).copy()
    N = len(b)
    for col in range(N):
        piv = col + int(np.argmax(np.abs(A[col:, col])))
        A[[col, piv]] = A[[piv, col]]
        b[[col, piv]] = b[[piv, col]]
        for row in range(col + 1, N):
            f = A[row, col] / A[col, col]
            A[row, col:] -= f * A[col, col:]
            b[row] -= f * b[col]
    x = np.zeros(N)
    for row in range(N - 1, -1, -1):
        x[row] = (b[row] - A[row, row + 1:] @ x[row + 1:]) / A[row, row]
    return x


def test_two_qubit_system_literal(rng):
    # the 4x4 ladder system: sign pattern from H (x) H with columns in Gray order
    M = np.array([
        [1, 1, 1, 1],
        [1, -1, -1, 1],
        [1, 1, -1, -1],
        [1, -1, 1, -1],
    ], dtype=float)
    assert np.array_equal(M, dense_hadamard(2) @ dense_gray(2))
    theta = rng.uniform(0, math.pi, 4)
    got = solve_angles(AngleVector(theta)).values
    assert np.max(np.abs(got - solve_by_elimination(M, theta))) <= 1e-14


@pytest.mark.parametrize("n", range(0, 5))
def test_solve_matches_elimination(n, backend, rng):
    M = dense_hadamard(n) @ dense_gray(n)
    for _ in range(5):
        theta = rng.uniform(0, math.pi, 1 << n)
        got = solve_angles(AngleVector(theta), backend).values
        assert np.max(np.abs(got - solve_by_elimination(M, theta))) <= 1e-14
        assert np.max(np.abs(M @ got - theta)) <= 1e-14


@pytest.mark.parametrize("n", [1, 5, 10, 16])
def test_solve_apply_round_trip(n, backend, rng):
    theta = rng.uniform(0, math.pi, 1 << n)
    hat = solve_angles(AngleVector(theta), backend)
    assert hat.domain is Domain.WALSH
    back = apply_angles(hat, backend).values
    assert np.max(np.abs(back - theta)) <= 1e-12 * np.max(np.abs(theta))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10).flatmap(
    lambda n: arrays(np.float64, 1 << n, elements=st.floats(-4, 4, allow_nan=False))
))
def test_apply_solve_round_trip_property(v):
    hat = AngleVector(v, Domain.WALSH)
    again = solve_angles(apply_angles(hat)).values
    assert np.allclose(again, v, rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(v))))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 12), st.integers(0, 2**32 - 1))
def test_gray_permute_inverse_property(n, seed):
    v = np.random.default_rng(seed).normal(size=1 << n)
    w = gray_permute(gray_permute(v.copy(), "forward"), "inverse")
    assert np.array_equal(w, v)


def test_domain_tags_are_checked():
    with pytest.raises(DomainError):
        solve_angles(AngleVector([0.0, 1.0], Domain.WALSH))
    with pytest.raises(DomainError):
        apply_angles(AngleVector([0.0, 1.0], Domain.PIXEL))


def test_in_place_buffer_checks():
    with pytest.raises(DomainError):
        sfwht(np.zeros(6))
    with pytest.raises(TypeError):
        sfwht(np.zeros(4, dtype=np.float32))
    with pytest.raises(TypeError):
        gray_permute(np.zeros(8)[::2])
    frozen = np.zeros(4)
    frozen.flags.writeable = False
    with pytest.raises(TypeError):
        sfwht(frozen)


def test_transforms_work_in_place():
    v = np.arange(8, dtype=float)
    assert sfwht(v) is v
    assert gray_permute(v) is v


def test_doubling_ratio_invariant(sfwht_timings):
    """Each doubling of N costs a factor 1.8-2.6 in sfwht time for n >= 18."""
    ns = sorted(sfwht_timings)
    ratios = [sfwht_timings[b] / sfwht_timings[a] for a, b in zip(ns, ns[1:])]
    assert all(1.8 <= r <= 2.6 for r in ratios), ratios
