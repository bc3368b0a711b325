import numpy as np
import pytest

from lindbladsim.numerics import (NumericsError, dagger, eigh, expm, frobenius,
                                  is_unitary, trace_norm)

SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def test_expm_zero_is_identity():
    assert np.allclose(expm(np.zeros((3, 3))), np.eye(3), atol=1e-14)


def test_expm_diagonal():
    out = expm(np.diag([0.3, -1.2 + 0.5j]))
    assert np.allclose(out, np.diag(np.exp([0.3, -1.2 + 0.5j])), atol=1e-14)


def test_expm_pauli_rotation():
    # closed form: exp(i (pi/2) sigma_y) = cos(pi/2) I + i sin(pi/2) sigma_y
    out = expm(1j * np.pi / 2 * SIGMA_Y)
    assert np.allclose(out, np.array([[0.0, 1.0], [-1.0, 0.0]]), atol=1e-12)


def test_expm_rejects_nonsquare_and_nonfinite():
    with pytest.raises(NumericsError):
        expm(np.zeros((2, 3)))
    with pytest.raises(NumericsError):
        expm(np.array([[np.nan, 0], [0, 0]]))


def test_expm_inverse_pairs(rng):
    for _ in range(10):
        m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        m *= 10.0 / np.linalg.norm(m, 2)
        assert frobenius(expm(m) @ expm(-m) - np.eye(5)) < 1e-10


def test_expm_antihermitian_is_unitary(rng):
    for _ in range(10):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = m - dagger(m)
        assert is_unitary(expm(m), tol=1e-10)


def test_expm_accuracy_at_large_norm(rng):
    # oracle: for normal M = V diag(w) V†, exp(M) = V diag(e^w) V†
    h = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = h + dagger(h)
    m = 1j * h * (50.0 / np.linalg.norm(h, 2))
    w, v = np.linalg.eigh(-1j * m)
    oracle = v @ np.diag(np.exp(1j * w)) @ dagger(v)
    out = expm(m)
    assert frobenius(out - oracle) <= 1e-12 * frobenius(oracle)


def test_eigh_diagonal_descending():
    w, v = eigh(np.diag([1.0, 2.0, 3.0]))
    assert np.allclose(w, [3.0, 2.0, 1.0], atol=0)
    assert np.allclose(np.abs(v), np.eye(3)[:, ::-1], atol=1e-14)


def test_eigh_sigma_x_hand_solved():
    # by hand: sigma_x (1, +-1)^T / sqrt(2) = +-1 * (1, +-1)^T / sqrt(2)
    w, v = eigh(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(w, [1.0, -1.0], atol=1e-14)
    assert np.allclose(v[:, 0], np.array([1, 1]) / np.sqrt(2), atol=1e-14)
    assert np.allclose(v[:, 1], np.array([1, -1]) / np.sqrt(2), atol=1e-14)


def test_eigh_reconstruction(rng):
    for d in (2, 5, 16):
        m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        m = m + dagger(m)
        w, v = eigh(m)
        assert frobenius(v @ np.diag(w) @ dagger(v) - m) <= 1e-10 * frobenius(m)
        assert frobenius(dagger(v) @ v - np.eye(d)) < 1e-10


def test_eigh_deterministic(rng):
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    m = m + dagger(m)
    w1, v1 = eigh(m)
    w2, v2 = eigh(m.copy())
    assert np.array_equal(w1, w2)
    assert np.array_equal(v1, v2)


def test_eigh_phase_convention(rng):
    m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    m = m + dagger(m)
    _, v = eigh(m)
    for j in range(5):
        col = v[:, j]
        i = int(np.argmax(np.abs(col)))
        assert col[i].imag == pytest.approx(0.0, abs=1e-14)
        assert col[i].real >= 0.0


def test_eigh_rejects_non_hermitian():
    with pytest.raises(NumericsError):
        eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_trace_norm_diagonal():
    assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0, abs=1e-12)


def test_trace_norm_density_matrix(rng):
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = b @ dagger(b)
    rho /= np.trace(rho)
    assert trace_norm(rho) == pytest.approx(1.0, abs=1e-12)


def test_trace_norm_single_dyad():
    m = np.zeros((2, 2), dtype=complex)
    m[0, 1] = 1.0
    assert trace_norm(m) == pytest.approx(1.0, abs=1e-12)


def test_trace_norm_rejects_nonsquare():
    with pytest.raises(NumericsError):
        trace_norm(np.zeros((2, 3)))
