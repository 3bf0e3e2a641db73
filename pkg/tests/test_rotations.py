import numpy as np
import pytest

from bianchi.hyperbolic3 import (
    MatrixSL2,
    PointH3,
    SU2Matrix,
    frame_matrix,
    mobius_act,
    scaling_matrix,
    t_part,
    translation_matrix,
)
from bianchi.rotations import (
    B_matrix,
    frame_rotation,
    is_rotation,
    spin_cover,
)
from bianchi.harmonics import rot_euler


def random_su2(rng):
    v = rng.normal(size=4)
    v /= np.linalg.norm(v)
    return SU2Matrix(complex(v[0], v[1]), complex(v[2], v[3]))


def random_sl2(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    m = m / np.sqrt(det)
    return MatrixSL2(m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def test_spin_cover_identity():
    assert np.allclose(spin_cover(SU2Matrix(1 + 0j, 0j)), np.eye(3), atol=1e-15)


def test_spin_cover_diagonal_is_axis_rotation():
    theta = 0.83
    A = SU2Matrix(np.exp(1j * theta / 2), 0j)
    R = spin_cover(A)
    expected = np.array(
        [
            [np.cos(theta), -np.sin(theta), 0.0],
            [np.sin(theta), np.cos(theta), 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    assert np.allclose(R, expected, atol=1e-14)


def test_spin_cover_kernel_is_plus_minus_one():
    rng = np.random.default_rng(10)
    for _ in range(50):
        A = random_su2(rng)
        minus = SU2Matrix(-A.alpha, -A.beta)
        assert np.allclose(spin_cover(A), spin_cover(minus), atol=1e-15)


def test_spin_cover_is_a_homomorphism():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        A, B = random_su2(rng), random_su2(rng)
        lhs = spin_cover(A @ B)
        rhs = spin_cover(A) @ spin_cover(B)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_spin_cover_lands_in_so3():
    rng = np.random.default_rng(12)
    for _ in range(200):
        assert is_rotation(spin_cover(random_su2(rng)))


def test_frame_rotation_of_translations_and_scalings():
    P = PointH3(0.4 + 0.1j, 0.9)
    assert np.allclose(frame_rotation(translation_matrix(2 - 3j), P), np.eye(3), atol=1e-12)
    assert np.allclose(frame_rotation(scaling_matrix(3.7), P), np.eye(3), atol=1e-12)


def test_frame_rotation_of_inversion_at_j():
    S = MatrixSL2(0j, -1 + 0j, 1 + 0j, 0j)
    R = frame_rotation(S, PointH3(0j, 1.0))
    assert np.allclose(R, np.diag([-1.0, 1.0, -1.0]), atol=1e-14)


def test_frame_rotation_is_so3():
    rng = np.random.default_rng(13)
    for _ in range(1000):
        sigma = random_sl2(rng)
        P = PointH3(complex(rng.normal(), rng.normal()), float(np.exp(rng.normal())))
        assert is_rotation(frame_rotation(sigma, P), tol=1e-10)


def test_frame_rotation_matches_scaled_differential():
    rng = np.random.default_rng(14)
    h = 1e-5
    for _ in range(100):
        sigma = random_sl2(rng)
        z = complex(rng.normal(), rng.normal())
        lam = float(np.exp(rng.normal() * 0.5))
        P = PointH3(z, lam)
        R = frame_rotation(sigma, P)
        im = mobius_act(sigma, P).lam
        for k, e in enumerate(np.eye(3)):
            Pp = PointH3(complex(z.real + h * e[0], z.imag + h * e[1]), lam + h * e[2])
            Pm = PointH3(complex(z.real - h * e[0], z.imag - h * e[1]), lam - h * e[2])
            qp, qm = mobius_act(sigma, Pp), mobius_act(sigma, Pm)
            der = (
                np.array([qp.z.real - qm.z.real, qp.z.imag - qm.z.imag, qp.lam - qm.lam])
                / (2 * h)
            )
            assert np.max(np.abs(R[:, k] - lam / im * der)) < 1e-6


def test_frame_rotation_cocycle():
    rng = np.random.default_rng(15)
    for _ in range(1000):
        sigma, tau = random_sl2(rng), random_sl2(rng)
        P = PointH3(complex(rng.normal(), rng.normal()), float(np.exp(rng.normal())))
        lhs = frame_rotation(sigma @ tau, P)
        rhs = frame_rotation(sigma, mobius_act(tau, P)) @ frame_rotation(tau, P)
        assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_bridge_identity():
    rng = np.random.default_rng(16)
    B = B_matrix()
    for _ in range(1000):
        sigma = random_sl2(rng)
        z = complex(rng.normal(), rng.normal())
        lam = float(np.exp(rng.normal()))
        lhs = spin_cover(t_part(sigma @ frame_matrix(PointH3(z, lam))))
        rhs = B @ frame_rotation(sigma, PointH3(z, lam)) @ B
        assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_b_matrix_properties():
    B = B_matrix()
    assert np.array_equal(B @ B, np.eye(3))
    assert np.array_equal(B.T, B)
    assert np.linalg.det(B) == pytest.approx(-1.0)
    assert np.allclose(-B, rot_euler(np.pi, 0.0, 0.0), atol=1e-15)
