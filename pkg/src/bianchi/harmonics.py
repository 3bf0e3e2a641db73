"""Spherical harmonics and Wigner rotation matrices.

The Euler factorization used throughout is

    ROT(theta, chi, phi) = Z(theta) * M(chi) * Z(phi),

where Z(a) has rows (cos a, sin a, 0), (-sin a, cos a, 0), (0, 0, 1) and
the middle factor M(chi) carries sin(chi) in its (3,1) slot.  M(chi) is a
rotation by -chi about the second axis in the more common convention;
we follow the matrices above literally.

The big-D matrix is assembled as

    D^l_{km}(ROT(theta, chi, phi)) = e^{i k theta} d^l_{km}(chi) e^{i m phi}

with the small-d given by the explicit factorial sum.  Its index order was
pinned by requiring the rotation law

    Y^l_m(R^{-1}(theta, phi)) = sum_k D^l_{km}(R) Y^l_k(theta, phi)

to hold against the Condon-Shortley harmonics; with that convention the
rows of D^l multiply like a representation, D^l(R T) = D^l(R) D^l(T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import lpmv


@dataclass(frozen=True)
class WignerIndex:
    """Triple (l, k, m) with l >= 0 and k, m in [-l, l]."""

    l: int
    k: int
    m: int

    def __post_init__(self):
        if self.l < 0:
            raise ValueError(f"l must be nonnegative, got {self.l}")
        if not (-self.l <= self.k <= self.l and -self.l <= self.m <= self.l):
            raise ValueError(f"indices (k, m) = ({self.k}, {self.m}) out of [-l, l]")


@dataclass(frozen=True)
class EulerAngles:
    theta: float
    chi: float
    phi: float


def ylm(l: int, m: int, theta, phi):
    """Orthonormal spherical harmonic with Condon-Shortley phase.

    theta is the polar angle in [0, pi], phi the azimuth.  Accepts arrays.
    """
    WignerIndex(l, m, m)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    mm = abs(m)
    norm = math.sqrt(
        (2 * l + 1) / (4.0 * math.pi) * math.factorial(l - mm) / math.factorial(l + mm)
    )
    val = norm * lpmv(mm, l, np.cos(theta)) * np.exp(1j * mm * phi)
    if m < 0:
        val = (-1) ** mm * np.conjugate(val)
    if val.ndim == 0:
        return complex(val)
    return val


def _z_factor(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def _middle_factor(chi: float) -> np.ndarray:
    c, s = math.cos(chi), math.sin(chi)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def rot_euler(theta: float, chi: float, phi: float) -> np.ndarray:
    """The rotation ROT(theta, chi, phi) in the module's factorization."""
    return _z_factor(theta) @ _middle_factor(chi) @ _z_factor(phi)


def euler_extract_batch(R: np.ndarray):
    """Angles (theta, chi, phi) for a stack (..., 3, 3) of rotations.

    Gimbal lock (chi = 0 or pi) is resolved deterministically by setting
    phi = 0 and absorbing the free angle into theta.
    """
    R = np.asarray(R, dtype=float)
    chi = np.arccos(np.clip(R[..., 2, 2], -1.0, 1.0))
    sin_chi = np.sin(chi)
    theta = np.arctan2(R[..., 1, 2], -R[..., 0, 2])
    phi = np.arctan2(R[..., 2, 1], R[..., 2, 0])
    locked = sin_chi < 1e-13
    if np.any(locked):
        # chi = 0: R = Z(theta + phi); chi = pi: top-left block is
        # (-cos(theta - phi), sin(theta - phi); ...) so theta = atan2(R01, -R00).
        top = np.arctan2(R[..., 0, 1], R[..., 0, 0])
        flip = np.arctan2(R[..., 0, 1], -R[..., 0, 0])
        theta = np.where(locked, np.where(R[..., 2, 2] > 0, top, flip), theta)
        phi = np.where(locked, 0.0, phi)
    theta = np.mod(theta, 2.0 * math.pi)
    return theta, chi, phi


def euler_extract(R: np.ndarray) -> EulerAngles:
    """Euler angles of a single rotation matrix; round-trips through rot_euler."""
    R = np.asarray(R, dtype=float)
    if np.max(np.abs(R.T @ R - np.eye(3))) > 1e-8 or np.linalg.det(R) < 0:
        raise ValueError("input is not a rotation matrix")
    theta, chi, phi = euler_extract_batch(R)
    return EulerAngles(float(theta), float(chi), float(phi))


@lru_cache(maxsize=None)
def _small_d_terms(l: int, k: int, m: int):
    """Per-term (coefficient, cos power, sin power) of the factorial sum."""
    f = math.factorial
    pref = math.sqrt(f(l + m) * f(l - m) * f(l + k) * f(l - k))
    terms = []
    for s in range(max(0, k - m), min(l + k, l - m) + 1):
        coeff = (-1) ** (m - k + s) * pref / (
            f(l + k - s) * f(s) * f(m - k + s) * f(l - m - s)
        )
        terms.append((coeff, 2 * l + k - m - 2 * s, m - k + 2 * s))
    return tuple(terms)


def wigner_small_d(l: int, k: int, m: int, chi):
    """Small-d matrix entry d^l_{km}(chi); accepts arrays, stable for l <= 10."""
    WignerIndex(l, k, m)
    chi = np.asarray(chi, dtype=float)
    c = np.cos(chi / 2.0)
    s = np.sin(chi / 2.0)
    out = np.zeros_like(c)
    for coeff, pc, ps in _small_d_terms(l, k, m):
        out += coeff * c**pc * s**ps
    if out.ndim == 0:
        return float(out)
    return out


def wigner_D_from_angles(l: int, k: int, m: int, theta, chi, phi):
    """e^{ik theta} d^l_{km}(chi) e^{im phi}; accepts arrays."""
    return (
        np.exp(1j * k * np.asarray(theta))
        * wigner_small_d(l, k, m, chi)
        * np.exp(1j * m * np.asarray(phi))
    )


def wigner_D(idx: WignerIndex, R: np.ndarray) -> complex:
    """Matrix coefficient D^l_{km}(R) of a single rotation."""
    theta, chi, phi = euler_extract_batch(np.asarray(R, dtype=float))
    val = wigner_D_from_angles(idx.l, idx.k, idx.m, theta, chi, phi)
    return complex(val)


def wigner_D_matrix(l: int, R: np.ndarray) -> np.ndarray:
    """Full (2l+1) x (2l+1) matrix, rows indexed by k, columns by m."""
    theta, chi, phi = euler_extract_batch(np.asarray(R, dtype=float))
    out = np.empty((2 * l + 1, 2 * l + 1), dtype=complex)
    for i, k in enumerate(range(-l, l + 1)):
        for j, m in enumerate(range(-l, l + 1)):
            out[i, j] = wigner_D_from_angles(l, k, m, theta, chi, phi)
    return out


def sphere_direction(theta, phi) -> np.ndarray:
    """Unit vector with polar angle theta and azimuth phi, stacked (..., 3)."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack(
        [np.cos(phi) * st, np.sin(phi) * st, np.cos(theta) * np.ones_like(phi)], axis=-1
    )


def direction_angles(n: np.ndarray):
    """Inverse of sphere_direction; azimuth normalized to [0, 2 pi)."""
    n = np.asarray(n, dtype=float)
    theta = np.arccos(np.clip(n[..., 2], -1.0, 1.0))
    phi = np.mod(np.arctan2(n[..., 1], n[..., 0]), 2.0 * math.pi)
    return theta, phi
