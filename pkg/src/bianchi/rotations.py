"""The double cover SU(2) -> SO(3) and the frame rotation of an isometry.

An isometry sigma of the upper half-space rotates orthonormal frames at a
point P; scaled by lam / Im(sigma P), its differential is an element of
SO(3).  That rotation has closed-form columns in the entries of sigma and
the coordinates of P, implemented here directly (the finite-difference
definition is kept to the tests).

The component functions accept numpy arrays and broadcast, so the series
kernels can push whole coset lists through them at once.
"""

from __future__ import annotations

import numpy as np

from .hyperbolic3 import SU2Matrix, MatrixSL2, PointH3

__all__ = [
    "SU2Matrix",
    "spin_cover",
    "spin_cover_components",
    "frame_rotation",
    "frame_rotation_components",
    "B_matrix",
    "is_rotation",
]


def spin_cover_components(alpha, beta) -> np.ndarray:
    """SO(3) image of ((alpha, beta), (-conj beta, conj alpha)), stacked (..., 3, 3)."""
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    a2 = alpha * alpha
    b2 = beta * beta
    ab = alpha * beta
    out = np.empty(alpha.shape + (3, 3), dtype=float)
    out[..., 0, 0] = (a2 - b2).real
    out[..., 0, 1] = -(a2 + b2).imag
    out[..., 0, 2] = 2.0 * ab.real
    out[..., 1, 0] = (a2 - b2).imag
    out[..., 1, 1] = (a2 + b2).real
    out[..., 1, 2] = 2.0 * ab.imag
    out[..., 2, 0] = -2.0 * (alpha.conjugate() * beta).real
    out[..., 2, 1] = 2.0 * (alpha * beta.conjugate()).imag
    out[..., 2, 2] = (alpha * alpha.conjugate() - beta * beta.conjugate()).real
    return out


def spin_cover(A: SU2Matrix) -> np.ndarray:
    """The 2-to-1 epimorphism SU(2) -> SO(3); spin_cover(-A) == spin_cover(A)."""
    return spin_cover_components(A.alpha, A.beta)


def frame_rotation_components(c, d, z, lam) -> np.ndarray:
    """Frame rotation of the matrix with bottom row (c, d) at z + lam*j.

    Broadcasts over numpy arrays; returns shape (..., 3, 3).  The columns
    are the normalized images of the standard basis under the differential:
    with q = cz + d and Omega = |q|^2 + lam^2 |c|^2,

        col1 = ( Re u, -Im u, -2 lam Re(conj(c) q)) / Omega,  u = q^2 - lam^2 c^2
        col2 = ( Im w,  Re w, -2 lam Im(conj(c) q)) / Omega,  w = q^2 + lam^2 c^2
        col3 = (2 lam Re v, -2 lam Im v, |q|^2 - lam^2 |c|^2) / Omega,  v = c q
    """
    c = np.asarray(c, dtype=complex)
    d = np.asarray(d, dtype=complex)
    q = c * z + d
    lc = lam * c
    q, lc, c = np.broadcast_arrays(q, lc, c)
    omega = q.real**2 + q.imag**2 + lc.real**2 + lc.imag**2
    u = q * q - lc * lc
    w = q * q + lc * lc
    v = c * q
    r = c.conjugate() * q
    out = np.empty(q.shape + (3, 3), dtype=float)
    out[..., 0, 0] = u.real
    out[..., 1, 0] = -u.imag
    out[..., 2, 0] = -2.0 * lam * r.real
    out[..., 0, 1] = w.imag
    out[..., 1, 1] = w.real
    out[..., 2, 1] = -2.0 * lam * r.imag
    out[..., 0, 2] = 2.0 * lam * v.real
    out[..., 1, 2] = -2.0 * lam * v.imag
    out[..., 2, 2] = q.real**2 + q.imag**2 - lc.real**2 - lc.imag**2
    out /= omega[..., None, None]
    return out


def frame_rotation(sigma: MatrixSL2, P: PointH3) -> np.ndarray:
    """SO(3) matrix of (lam / Im(sigma P)) * (differential of sigma at P)."""
    m = sigma.embed()
    return frame_rotation_components(m.c, m.d, P.z, P.lam)


def B_matrix() -> np.ndarray:
    """diag(1, 1, -1); determinant -1, so -B is the half-turn about the first axis."""
    return np.diag([1.0, 1.0, -1.0])


def is_rotation(R: np.ndarray, tol: float = 1e-10) -> bool:
    """Orthogonality and determinant-one check for a 3x3 matrix."""
    return (
        np.max(np.abs(R.T @ R - np.eye(3))) <= tol
        and abs(float(np.linalg.det(R)) - 1.0) <= tol
    )
