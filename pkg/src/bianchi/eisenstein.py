"""Eisenstein-type coset series, their frame-rotation twin, Fourier
coefficients, and the truncated classical series.

Two sums over the same coset list appear:

* the frame series, whose summand conjugates a Wigner coefficient of the
  inverse spin image of the Iwasawa rotation part of sigma*g, weighted by
  Im(sigma g (j))^(1+s);
* the rotation series, which uses the frame rotation of sigma at the base
  point instead.

Termwise they differ exactly by the factor (-1)^(k+m), which makes the
pair a strong cross-check at any truncation.  All sums are taken over the
canonically ordered coset list and reduced blockwise, so values reproduce
bit-for-bit across runs and thread counts.

The Wigner coefficient of an inverse rotation is always obtained by
feeding the inverse (conjugate-transpose) SU(2) element through the spin
cover; no Wigner matrix is ever inverted numerically, so unitarity is
structural.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .cosets import cached_coset_rows, coset_rows, unipotent_index
from .harmonics import WignerIndex, euler_extract_batch, wigner_D_from_angles
from .hyperbolic3 import IDENTITY_SU2, MatrixSL2, PointH3, frame_matrix, iwasawa
from .number_field import RingSpec
from .reduction import blocked_sum
from .rotations import frame_rotation_components, spin_cover_components
from .zeta import phi as zeta_phi


class TailWarning(UserWarning):
    """Raised when the estimated truncation tail exceeds 10% of the value."""


@dataclass(frozen=True)
class SeriesParams:
    idx: WignerIndex
    s: complex
    omega_bound: float
    ring: RingSpec

    def __post_init__(self):
        if not complex(self.s).real > 1:
            raise ValueError("series are evaluated in the region Re(s) > 1 only")
        if not self.omega_bound > 0:
            raise ValueError("omega_bound must be positive")


@dataclass(frozen=True)
class SeriesValue:
    """One partial-sum evaluation of a coset series."""

    params: SeriesParams
    argument: PointH3
    value: complex
    n_terms: int
    tail_estimate: float

    def to_record(self) -> dict:
        """Flat JSON-ready record of this evaluation."""
        p = self.params
        return {
            "D": p.ring.D,
            "l": p.idx.l,
            "k": p.idx.k,
            "m": p.idx.m,
            "s_re": complex(p.s).real,
            "s_im": complex(p.s).imag,
            "point": [self.argument.z.real, self.argument.z.imag, self.argument.lam],
            "bound": p.omega_bound,
            "n_terms": self.n_terms,
            "value_re": complex(self.value).real,
            "value_im": complex(self.value).imag,
            "tail_estimate": self.tail_estimate,
        }


def _embed_rows(ring: RingSpec, rows):
    cx, cy, dx, dy = rows
    om = ring.omega
    ce = cx + cy * om.real + 1j * (cy * om.imag)
    de = dx + dy * om.real + 1j * (dy * om.imag)
    if ring.D % 4 == 3:
        t = (1 + ring.D) // 4
        c_norm = (cx * cx + cx * cy + t * cy * cy).astype(float)
    else:
        c_norm = (cx * cx + ring.D * cy * cy).astype(float)
    return ce, de, c_norm


def _heights(ce, de, c_norm, z: complex, lam: float):
    q = ce * z + de
    omega = q.real**2 + q.imag**2 + c_norm * lam * lam
    return q, omega, lam / omega


def _power(heights: np.ndarray, expo: complex):
    if expo.imag == 0:
        return heights ** expo.real
    return np.exp(expo * np.log(heights))


def _tail_estimate(n_terms: int, omega_bound: float, lam: float, s: complex,
                   index_div: int) -> float:
    """Integral-comparison tail: the coset count fits C * X^2, each omitted
    term is at most (lam / Omega)^(1+Re s)."""
    if n_terms == 0:
        return math.inf
    sigma = complex(s).real
    kappa = n_terms / omega_bound**2
    return (
        2.0 * kappa * lam ** (1.0 + sigma) * omega_bound ** (1.0 - sigma)
        / ((sigma - 1.0) * index_div)
    )


def _warn_if_tail_large(value: complex, tail: float) -> None:
    if tail > 0.1 * abs(value):
        warnings.warn(
            f"tail estimate {tail:.3g} exceeds 10% of |value| {abs(value):.3g}",
            TailWarning,
            stacklevel=3,
        )


def _series_value(params: SeriesParams, point: PointH3, terms, index_div: int,
                  threads: int) -> SeriesValue:
    value = complex(blocked_sum(terms, threads=threads)) / index_div
    tail = _tail_estimate(
        len(terms), params.omega_bound, point.lam, params.s, index_div
    )
    _warn_if_tail_large(value, tail)
    return SeriesValue(
        params=params,
        argument=point,
        value=value,
        n_terms=len(terms),
        tail_estimate=tail,
    )


def f_lkm(idx: WignerIndex, g: MatrixSL2, s: complex) -> complex:
    """Single summand: conjugated Wigner coefficient of the inverse spin
    image of the rotation part of g, times height(g)^(1+s)."""
    if not complex(s).real > 1:
        raise ValueError("Re(s) > 1 required")
    coords = iwasawa(g)
    A_inv = coords.A.inverse()
    R = spin_cover_components(A_inv.alpha, A_inv.beta)
    theta, chi, phi_ = euler_extract_batch(R)
    d = wigner_D_from_angles(idx.l, idx.k, idx.m, theta, chi, phi_)
    return complex(np.conjugate(d)) * coords.height ** (1.0 + complex(s))


def _frame_series_terms(ring, idx, z, lam, K, s, rows, conj_of_inverse=True):
    """Summands of the frame series at n[z]a[lam]K over the given rows."""
    ce, de, c_norm = _embed_rows(ring, rows)
    q, omega, heights = _heights(ce, de, c_norm, z, lam)
    if idx.l == 0:
        return _power(heights, 1.0 + complex(s))
    root = np.sqrt(omega)
    alpha = q.conjugate() / root
    beta = (-lam) * ce.conjugate() / root
    if not K.is_identity:
        alpha, beta = (
            alpha * K.alpha - beta * K.beta.conjugate(),
            alpha * K.beta + beta * K.alpha.conjugate(),
        )
    # inverse of the SU(2) element, then its rotation image
    R = spin_cover_components(alpha.conjugate(), -beta)
    theta, chi, phi_ = euler_extract_batch(R)
    d = wigner_D_from_angles(idx.l, idx.k, idx.m, theta, chi, phi_)
    return np.conjugate(d) * _power(heights, 1.0 + complex(s))


def eisenstein_hat(
    ring: RingSpec,
    idx: WignerIndex,
    g: MatrixSL2,
    s: complex,
    omega_bound: float,
    convention: str = "sl",
    threads: int = 1,
    cache_path=None,
) -> SeriesValue:
    """Partial sum of the frame series at an arbitrary frame g.

    The coset list is truncated by Omega at the base point g(j); the sum
    is divided by the unipotent index.
    """
    params = SeriesParams(idx=idx, s=complex(s), omega_bound=omega_bound, ring=ring)
    coords = iwasawa(g.embed())
    point = PointH3(coords.z, coords.height)
    rows, _ = cached_coset_rows(cache_path, ring, point, omega_bound, convention)
    terms = _frame_series_terms(ring, idx, point.z, point.lam, coords.A, s, rows)
    return _series_value(
        params, point, terms, unipotent_index(ring, convention), threads
    )


def eisenstein_E(
    ring: RingSpec,
    idx: WignerIndex,
    P: PointH3,
    s: complex,
    omega_bound: float,
    convention: str = "sl",
    threads: int = 1,
    cache_path=None,
) -> SeriesValue:
    """The frame series projected to the half-space: the evaluation at the
    upper-triangular frame n[z]a[lam], one code path with eisenstein_hat."""
    return eisenstein_hat(
        ring, idx, frame_matrix(P), s, omega_bound, convention, threads, cache_path
    )


def series_H(
    ring: RingSpec,
    idx: WignerIndex,
    P: PointH3,
    s: complex,
    omega_bound: float,
    convention: str = "sl",
    threads: int = 1,
    cache_path=None,
) -> SeriesValue:
    """Rotation-twisted companion series over the identical coset list.

    Uses the inverse frame rotation of each representative at P in place
    of the spin image; termwise it equals the frame series up to the
    factor (-1)^(k+m), so the two agree exactly at matched truncations.
    """
    params = SeriesParams(idx=idx, s=complex(s), omega_bound=omega_bound, ring=ring)
    rows, _ = cached_coset_rows(cache_path, ring, P, omega_bound, convention)
    ce, de, c_norm = _embed_rows(ring, rows)
    _, _, heights = _heights(ce, de, c_norm, P.z, P.lam)
    if idx.l == 0:
        terms = _power(heights, 1.0 + complex(s))
    else:
        R = frame_rotation_components(ce, de, P.z, P.lam)
        R_inv = np.swapaxes(R, -1, -2)
        theta, chi, phi_ = euler_extract_batch(R_inv)
        d = wigner_D_from_angles(idx.l, idx.k, idx.m, theta, chi, phi_)
        terms = np.conjugate(d) * _power(heights, 1.0 + complex(s))
    return _series_value(
        params, P, terms, unipotent_index(ring, convention), threads
    )


def classical_E(
    ring: RingSpec,
    P: PointH3,
    s: complex,
    omega_bound: float,
    convention: str = "sl",
    threads: int = 1,
    cache_path=None,
) -> SeriesValue:
    """Plain height series sum Im(sigma P)^(1+s) over the coset list
    (no unipotent-index division)."""
    params = SeriesParams(
        idx=WignerIndex(0, 0, 0), s=complex(s), omega_bound=omega_bound, ring=ring
    )
    rows, _ = cached_coset_rows(cache_path, ring, P, omega_bound, convention)
    ce, de, c_norm = _embed_rows(ring, rows)
    _, _, heights = _heights(ce, de, c_norm, P.z, P.lam)
    terms = _power(heights, 1.0 + complex(s))
    return _series_value(params, P, terms, 1, threads)


def truncated_E(
    ring: RingSpec,
    P: PointH3,
    s: complex,
    T_height: float,
    omega_bound: float,
    zeta_cutoff: int = 200_000,
    convention: str = "psl",
    threads: int = 1,
) -> complex:
    """Classical series minus its constant term lam^(1+s) + phi(s) lam^(1-s)
    on the region lam >= T_height; unchanged below.

    Defaults to the projective convention, under which the constant term
    of the classical series is exactly the subtracted expression whenever
    the units are just +-1 (the subtraction is then a true detrending).
    """
    base = classical_E(ring, P, s, omega_bound, convention, threads).value
    if P.lam < T_height:
        return base
    s = complex(s)
    if s.imag == 0:
        s = s.real
    alpha = P.lam ** (1 + s) + zeta_phi(ring, s, zeta_cutoff) * P.lam ** (1 - s)
    return base - alpha


def dual_lattice_coords(ring: RingSpec, w: complex) -> tuple[float, float]:
    """Coordinates of w on the dual basis; integers iff w is a dual point."""
    # pairing of w against the lattice basis {1, omega}
    m1 = w.real * 1.0 + w.imag * 0.0
    m2 = w.real * ring.omega.real + w.imag * ring.omega.imag
    return m1, m2


def dual_lattice_point(ring: RingSpec, m1: int, m2: int) -> complex:
    """The dual-lattice point with integer coordinates (m1, m2)."""
    b1, b2 = ring.dual_basis
    return m1 * b1 + m2 * b2


def fourier_coeff(
    ring: RingSpec,
    idx: WignerIndex,
    lam: float,
    s: complex,
    w: complex,
    omega_bound: float,
    quadrature_order: int = 32,
    convention: str = "sl",
    threads: int = 1,
) -> complex:
    """Torus Fourier coefficient of the projected series at height lam.

    Integrates over the fundamental parallelogram with the tensor-product
    periodic trapezoid rule (spectrally accurate for this periodic,
    analytic integrand); w must lie on the dual lattice.
    """
    return _fourier_report(
        ring, idx, lam, s, w, omega_bound, quadrature_order, convention, threads
    )["value"]


def _fourier_report(
    ring, idx, lam, s, w, omega_bound, quadrature_order, convention, threads
) -> dict:
    m1, m2 = dual_lattice_coords(ring, w)
    if abs(m1 - round(m1)) > 1e-9 or abs(m2 - round(m2)) > 1e-9:
        raise ValueError(f"w={w} is not a dual lattice point (coords {m1}, {m2})")
    n = quadrature_order
    vals = np.empty((n, n), dtype=complex)
    max_tail = 0.0
    n_terms = 0
    for i in range(n):
        for j in range(n):
            z = (i / n) + (j / n) * ring.omega
            sv = eisenstein_E(
                ring, idx, PointH3(z, lam), s, omega_bound, convention, threads
            )
            phase = math.e ** (
                -2j * math.pi * (z.real * w.real + z.imag * w.imag)
            )
            vals[i, j] = sv.value * phase
            max_tail = max(max_tail, sv.tail_estimate)
            n_terms = max(n_terms, sv.n_terms)
    value = complex(blocked_sum(vals.ravel(), threads=1)) / (n * n)
    return {
        "value": value,
        "max_tail_estimate": max_tail,
        "max_n_terms": n_terms,
        "order": n,
    }


def richardson3(v1: complex, v2: complex, v3: complex) -> complex:
    """Limit at 0 of a quadratic through samples at eps, eps/2, eps/4."""
    return (v1 - 6.0 * v2 + 8.0 * v3) / 3.0


def residue_probe(
    ring: RingSpec,
    P: PointH3,
    omega_bound: float,
    eps_values=(0.5, 0.25, 0.125),
    threads: int = 1,
) -> dict:
    """Estimate of the residue of the classical series at the edge s = 1.

    Evaluates eps * E(P, 1 + eps) at the classical normalization (one
    coset per projective pair, matching the classical residue statement),
    completes each partial sum by its own declared tail estimate, and
    Richardson-extrapolates in eps.  The tail completion uses only the
    fitted coset-count constant carried by the evaluation; truncating a
    series this close to its pole leaves an order-one tail that no
    polynomial extrapolation in eps could remove.
    """
    rows = coset_rows(ring, P, omega_bound, convention="psl")
    ce, de, c_norm = _embed_rows(ring, rows)
    _, _, heights = _heights(ce, de, c_norm, P.z, P.lam)
    raw = []
    completed = []
    for eps in eps_values:
        s = 1.0 + eps
        value = float(blocked_sum(heights ** (1.0 + s), threads=threads))
        tail = _tail_estimate(heights.size, omega_bound, P.lam, s, 1)
        raw.append(eps * value)
        completed.append(eps * (value + tail))
    return {
        "eps": list(eps_values),
        "scaled_partial": raw,
        "scaled_tail_completed": completed,
        "extrapolated": float(richardson3(*completed[:3]).real)
        if len(completed) >= 3
        else None,
        "extrapolated_partial_only": float(richardson3(*raw[:3]).real)
        if len(raw) >= 3
        else None,
        "n_terms": int(heights.size),
    }
