"""Dedekind zeta sums, the zeroth-Fourier-coefficient ratio, and orbifold
volumes for the nine class-number-one fields.

Class number one makes every ideal principal with |units| generators, so
the ideal sum collapses to a lattice sum over nonzero ring elements
divided by the unit count.  Everything is evaluated in the convergent
region Re(s) > 1; no analytic continuation is attempted, and behavior at
the edge is probed from the right by the callers that need it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .number_field import RingSpec


@dataclass(frozen=True)
class ZetaValue:
    """Partial lattice sum with an integral-comparison tail bound."""

    s: complex
    value: complex
    tail_bound: float
    cutoff: int


def _density_constant(ring: RingSpec) -> float:
    """Leading coefficient of #{ideals of norm <= X} ~ C * X."""
    return 2.0 * math.pi / (math.sqrt(abs(ring.discriminant)) * len(ring.units))


def _norm_row_sum(ring: RingSpec, s: complex, cutoff: int) -> complex:
    """Sum of N(alpha)^(-s) over nonzero alpha with N(alpha) <= cutoff.

    Scans lattice rows of constant y in increasing-|y| order and reduces
    per-row partial sums in that fixed order, so results are reproducible.
    """
    D = ring.D
    if D % 4 == 3:
        t = (1 + D) // 4
        y_max = math.isqrt((4 * cutoff) // D)
    else:
        t = None
        y_max = math.isqrt(cutoff // D)
    x_max = math.isqrt(cutoff)
    real_s = s.imag == 0
    sigma = s.real if real_s else s
    total = 0.0 if real_s else 0.0j
    for y in range(-y_max, y_max + 1):
        if t is not None:
            rem = cutoff - (D * y * y + 3) // 4
            if rem < 0:
                continue
            h = math.isqrt(rem) + 2
            xs = np.arange(-(y // 2) - h, -(y // 2) + h + 1, dtype=np.int64)
            norms = xs * xs + xs * y + t * y * y
        else:
            xs = np.arange(-x_max, x_max + 1, dtype=np.int64)
            norms = xs * xs + D * y * y
        keep = (norms >= 1) & (norms <= cutoff)
        if not np.any(keep):
            continue
        n = norms[keep].astype(float)
        if real_s:
            total += float(np.sum(n ** (-sigma)))
        else:
            total += complex(np.sum(np.exp(-sigma * np.log(n))))
    return total


def dedekind_zeta(ring: RingSpec, s: complex, cutoff: int = 100_000) -> ZetaValue:
    """Partial Dedekind zeta sum (1/|units|) sum N(alpha)^(-s), N <= cutoff."""
    s = complex(s)
    if not s.real > 1:
        raise ValueError("dedekind_zeta requires Re(s) > 1; no continuation here")
    if cutoff < 10:
        raise ValueError("cutoff must be at least 10")
    value = _norm_row_sum(ring, s, cutoff) / len(ring.units)
    tail = _density_constant(ring) * cutoff ** (1.0 - s.real) / (s.real - 1.0)
    return ZetaValue(s=s, value=value, tail_bound=tail, cutoff=cutoff)


def phi(ring: RingSpec, s: complex, cutoff: int = 100_000) -> complex:
    """Ratio (pi / (s |Lambda_D|)) zeta_D(s) / zeta_D(s+1).

    This is the coefficient multiplying lam^(1-s) in the constant term of
    the classical coset series at height lam.
    """
    s = complex(s)
    if s.imag == 0:
        s = s.real
    num = dedekind_zeta(ring, s, cutoff).value
    den = dedekind_zeta(ring, s + 1, cutoff).value
    pref = math.pi / (s * ring.covolume)
    return pref * num / den


def volume_cutoff(ring: RingSpec, tol: float = 1e-6) -> int:
    """Lattice cutoff making the orbifold-volume error below tol."""
    pref = abs(ring.discriminant) ** 1.5 / (4.0 * math.pi**2)
    # volume tail = pref * zeta tail = pref * C_D / cutoff at s = 2
    return max(10_000, math.ceil(2.0 * pref * _density_constant(ring) / tol))


def orbifold_volume(ring: RingSpec, tol: float = 1e-6) -> float:
    """Hyperbolic volume of the quotient orbifold, |d|^{3/2} zeta_D(2) / (4 pi^2)."""
    z2 = dedekind_zeta(ring, 2.0, volume_cutoff(ring, tol)).value
    return abs(ring.discriminant) ** 1.5 / (4.0 * math.pi**2) * float(z2.real if isinstance(z2, complex) else z2)
