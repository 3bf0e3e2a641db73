"""Upper half-space model of hyperbolic 3-space and the SL(2,C) action.

Points are z + lam*j with z complex and lam > 0.  A 2x2 determinant-one
matrix acts by the quaternionic Mobius formula; the Iwasawa decomposition
g = n[z] a[1/t] A splits any matrix into a horizontal translation, a
dilation and an SU(2) part.

Naming note: the quantity t = |c|^2 + |d|^2 and the geometric height of
g(j), which equals 1/t, are easy to confuse; IwasawaCoords stores both
under separate names.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .number_field import QuadInt


@dataclass(frozen=True)
class PointH3:
    """Point z + lam*j of the upper half-space; lam is the height."""

    z: complex
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"height must be positive, got {self.lam}")


@dataclass(frozen=True)
class SU2Matrix:
    """Unitary determinant-one matrix ((alpha, beta), (-conj(beta), conj(alpha)))."""

    alpha: complex
    beta: complex

    def inverse(self) -> "SU2Matrix":
        # conjugate transpose
        return SU2Matrix(self.alpha.conjugate(), -self.beta)

    def __matmul__(self, other: "SU2Matrix") -> "SU2Matrix":
        a1, b1 = self.alpha, self.beta
        a2, b2 = other.alpha, other.beta
        return SU2Matrix(a1 * a2 - b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())

    def unitarity_defect(self) -> float:
        return abs(abs(self.alpha) ** 2 + abs(self.beta) ** 2 - 1.0)

    @property
    def is_identity(self) -> bool:
        return self.alpha == 1 and self.beta == 0


IDENTITY_SU2 = SU2Matrix(1.0 + 0.0j, 0.0 + 0.0j)


def _embed(v) -> complex:
    return v.embed() if isinstance(v, QuadInt) else complex(v)


@dataclass(frozen=True)
class MatrixSL2:
    """Determinant-one 2x2 matrix, floating complex or exact QuadInt entries.

    Exact instances keep group elements of SL(2, O_D) overflow-free until
    they are embedded for analysis; floating instances serve the series
    kernels.
    """

    a: complex | QuadInt
    b: complex | QuadInt
    c: complex | QuadInt
    d: complex | QuadInt

    @property
    def is_exact(self) -> bool:
        return isinstance(self.a, QuadInt)

    def det(self):
        return self.a * self.d - self.b * self.c

    def embed(self) -> "MatrixSL2":
        if not self.is_exact:
            return self
        return MatrixSL2(_embed(self.a), _embed(self.b), _embed(self.c), _embed(self.d))

    def __matmul__(self, other: "MatrixSL2") -> "MatrixSL2":
        if self.is_exact != other.is_exact:
            self, other = self.embed(), other.embed()
        return MatrixSL2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MatrixSL2":
        # adjugate of a determinant-one matrix
        return MatrixSL2(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "MatrixSL2":
        return MatrixSL2(-self.a, -self.b, -self.c, -self.d)

    def det_defect(self) -> float:
        m = self.embed()
        return abs(m.a * m.d - m.b * m.c - 1.0)


IDENTITY = MatrixSL2(1.0 + 0.0j, 0.0 + 0.0j, 0.0 + 0.0j, 1.0 + 0.0j)


def translation_matrix(w: complex) -> MatrixSL2:
    """n[w]: unipotent upper-triangular matrix translating z by w."""
    return MatrixSL2(1.0 + 0.0j, complex(w), 0.0 + 0.0j, 1.0 + 0.0j)


def scaling_matrix(lam: float) -> MatrixSL2:
    """a[lam] = diag(sqrt(lam), 1/sqrt(lam)); moves j to lam*j."""
    if not lam > 0:
        raise ValueError("scaling parameter must be positive")
    r = math.sqrt(lam)
    return MatrixSL2(complex(r), 0.0 + 0.0j, 0.0 + 0.0j, complex(1.0 / r))


def frame_matrix(P: PointH3, A: SU2Matrix = IDENTITY_SU2) -> MatrixSL2:
    """n[z] a[lam] A: the frame over P with rotation part A."""
    g = translation_matrix(P.z) @ scaling_matrix(P.lam)
    if A.is_identity:
        return g
    K = MatrixSL2(A.alpha, A.beta, -A.beta.conjugate(), A.alpha.conjugate())
    return g @ K


def mobius_act_with_denominator(g: MatrixSL2, P: PointH3) -> tuple[PointH3, float]:
    """Image of P under g together with Omega = |cz+d|^2 + |c|^2 lam^2.

    Omega is the reciprocal of the height gain and is reused as the
    truncation variable by the series code.
    """
    m = g.embed()
    a, b, c, d = m.a, m.b, m.c, m.d
    z, lam = P.z, P.lam
    cz_d = c * z + d
    omega = abs(cz_d) ** 2 + abs(c) ** 2 * lam * lam
    num = (a * z + b) * cz_d.conjugate() + a * c.conjugate() * lam * lam
    return PointH3(num / omega, lam / omega), omega


def mobius_act(g: MatrixSL2, P: PointH3) -> PointH3:
    return mobius_act_with_denominator(g, P)[0]


@dataclass(frozen=True)
class IwasawaCoords:
    """Coordinates (z, t, A) with g = n[z] a[1/t] A and height = 1/t = Im g(j)."""

    z: complex
    t: float
    height: float
    A: SU2Matrix

    def reassemble(self) -> MatrixSL2:
        return frame_matrix(PointH3(self.z, self.height), self.A)


def iwasawa(g: MatrixSL2) -> IwasawaCoords:
    """Unique Iwasawa decomposition of a determinant-one matrix."""
    m = g.embed()
    a, b, c, d = m.a, m.b, m.c, m.d
    t = abs(c) ** 2 + abs(d) ** 2
    if t == 0:
        raise ValueError("matrix has zero bottom row")
    rt = math.sqrt(t)
    z = (a * c.conjugate() + b * d.conjugate()) / t
    A = SU2Matrix(d.conjugate() / rt, -c.conjugate() / rt)
    return IwasawaCoords(z=z, t=t, height=1.0 / t, A=A)


def t_part(g: MatrixSL2) -> SU2Matrix:
    """The SU(2) factor of the Iwasawa decomposition."""
    return iwasawa(g).A


def geodesic_flow(g: MatrixSL2, T: complex) -> MatrixSL2:
    """Left multiplication by diag(e^{T/2}, e^{-T/2})."""
    e = cmath.exp(T / 2.0)
    return MatrixSL2(e, 0.0 + 0.0j, 0.0 + 0.0j, 1.0 / e) @ g.embed()


def horocycle_flow(g: MatrixSL2, S: complex) -> MatrixSL2:
    """Left multiplication by the unipotent matrix n[S]."""
    return translation_matrix(S) @ g.embed()


def hyperbolic_distance(P: PointH3, Q: PointH3) -> float:
    """Distance in the metric (dx^2 + dy^2 + dlam^2) / lam^2."""
    num = abs(P.z - Q.z) ** 2 + (P.lam - Q.lam) ** 2
    return math.acosh(1.0 + num / (2.0 * P.lam * Q.lam))
