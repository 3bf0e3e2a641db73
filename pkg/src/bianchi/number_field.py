"""Exact arithmetic in the rings of integers of the nine imaginary
quadratic fields of class number one.

Elements are stored on the integral basis {1, omega_D}, where omega_D is
i*sqrt(D) for D = 1, 2 mod 4 and (1 + i*sqrt(D))/2 for D = 3 mod 4.  A
single code path then serves both congruence classes.  Coprimality and
Bezout solving go through Hermite normal form of the ideal's Z-lattice,
which stays exact in the four non-Euclidean rings (D = 19, 43, 67, 163).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

CLASS_NUMBER_ONE_D = (1, 2, 3, 7, 11, 19, 43, 67, 163)


def _require_supported(D: int) -> None:
    if D not in CLASS_NUMBER_ONE_D:
        raise ValueError(
            f"D={D} unsupported: Q(sqrt(-{D})) does not have class number one"
        )


@lru_cache(maxsize=None)
def omega_value(D: int) -> complex:
    """Complex embedding of the second basis element omega_D."""
    _require_supported(D)
    if D % 4 == 3:
        return complex(0.5, math.sqrt(D) / 2.0)
    return complex(0.0, math.sqrt(D))


@dataclass(frozen=True)
class QuadInt:
    """Element x + y*omega_D of the ring of integers, exact integer pair."""

    x: int
    y: int
    D: int

    def _check_same_ring(self, other: "QuadInt") -> None:
        if self.D != other.D:
            raise ValueError(f"mixed rings: D={self.D} and D={other.D}")

    def __add__(self, other: "QuadInt") -> "QuadInt":
        self._check_same_ring(other)
        return QuadInt(self.x + other.x, self.y + other.y, self.D)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        self._check_same_ring(other)
        return QuadInt(self.x - other.x, self.y - other.y, self.D)

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.x, -self.y, self.D)

    def __mul__(self, other: "QuadInt") -> "QuadInt":
        self._check_same_ring(other)
        a, b, c, d = self.x, self.y, other.x, other.y
        if self.D % 4 == 3:
            # omega^2 = omega - (1 + D)/4
            t = (1 + self.D) // 4
            return QuadInt(a * c - t * b * d, a * d + b * c + b * d, self.D)
        return QuadInt(a * c - self.D * b * d, a * d + b * c, self.D)

    def conj(self) -> "QuadInt":
        """Complex conjugate, re-expressed on the {1, omega} basis."""
        if self.D % 4 == 3:
            return QuadInt(self.x + self.y, -self.y, self.D)
        return QuadInt(self.x, -self.y, self.D)

    def norm(self) -> int:
        """Field norm |x + y*omega|^2, always a nonnegative integer."""
        if self.D % 4 == 3:
            t = (1 + self.D) // 4
            return self.x * self.x + self.x * self.y + t * self.y * self.y
        return self.x * self.x + self.D * self.y * self.y

    def embed(self) -> complex:
        return self.x + self.y * omega_value(self.D)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __repr__(self) -> str:
        return f"QuadInt({self.x}, {self.y}, D={self.D})"


@dataclass(frozen=True)
class RingSpec:
    """The ring of integers O_D with its lattice and unit data.

    The dual basis is taken with respect to the real inner product
    <z, w> = Re(z)Re(w) + Im(z)Im(w) on C = R^2; the two generators pair
    to the Kronecker delta against the lattice basis {1, omega}.
    """

    D: int
    omega: complex
    discriminant: int
    units: tuple[QuadInt, ...]
    covolume: float
    dual_basis: tuple[complex, complex]

    def element(self, x: int, y: int) -> QuadInt:
        return QuadInt(x, y, self.D)

    @property
    def zero(self) -> QuadInt:
        return QuadInt(0, 0, self.D)

    @property
    def one(self) -> QuadInt:
        return QuadInt(1, 0, self.D)

    @property
    def omega_int(self) -> QuadInt:
        return QuadInt(0, 1, self.D)

    def lattice_points_in_disk(self, center: complex, radius: float):
        """(x, y) integer pairs with |x + y*omega - center| <= radius.

        The bounding ranges are padded by one lattice unit, then the exact
        inequality is applied, so no point is missed to rounding fuzz.
        """
        if radius < 0:
            return
        om = self.omega
        wi = om.imag
        y_lo = math.floor((center.imag - radius) / wi) - 1
        y_hi = math.ceil((center.imag + radius) / wi) + 1
        r2 = radius * radius
        for y in range(y_lo, y_hi + 1):
            rem = r2 - (y * wi - center.imag) ** 2
            if rem < 0:
                continue
            half = math.sqrt(rem)
            cx = center.real - y * om.real
            for x in range(math.floor(cx - half) - 1, math.ceil(cx + half) + 2):
                dx = x + y * om.real - center.real
                dy = y * wi - center.imag
                if dx * dx + dy * dy <= r2:
                    yield x, y


@lru_cache(maxsize=None)
def ring_spec(D: int) -> RingSpec:
    """Fully populated ring data for a class-number-one D."""
    _require_supported(D)
    om = omega_value(D)
    disc = -D if D % 4 == 3 else -4 * D
    units = tuple(
        sorted(
            (
                QuadInt(x, y, D)
                for x in range(-2, 3)
                for y in range(-2, 3)
                if QuadInt(x, y, D).norm() == 1
            ),
            key=lambda u: (u.x, u.y),
        )
    )
    covolume = math.sqrt(abs(disc)) / 2.0
    # rows of the inverse-transpose of the real basis matrix [1, omega]
    dual1 = complex(1.0, -om.real / om.imag)
    dual2 = complex(0.0, 1.0 / om.imag)
    return RingSpec(
        D=D,
        omega=om,
        discriminant=disc,
        units=units,
        covolume=covolume,
        dual_basis=(dual1, dual2),
    )


def _hnf_with_transform(rows: list[tuple[int, int]]):
    """Row Hermite normal form of an integer n x 2 matrix with transform.

    Returns (H, U) with U unimodular, U @ M = H, pivots positive and
    entries above a pivot reduced modulo it.  Exact integer arithmetic
    throughout (Python integers do not overflow).
    """
    n = len(rows)
    M = [list(r) for r in rows]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_sub(i: int, j: int, q: int) -> None:
        # row i -= q * row j
        M[i][0] -= q * M[j][0]
        M[i][1] -= q * M[j][1]
        for k in range(n):
            U[i][k] -= q * U[j][k]

    def row_swap(i: int, j: int) -> None:
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def row_neg(i: int) -> None:
        M[i][0] = -M[i][0]
        M[i][1] = -M[i][1]
        for k in range(n):
            U[i][k] = -U[i][k]

    pivot_row = 0
    for col in range(2):
        while True:
            live = [i for i in range(pivot_row, n) if M[i][col] != 0]
            if not live:
                break
            i_min = min(live, key=lambda i: abs(M[i][col]))
            row_swap(pivot_row, i_min)
            done = True
            for i in range(pivot_row + 1, n):
                if M[i][col] != 0:
                    q = M[i][col] // M[pivot_row][col]
                    row_sub(i, pivot_row, q)
                    if M[i][col] != 0:
                        done = False
            if done:
                break
        if pivot_row < n and M[pivot_row][col] != 0:
            if M[pivot_row][col] < 0:
                row_neg(pivot_row)
            for i in range(pivot_row):
                q = M[i][col] // M[pivot_row][col]
                if q != 0:
                    row_sub(i, pivot_row, q)
            pivot_row += 1
    return M, U


def _ideal_generators(c: QuadInt, d: QuadInt) -> list[tuple[int, int]]:
    om = QuadInt(0, 1, c.D)
    gens = [c, c * om, d, d * om]
    return [(g.x, g.y) for g in gens]


def ideal_index(c: QuadInt, d: QuadInt) -> int:
    """Index in O_D of the Z-lattice spanned by the ideal (c, d)."""
    c._check_same_ring(d)
    if c.is_zero() and d.is_zero():
        raise ValueError("(0, 0) generates the zero ideal")
    H, _ = _hnf_with_transform(_ideal_generators(c, d))
    return H[0][0] * H[1][1]


def is_coprime(c: QuadInt, d: QuadInt) -> bool:
    """True iff the O_D-ideal (c, d) is the whole ring, decided exactly."""
    return ideal_index(c, d) == 1


def bezout(c: QuadInt, d: QuadInt) -> tuple[QuadInt, QuadInt]:
    """Exact (x, y) with x*c + y*d = 1, valid in all nine rings.

    Derived from the HNF transformation matrix, so no Euclidean division
    is ever attempted; fails if the inputs are not coprime.
    """
    c._check_same_ring(d)
    D = c.D
    one = QuadInt(1, 0, D)
    if c.is_zero():
        if not d.is_unit():
            raise ValueError("inputs are not coprime")
        return QuadInt(0, 0, D), d.conj()
    if d.is_zero():
        if not c.is_unit():
            raise ValueError("inputs are not coprime")
        return c.conj(), QuadInt(0, 0, D)
    H, U = _hnf_with_transform(_ideal_generators(c, d))
    if H[0][0] * H[1][1] != 1:
        raise ValueError("inputs are not coprime")
    # H[0] = (1, 0) is the ring unit; U[0] holds its generator coordinates.
    a1, a2, a3, a4 = U[0]
    x = QuadInt(a1, a2, D)
    y = QuadInt(a3, a4, D)
    if x * c + y * d != one:
        raise AssertionError("Bezout identity violated; HNF transform is wrong")
    return x, y
