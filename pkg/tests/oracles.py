"""Independent oracles used by the test suite.

Everything here is deliberately naive: brute-force searches, Euclidean
gcd where the ring is norm-Euclidean, character sums, and textbook
quadrature rules.  None of it shares code with the library paths it
checks.
"""

from __future__ import annotations

import math

import numpy as np

from bianchi.number_field import QuadInt, RingSpec

EUCLIDEAN_D = (1, 2, 3, 7, 11)


def euclid_divmod(a: QuadInt, b: QuadInt) -> tuple[QuadInt, QuadInt]:
    """Division with remainder in a norm-Euclidean ring (D in 1,2,3,7,11)."""
    nb = b.norm()
    # exact rational coordinates of a/b on the {1, omega} basis
    num = a * b.conj()
    u, v = num.x, num.y
    best = None
    for qx in (math.floor(u / nb), math.ceil(u / nb)):
        for qy in (math.floor(v / nb), math.ceil(v / nb)):
            q = QuadInt(qx, qy, a.D)
            r = a - q * b
            if best is None or r.norm() < best[1].norm():
                best = (q, r)
    q, r = best
    assert r.norm() < nb, "ring is not Euclidean for this pair"
    return q, r


def euclid_gcd(a: QuadInt, b: QuadInt) -> QuadInt:
    """Euclidean gcd; result is defined up to a unit."""
    while not b.is_zero():
        _, r = euclid_divmod(a, b)
        a, b = b, r
    return a


def brute_force_bezout_exists(c: QuadInt, d: QuadInt, box: int = 20) -> bool:
    """One-sided coprimality: search x*c + y*d = 1 over a coefficient box."""
    one = QuadInt(1, 0, c.D)
    for x1 in range(-box, box + 1):
        for x2 in range(-box, box + 1):
            x = QuadInt(x1, x2, c.D)
            lhs = x * c
            # solve y*d = 1 - lhs by scanning
            for y1 in range(-box, box + 1):
                for y2 in range(-box, box + 1):
                    if lhs + QuadInt(y1, y2, c.D) * d == one:
                        return True
    return False


def naive_coset_scan(ring: RingSpec, z: complex, lam: float, bound: float):
    """All coprime (c, d) with |cz+d|^2 + |c|^2 lam^2 <= bound, by raw scan."""
    from bianchi.number_field import is_coprime

    out = []
    lim = int(math.isqrt(int(bound / min(lam * lam, 1.0)))) + abs(int(z.real)) + 3
    for cx in range(-lim, lim + 1):
        for cy in range(-lim, lim + 1):
            c = ring.element(cx, cy)
            if c.norm() * lam * lam > bound:
                continue
            for dx in range(-lim - 2, lim + 3):
                for dy in range(-lim - 2, lim + 3):
                    d = ring.element(dx, dy)
                    if c.is_zero() and d.is_zero():
                        continue
                    om = abs(c.embed() * z + d.embed()) ** 2 + c.norm() * lam * lam
                    if om <= bound and is_coprime(c, d):
                        out.append((cx, cy, dx, dy))
    return sorted(out)


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for any integer n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # factor out twos from n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi symbol loop
    result = sign
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def dirichlet_l(disc: int, s: float, terms: int = 200_000) -> float:
    """L(chi_disc, s) by direct character sum."""
    n = np.arange(1, terms + 1)
    chi = np.array([kronecker_symbol(disc, int(k)) for k in n], dtype=float)
    return float(np.sum(chi / n.astype(float) ** s))


def sphere_quadrature(n_theta: int, n_phi: int):
    """Gauss-Legendre in cos(theta) x trapezoid in phi; returns nodes and weights.

    Integrates f(theta, phi) sin(theta) dtheta dphi exactly enough for
    smooth integrands: sum(w * f(theta, phi)).
    """
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    wphi = 2.0 * math.pi / n_phi
    T, P = np.meshgrid(theta, phi, indexing="ij")
    W = np.broadcast_to((wx * wphi)[:, None], T.shape)
    return T.ravel(), P.ravel(), W.ravel()
