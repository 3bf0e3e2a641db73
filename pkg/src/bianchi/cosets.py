"""Enumeration of unipotent-coset representatives and group elements.

A coset of the translation subgroup in SL(2, O_D) is determined by its
coprime bottom row (c, d).  Series truncate by the quantity
Omega(c, d; P) = |cz + d|^2 + |c|^2 lam^2 at the evaluation point, because
the summands are (lam / Omega)^(1+s): Omega-truncation gives monotone,
estimable tails.

The scan enumerates c over an exact-norm disk, then d over a shifted
disk per c; bounding boxes are padded by one lattice unit and the exact
inequality applied afterwards, so floating fuzz cannot drop a row.  The
returned order is canonical -- by (N(c), N(d), then integer coordinates)
-- which makes every downstream sum reproducible.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .hyperbolic3 import MatrixSL2, PointH3
from .number_field import QuadInt, RingSpec, bezout

_MAX_COORD = 1 << 25  # int64 minors stay exact below this

CONVENTIONS = ("sl", "psl")


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def _omega_mul_rows(ring: RingSpec, x: np.ndarray, y: np.ndarray):
    """Coordinates of (x + y*omega) * omega."""
    if ring.D % 4 == 3:
        t = (1 + ring.D) // 4
        return -t * y, x + y
    return -ring.D * y, x


def _norm_rows(ring: RingSpec, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if ring.D % 4 == 3:
        t = (1 + ring.D) // 4
        return x * x + x * y + t * y * y
    return x * x + ring.D * y * y


def _coprime_mask(ring: RingSpec, cx, cy, dx, dy) -> np.ndarray:
    """Vectorized exact coprimality: the ideal (c, d) has Z-lattice index
    gcd of the 2x2 minors of its four generators c, c*omega, d, d*omega."""
    for arr in (cx, cy, dx, dy):
        if arr.size and np.max(np.abs(arr)) >= _MAX_COORD:
            raise OverflowError("lattice coordinates too large for exact int64 minors")
    ox, oy = _omega_mul_rows(ring, cx, cy)
    px, py = _omega_mul_rows(ring, dx, dy)
    gens = ((cx, cy), (ox, oy), (dx, dy), (px, py))
    index = np.zeros(cx.shape, dtype=np.int64)
    for i in range(4):
        for j in range(i + 1, 4):
            minor = gens[i][0] * gens[j][1] - gens[j][0] * gens[i][1]
            index = np.gcd(index, np.abs(minor))
    return index == 1


def _disk_lattice_rows(ring: RingSpec, center: complex, radius: float):
    """Integer pairs (x, y) with |x + y*omega - center| <= radius, vectorized."""
    if radius < 0:
        return (np.empty(0, dtype=np.int64),) * 2
    om = ring.omega
    wi = om.imag
    y_lo = math.floor((center.imag - radius) / wi) - 1
    y_hi = math.ceil((center.imag + radius) / wi) + 1
    ys = np.arange(y_lo, y_hi + 1, dtype=np.int64)
    rem = radius * radius - (ys * wi - center.imag) ** 2
    keep = rem >= 0
    ys = ys[keep]
    half = np.sqrt(rem[keep])
    cxs = center.real - ys * om.real
    x_lo = np.floor(cxs - half).astype(np.int64) - 1
    x_hi = np.ceil(cxs + half).astype(np.int64) + 1
    counts = x_hi - x_lo + 1
    total = int(counts.sum())
    if total == 0:
        return (np.empty(0, dtype=np.int64),) * 2
    offsets = np.repeat(np.cumsum(counts) - counts, counts)
    x = np.repeat(x_lo, counts) + (np.arange(total, dtype=np.int64) - offsets)
    y = np.repeat(ys, counts)
    ex = x + y * om.real - center.real
    ey = y * wi - center.imag
    keep = ex * ex + ey * ey <= radius * radius
    return x[keep], y[keep]


def coset_rows(
    ring: RingSpec,
    P: PointH3,
    omega_bound: float,
    convention: str = "sl",
):
    """Bottom rows (cx, cy, dx, dy) of all cosets with Omega <= omega_bound.

    Returns four int64 arrays in canonical order.  Under the "psl"
    convention only one of each pair {(c, d), (-c, -d)} is kept.
    """
    _check_convention(convention)
    if not omega_bound > 0:
        raise ValueError("omega_bound must be positive")
    z, lam = P.z, P.lam
    out = []
    cxs, cys = _disk_lattice_rows(ring, 0j, math.sqrt(omega_bound) / lam)
    c_norms = _norm_rows(ring, cxs, cys)
    order = np.lexsort((cys, cxs, c_norms))
    for i in order:
        cx, cy = int(cxs[i]), int(cys[i])
        rem = omega_bound - float(c_norms[i]) * lam * lam
        if rem < 0:
            continue
        ce = cx + cy * ring.omega
        dx, dy = _disk_lattice_rows(ring, -ce * z, math.sqrt(rem))
        if dx.size == 0:
            continue
        de = dx + dy * ring.omega.real + 1j * dy * ring.omega.imag
        q = ce * z + de
        omega = q.real**2 + q.imag**2 + float(c_norms[i]) * lam * lam
        keep = omega <= omega_bound
        dx, dy = dx[keep], dy[keep]
        if dx.size == 0:
            continue
        if cx == 0 and cy == 0:
            keep = ~((dx == 0) & (dy == 0))
            dx, dy = dx[keep], dy[keep]
        carr = np.full(dx.shape, cx, dtype=np.int64)
        cyarr = np.full(dx.shape, cy, dtype=np.int64)
        keep = _coprime_mask(ring, carr, cyarr, dx, dy)
        if np.any(keep):
            out.append((carr[keep], cyarr[keep], dx[keep], dy[keep]))
    if not out:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy(), empty.copy()
    cx = np.concatenate([o[0] for o in out])
    cy = np.concatenate([o[1] for o in out])
    dx = np.concatenate([o[2] for o in out])
    dy = np.concatenate([o[3] for o in out])
    if convention == "psl":
        lead = np.where(
            cx != 0, np.sign(cx), np.where(cy != 0, np.sign(cy), np.where(dx != 0, np.sign(dx), np.sign(dy)))
        )
        keep = lead > 0
        cx, cy, dx, dy = cx[keep], cy[keep], dx[keep], dy[keep]
    nc = _norm_rows(ring, cx, cy)
    nd = _norm_rows(ring, dx, dy)
    order = np.lexsort((dy, dx, cy, cx, nd, nc))
    return cx[order], cy[order], dx[order], dy[order]


@dataclass
class CosetRep:
    """One coset representative: bottom row (c, d), completed on demand."""

    c: QuadInt
    d: QuadInt
    weight: float
    _sigma: MatrixSL2 | None = field(default=None, repr=False)

    @property
    def sigma(self) -> MatrixSL2:
        """Exact determinant-one completion; two completions of the same
        row differ by an upper unipotent factor, i.e. the same coset."""
        if self._sigma is None:
            x, y = bezout(self.c, self.d)
            self._sigma = MatrixSL2(y, -x, self.c, self.d)
        return self._sigma


def enumerate_cosets(
    ring: RingSpec,
    P: PointH3,
    omega_bound: float,
    convention: str = "sl",
) -> list[CosetRep]:
    """Coset representatives with Omega(c, d; P) <= omega_bound, in
    canonical order.  Unit multiples (eps*c, eps*d) are distinct cosets
    and all appear; the unipotent-index division in the series
    normalization compensates."""
    cx, cy, dx, dy = coset_rows(ring, P, omega_bound, convention)
    reps = []
    for i in range(cx.size):
        c = ring.element(int(cx[i]), int(cy[i]))
        d = ring.element(int(dx[i]), int(dy[i]))
        reps.append(CosetRep(c=c, d=d, weight=float(c.norm() + d.norm())))
    return reps


def enumerate_group(ring: RingSpec, entry_norm_bound: float) -> list[MatrixSL2]:
    """All of SL(2, O_D) with every entry norm <= entry_norm_bound.

    Rows (c, d) are completed by a Bezout base solution; the remaining
    completions form the family (a + t c, b + t d) over t in O_D, which
    is scanned exactly.
    """
    if entry_norm_bound < 1:
        raise ValueError("entry_norm_bound must be at least 1")
    bound = float(entry_norm_bound)
    radius = math.sqrt(bound)
    seen = set()
    out = []
    cxs, cys = _disk_lattice_rows(ring, 0j, radius)
    for cx, cy in zip(cxs.tolist(), cys.tolist()):
        c = ring.element(cx, cy)
        dxs, dys = _disk_lattice_rows(ring, 0j, radius)
        carr = np.full(dxs.shape, cx, dtype=np.int64)
        cyarr = np.full(dxs.shape, cy, dtype=np.int64)
        keep = (_norm_rows(ring, dxs, dys) <= bound) & ~((dxs == 0) & (dys == 0) & (cx == 0) & (cy == 0))
        keep &= _coprime_mask(ring, carr, cyarr, dxs, dys)
        for dx, dy in zip(dxs[keep].tolist(), dys[keep].tolist()):
            d = ring.element(dx, dy)
            x, y = bezout(c, d)
            a0, b0 = y, -x
            if c.is_zero():
                center = -b0.embed() / d.embed()
                t_radius = radius / abs(d.embed())
            else:
                center = -a0.embed() / c.embed()
                t_radius = radius / abs(c.embed())
            txs, tys = _disk_lattice_rows(ring, center, t_radius)
            for tx, ty in zip(txs.tolist(), tys.tolist()):
                t = ring.element(tx, ty)
                a = a0 + t * c
                b = b0 + t * d
                if a.norm() > bound or b.norm() > bound:
                    continue
                key = (a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y)
                if key not in seen:
                    seen.add(key)
                    out.append(MatrixSL2(a, b, c, d))
    out.sort(
        key=lambda g: (
            g.c.norm(), g.d.norm(), g.a.norm(), g.b.norm(),
            g.a.x, g.a.y, g.b.x, g.b.y, g.c.x, g.c.y, g.d.x, g.d.y,
        )
    )
    return out


def unipotent_index(ring: RingSpec, convention: str = "sl") -> int:
    """Index of the translation subgroup in the full cusp stabilizer.

    Cosets are indexed by the diagonal unit; under the "psl" convention
    a unit and its negative coincide.
    """
    _check_convention(convention)
    n = len(ring.units)
    return n if convention == "sl" else n // 2


# --- optional binary cache -------------------------------------------------

_CACHE_MAGIC = b"BCOS"
_CACHE_VERSION = 1
_HEADER = struct.Struct("<4sIIB3xddddQ")


def save_coset_rows(path, ring: RingSpec, P: PointH3, omega_bound: float,
                    convention: str, rows) -> None:
    cx, cy, dx, dy = rows
    conv = CONVENTIONS.index(convention)
    header = _HEADER.pack(
        _CACHE_MAGIC, _CACHE_VERSION, ring.D, conv,
        P.z.real, P.z.imag, P.lam, omega_bound, cx.size,
    )
    quad = np.empty((cx.size, 4), dtype="<i8")
    quad[:, 0], quad[:, 1], quad[:, 2], quad[:, 3] = cx, cy, dx, dy
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(quad.tobytes())


def load_coset_rows(path, ring: RingSpec, P: PointH3, omega_bound: float,
                    convention: str):
    """Rows from a cache file, or None when the key does not match."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError:
        return None
    if len(raw) < _HEADER.size:
        return None
    magic, version, D, conv, zr, zi, lam, bound, count = _HEADER.unpack_from(raw)
    if (
        magic != _CACHE_MAGIC or version != _CACHE_VERSION or D != ring.D
        or conv != CONVENTIONS.index(convention)
        or (zr, zi, lam, bound) != (P.z.real, P.z.imag, P.lam, omega_bound)
    ):
        return None
    quad = np.frombuffer(raw, dtype="<i8", offset=_HEADER.size, count=4 * count)
    quad = quad.reshape(count, 4)
    return (
        quad[:, 0].astype(np.int64), quad[:, 1].astype(np.int64),
        quad[:, 2].astype(np.int64), quad[:, 3].astype(np.int64),
    )


def cached_coset_rows(path, ring: RingSpec, P: PointH3, omega_bound: float,
                      convention: str = "sl"):
    """Rows via the cache file; recomputes and rewrites on any key miss.

    Returns (rows, hit_flag).
    """
    if path is not None:
        cached = load_coset_rows(path, ring, P, omega_bound, convention)
        if cached is not None:
            return cached, True
    rows = coset_rows(ring, P, omega_bound, convention)
    if path is not None:
        save_coset_rows(path, ring, P, omega_bound, convention, rows)
    return rows, False
