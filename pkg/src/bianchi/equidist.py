"""Horocycle torus averages, Liouville means, Mellin transforms, and
fiberwise spherical-harmonic coefficients.

Test functions on the unit tangent bundle come in two kinds:

* a Poincare bump: a smooth compactly supported seed on the bundle,
  summed over group translates.  The translate list is constructed so
  that every omitted element provably moves the probed region out of the
  seed's support (distances certify disjointness), which turns the
  infinite sum into a finite exact one on the probe;
* a cusp profile: a radial profile in the height times one fiber
  harmonic.  It is invariant under translations only, so it is admitted
  exactly where that suffices: torus averages and the Mellin transform.

Directions are charted by the unit Euclidean vector of a tangent vector;
in that chart an isometry acts on the fiber by its frame rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .cosets import coset_rows, unipotent_index
from .harmonics import WignerIndex, direction_angles, sphere_direction, ylm
from .hyperbolic3 import (
    MatrixSL2,
    PointH3,
    frame_matrix,
    hyperbolic_distance,
    mobius_act,
)
from .number_field import RingSpec, bezout
from .reduction import blocked_sum
from .rotations import frame_rotation, frame_rotation_components
from .zeta import orbifold_volume

E1 = np.array([1.0, 0.0, 0.0])


class CertificateError(RuntimeError):
    """Raised when a finite translate list cannot be certified."""


def smooth_bump(u):
    """C-infinity profile exp(1 - 1/(1 - u^2)) on |u| < 1, peak value 1."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ui * ui))
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class TangentVectorSpec:
    """Direction (theta, phi); the realized vector at P has Euclidean
    length lam(P), which is hyperbolic length one."""

    theta: float
    phi: float

    def realize(self, P: PointH3) -> np.ndarray:
        return P.lam * sphere_direction(self.theta, self.phi)


@dataclass(frozen=True)
class PoincareBump:
    """Smooth bump seed centered at the frame g0, summed over the group.

    The seed is separable: a profile of hyperbolic distance to the base
    point (radius r_s) times a profile of spherical angle to the center
    direction (radius r_d), times a complex amplitude.
    """

    ring: RingSpec
    center: MatrixSL2
    r_s: float
    r_d: float
    amplitude: complex = 1.0 + 0.0j

    kind = "poincare_bump"

    def __post_init__(self):
        if not (0 < self.r_s and 0 < self.r_d <= math.pi):
            raise ValueError("bump radii must be positive (directional at most pi)")

    @property
    def base_point(self) -> PointH3:
        return mobius_act(self.center, PointH3(0j, 1.0))

    @property
    def center_direction(self) -> np.ndarray:
        return frame_rotation(self.center, PointH3(0j, 1.0)) @ E1

    def conjugate(self) -> "PoincareBump":
        return PoincareBump(
            self.ring, self.center, self.r_s, self.r_d,
            complex(self.amplitude).conjugate(),
        )

    def scaled(self, factor: complex) -> "PoincareBump":
        return PoincareBump(
            self.ring, self.center, self.r_s, self.r_d, self.amplitude * factor
        )

    def seed_values(self, w, h, dirs) -> np.ndarray:
        """Seed at positions (w, h) with unit Euclidean directions dirs."""
        P0 = self.base_point
        w = np.asarray(w, dtype=complex)
        h = np.asarray(h, dtype=float)
        num = np.abs(w - P0.z) ** 2 + (h - P0.lam) ** 2
        dist = np.arccosh(1.0 + num / (2.0 * h * P0.lam))
        spatial = smooth_bump(dist / self.r_s)
        cosang = np.clip(np.asarray(dirs) @ self.center_direction, -1.0, 1.0)
        directional = smooth_bump(np.arccos(cosang) / self.r_d)
        return self.amplitude * spatial * directional


@dataclass(frozen=True)
class CuspProfile:
    """Height profile times one fiber harmonic; translation invariant by
    construction but not group invariant, so only unfolding integrals
    (torus averages and the Mellin transform) accept it."""

    ring: RingSpec
    lam_lo: float
    lam_hi: float
    l: int
    m: int
    amplitude: complex = 1.0 + 0.0j
    profile: Callable | None = None

    kind = "cusp_profile"

    def __post_init__(self):
        if not 0 < self.lam_lo < self.lam_hi:
            raise ValueError("height support must satisfy 0 < lam_lo < lam_hi")
        WignerIndex(self.l, self.m, self.m)

    def radial(self, lam) -> np.ndarray:
        if self.profile is not None:
            return self.profile(lam)
        mid = 0.5 * (self.lam_lo + self.lam_hi)
        half = 0.5 * (self.lam_hi - self.lam_lo)
        return smooth_bump((np.asarray(lam, dtype=float) - mid) / half)

    def value(self, lam, theta, phi) -> np.ndarray:
        return self.amplitude * self.radial(lam) * ylm(self.l, self.m, theta, phi)


@dataclass(frozen=True)
class TranslateSet:
    """Certified finite list of group elements covering a probe region."""

    matrices: tuple[MatrixSL2, ...]
    certificate: dict = field(hash=False)


def poincare_translates(
    bump: PoincareBump,
    probe_center: PointH3,
    probe_radius: float,
    max_translates: int = 500_000,
) -> TranslateSet:
    """All projective group elements that can move any point of the probe
    ball into the seed's support, plus a certificate of completeness.

    Contributing elements satisfy d(gamma q0, P0) <= r_s + probe_radius.
    The height of gamma q0 then lies within e^{+-rho} of the center
    height, which bounds Omega of the bottom row at q0 on both sides;
    rows come from the coset scan over that window, and the unipotent
    part ranges over an exact lattice disk fixed by the horizontal extent
    of the distance ball.  Both scans are padded and exactly re-filtered,
    so no contributing element can be missed.
    """
    ring = bump.ring
    P0 = bump.base_point
    q0 = probe_center
    rho = bump.r_s + probe_radius
    eta0 = P0.lam
    omega_max = q0.lam * math.exp(rho) / eta0
    omega_min = q0.lam * math.exp(-rho) / eta0
    rows = coset_rows(ring, q0, omega_max, convention="psl")
    cx, cy, dx, dy = rows
    kept: list[MatrixSL2] = []
    n_candidates = 0
    sinh_rho = math.sinh(rho)
    cosh_rho = math.cosh(rho)
    for i in range(cx.size):
        c = ring.element(int(cx[i]), int(cy[i]))
        d = ring.element(int(dx[i]), int(dy[i]))
        ce, de = c.embed(), d.embed()
        q = ce * q0.z + de
        omega = abs(q) ** 2 + c.norm() * q0.lam**2
        if omega < omega_min:
            continue
        x, y = bezout(c, d)
        gamma0 = MatrixSL2(y, -x, c, d)
        img0 = mobius_act(gamma0, q0)
        # horizontal reach of the distance ball at this height
        rad2 = (eta0 * sinh_rho) ** 2 - (img0.lam - eta0 * cosh_rho) ** 2
        if rad2 < 0:
            continue
        t_center = P0.z - img0.z
        for tx, ty in ring.lattice_points_in_disk(t_center, math.sqrt(rad2) + 1e-9):
            n_candidates += 1
            t = ring.element(tx, ty)
            img = PointH3(img0.z + t.embed(), img0.lam)
            if hyperbolic_distance(img, P0) <= rho + 1e-9:
                shear = MatrixSL2(ring.one, t, ring.zero, ring.one)
                kept.append(shear @ gamma0)
        if len(kept) > max_translates:
            raise CertificateError(
                f"translate list exceeded cap {max_translates} "
                f"(probe radius {probe_radius:.3g}, omega_max {omega_max:.3g})"
            )
    certificate = {
        "probe_center": [q0.z.real, q0.z.imag, q0.lam],
        "probe_radius": probe_radius,
        "rho": rho,
        "omega_max": omega_max,
        "omega_min": omega_min,
        "n_rows": int(cx.size),
        "n_candidates": n_candidates,
        "n_translates": len(kept),
    }
    return TranslateSet(matrices=tuple(kept), certificate=certificate)


def _bump_sum(bump: PoincareBump, translates: TranslateSet, z, lam, dirs):
    """Truncated group sum of the seed at positions z + lam*j along unit
    directions dirs; vectorized over the position/direction arrays.

    Nodes whose image height falls outside the seed's height window are
    pruned before the rotation work; the seed vanishes there anyway.
    """
    z = np.asarray(z, dtype=complex)
    lam = float(lam)
    total = np.zeros(z.shape, dtype=complex)
    P0 = bump.base_point
    h_lo = P0.lam * math.exp(-bump.r_s)
    h_hi = P0.lam * math.exp(bump.r_s)
    dirs_b = np.broadcast_to(dirs, z.shape + (3,))
    for gamma in translates.matrices:
        m = gamma.embed()
        a, b, c, d = m.a, m.b, m.c, m.d
        q = c * z + d
        omega = q.real**2 + q.imag**2 + abs(c) ** 2 * lam * lam
        h = lam / omega
        mask = (h >= h_lo) & (h <= h_hi)
        if not np.any(mask):
            continue
        zs, qs, hs = z[mask], q[mask], h[mask]
        w = ((a * zs + b) * qs.conjugate() + a * c.conjugate() * lam * lam) / omega[mask]
        R = frame_rotation_components(c, d, zs, lam)
        moved = np.einsum("...ij,...j->...i", R, dirs_b[mask])
        total[mask] += bump.seed_values(w, hs, moved)
    return total


def _torus_nodes(ring: RingSpec, order: int):
    u = np.arange(order) / order
    U, V = np.meshgrid(u, u, indexing="ij")
    return U + V * ring.omega


def _slab_probe(ring: RingSpec, lam: float) -> tuple[PointH3, float]:
    center = (1.0 + ring.omega) / 2.0
    corner_reach = abs(center)
    radius = math.acosh(1.0 + corner_reach**2 / (2.0 * lam * lam))
    return PointH3(center, lam), radius


def nu_lambda(
    f,
    lam: float,
    quadrature_order: int = 32,
    threads: int = 1,
    translates: TranslateSet | None = None,
) -> complex:
    """Average of f over the flat torus at height lam, in the first-axis
    direction; the probability measure of the compact horocycle leaf."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    ring = f.ring
    if f.kind == "cusp_profile":
        val = f.value(lam, math.pi / 2.0, 0.0)
        nodes = np.full(quadrature_order * quadrature_order, complex(val))
        return complex(blocked_sum(nodes, threads=threads)) / nodes.size
    z = _torus_nodes(ring, quadrature_order)
    if translates is None:
        center, radius = _slab_probe(ring, lam)
        translates = poincare_translates(f, center, radius)
    vals = _bump_sum(f, translates, z.ravel(), lam, E1)
    return complex(blocked_sum(vals, threads=threads)) / vals.size


def _gauss_nodes(lo: float, hi: float, n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    return mid + half * x, half * w


def liouville(
    f,
    spatial_order: int = 64,
    sphere_order: tuple[int, int] = (48, 96),
    vol_tol: float = 1e-6,
) -> complex:
    """Normalized invariant-volume mean of an unfoldable test function.

    The group sum unfolds to one integral of the seed over the whole
    bundle, evaluated as a product of a spatial quadrature over the
    seed's support box and a spherical quadrature over directions.
    """
    if f.kind != "poincare_bump":
        raise ValueError("only Poincare bumps unfold to a Liouville mean")
    P0 = f.base_point
    reach = P0.lam * math.sinh(f.r_s)
    xs, wx = _gauss_nodes(P0.z.real - reach, P0.z.real + reach, spatial_order)
    ys, wy = _gauss_nodes(P0.z.imag - reach, P0.z.imag + reach, spatial_order)
    ls, wl = _gauss_nodes(
        P0.lam * math.exp(-f.r_s), P0.lam * math.exp(f.r_s), spatial_order
    )
    X, Y, L = np.meshgrid(xs, ys, ls, indexing="ij")
    num = (X - P0.z.real) ** 2 + (Y - P0.z.imag) ** 2 + (L - P0.lam) ** 2
    dist = np.arccosh(1.0 + num / (2.0 * L * P0.lam))
    spatial_vals = smooth_bump(dist / f.r_s) / L**3
    W3 = wx[:, None, None] * wy[None, :, None] * wl[None, None, :]
    spatial = float(np.sum(W3 * spatial_vals))

    u, wu = np.polynomial.legendre.leggauss(sphere_order[0])
    theta = np.arccos(u)
    phi = 2.0 * math.pi * np.arange(sphere_order[1]) / sphere_order[1]
    wphi = 2.0 * math.pi / sphere_order[1]
    T, Ph = np.meshgrid(theta, phi, indexing="ij")
    dirs = sphere_direction(T.ravel(), Ph.ravel())
    cosang = np.clip(dirs @ f.center_direction, -1.0, 1.0)
    directional_vals = smooth_bump(np.arccos(cosang) / f.r_d)
    Wd = np.broadcast_to((wu * wphi)[:, None], T.shape).ravel()
    directional = float(np.sum(Wd * directional_vals))

    vol = orbifold_volume(f.ring, vol_tol)
    return f.amplitude * spatial * directional / (4.0 * math.pi * vol)


def mellin(f, s: complex, lambda_quadrature=None, torus_order: int = 32) -> complex:
    """Integral of nu(lam)(f) lam^(s-2) over the heights.

    For a cusp profile the height support is explicit and an adaptive
    rule is used.  A Poincare bump's torus average vanishes above an
    explicit height but not below, so the integration window (lo, hi,
    nodes) must be supplied; unbounded requests are rejected.
    """
    s = complex(s)
    if not s.real > 1:
        raise ValueError("Re(s) > 1 required")
    if f.kind == "cusp_profile":
        if lambda_quadrature is not None:
            lo, hi, n = lambda_quadrature
            nodes, weights = _gauss_nodes(lo, hi, n)
            vals = np.array([nu_lambda(f, float(x), 4) for x in nodes])
            return complex(np.sum(weights * vals * nodes ** (s - 2.0)))
        angular = complex(f.amplitude) * ylm(f.l, f.m, math.pi / 2.0, 0.0)

        def integrand(lam, part):
            v = f.radial(lam) * lam ** (s - 2.0)
            return v.real if part == 0 else v.imag

        re = quad(integrand, f.lam_lo, f.lam_hi, args=(0,), limit=200)[0]
        im = quad(integrand, f.lam_lo, f.lam_hi, args=(1,), limit=200)[0]
        return angular * complex(re, im)
    if lambda_quadrature is None:
        raise ValueError(
            "a Poincare bump has no compact lower height support; "
            "pass lambda_quadrature=(lo, hi, nodes)"
        )
    lo, hi, n = lambda_quadrature
    nodes, weights = _gauss_nodes(lo, hi, n)
    vals = np.array(
        [nu_lambda(f, float(x), torus_order) for x in nodes], dtype=complex
    )
    return complex(np.sum(weights * vals * nodes ** (s - 2.0)))


def support_height_bound(f) -> float:
    """Height above which the torus average of f provably vanishes."""
    if f.kind == "cusp_profile":
        return f.lam_hi
    top = f.base_point.lam * math.exp(f.r_s)
    bottom = f.base_point.lam * math.exp(-f.r_s)
    return max(top, 1.0 / bottom)


def laplace_coeffs(
    f,
    P: PointH3,
    l_max: int,
    sphere_order: tuple[int, int] = (64, 128),
) -> dict[tuple[int, int], complex]:
    """Fiberwise spherical-harmonic coefficients of f at the point P."""
    u, wu = np.polynomial.legendre.leggauss(sphere_order[0])
    theta = np.arccos(u)
    phi = 2.0 * math.pi * np.arange(sphere_order[1]) / sphere_order[1]
    wphi = 2.0 * math.pi / sphere_order[1]
    T, Ph = np.meshgrid(theta, phi, indexing="ij")
    T, Ph = T.ravel(), Ph.ravel()
    W = np.broadcast_to((wu * wphi)[:, None], (sphere_order[0], sphere_order[1])).ravel()
    if f.kind == "cusp_profile":
        vals = f.value(P.lam, T, Ph)
        vals = np.broadcast_to(vals, T.shape)
    else:
        translates = poincare_translates(f, P, 0.0)
        dirs = sphere_direction(T, Ph)
        vals = np.zeros(T.shape, dtype=complex)
        for gamma in translates.matrices:
            img = mobius_act(gamma, P)
            R = frame_rotation(gamma, P)
            moved = dirs @ R.T
            vals = vals + f.seed_values(img.z, img.lam, moved)
    out = {}
    for l in range(l_max + 1):
        for m in range(-l, l + 1):
            y = ylm(l, m, T, Ph)
            out[(l, m)] = complex(np.sum(W * vals * np.conjugate(y)))
    return out


def reconstruct_from_coeffs(coeffs, theta: float, phi: float) -> complex:
    """Evaluate the truncated fiber expansion at one direction."""
    total = 0.0 + 0.0j
    for (l, m), c in coeffs.items():
        total += c * ylm(l, m, theta, phi)
    return total


@dataclass(frozen=True)
class MeasureReport:
    """Equidistribution experiment record: torus averages against the
    Liouville mean over a decreasing grid of heights."""

    lambda_grid: tuple[float, ...]
    values: tuple[complex, ...]
    reference: complex
    deltas: tuple[float, ...]
    fitted_decay_exponent: float | None
    quadrature_orders: tuple[int, ...]
    certificates: tuple[dict, ...]
    noise_floor: float

    def to_json_dict(self) -> dict:
        return {
            "lambda_grid": list(self.lambda_grid),
            "values": [[v.real, v.imag] for v in self.values],
            "reference": [self.reference.real, self.reference.imag],
            "deltas": list(self.deltas),
            "fitted_decay_exponent": self.fitted_decay_exponent,
            "quadrature_orders": list(self.quadrature_orders),
            "certificates": list(self.certificates),
            "noise_floor": self.noise_floor,
        }

    def to_csv_text(self) -> str:
        lines = ["lambda,value_re,value_im,delta_abs"]
        for lam, v, d in zip(self.lambda_grid, self.values, self.deltas):
            lines.append(f"{lam!r},{v.real!r},{v.imag!r},{d!r}")
        return "\n".join(lines) + "\n"


def equidistribution_experiment(
    f,
    lambda_grid,
    base_order: int = 24,
    threads: int = 1,
    noise_floor: float = 1e-8,
) -> MeasureReport:
    """Torus averages along a decreasing height grid against the Liouville
    mean, with a least-squares decay exponent of the absolute deltas.

    Grid points whose delta sits below ten times the quadrature noise
    floor are excluded from the fit.
    """
    if f.kind != "poincare_bump":
        raise ValueError("the experiment requires an unfoldable Poincare bump")
    lambda_grid = tuple(float(x) for x in lambda_grid)
    if any(a <= b for a, b in zip(lambda_grid, lambda_grid[1:])):
        raise ValueError("lambda_grid must be strictly decreasing")
    reference = liouville(f)
    values = []
    orders = []
    certificates = []
    for lam in lambda_grid:
        order = max(base_order, int(math.ceil(base_order / lam)))
        center, radius = _slab_probe(f.ring, lam)
        translates = poincare_translates(f, center, radius)
        values.append(nu_lambda(f, lam, order, threads, translates))
        orders.append(order)
        certificates.append(translates.certificate)
    deltas = [abs(v - reference) for v in values]
    usable = [
        (lam, d) for lam, d in zip(lambda_grid, deltas) if d > 10.0 * noise_floor
    ]
    exponent = None
    if len(usable) >= 2:
        lx = np.log([u[0] for u in usable])
        ly = np.log([u[1] for u in usable])
        exponent = float(np.polyfit(lx, ly, 1)[0])
    return MeasureReport(
        lambda_grid=lambda_grid,
        values=tuple(values),
        reference=complex(reference),
        deltas=tuple(deltas),
        fitted_decay_exponent=exponent,
        quadrature_orders=tuple(orders),
        certificates=tuple(certificates),
        noise_floor=noise_floor,
    )
