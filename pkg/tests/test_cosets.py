import math

import numpy as np
import pytest

from bianchi.cosets import (
    cached_coset_rows,
    coset_rows,
    enumerate_cosets,
    enumerate_group,
    load_coset_rows,
    save_coset_rows,
    unipotent_index,
)
from bianchi.hyperbolic3 import PointH3
from bianchi.number_field import QuadInt, ring_spec

from oracles import naive_coset_scan


def rows_as_set(rows):
    cx, cy, dx, dy = rows
    return {tuple(map(int, t)) for t in zip(cx, cy, dx, dy)}


def test_gaussian_unit_ball_has_eight_reps():
    ring = ring_spec(1)
    reps = enumerate_cosets(ring, PointH3(0j, 1.0), 1.0)
    assert len(reps) == 8
    got = {((r.c.x, r.c.y), (r.d.x, r.d.y)) for r in reps}
    units = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    expected = {((0, 0), u) for u in units} | {(u, (0, 0)) for u in units}
    assert got == expected


@pytest.mark.parametrize("D", (1, 2, 3, 19, 163))
def test_small_bound_is_empty(D):
    ring = ring_spec(D)
    assert enumerate_cosets(ring, PointH3(0j, 1.0), 0.5) == []


def test_count_grows_quadratically():
    ring = ring_spec(1)
    P = PointH3(0.2 + 0.3j, 7.0)
    bounds = [1e2, 1e3, 1e4]
    counts = [coset_rows(ring, P, b)[0].size for b in bounds]
    slope = np.polyfit(np.log(bounds), np.log(counts), 1)[0]
    assert abs(slope - 2.0) < 0.15


@pytest.mark.parametrize("D", (1, 2, 3))
def test_matches_naive_scan(D):
    ring = ring_spec(D)
    z, lam, bound = 0.3 - 0.1j, 1.2, 20.0
    got = sorted(rows_as_set(coset_rows(ring, PointH3(z, lam), bound)))
    assert got == naive_coset_scan(ring, z, lam, bound)


def test_growing_bound_preserves_canonical_order():
    ring = ring_spec(3)
    P = PointH3(0.4 + 0.2j, 1.5)
    small = coset_rows(ring, P, 30.0)
    big = coset_rows(ring, P, 120.0)
    small_list = list(zip(*(a.tolist() for a in small)))
    big_list = list(zip(*(a.tolist() for a in big)))
    z, lam = P.z, P.lam
    om = ring.omega

    def omega_of(row):
        c = row[0] + row[1] * om
        d = row[2] + row[3] * om
        return abs(c * z + d) ** 2 + abs(c) ** 2 * lam * lam

    filtered = [row for row in big_list if omega_of(row) <= 30.0]
    assert filtered == small_list


def test_completions_are_exact():
    ring = ring_spec(19)
    for rep in enumerate_cosets(ring, PointH3(0.1 + 0.7j, 0.8), 12.0):
        sigma = rep.sigma
        assert sigma.is_exact
        assert sigma.det() == ring.one
        assert sigma.c == rep.c and sigma.d == rep.d
        assert rep.weight == rep.c.norm() + rep.d.norm()


def test_unit_multiples_all_appear():
    ring = ring_spec(3)
    reps = enumerate_cosets(ring, PointH3(0.2j, 1.0), 6.0)
    rows = {((r.c.x, r.c.y), (r.d.x, r.d.y)) for r in reps}
    base = next(iter(rows))
    c = QuadInt(*base[0], 3)
    d = QuadInt(*base[1], 3)
    for u in ring.units:
        uc, ud = u * c, u * d
        assert ((uc.x, uc.y), (ud.x, ud.y)) in rows


def test_psl_convention_halves_the_list():
    ring = ring_spec(2)
    P = PointH3(0.25 + 0.1j, 0.9)
    sl = coset_rows(ring, P, 25.0)
    psl = coset_rows(ring, P, 25.0, convention="psl")
    assert sl[0].size == 2 * psl[0].size
    sl_set = rows_as_set(sl)
    for row in rows_as_set(psl):
        assert row in sl_set and tuple(-v for v in row) in sl_set


def test_rejects_bad_inputs():
    ring = ring_spec(1)
    with pytest.raises(ValueError):
        coset_rows(ring, PointH3(0j, 1.0), 0.0)
    with pytest.raises(ValueError):
        coset_rows(ring, PointH3(0j, 1.0), 1.0, convention="other")


def test_group_enumeration_matches_brute_force_d2():
    ring = ring_spec(2)
    got = {
        (g.a.x, g.a.y, g.b.x, g.b.y, g.c.x, g.c.y, g.d.x, g.d.y)
        for g in enumerate_group(ring, 1.0)
    }
    brute = set()
    vals = [QuadInt(x, y, 2) for x in (-1, 0, 1) for y in (0,) if QuadInt(x, y, 2).norm() <= 1]
    for a in vals:
        for b in vals:
            for c in vals:
                for d in vals:
                    if a * d - b * c == ring.one:
                        brute.add((a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y))
    assert got == brute


def test_group_enumeration_contains_identity_and_products():
    ring = ring_spec(2)
    small = enumerate_group(ring, 1.0)
    ids = [g for g in small if g.a == ring.one and g.d == ring.one
           and g.b == ring.zero and g.c == ring.zero]
    assert len(ids) == 1
    bigger = {
        (g.a.x, g.a.y, g.b.x, g.b.y, g.c.x, g.c.y, g.d.x, g.d.y)
        for g in enumerate_group(ring, 4.0)
    }
    for g in small[:6]:
        for h in small[:6]:
            p = g @ h
            assert (p.a.x, p.a.y, p.b.x, p.b.y, p.c.x, p.c.y, p.d.x, p.d.y) in bigger


@pytest.mark.parametrize(
    "D,sl,psl", [(1, 4, 2), (2, 2, 1), (3, 6, 3), (7, 2, 1), (163, 2, 1)]
)
def test_unipotent_index(D, sl, psl):
    ring = ring_spec(D)
    assert unipotent_index(ring) == sl
    assert unipotent_index(ring, "psl") == psl


def test_cache_round_trip(tmp_path):
    ring = ring_spec(7)
    P = PointH3(0.3 + 0.4j, 1.1)
    path = tmp_path / "rows.bin"
    rows, hit = cached_coset_rows(path, ring, P, 18.0)
    assert not hit
    rows2, hit2 = cached_coset_rows(path, ring, P, 18.0)
    assert hit2
    assert all(np.array_equal(a, b) for a, b in zip(rows, rows2))
    # key mismatch is a miss, not an error
    assert load_coset_rows(path, ring, P, 19.0, "sl") is None
    assert load_coset_rows(path, ring, PointH3(0.3 + 0.4j, 1.2), 18.0, "sl") is None
    save_coset_rows(path, ring, P, 18.0, "sl", rows)
    assert load_coset_rows(path, ring, P, 18.0, "sl") is not None
