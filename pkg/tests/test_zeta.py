import math

import numpy as np
import pytest

from bianchi.number_field import CLASS_NUMBER_ONE_D, ring_spec
from bianchi.zeta import ZetaValue, dedekind_zeta, orbifold_volume, phi, volume_cutoff

from oracles import dirichlet_l, kronecker_symbol


def factorization_oracle(D: int, s: float) -> float:
    """zeta_D(s) = zeta(s) * L(chi_d, s), summed independently."""
    disc = -D if D % 4 == 3 else -4 * D
    n = np.arange(1, 400_001, dtype=float)
    riemann = float(np.sum(n**-s))
    # crude zeta tail by integral comparison
    riemann += 400_000 ** (1 - s) / (s - 1)
    return riemann * dirichlet_l(disc, s)


def oracle_cutoff(D: int, tol: float = 3e-6) -> int:
    ring = ring_spec(D)
    c = 2 * math.pi / (math.sqrt(abs(ring.discriminant)) * len(ring.units))
    return math.ceil(c / tol)


def test_kronecker_character_oracle_sanity():
    # chi_{-4} is the alternating character mod 4
    assert [kronecker_symbol(-4, n) for n in range(1, 9)] == [1, 0, -1, 0, 1, 0, -1, 0]
    # L(chi_{-4}, 2) is Catalan's constant
    assert dirichlet_l(-4, 2.0) == pytest.approx(0.9159655942, abs=1e-8)


def test_gaussian_zeta_at_two():
    ring = ring_spec(1)
    zv = dedekind_zeta(ring, 2.0, cutoff=10**6)
    expected = (math.pi**2 / 6.0) * dirichlet_l(-4, 2.0)
    assert zv.value == pytest.approx(expected, abs=1e-5)
    assert zv.value == pytest.approx(1.5067, abs=2e-4)


@pytest.mark.parametrize("D", CLASS_NUMBER_ONE_D)
def test_two_method_agreement(D):
    ring = ring_spec(D)
    direct = dedekind_zeta(ring, 2.0, oracle_cutoff(D)).value
    assert direct == pytest.approx(factorization_oracle(D, 2.0), abs=1e-5)


def test_domain_validation():
    ring = ring_spec(1)
    with pytest.raises(ValueError):
        dedekind_zeta(ring, 1.0)
    with pytest.raises(ValueError):
        dedekind_zeta(ring, 0.5 + 3j)
    with pytest.raises(ValueError):
        dedekind_zeta(ring, 2.0, cutoff=5)


def test_tail_bound_scales_with_cutoff():
    ring = ring_spec(2)
    tails = [dedekind_zeta(ring, 4.0, c).tail_bound for c in (10_000, 20_000, 40_000)]
    for a, b in zip(tails, tails[1:]):
        assert b == pytest.approx(a / 8.0, rel=1e-12)  # rate 1 - Re s = -3


def test_value_real_and_decreasing_for_real_s():
    ring = ring_spec(3)
    vals = [dedekind_zeta(ring, s, 50_000).value for s in (1.5, 2.0, 3.0, 4.0)]
    for v in vals:
        assert isinstance(v, float)
        assert v > 1.0
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("D", (1, 7, 163))
def test_tail_bound_honesty(D):
    ring = ring_spec(D)
    for s in (1.5, 2.0, 3.0):
        small = dedekind_zeta(ring, s, 20_000)
        big = dedekind_zeta(ring, s, 80_000)
        assert abs(big.value - small.value) <= small.tail_bound


def test_phi_is_real_positive_and_matches_parts():
    ring = ring_spec(1)
    s = 2.0
    got = phi(ring, s, cutoff=200_000)
    za = dedekind_zeta(ring, 2.0, 200_000).value
    zb = dedekind_zeta(ring, 3.0, 200_000).value
    assert got == pytest.approx(math.pi / 2.0 * za / zb, rel=1e-12)
    assert got > 0
    # covolume 1 for the Gaussian integers makes the prefactor pi / s
    assert ring.covolume == pytest.approx(1.0)


def test_phi_propagates_domain_errors():
    with pytest.raises(ValueError):
        phi(ring_spec(1), 0.9)


def test_volume_of_gaussian_orbifold():
    expected = 8.0 / (4 * math.pi**2) * (math.pi**2 / 6.0) * dirichlet_l(-4, 2.0)
    assert orbifold_volume(ring_spec(1)) == pytest.approx(expected, abs=2e-6)
    assert orbifold_volume(ring_spec(1)) == pytest.approx(0.30532, abs=1e-4)


def test_volume_d3():
    ring = ring_spec(3)
    vol = orbifold_volume(ring)
    z3 = dedekind_zeta(ring, 2.0, volume_cutoff(ring)).value
    assert vol == pytest.approx(3**1.5 / (4 * math.pi**2) * z3, rel=1e-12)


def test_volume_increases_with_discriminant():
    vols = [
        (abs(ring_spec(D).discriminant), orbifold_volume(ring_spec(D), tol=1e-5))
        for D in CLASS_NUMBER_ONE_D
    ]
    vols.sort()
    for (_, a), (_, b) in zip(vols, vols[1:]):
        assert b > a
