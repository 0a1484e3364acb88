'''
Tests for the roots of unity and the subset orbits.
'''

from math import comb

import pytest

from nfold.numerics import PrecisionContext
from nfold.unity import (
    UnityRoot, dominant_alpha, enumerate_orbits, nu_roots, omega, reflect, subset_coefficient,
    subset_sums, unity_roots, valid_order, valid_subset,
)


def close(a, b, ctx: PrecisionContext) -> bool:
    return abs(a - b) < ctx.target_tol


@pytest.mark.parametrize('n, k, re, im', [
    (1, 0, 0, 1),
    (1, 1, 0, -1),
    (2, 0, 1, 0),
    (2, 1, 0, 1),
    (2, 2, -1, 0),
    (2, 3, 0, -1),
])
def test_omega_values(ctx: PrecisionContext, n: int, k: int, re: int, im: int):
    assert close(omega(n, k).value(ctx), ctx.mp.mpc(re, im), ctx)


@pytest.mark.parametrize('n, k', [
    (0, 0),
    (2, 4),
    (2, -1),
    (True, 0),
])
def test_omega_invalid(n, k):
    with pytest.raises(ValueError):
        omega(n, k)


@pytest.mark.parametrize('n', ['2', 0, -3, 1.0])
def test_valid_order_invalid(n):
    with pytest.raises(ValueError, match='Invalid order'):
        valid_order(n)


@pytest.mark.parametrize('n', [1, 2, 3, 4, 7])
def test_roots_equation(ctx: PrecisionContext, n: int):
    mp = ctx.mp
    roots = [w.value(ctx) for w in unity_roots(n)]
    assert len(roots) == 2 * n
    assert close(mp.fsum(roots), 0, ctx)
    for w in roots:
        assert abs(w ** (2 * n) - (-1) ** n) < 2 * n * ctx.target_tol


@pytest.mark.parametrize('n', [3, 4])
def test_conjugation(ctx: PrecisionContext, n: int):
    for w in unity_roots(n):
        assert close(w.conjugate().value(ctx), ctx.mp.conj(w.value(ctx)), ctx)
        assert w.conjugate().conjugate() == w


def test_real_and_upper():
    assert [w.is_real for w in unity_roots(2)] == [True, False, True, False]
    assert [w.upper for w in unity_roots(2)] == [False, True, False, False]
    assert not any(w.is_real for w in unity_roots(3))
    assert UnityRoot(1, 0).upper


@pytest.mark.parametrize('n', [1, 2, 3])
def test_nu_roots(ctx: PrecisionContext, n: int):
    lam = ctx.mpf('0.0808907')
    roots = nu_roots(n, lam, ctx)
    for nu in roots:
        assert abs(lam * nu ** (2 * n) - (-1) ** n) < 16 * ctx.target_tol
    real = [nu for nu in roots if abs(nu.imag) < ctx.target_tol]
    assert len(real) == (2 if n % 2 == 0 else 0)


@pytest.mark.parametrize('lam', [0, -1])
def test_nu_roots_invalid(ctx: PrecisionContext, lam: int):
    with pytest.raises(ValueError, match='Invalid eigenvalue'):
        nu_roots(2, lam, ctx)


@pytest.mark.parametrize('subset, expected', [
    ({0, 2}, -4j),
    ({0, 1}, -2j),
    ({1, 3}, -4j),
])
def test_subset_coefficient(ctx: PrecisionContext, subset: set[int], expected: complex):
    assert close(subset_coefficient(2, subset, ctx), ctx.mp.mpc(expected), ctx)


@pytest.mark.parametrize('subset', [{0}, {0, 1, 2}, {0, 4}, (1, 1)])
def test_subset_invalid(ctx: PrecisionContext, subset):
    with pytest.raises(ValueError, match='Invalid subset'):
        subset_coefficient(2, subset, ctx)


def test_valid_subset_sorts():
    assert valid_subset(3, [4, 0, 2]) == (0, 2, 4)


def test_reflect():
    assert reflect(2, (0, 1)) == (0, 3)
    assert reflect(1, (0,)) == (1,)


def test_orbits_n2(ctx: PrecisionContext):
    orbits = enumerate_orbits(2, ctx)
    assert [o.representative for o in orbits] == [(0, 1), (0, 2)]
    first, second = orbits
    assert first.alpha == 1 and first.beta == 1
    assert first.size == 4
    assert second.alpha == 0 and second.beta == 0
    assert second.members == ((0, 2), (1, 3))


def test_orbits_n1(ctx: PrecisionContext):
    [orbit] = enumerate_orbits(1, ctx)
    assert orbit.representative == (0,)
    assert orbit.alpha == 0
    assert close(orbit.beta, 1, ctx)
    assert orbit.size == 2


@pytest.mark.parametrize('n', [1, 2, 3, 4, 5])
def test_orbit_partition(ctx: PrecisionContext, n: int):
    orbits = enumerate_orbits(n, ctx)
    assert sum(o.size for o in orbits) == comb(2 * n, n)
    members = [m for o in orbits for m in o.members]
    assert len(set(members)) == len(members)
    assert all(o.alpha >= 0 and o.beta >= 0 for o in orbits)


def test_orbit_members_share_coefficient(ctx: PrecisionContext):
    for orbit in enumerate_orbits(3, ctx):
        for member in orbit.members:
            assert abs(subset_coefficient(3, member, ctx) - orbit.coefficient) < 64 * ctx.target_tol


def test_enumeration_limit():
    with pytest.raises(ValueError, match='enumeration limit'):
        enumerate_orbits(13)
    with pytest.raises(ValueError, match='enumeration limit'):
        subset_sums(13)


def test_dominant_alpha(ctx: PrecisionContext):
    mp = ctx.mp
    assert close(dominant_alpha(1, ctx), 0, ctx)
    assert close(dominant_alpha(2, ctx), 1, ctx)
    assert close(dominant_alpha(4, ctx), 1 + mp.sqrt(2), ctx)


@pytest.mark.parametrize('n', [
    2, 3, 4, 5, 6,
    pytest.param(7, marks=pytest.mark.slow),
    pytest.param(8, marks=pytest.mark.slow),
])
def test_dominant_alpha_is_largest(ctx: PrecisionContext, n: int):
    largest = max(o.alpha for o in enumerate_orbits(n, ctx))
    assert abs(largest - dominant_alpha(n, ctx)) < 64 * ctx.target_tol


def test_subset_sums_n2(ctx: PrecisionContext):
    points = subset_sums(2, ctx)
    assert len(points) == 5
    assert sum(count for _, _, count in points) == 6
    assert (0, 0, 2) in [(re, im, count) for re, im, count in points]
    assert [count for _, _, count in points] == [1, 1, 2, 1, 1]
