'''
Tests for the numerics module.
'''

import pytest

import nfold.numerics
from nfold.errors import ConvergenceError, InvalidBracketError
from nfold.numerics import (
    MAX_DOUBLINGS, Bracket, PrecisionContext, QuadratureRule, composite_rule, converge, find_root,
    gauss_legendre_rule, integrate,
)


def test_context_defaults():
    ctx = PrecisionContext()
    assert ctx.bits == 256
    assert ctx.target_tol == ctx.mp.ldexp(1, -128)
    assert ctx.digits == 38


def test_context_is_hashable():
    assert PrecisionContext(128) == PrecisionContext(128)
    assert hash(PrecisionContext(128)) == hash(PrecisionContext(128))
    assert PrecisionContext(128) != PrecisionContext(192)


def test_context_keeps_precision(ctx: PrecisionContext):
    third = ctx.mpf(1) / 3
    assert third.context is ctx.mp
    assert abs(third * 3 - 1) < ctx.mp.ldexp(1, -250)


@pytest.mark.parametrize('bits, tol', [
    (32, None),
    (63, None),
    (64, '1e-30'),
])
def test_context_invalid(bits: int, tol: str|None):
    with pytest.raises(ValueError):
        PrecisionContext(bits, tol)


def test_raised(ctx: PrecisionContext):
    more = ctx.raised(40)
    assert more.bits == 296
    assert more.target_tol == ctx.target_tol
    assert ctx.raised(0) is ctx


def test_rule_midpoint(ctx: PrecisionContext):
    rule = gauss_legendre_rule(1, ctx)
    assert rule.nodes == (ctx.mpf('0.5'),)
    assert rule.weights == (ctx.mpf(1),)


def test_rule_two_points(ctx: PrecisionContext):
    mp = ctx.mp
    rule = gauss_legendre_rule(2, ctx)
    offset = 1 / (2 * mp.sqrt(3))
    assert abs(rule.nodes[0] - (mp.mpf('0.5') - offset)) < ctx.target_tol
    assert abs(rule.nodes[1] - (mp.mpf('0.5') + offset)) < ctx.target_tol
    assert all(abs(w - mp.mpf('0.5')) < ctx.target_tol for w in rule.weights)


@pytest.mark.parametrize('m', [3, 8, 16, 33])
def test_rule_shape(ctx: PrecisionContext, m: int):
    rule = gauss_legendre_rule(m, ctx)
    assert rule.size == m
    assert all(0 < t < 1 for t in rule.nodes)
    assert all(a < b for a, b in zip(rule.nodes, rule.nodes[1:]))
    assert all(w > 0 for w in rule.weights)
    assert abs(ctx.mp.fsum(rule.weights) - 1) < ctx.target_tol


def test_rule_exactness(ctx: PrecisionContext):
    rule = gauss_legendre_rule(16, ctx)
    bound = ctx.mp.ldexp(1, -ctx.bits + 24)
    for degree in (0, 1, 7, 15, 31):
        assert abs(rule.apply(lambda t: t ** degree) - ctx.mpf(1) / (degree + 1)) < bound


def test_rule_invalid(ctx: PrecisionContext):
    with pytest.raises(ValueError):
        gauss_legendre_rule(0, ctx)


def test_integrate(ctx: PrecisionContext):
    mp = ctx.mp
    assert abs(integrate(lambda t: t, ctx) - mp.mpf('0.5')) < ctx.target_tol
    assert abs(integrate(mp.exp, ctx) - (mp.e - 1)) < ctx.target_tol
    assert abs(integrate(lambda t: 2 * mp.cos(mp.pi * t / 2) ** 2, ctx) - 1) < ctx.target_tol


def test_converge_gives_up(ctx: PrecisionContext):
    with pytest.raises(ConvergenceError):
        converge(lambda rule: [ctx.mpf(rule.size)], ctx, start=2, max_doublings=3)


def test_converge_doubling_cap(ctx: PrecisionContext, monkeypatch: pytest.MonkeyPatch):
    sizes: list[int] = []

    def midpoint(m: int, ctx: PrecisionContext) -> QuadratureRule:
        # Stands in for the m-point rule so the cap is reached cheaply.
        sizes.append(m)
        return QuadratureRule((ctx.mpf('0.5'),), (ctx.mpf(1),))

    monkeypatch.setattr(nfold.numerics, 'gauss_legendre_rule', midpoint)
    with pytest.raises(ConvergenceError, match='after 20 doublings'):
        converge(lambda rule: [ctx.mpf(len(sizes))], ctx)
    assert MAX_DOUBLINGS == 20
    assert len(sizes) == MAX_DOUBLINGS + 1
    assert sizes[0] == 8
    assert sizes[-1] == 8 * 2 ** 20


def test_composite_rule(ctx: PrecisionContext):
    mp = ctx.mp
    half = mp.mpf('0.5')
    rule = composite_rule(gauss_legendre_rule(2, ctx), (mp.zero, half, mp.one))
    assert rule.size == 4
    # Piecewise linear, so exact on the two pieces.
    assert abs(rule.apply(lambda t: abs(t - half)) - mp.mpf('0.25')) < ctx.target_tol


@pytest.mark.parametrize('points', [
    ('0',),
    ('0', '0.5', '0.5', '1'),
    ('1', '0'),
])
def test_composite_rule_invalid(ctx: PrecisionContext, points: tuple[str, ...]):
    with pytest.raises(ValueError):
        composite_rule(gauss_legendre_rule(2, ctx), [ctx.mpf(p) for p in points])


def test_converge_with_breakpoints(ctx: PrecisionContext):
    mp = ctx.mp
    kink = mp.mpf(1) / 3
    value = converge(lambda rule: [rule.apply(lambda t: abs(t - kink))], ctx,
                     start=4, breakpoints=(mp.zero, kink, mp.one))[0]
    assert abs(value - mp.mpf(5) / 18) < ctx.target_tol


def test_find_root_cos(ctx: PrecisionContext):
    mp = ctx.mp
    z = find_root(mp.cos, lambda x: -mp.sin(x), Bracket(ctx.mpf(1), ctx.mpf(2)), ctx)
    assert abs(z - mp.pi / 2) < 8 * ctx.target_tol


@pytest.mark.parametrize('lo, hi, expected', [
    ('1.5', '2.2', '1.875104068711961166445308241078214'),
    ('4.5', '4.8', '4.694091132974174576436391778019812'),
])
def test_find_root_beam(ctx: PrecisionContext, lo: str, hi: str, expected: str):
    mp = ctx.mp
    z = find_root(lambda x: mp.cos(x) * mp.cosh(x) + 1,
                  lambda x: mp.cosh(x) * (mp.cos(x) * mp.tanh(x) - mp.sin(x)),
                  Bracket(ctx.mpf(lo), ctx.mpf(hi)), ctx)
    assert abs(z - ctx.mpf(expected)) < ctx.mpf('1e-32')


def test_find_root_precision_monotone(ctx: PrecisionContext):
    coarse = PrecisionContext(128)

    def root(c: PrecisionContext):
        mp = c.mp
        return find_root(lambda x: mp.cos(x) * mp.cosh(x) + 1,
                         lambda x: mp.cosh(x) * (mp.cos(x) * mp.tanh(x) - mp.sin(x)),
                         Bracket(c.mpf('1.5'), c.mpf('2.2')), c)

    assert abs(root(coarse) - root(ctx)) < coarse.target_tol


def test_find_root_no_sign_change(ctx: PrecisionContext):
    mp = ctx.mp
    with pytest.raises(InvalidBracketError):
        find_root(mp.cos, lambda x: -mp.sin(x), Bracket(ctx.mpf(0), ctx.mpf(1)), ctx)


def test_invalid_bracket_is_value_error(ctx: PrecisionContext):
    mp = ctx.mp
    with pytest.raises(ValueError):
        find_root(mp.cos, lambda x: -mp.sin(x), Bracket(ctx.mpf(0), ctx.mpf(1)), ctx)


def test_bracket_order():
    with pytest.raises(ValueError):
        Bracket(2, 1)
    assert Bracket(1, 3).width == 2
