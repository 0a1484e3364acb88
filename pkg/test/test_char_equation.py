'''
Tests for the characteristic equation.
'''

import json

import pytest

from nfold.char_equation import (
    build_char_equation, cancellation_bits, det_direct, emit_equation, evaluate, evaluate_derivative_scaled,
    evaluate_scaled, exponentials, load_equation, reference_equation,
)
from nfold.numerics import PrecisionContext
from nfold.unity import dominant_alpha
from nfold.verify import PUBLISHED_ROOTS, oracle_equivalence, oracle_points


def as_tuples(F) -> list[tuple]:
    return [(t.alpha, t.beta, t.coeff) for t in F.terms]


def test_n2_terms(ctx: PrecisionContext):
    F = build_char_equation(2, ctx)
    assert as_tuples(F) == [(1, 1, 1), (0, 0, 1)]
    assert F.alpha_max == 1
    assert F.variable == 'z = lambda^(-1/4)'


def test_n1_terms(ctx: PrecisionContext):
    F = build_char_equation(1, ctx)
    assert len(F.terms) == 1
    term = F.terms[0]
    assert term.alpha == 0 and term.coeff == 1
    assert abs(term.beta - 1) < ctx.target_tol


def test_n3_terms(ctx: PrecisionContext):
    mp = ctx.mp
    r3 = mp.sqrt(3)
    expected = [(r3, 1, 1), (r3 / 2, mp.mpf('0.5'), 8), (0, 2, mp.mpf('0.5')), (0, 1, 4), (0, 0, mp.mpf('4.5'))]
    actual = as_tuples(build_char_equation(3, ctx))
    assert len(actual) == len(expected)
    for got, want in zip(actual, expected):
        assert all(abs(g - w) < 64 * ctx.target_tol for g, w in zip(got, want))


@pytest.mark.parametrize('n, ratio', [
    (1, 1),
    (2, 1),
    (3, 2),
    (4, None),
])
def test_reference_ratio(ctx: PrecisionContext, n: int, ratio):
    F = build_char_equation(n, ctx)
    reference = reference_equation(n)
    points = [ctx.mpf(p) for p in ('0.4', '1.1', '3.7')]
    ratios = [reference(z, ctx) / evaluate(F, z, ctx) for z in points]
    for r in ratios:
        assert abs(r / ratios[0] - 1) < ctx.mpf('1e-30')
    if ratio is not None:
        assert abs(ratios[0] - ratio) < ctx.mpf('1e-30')


@pytest.mark.parametrize('n', [1, 2, 3, 4, 5, 6])
def test_det_direct_proportional(ctx: PrecisionContext, n: int):
    F = build_char_equation(n, ctx)
    points = oracle_points(ctx)
    assert len(points) == 25
    assert all(0.1 <= z <= 20 for z in points)
    ratios = [det_direct(n, z, ctx) / evaluate(F, z, ctx) for z in points]
    for r in ratios:
        assert abs(r / ratios[0] - 1) < ctx.mpf('1e-30')


@pytest.mark.parametrize('n', [1, 5, 6])
def test_oracle_equivalence_check(ctx: PrecisionContext, n: int):
    result = oracle_equivalence(n=n, count=25)(ctx)
    assert result.passed, result.detail


def test_det_direct_n1(ctx: PrecisionContext):
    z = ctx.mpf('0.9')
    assert abs(det_direct(1, z, ctx) + ctx.mp.cos(z)) < ctx.target_tol


def test_scaled_values(ctx: PrecisionContext):
    mp = ctx.mp
    F = build_char_equation(2, ctx)
    assert abs(evaluate_scaled(F, 0, ctx) - 2) < ctx.target_tol
    assert abs(evaluate_scaled(F, mp.pi / 2, ctx) - mp.exp(-mp.pi / 2)) < ctx.target_tol


def test_scaled_matches_unscaled(ctx: PrecisionContext):
    mp = ctx.mp
    F = build_char_equation(3, ctx)
    z = ctx.mpf('2.5')
    assert abs(evaluate_scaled(F, z, ctx) - evaluate(F, z, ctx) * mp.exp(-F.alpha_max * z)) < ctx.mpf('1e-60')


def test_derivative_at_zero(ctx: PrecisionContext):
    F = build_char_equation(2, ctx)
    assert abs(evaluate_derivative_scaled(F, 0, ctx) + 2) < ctx.target_tol


@pytest.mark.parametrize('n, z', [
    (2, '0.3'),
    (2, '5.1'),
    (3, '2.0'),
    (4, '7.7'),
])
def test_derivative_central_difference(ctx: PrecisionContext, n: int, z: str):
    F = build_char_equation(n, ctx)
    z0 = ctx.mpf(z)
    h = ctx.mp.ldexp(1, -ctx.bits // 3)
    estimate = (evaluate_scaled(F, z0 + h, ctx) - evaluate_scaled(F, z0 - h, ctx)) / (2 * h)
    assert abs(estimate - evaluate_derivative_scaled(F, z0, ctx)) < ctx.mpf('1e-30')


def test_simple_first_root(ctx: PrecisionContext):
    F = build_char_equation(2, ctx)
    assert abs(evaluate_derivative_scaled(F, ctx.mpf(PUBLISHED_ROOTS[2][0]), ctx)) > ctx.mpf('0.1')


@pytest.mark.parametrize('n', [1, 2, 3, 4])
def test_even(ctx: PrecisionContext, n: int):
    F = build_char_equation(n, ctx)
    z = ctx.mpf('1.9')
    assert abs(evaluate(F, z, ctx) - evaluate(F, -z, ctx)) < ctx.mpf('1e-60')


def test_published_root_n3(ctx: PrecisionContext):
    F = build_char_equation(3, ctx)
    for text in PUBLISHED_ROOTS[3]:
        assert abs(evaluate_scaled(F, ctx.mpf(text), ctx)) < ctx.mpf('1e-14')


@pytest.mark.parametrize('n', [2, 3, 4, 5])
def test_leading_alpha(ctx: PrecisionContext, n: int):
    F = build_char_equation(n, ctx)
    assert abs(F.alpha_max - dominant_alpha(n, ctx)) < ctx.target_tol
    assert F.terms[0].coeff == 1


def test_emit_text():
    assert emit_equation(build_char_equation(2), 'text') == 'cosh(z)*cos(z) + 1 = 0'
    assert emit_equation(build_char_equation(1), 'text') == 'cos(z) = 0'


def test_emit_json(ctx: PrecisionContext):
    data = json.loads(emit_equation(build_char_equation(2, ctx), 'json', 20))
    assert data['n'] == 2
    assert data['scale_convention'] == 'unit-dominant'
    assert data['variable'] == 'z = lambda^(-1/4)'
    assert [float(t['alpha']) for t in data['terms']] == [1.0, 0.0]
    assert data['terms'][1]['beta'] == '0'
    assert all(isinstance(t['coeff'], str) for t in data['terms'])


def test_load_round_trip(ctx: PrecisionContext):
    F = build_char_equation(3, ctx)
    G = load_equation(emit_equation(F, 'json', 40), ctx)
    assert G.n == 3
    assert len(G.terms) == len(F.terms)
    for a, b in zip(F.terms, G.terms):
        assert abs(a.coeff - b.coeff) < ctx.mpf('1e-35')
        assert abs(a.alpha - b.alpha) < ctx.mpf('1e-35')
        assert abs(a.beta - b.beta) < ctx.mpf('1e-35')


@pytest.mark.parametrize('text', [
    'not json',
    '{}',
    '{"n": 2}',
    '{"n": 2, "terms": [{"coeff": "1"}]}',
    '{"n": 0, "terms": []}',
])
def test_load_invalid(text: str):
    with pytest.raises(ValueError, match='Invalid'):
        load_equation(text)


def test_emit_invalid_format():
    with pytest.raises(ValueError, match='Invalid equation format'):
        emit_equation(build_char_equation(2), 'yaml')


def test_exponentials(ctx: PrecisionContext):
    mp = ctx.mp
    F = build_char_equation(3, ctx)
    terms = exponentials(F, ctx).values()
    assert abs(mp.fsum(c for _, c in terms) - evaluate(F, 0, ctx)) < ctx.mpf('1e-60')
    z = ctx.mpf('1.7')
    total = mp.fsum((c * mp.exp(s * z)).real for s, c in terms)
    assert abs(total - evaluate(F, z, ctx)) < ctx.mpf('1e-60')


def test_cancellation_bits(ctx: PrecisionContext):
    assert cancellation_bits(build_char_equation(2, ctx), 10) == 15


def test_invalid_orders():
    with pytest.raises(ValueError, match='no closed form'):
        reference_equation(5)
    with pytest.raises(ValueError, match='enumeration limit'):
        build_char_equation(13)
    with pytest.raises(ValueError, match='Invalid order'):
        build_char_equation(0)
