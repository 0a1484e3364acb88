'''
Tests for the real fundamental basis and its boundary matrix.
'''

import pytest

from nfold.basis import BasisExpansion, FundamentalBasis, boundary_matrix


def test_boundary_matrix_n2(ctx):
    mp = ctx.mp
    z = ctx.mpf('1.3')
    A = boundary_matrix(2, z, ctx, scaled=False)
    ez, emz, s, c = mp.exp(z), mp.exp(-z), mp.sin(z), mp.cos(z)
    expected = [
        [ez, emz, s, c],
        [ez, -emz, c, -s],
        [1, 1, 0, -1],
        [1, -1, -1, 0],
    ]
    for j, row in enumerate(expected):
        for k, value in enumerate(row):
            assert abs(A[j, k] - value) < ctx.target_tol, (j, k)


def test_scaled_first_column(ctx):
    mp = ctx.mp
    z = ctx.mpf('4.2')
    A = boundary_matrix(2, z, ctx)
    for j, value in enumerate([1, 1, mp.exp(-z), mp.exp(-z)]):
        assert abs(A[j, 0] - value) < ctx.target_tol


def test_scaled_determinant(ctx):
    mp = ctx.mp
    z = ctx.mpf('2.2')
    direct = mp.det(boundary_matrix(2, z, ctx, scaled=False))
    scaled = mp.det(boundary_matrix(2, z, ctx))
    assert abs(scaled - direct * mp.exp(-z)) < ctx.mpf('1e-60')


def test_n1_determinant(ctx):
    mp = ctx.mp
    z = ctx.mpf('0.8')
    assert abs(mp.det(boundary_matrix(1, z, ctx)) + mp.cos(z)) < ctx.target_tol


@pytest.mark.parametrize('n, parts', [
    (1, ['sin', 'cos']),
    (2, ['exp', 'exp', 'sin', 'cos']),
    (3, ['sin', 'cos', 'sin', 'cos', 'sin', 'cos']),
    (4, ['exp', 'exp', 'sin', 'cos', 'sin', 'cos', 'sin', 'cos']),
])
def test_columns(ctx, n: int, parts: list[str]):
    basis = FundamentalBasis(n, ctx.mpf(2), ctx)
    assert basis.size == 2 * n
    assert [c.part for c in basis.columns] == parts


def test_last_column_is_cos(ctx):
    mp = ctx.mp
    z = ctx.mpf('1.7')
    for n in (1, 2, 3, 4, 5):
        basis = FundamentalBasis(n, z, ctx)
        t = ctx.mpf('0.4')
        assert abs(basis.entry(basis.columns[-1], 0, t) - mp.cos(z * t)) < ctx.target_tol


def test_weights_round_trip(ctx):
    basis = FundamentalBasis(3, ctx.mpf('2.5'), ctx)
    gamma = [ctx.mpf(k) / 7 - 1 for k in range(6)]
    assert basis.gamma(basis.weights(gamma)) == gamma


def test_weights_length(ctx):
    basis = FundamentalBasis(2, ctx.mpf(1), ctx)
    with pytest.raises(ValueError, match='Invalid coefficient vector'):
        basis.weights([1, 2, 3])


def test_expansion_values(ctx):
    mp = ctx.mp
    z = ctx.mpf('1.1')
    basis = FundamentalBasis(2, z, ctx, scaled=False)
    gamma = [ctx.mpf(v) for v in ('0.5', '-2', '3', '0.25')]
    u = BasisExpansion(basis, basis.weights(gamma))
    t = ctx.mpf('0.6')
    expected = (gamma[0] * mp.exp(z * t) + gamma[1] * mp.exp(-z * t)
                + gamma[2] * mp.sin(z * t) + gamma[3] * mp.cos(z * t))
    assert abs(u(t) - expected) < ctx.target_tol


def test_derivative(ctx):
    mp = ctx.mp
    z = ctx.mpf('1.4')
    basis = FundamentalBasis(2, z, ctx, scaled=False)
    u = BasisExpansion(basis, basis.weights([1, 0, 0, 0]))
    t = ctx.mpf('0.3')
    assert abs(u.derivative()(t) - z * mp.exp(z * t)) < ctx.target_tol
    assert abs(u.derivative(3)(t) - z ** 3 * mp.exp(z * t)) < ctx.target_tol
    with pytest.raises(ValueError, match='Invalid derivative order'):
        u.derivative(-1)


def test_sin_derivative(ctx):
    mp = ctx.mp
    z = ctx.mpf('2.1')
    basis = FundamentalBasis(1, z, ctx)
    u = BasisExpansion(basis, basis.weights([1, 0]))
    t = ctx.mpf('0.7')
    assert abs(u.derivative(2)(t) + z ** 2 * mp.sin(z * t)) < ctx.target_tol


def test_unscale(ctx):
    mp = ctx.mp
    z = ctx.mpf('3')
    scaled = FundamentalBasis(2, z, ctx)
    plain = FundamentalBasis(2, z, ctx, scaled=False)
    gamma = [ctx.mpf(v) for v in ('1', '2', '3', '4')]
    u = BasisExpansion(scaled, scaled.weights(gamma))
    unscaled = u.unscaled_gamma
    assert abs(unscaled[0] - mp.exp(-z)) < ctx.target_tol
    assert unscaled[1:] == gamma[1:]
    v = BasisExpansion(plain, plain.weights(unscaled))
    t = ctx.mpf('0.55')
    assert abs(u(t) - v(t)) < ctx.target_tol


def test_invalid_order(ctx):
    with pytest.raises(ValueError, match='Invalid order'):
        FundamentalBasis(0, ctx.mpf(1), ctx)
