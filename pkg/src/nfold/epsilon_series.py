'''
The correction ε_i = z_i - ζ_i for n = 2 as a power series.

With z = ζ_i + ε and ζ_i = (i - 1/2)π, the equation cos z cosh z + 1 = 0
becomes

    sin ε + 2 Σ_k (-1)^k x^(2k+1) e^(-(2k+1)ε) = 0,  x = x_i = (-1)^i e^(-ζ_i)

and the ansatz ε = Σ_{m>=1} a_m x^m has rational coefficients
a = -2, -4, -34/3, -112/3, -2006/15, -1516/3, ...

Writing P = x e^(-ε), the sum is P/(1 + P²). The series live in the
univariate ring QQ[x] of `sympy.polys`, and `ring_series` truncates every
product, exponential and inverse exactly.
'''

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Any, Literal

import mpmath
from sympy.polys.domains import QQ
from sympy.polys.ring_series import rs_exp, rs_mul, rs_series_inversion, rs_sin, rs_square, rs_trunc
from sympy.polys.rings import PolyElement, ring

from nfold.eigen_solver import SingularRecord
from nfold.numerics import PrecisionContext, Real

logger = logging.getLogger(__name__)

MAX_TERMS = 100

SERIES_RING, X = ring('x', QQ)
'''
QQ[x]; `X` is the series variable.
'''

type Strategy = Literal['online', 'recompute']


def valid_strategy(strategy: Any) -> Strategy:
    match strategy:
        case 'online' | 'recompute':
            return strategy
        case _:
            raise ValueError(f'Invalid strategy: {strategy}')


@dataclass(frozen=True)
class RationalSeries:
    '''
    The exact coefficients a_1..a_K of ε = Σ a_m x^m.
    '''
    coefficients: tuple[Fraction, ...]

    @property
    def K(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, m: int) -> Fraction:
        '''
        a_m, 1-based.
        '''
        if not 1 <= m <= self.K:
            raise IndexError(f'Invalid coefficient index: {m} (have 1..{self.K})')
        return self.coefficients[m - 1]

    def evaluate(self, x: Real, ctx: PrecisionContext, K: int|None = None) -> Real:
        '''
        Σ_{m<=K} a_m x^m by Horner's rule.
        '''
        K = self.K if K is None else K
        if not 1 <= K <= self.K:
            raise ValueError(f'Invalid truncation: {K} (have 1..{self.K})')
        mp = ctx.mp
        x = mp.mpf(x)
        total = mp.zero
        for a in reversed(self.coefficients[:K]):
            total = (total + mp.mpf(a.numerator) / a.denominator) * x
        return total

    def to_poly(self) -> PolyElement:
        '''
        ε as an element of QQ[x].
        '''
        return sum((QQ(a.numerator, a.denominator) * X ** m for m, a in enumerate(self.coefficients, 1)),
                   SERIES_RING.zero)


def epsilon_residual(E: PolyElement, prec: int) -> PolyElement:
    '''
    sin ε + 2P/(1 + P²) with P = x e^(-ε), modulo x^prec.
    '''
    P = rs_trunc(X * rs_exp(-E, X, prec), X, prec)
    Q = rs_mul(P, rs_series_inversion(1 + rs_square(P, X, prec), X, prec), X, prec)
    return rs_sin(E, X, prec) + 2 * Q


def _fraction(c: Any) -> Fraction:
    return Fraction(int(QQ.numer(c)), int(QQ.denom(c)))


def _solve(K: int, truncation: Callable[[int], int]) -> list[Fraction]:
    # a_k enters the x^k coefficient of the residual only through sin ε,
    # with factor 1, so it is minus that coefficient with a_k still zero.
    E = SERIES_RING.zero
    for k in range(1, K + 1):
        a_k = -epsilon_residual(E, truncation(k)).coeff(X ** k)
        E += a_k * X ** k
    return [_fraction(E.coeff(X ** k)) for k in range(1, K + 1)]


def compute_a_coefficients(K: int, strategy: Strategy = 'online') -> RationalSeries:
    '''
    The first K coefficients of the ε-series, exactly.

    PARAMETERS
    ----------
    K: int
        Number of coefficients, 1 <= K <= 100.
    strategy: Strategy
        'online' truncates the residual at x^(k+1) while solving for a_k, so
        the working order grows with k; 'recompute' evaluates the residual
        at the full order x^(K+1) for every term. Both give identical
        rationals.

    EXAMPLE
    -------
    >>> compute_a_coefficients(3).coefficients
    (Fraction(-2, 1), Fraction(-4, 1), Fraction(-34, 3))
    '''
    if not isinstance(K, int) or not 1 <= K <= MAX_TERMS:
        raise ValueError(f'Invalid number of terms: {K} (1..{MAX_TERMS})')
    match valid_strategy(strategy):
        case 'online':
            coefficients = _solve(K, lambda k: k + 1)
        case 'recompute':
            coefficients = _solve(K, lambda k: K + 1)
        case _: # type: ignore
            raise ValueError(f'Invalid strategy: {strategy}')
    logger.debug('computed %d epsilon-series coefficients (%s)', K, strategy)
    return RationalSeries(tuple(coefficients))


def series_variable(i: int, ctx: PrecisionContext) -> Real:
    '''
    x_i = (-1)^i exp(-(i - 1/2)π).
    '''
    if i < 1:
        raise ValueError(f'Invalid index: {i}')
    mp = ctx.mp
    return (-1) ** i * mp.exp(-(i - mp.mpf(1) / 2) * mp.pi)


def epsilon_from_series(series: RationalSeries, i: int, K: int, ctx: PrecisionContext) -> Real:
    '''
    The truncated series estimate Σ_{m<=K} a_m x_i^m of ε_i for n = 2.
    '''
    return series.evaluate(series_variable(i, ctx), ctx, K)


def even_gap_h(x: Real, ctx: PrecisionContext) -> Real:
    '''
    h(x) = sin(4x)/(2x) e^(-4x); it exceeds 1 on (0, e^(-3π/2)], which bounds
    ε_i for even i.
    '''
    mp = ctx.mp
    x = mp.mpf(x)
    return mp.sin(4 * x) / (2 * x) * mp.exp(-4 * x)


@dataclass(frozen=True)
class EpsilonCheck:
    '''
    Bounds on ε_i for one index.

    Odd i: 0 < ε_i < 2e^(-ζ_i), and the sharper 0 < ε_i < 1/cosh ζ_i.
    Even i: 0 < -ε_i < 4e^(-ζ_i).
    '''
    i: int
    epsilon: Real
    bound: Real
    sharper_bound: Real|None
    ratio: Real
    '''
    |ε_i| e^(ζ_i), which tends to 2.
    '''
    passed: bool


@dataclass(frozen=True)
class EpsilonReport:
    checks: tuple[EpsilonCheck, ...]
    h_at_second_root: Real

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def check_epsilon_bounds(records: Sequence[SingularRecord], ctx: PrecisionContext) -> EpsilonReport:
    '''
    Check the sign and size bounds on ε_i for n = 2 records.
    '''
    mp = ctx.mp
    checks: list[EpsilonCheck] = []
    for r in records:
        if r.n != 2:
            raise ValueError(f'Invalid record: epsilon bounds are for n=2, got n={r.n}')
        eps = mp.mpf(r.epsilon)
        decay = mp.exp(-r.zeta)
        if r.i % 2:
            bound = 2 * decay
            sharper = 1 / mp.cosh(r.zeta)
            passed = 0 < eps < sharper <= bound
        else:
            bound = 4 * decay
            sharper = None
            passed = 0 < -eps < bound
        checks.append(EpsilonCheck(r.i, eps, bound, sharper, abs(eps) / decay, passed))
    h2 = even_gap_h(mp.exp(-3 * mp.pi / 2), ctx)
    logger.debug('h(exp(-3pi/2)) = %s', mpmath.nstr(h2, 8))
    return EpsilonReport(tuple(checks), h2)
