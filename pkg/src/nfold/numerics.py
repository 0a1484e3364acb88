'''
Arbitrary-precision numerics: precision contexts, Gauss-Legendre rules,
adaptive quadrature and a safeguarded Newton root finder.

Every value is an mpmath number bound to a private `mpmath.MPContext`, one per
bit count, so a `PrecisionContext` never touches the global `mpmath.mp`
settings and results keep their precision wherever they are used.
'''

from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
import logging
from typing import Any

import mpmath

from nfold.errors import (
    ConvergenceError, InvalidBracketError, PrecisionExhaustedError,
)
from nfold.utils import sign

logger = logging.getLogger(__name__)

DEFAULT_BITS = 256
MIN_BITS = 64
GUARD_BITS = 32
'''
Extra bits carried on top of the cancellation budget.
'''
DEFAULT_START_NODES = 8
MAX_DOUBLINGS = 20
NODE_GUARD_BITS = 20
MAX_NODE_ITERATIONS = 100

type Real = Any
'''
An `mpf` bound to some precision context.
'''
type Complex = Any
'''
An `mpc` bound to some precision context.
'''


@lru_cache(maxsize=None)
def _mp_context(bits: int) -> mpmath.MPContext:
    '''
    The shared mpmath context for a bit count. Never mutated after creation.
    '''
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    '''
    Working precision and acceptance tolerance for a computation.

    PARAMETERS
    ----------
    bits: int
        Binary digits of working precision, at least 64.
    target_tol: number|str|None
        Acceptance tolerance. Defaults to 2^(-bits/2). Must not be smaller
        than 2^(-bits+16).

    EXAMPLE
    -------
    >>> ctx = PrecisionContext(bits=128)
    >>> ctx.mp.pi
    '''
    bits: int = DEFAULT_BITS
    target_tol: Any = field(default=None)

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < MIN_BITS:
            raise ValueError(f'Invalid precision: {self.bits} bits (minimum {MIN_BITS})')
        mp = self.mp
        if self.target_tol is None:
            tol = mp.ldexp(mp.one, -(self.bits // 2))
        else:
            tol = mp.mpf(self.target_tol)
        if tol < mp.ldexp(mp.one, -self.bits + 16):
            raise ValueError(f'Invalid tolerance: {mpmath.nstr(tol, 5)} is below 2^-{self.bits - 16}')
        object.__setattr__(self, 'target_tol', tol)

    @property
    def mp(self) -> mpmath.MPContext:
        return _mp_context(self.bits)

    def mpf(self, x: Any) -> Real:
        '''
        Convert to a real at this precision. Strings are parsed at full precision.
        '''
        return self.mp.mpf(x)

    def raised(self, extra_bits: int) -> 'PrecisionContext':
        '''
        The same tolerance with `extra_bits` more working precision.
        '''
        if extra_bits <= 0:
            return self
        return PrecisionContext(self.bits + extra_bits, self.target_tol)

    @property
    def digits(self) -> int:
        '''
        Decimal digits justified by the target tolerance.
        '''
        return max(1, int(-self.mp.log10(self.target_tol)))


@dataclass(frozen=True)
class Bracket:
    '''
    An interval lo < hi believed to hold a sign change.
    '''
    lo: Real
    hi: Real

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f'Invalid bracket: [{self.lo}, {self.hi}]')

    @property
    def width(self) -> Real:
        return self.hi - self.lo


@dataclass(frozen=True)
class QuadratureRule:
    '''
    An m-point Gauss-Legendre rule on [0, 1], nodes increasing.
    '''
    nodes: tuple[Real, ...]
    weights: tuple[Real, ...]

    @property
    def size(self) -> int:
        return len(self.nodes)

    def apply(self, f: Callable[[Real], Real]) -> Real:
        return self.dot([f(t) for t in self.nodes])

    def dot(self, values: Sequence[Real]) -> Real:
        '''
        Integrate from values already sampled at the nodes.
        '''
        return sum((w * v for w, v in zip(self.weights, values)), start=self.weights[0] * 0)

    def scaled(self, a: Real, b: Real) -> 'QuadratureRule':
        '''
        The same rule mapped onto [a, b].
        '''
        width = b - a
        return QuadratureRule(tuple(a + width * t for t in self.nodes),
                              tuple(width * w for w in self.weights))


@lru_cache(maxsize=256)
def _legendre_rule(m: int, bits: int) -> QuadratureRule:
    # Newton on the three-term recurrence, with guard bits; nodes come in
    # symmetric pairs so only the upper half is iterated.
    mp = _mp_context(bits + NODE_GUARD_BITS)
    out = _mp_context(bits)
    threshold = mp.ldexp(mp.one, -(bits + 4))
    upper: list[tuple[Any, Any]] = []
    for k in range(1, m // 2 + 1):
        x = mp.cos(mp.pi * (4 * k - 1) / (4 * m + 2))
        for _ in range(MAX_NODE_ITERATIONS):
            p, dp = _legendre_with_derivative(mp, m, x)
            dx = p / dp
            x -= dx
            if abs(dx) <= threshold:
                break
        else:
            raise PrecisionExhaustedError(f'Legendre node {k} of {m} did not converge at {bits} bits')
        _, dp = _legendre_with_derivative(mp, m, x)
        upper.append((x, 2 / ((1 - x * x) * dp * dp)))
    if m % 2:
        # The middle node is exactly zero.
        _, dp = _legendre_with_derivative(mp, m, mp.zero)
        middle = [(mp.zero, 2 / (dp * dp))]
    else:
        middle = []
    pairs = upper + middle + [(-x, w) for x, w in reversed(upper)]
    # x = 1 - 2t keeps the nodes increasing in t.
    nodes = tuple(out.mpf((1 - x) / 2) for x, _ in pairs)
    weights = tuple(out.mpf(w / 2) for _, w in pairs)
    return QuadratureRule(nodes, weights)


def _legendre_with_derivative(mp: mpmath.MPContext, m: int, x: Any) -> tuple[Any, Any]:
    p0, p1 = mp.one, x
    for j in range(1, m):
        p0, p1 = p1, ((2 * j + 1) * x * p1 - j * p0) / (j + 1)
    if m == 0:
        return p0, mp.zero
    return p1, m * (x * p1 - p0) / (x * x - 1)


def gauss_legendre_rule(m: int, ctx: PrecisionContext) -> QuadratureRule:
    '''
    The m-point Gauss-Legendre rule on [0, 1] at the context's precision.

    Exact for polynomials of degree up to 2m-1; weights sum to one. Rules are
    cached by (m, bits).

    PARAMETERS
    ----------
    m: int
        Number of nodes, at least 1.
    ctx: PrecisionContext
        Precision of the nodes and weights.

    RETURNS
    -------
    QuadratureRule
    '''
    if m < 1:
        raise ValueError(f'Invalid rule size: {m}')
    return _legendre_rule(m, ctx.bits)


def adaptive_rules(ctx: PrecisionContext,
                   start: int = DEFAULT_START_NODES,
                   max_doublings: int = MAX_DOUBLINGS) -> Iterator[QuadratureRule]:
    '''
    Gauss-Legendre rules of `start`, 2*start, 4*start... nodes.
    '''
    m = max(1, start)
    for _ in range(max_doublings + 1):
        yield gauss_legendre_rule(m, ctx)
        m *= 2


def composite_rule(rule: QuadratureRule, breakpoints: Sequence[Real]) -> QuadratureRule:
    '''
    `rule` repeated on each interval between consecutive breakpoints.
    '''
    if len(breakpoints) < 2:
        raise ValueError(f'Invalid breakpoints: need at least 2, got {len(breakpoints)}')
    if any(b <= a for a, b in zip(breakpoints, breakpoints[1:])):
        raise ValueError('Invalid breakpoints: must be strictly increasing')
    pieces = [rule.scaled(a, b) for a, b in zip(breakpoints, breakpoints[1:])]
    return QuadratureRule(tuple(t for p in pieces for t in p.nodes),
                          tuple(w for p in pieces for w in p.weights))


def converge(evaluate: Callable[[QuadratureRule], Sequence[Real]],
             ctx: PrecisionContext,
             start: int = DEFAULT_START_NODES,
             max_doublings: int = MAX_DOUBLINGS,
             what: str = 'integral',
             breakpoints: Sequence[Real]|None = None) -> list[Real]:
    '''
    Evaluate a vector of quadrature-based quantities on successively doubled
    rules until two consecutive results agree within `ctx.target_tol` in every
    component.

    PARAMETERS
    ----------
    evaluate: Callable[[QuadratureRule], Sequence[Real]]
        Computes the quantities with a given rule.
    ctx: PrecisionContext
        Supplies the tolerance.
    start: int
        Node count of the first rule.
    what: str
        Name used in log and error messages.
    breakpoints: Sequence[Real]|None
        Interior and end points of a piecewise integrand; each rule is then
        applied on every piece (see `composite_rule`).

    RETURNS
    -------
    list[Real]
        The values from the finer of the two agreeing rules.
    '''
    previous: list[Real]|None = None
    rule_size = start
    for rule in adaptive_rules(ctx, start, max_doublings):
        if breakpoints is not None:
            rule = composite_rule(rule, breakpoints)
        rule_size = rule.size
        current = list(evaluate(rule))
        if previous is not None:
            change = max((abs(c - p) for c, p in zip(current, previous)), default=0)
            logger.debug('%s: %d nodes, change %s', what, rule.size, mpmath.nstr(change, 3))
            if change <= ctx.target_tol:
                return current
        previous = current
    raise ConvergenceError(f'{what} did not converge after {max_doublings} doublings ({rule_size} nodes)')


def integrate(f: Callable[[Real], Real], ctx: PrecisionContext,
              start: int = DEFAULT_START_NODES) -> Real:
    '''
    Integrate f over [0, 1] by Gauss-Legendre rules of doubling size.

    RETURNS
    -------
    Real
        The value from the finer of two rules agreeing within `ctx.target_tol`.

    EXAMPLE
    -------
    >>> integrate(lambda t: t, PrecisionContext(128))
    mpf('0.5')
    '''
    return converge(lambda rule: [rule.apply(f)], ctx, start)[0]


def find_root(f: Callable[[Real], Real],
              df: Callable[[Real], Real],
              bracket: Bracket,
              ctx: PrecisionContext,
              max_iter: int|None = None) -> Real:
    '''
    Find the root of f inside a bracket with a sign change.

    Newton steps are taken while they stay inside the shrinking bracket;
    otherwise the bracket is bisected. A Newton step shorter than the
    tolerance is accepted only once the sign change has been confirmed on an
    interval narrower than `ctx.target_tol` around it.

    PARAMETERS
    ----------
    f, df: Callable[[Real], Real]
        The function and its derivative.
    bracket: Bracket
        f must differ in sign at the two ends.
    ctx: PrecisionContext
        Working precision and tolerance.
    max_iter: int|None
        Iteration cap; defaults to 10 * bits.

    RETURNS
    -------
    Real
        A root z with |f(z)| <= 8 * target_tol * |df(z)|.
    '''
    mp = ctx.mp
    tol = ctx.target_tol
    cap = max_iter or 10 * ctx.bits
    lo, hi = mp.mpf(bracket.lo), mp.mpf(bracket.hi)
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if sign(flo) == sign(fhi):
        raise InvalidBracketError(f'No sign change on [{mpmath.nstr(lo, 10)}, {mpmath.nstr(hi, 10)}]')

    def accept(x: Real) -> Real:
        fx, dfx = f(x), df(x)
        if abs(fx) > 8 * tol * abs(dfx):
            raise PrecisionExhaustedError(
                f'Residual {mpmath.nstr(fx, 3)} at {mpmath.nstr(x, 15)} exceeds the tolerance; raise precision')
        return x

    x = lo + (hi - lo) / 2
    for iteration in range(cap):
        fx = f(x)
        if fx == 0:
            return x
        if sign(fx) == sign(flo):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        if hi - lo < tol:
            logger.debug('root bracketed after %d iterations', iteration + 1)
            return accept(lo if abs(flo) < abs(fhi) else hi)
        dfx = df(x)
        candidate = x - fx / dfx if dfx != 0 else None
        if candidate is None or not lo < candidate < hi:
            candidate = lo + (hi - lo) / 2
        elif abs(candidate - x) < tol / 4:
            a, b = candidate - tol / 4, candidate + tol / 4
            if sign(f(a)) != sign(f(b)):
                logger.debug('Newton converged after %d iterations', iteration + 1)
                return accept(candidate)
        x = candidate
    raise ConvergenceError(f'Root not found in {cap} iterations on [{mpmath.nstr(lo, 15)}, {mpmath.nstr(hi, 15)}]')
