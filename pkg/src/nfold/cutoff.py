'''
Spectral cut-off for J^n x = y.

Given the first singular triples (σ_i, u_i, v_i) the truncated reconstruction

    x_N = Σ_{i<=N} ⟨y, v_i⟩/σ_i u_i

regularizes the problem, with N as the regularization parameter. N can be
fixed or chosen by the discrepancy principle: the smallest N with
||J^n x_N - y|| <= τδ.

Data come either as callables on [0, 1] or as sample tables, which are
interpolated by cubic splines; for tables the quadrature runs piecewise on
the sample grid.
'''

from bisect import bisect_right
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
import logging
import math
from typing import Any, Literal

import mpmath
import numpy as np

from nfold.data_tables import SampleTable
from nfold.eigenfunctions import ExtendedFunction, SingularTriple, apply_Jn_closed
from nfold.errors import InsufficientSystemError
from nfold.numerics import DEFAULT_START_NODES, PrecisionContext, QuadratureRule, Real, converge

logger = logging.getLogger(__name__)

DEFAULT_TAU = 1.5
NOISE_MODES = 64
PIECE_START_NODES = 4
MODES_SIGNAL_TERMS = 6

type Signal = Literal['ramp', 'sine', 'modes']


def valid_signal(signal: Any) -> Signal:
    match signal:
        case 'ramp' | 'sine' | 'modes':
            return signal
        case _:
            raise ValueError(f'Invalid signal: {signal}')


@dataclass(frozen=True)
class DataFunction:
    '''
    A function on [0, 1] used as data or as a reconstruction target.

    PARAMETERS
    ----------
    func: Callable[[Real], Real]
        Evaluates the function at the context's precision.
    ctx: PrecisionContext
    noise_level: Real
        δ >= 0, the L² norm of any perturbation carried by the data.
    breakpoints: tuple[Real, ...]|None
        Points where the function is only piecewise smooth, including 0 and 1.
        Quadrature is done piece by piece when present.
    table: SampleTable|None
        The samples the function was interpolated from, if any.
    name: str
    '''
    func: Callable[[Real], Real]
    ctx: PrecisionContext
    noise_level: Real = 0
    breakpoints: tuple[Real, ...]|None = None
    table: SampleTable|None = field(default=None, compare=False)
    name: str = ''

    def __post_init__(self):
        if self.noise_level < 0:
            raise ValueError(f'Invalid noise level: {self.noise_level}')

    def __call__(self, t: Real) -> Real:
        return self.func(t)

    @classmethod
    def from_table(cls, table: SampleTable, ctx: PrecisionContext,
                   noise_level: Real = 0, name: str = '') -> 'DataFunction':
        '''
        The cubic-spline interpolant of a sample table, with its cubic pieces
        evaluated at the context's precision so quadrature on each piece is
        exact. Beyond the grid the end cubics extrapolate.
        '''
        mp = ctx.mp
        pieces = [(mp.mpf(knot), [mp.mpf(c) for c in coeffs]) for knot, coeffs in table.pieces()]
        knots = [knot for knot, _ in pieces]

        def spline(t: Real) -> Real:
            t = mp.mpf(t)
            k = min(max(bisect_right(knots, t) - 1, 0), len(pieces) - 1)
            knot, coeffs = pieces[k]
            return mp.polyval(coeffs, t - knot)

        interior = [knot for knot in knots[1:] if 0 < knot < 1]
        return cls(spline, ctx, noise_level,
                   (mp.zero, *interior, mp.one), table, name or table.column)

    def sample(self, grid: Sequence[Real]) -> list[Real]:
        return [self(t) for t in grid]

    def to_table(self, points: int = 101) -> SampleTable:
        '''
        Samples on a uniform grid of `points` points over [0, 1].
        '''
        if points < 4:
            raise ValueError(f'Invalid sample count: {points}')
        mp = self.ctx.mp
        grid = [mp.mpf(k) / (points - 1) for k in range(points)]
        return SampleTable.from_samples(grid, self.sample(grid))


def _start(start: int, breakpoints: Sequence[Real]|None) -> int:
    if breakpoints is None:
        return start
    return max(PIECE_START_NODES, math.ceil(start / (len(breakpoints) - 1)))


def _local_breakpoints(breakpoints: Sequence[Real]|None, a: Real, b: Real,
                       ctx: PrecisionContext) -> tuple[Real, ...]|None:
    # Breakpoints of t ↦ f(a + (b - a)τ) in τ ∈ [0, 1].
    if breakpoints is None:
        return None
    mp = ctx.mp
    inside = [(p - a) / (b - a) for p in breakpoints if a < p < b]
    return (mp.zero, *inside, mp.one)


def forward_Jn(x: DataFunction, n: int, ctx: PrecisionContext|None = None) -> DataFunction:
    '''
    y = J^n x, pointwise by quadrature.

    With t = sτ, y(s) = s^n/(n-1)! ∫_0^1 (1-τ)^(n-1) x(sτ) dτ; y(0) = 0.

    EXAMPLE
    -------
    >>> ctx = PrecisionContext(128)
    >>> y = forward_Jn(DataFunction(lambda t: ctx.mp.one, ctx), 2)
    >>> y(1)
    mpf('0.5')
    '''
    if n < 1:
        raise ValueError(f'Invalid order: {n}')
    ctx = ctx or x.ctx
    mp = ctx.mp
    scale = 1 / mp.factorial(n - 1)

    def y(s: Real) -> Real:
        s = mp.mpf(s)
        if s == 0:
            return mp.zero
        pieces = _local_breakpoints(x.breakpoints, 0, s, ctx)
        value = converge(lambda rule: [rule.apply(lambda tau: (1 - tau) ** (n - 1) * x(s * tau))],
                         ctx, _start(DEFAULT_START_NODES, pieces), what='forward J^n', breakpoints=pieces)[0]
        return scale * s ** n * value

    return DataFunction(y, ctx, 0, x.breakpoints, None, f'J^{n} {x.name}'.strip())


def adjoint_Jn(z: DataFunction, n: int, ctx: PrecisionContext|None = None) -> DataFunction:
    '''
    (J^n)* z, pointwise by quadrature.

    With s = t + (1-t)τ, (J^n)* z(t) = (1-t)^n/(n-1)! ∫_0^1 τ^(n-1) z(t + (1-t)τ) dτ.
    '''
    if n < 1:
        raise ValueError(f'Invalid order: {n}')
    ctx = ctx or z.ctx
    mp = ctx.mp
    scale = 1 / mp.factorial(n - 1)

    def w(t: Real) -> Real:
        t = mp.mpf(t)
        if t == 1:
            return mp.zero
        pieces = _local_breakpoints(z.breakpoints, t, 1, ctx)
        value = converge(lambda rule: [rule.apply(lambda tau: tau ** (n - 1) * z(t + (1 - t) * tau))],
                         ctx, _start(DEFAULT_START_NODES, pieces), what='adjoint J^n', breakpoints=pieces)[0]
        return scale * (1 - t) ** n * value

    return DataFunction(w, ctx, 0, z.breakpoints, None, f'J^{n}* {z.name}'.strip())


def l2_distance(f: DataFunction, g: Callable[[Real], Real], ctx: PrecisionContext,
                start: int = DEFAULT_START_NODES) -> Real:
    '''
    ||f - g|| on [0, 1].
    '''
    pieces = f.breakpoints
    value = converge(lambda rule: [rule.apply(lambda t: (f(t) - g(t)) ** 2)],
                     ctx, _start(start, pieces), what='L2 distance', breakpoints=pieces)[0]
    return ctx.mp.sqrt(value)


@dataclass(frozen=True)
class CutoffSolution:
    '''
    The truncated reconstruction x_N = Σ_{i<=N} c_i u_i with c_i = ⟨y, v_i⟩/σ_i.
    '''
    n: int
    N: int
    coefficients: tuple[Real, ...]
    system: tuple[SingularTriple, ...]
    noise_level: Real = 0

    @property
    def _mp(self) -> mpmath.MPContext|None:
        return self.system[0].u.basis.ctx.mp if self.system else None

    def __call__(self, t: Real) -> Real:
        if self._mp is None:
            return 0 * t
        return self._mp.fsum(c * triple.u(t) for c, triple in zip(self.coefficients, self.system))

    @cached_property
    def images(self) -> tuple[ExtendedFunction, ...]:
        '''
        J^n u_i in closed form, for i <= N.
        '''
        return tuple(apply_Jn_closed(triple.u) for triple in self.system[:self.N])

    def forward(self, t: Real) -> Real:
        '''
        J^n x_N at t.
        '''
        if self._mp is None:
            return 0 * t
        return self._mp.fsum(c * image(t) for c, image in zip(self.coefficients, self.images))


def _check_system(n: int, N: int, system: Sequence[SingularTriple]) -> None:
    if N < 0:
        raise ValueError(f'Invalid cut-off: {N}')
    if N > len(system):
        raise InsufficientSystemError(f'Cut-off N={N} needs {N} singular triples, have {len(system)}')
    if any(triple.record.n != n for triple in system[:N]):
        raise ValueError(f'Invalid system: not all triples belong to n={n}')


def _rule_start(n: int, N: int) -> int:
    return 4 * (N + n)


def modal_coefficients(y: DataFunction, system: Sequence[SingularTriple],
                       ctx: PrecisionContext) -> list[Real]:
    '''
    ⟨y, v_i⟩ for every triple of the system.
    '''
    if not system:
        return []
    n = system[0].record.n
    pieces = y.breakpoints

    def products(rule: QuadratureRule) -> list[Real]:
        values = [y(t) for t in rule.nodes]
        return [rule.dot([a * triple.v(t) for a, t in zip(values, rule.nodes)]) for triple in system]

    return converge(products, ctx, _start(_rule_start(n, len(system)), pieces),
                    what='modal coefficients', breakpoints=pieces)


def cutoff_solve(y: DataFunction, n: int, N: int, system: Sequence[SingularTriple],
                 ctx: PrecisionContext) -> CutoffSolution:
    '''
    The spectral cut-off reconstruction from the first N triples.

    PARAMETERS
    ----------
    y: DataFunction
        Data y or y^δ.
    n: int
        Order of the operator.
    N: int
        Cut-off index, 0 <= N <= len(system).
    system: Sequence[SingularTriple]
        Singular triples of J^n, largest σ first.
    ctx: PrecisionContext

    RAISES
    ------
    InsufficientSystemError
        N exceeds the number of triples.
    '''
    _check_system(n, N, system)
    triples = tuple(system[:N])
    products = modal_coefficients(y, triples, ctx)
    coefficients = tuple(b / triple.sigma for b, triple in zip(products, triples))
    logger.info('cut-off reconstruction: n=%d, N=%d', n, N)
    return CutoffSolution(n, N, coefficients, triples, y.noise_level)


def _noise(ctx: PrecisionContext, delta: Real, seed: int, modes: int) -> Callable[[Real], Real]:
    # Σ_k a_k √2 sin(kπt), rescaled so Σ a_k² = δ².
    mp = ctx.mp
    draws = np.random.default_rng(seed).standard_normal(modes)
    raw = [mp.mpf(float(a)) for a in draws]
    scale = mp.mpf(delta) / mp.sqrt(mp.fsum(a * a for a in raw))
    amplitudes = [mp.sqrt(2) * scale * a for a in raw]

    def perturbation(t: Real) -> Real:
        x = mp.pi * mp.mpf(t)
        c2 = 2 * mp.cos(x)
        prev, current = mp.zero, mp.sin(x)
        total = mp.zero
        for a in amplitudes:
            total += a * current
            prev, current = current, c2 * current - prev
        return total

    return perturbation


def add_noise(y: DataFunction, delta: Any, seed: int = 0,
              modes: int = NOISE_MODES) -> DataFunction:
    '''
    y^δ = y + p with p a seeded random combination of √2 sin(kπt), k <= modes,
    rescaled so ||p|| = δ exactly.

    EXAMPLE
    -------
    >>> y_delta = add_noise(y, '1e-3', seed=7)
    >>> y_delta.noise_level
    mpf('0.001')
    '''
    ctx = y.ctx
    delta = ctx.mpf(delta)
    if delta < 0:
        raise ValueError(f'Invalid noise level: {delta}')
    if modes < 1:
        raise ValueError(f'Invalid mode count: {modes}')
    if delta == 0:
        return y
    p = _noise(ctx, delta, seed, modes)
    logger.debug('noise: delta=%s, seed=%d, %d modes', mpmath.nstr(delta, 5), seed, modes)
    return DataFunction(lambda t: y(t) + p(t), ctx, y.noise_level + delta, y.breakpoints,
                        None, f'{y.name}+noise'.strip('+'))


def residual_norms(y: DataFunction, n: int, system: Sequence[SingularTriple],
                   ctx: PrecisionContext) -> list[Real]:
    '''
    ||J^n x_N - y|| for N = 0..len(system), with J^n u_i in closed form.
    '''
    _check_system(n, len(system), system)
    mp = ctx.mp
    images = [apply_Jn_closed(triple.u) for triple in system]
    pieces = y.breakpoints

    def squares(rule: QuadratureRule) -> list[Real]:
        data = [y(t) for t in rule.nodes]
        products = [rule.dot([a * triple.v(t) for a, t in zip(data, rule.nodes)]) for triple in system]
        coefficients = [b / triple.sigma for b, triple in zip(products, system)]
        fitted = [mp.zero] * rule.size
        out = [rule.dot([a * a for a in data])]
        for c, image in zip(coefficients, images):
            fitted = [f + c * image(t) for f, t in zip(fitted, rule.nodes)]
            out.append(rule.dot([(f - a) ** 2 for f, a in zip(fitted, data)]))
        return out

    values = converge(squares, ctx, _start(_rule_start(n, len(system)), pieces),
                      what='discrepancy', breakpoints=pieces)
    return [mp.sqrt(max(v, mp.zero)) for v in values]


def choose_N_discrepancy(y_delta: DataFunction, delta: Any, tau: Any = DEFAULT_TAU,
                         n: int = 1, system: Sequence[SingularTriple] = (),
                         ctx: PrecisionContext|None = None) -> int:
    '''
    The smallest N with ||J^n x_N - y^δ|| <= τδ.

    If no N up to the size of the system meets the bound, a warning is logged
    and the system size is returned.
    '''
    ctx = ctx or y_delta.ctx
    delta, tau = ctx.mpf(delta), ctx.mpf(tau)
    if not tau > 1:
        raise ValueError(f'Invalid tau: {tau} (must exceed 1)')
    if not delta > 0:
        raise ValueError(f'Invalid noise level: {delta} (must be positive)')
    norms = residual_norms(y_delta, n, system, ctx)
    bound = tau * delta
    for N, r in enumerate(norms):
        if r <= bound:
            logger.info('discrepancy principle: N=%d (residual %s <= %s)',
                        N, mpmath.nstr(r, 5), mpmath.nstr(bound, 5))
            return N
    logger.warning('discrepancy %s never reached %s with %d triples; using N=%d',
                   mpmath.nstr(norms[-1], 5), mpmath.nstr(bound, 5), len(system), len(system))
    return len(system)


def discrepancy(solution: CutoffSolution, y: DataFunction, ctx: PrecisionContext) -> Real:
    '''
    ||J^n x_N - y||.
    '''
    return l2_distance(y, solution.forward, ctx, _rule_start(solution.n, solution.N))


def reconstruction_error(solution: CutoffSolution, truth: DataFunction, ctx: PrecisionContext) -> Real:
    '''
    ||x_N - x|| against a known solution x.
    '''
    return l2_distance(truth, solution, ctx, _rule_start(solution.n, solution.N))


def error_sweep(y: DataFunction, truth: DataFunction, n: int, Ns: Sequence[int],
                system: Sequence[SingularTriple], ctx: PrecisionContext) -> list[tuple[int, Real]]:
    '''
    Reconstruction errors ||x_N - x|| for each N in `Ns`, from one set of
    modal coefficients.
    '''
    if not Ns:
        return []
    top = max(Ns)
    _check_system(n, top, system)
    mp = ctx.mp
    triples = list(system[:top])
    coefficients = [b / triple.sigma for b, triple in zip(modal_coefficients(y, triples, ctx), triples)]
    pieces = truth.breakpoints

    def squares(rule: QuadratureRule) -> list[Real]:
        target = [truth(t) for t in rule.nodes]
        fitted = [mp.zero] * rule.size
        out = [rule.dot([a * a for a in target])]
        for c, triple in zip(coefficients, triples):
            fitted = [f + c * triple.u(t) for f, t in zip(fitted, rule.nodes)]
            out.append(rule.dot([(f - a) ** 2 for f, a in zip(fitted, target)]))
        return out

    values = converge(squares, ctx, _start(_rule_start(n, top), pieces),
                      what='error sweep', breakpoints=pieces)
    return [(N, mp.sqrt(max(values[N], mp.zero))) for N in Ns]


def _sine_image(n: int, ctx: PrecisionContext) -> Callable[[Real], Real]:
    # J^n sin(πt) = Im(ν^-n (e^{νt} - Σ_{j<n} (νt)^j/j!)), ν = iπ.
    mp = ctx.mp
    nu = mp.mpc(0, mp.pi)

    def y(s: Real) -> Real:
        s = mp.mpf(s)
        head = mp.fsum((nu * s) ** j / mp.factorial(j) for j in range(n))
        return (nu ** -n * (mp.exp(nu * s) - head)).imag

    return y


def synthetic_problem(signal: Signal, n: int, ctx: PrecisionContext,
                      system: Sequence[SingularTriple] = ()) -> tuple[DataFunction, DataFunction]:
    '''
    A test problem with known solution, as (x, y = J^n x).

    - 'ramp': x ≡ 1, y(s) = s^n/n!.
    - 'sine': x = sin πt, y in closed form.
    - 'modes': x = Σ_{i<=6} 2^(1-i) u_i, y = Σ 2^(1-i) σ_i v_i; needs six triples.
    '''
    mp = ctx.mp
    match valid_signal(signal):
        case 'ramp':
            scale = 1 / mp.factorial(n)
            return (DataFunction(lambda t: mp.one, ctx, name='ramp'),
                    DataFunction(lambda s: scale * mp.mpf(s) ** n, ctx, name=f'J^{n} ramp'))
        case 'sine':
            return (DataFunction(lambda t: mp.sinpi(mp.mpf(t)), ctx, name='sine'),
                    DataFunction(_sine_image(n, ctx), ctx, name=f'J^{n} sine'))
        case 'modes':
            _check_system(n, MODES_SIGNAL_TERMS, system)
            triples = system[:MODES_SIGNAL_TERMS]
            weights = [mp.ldexp(mp.one, -k) for k in range(MODES_SIGNAL_TERMS)]
            return (DataFunction(lambda t: mp.fsum(w * tr.u(t) for w, tr in zip(weights, triples)),
                                 ctx, name='modes'),
                    DataFunction(lambda s: mp.fsum(w * tr.sigma * tr.v(s) for w, tr in zip(weights, triples)),
                                 ctx, name=f'J^{n} modes'))
        case _: # type: ignore
            raise ValueError(f'Invalid signal: {signal}')
