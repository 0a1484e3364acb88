'''
Singular values of J^n from the roots of the characteristic equation.

The i-th positive root z_i of F_n gives

    λ_i = z_i^(-2n)   (eigenvalue of (J^n)* J^n)
    σ_i = z_i^(-n)    (singular value of J^n)

and z_i = ζ_i + ε_i with ζ_i = (i - 1/2)π and ε_i -> 0.

Roots are located by counting sign changes of the scaled equation on a
uniform grid from z = 0.1 (so the first root is never skipped) and polished
by `find_root` at a precision raised by the cancellation budget.
'''

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
import logging

import mpmath

from nfold.char_equation import (
    CharEquation, build_char_equation, cancellation_bits, evaluate_derivative_scaled, evaluate_scaled,
)
from nfold.errors import MissedRootError
from nfold.numerics import GUARD_BITS, Bracket, PrecisionContext, Real, find_root
from nfold.utils import sign, take

logger = logging.getLogger(__name__)

SCAN_START = '0.1'
SCAN_STEPS_PER_WINDOW = 16
'''
Grid points per window of width π in the sign-change scan.
'''
MAX_REFINEMENTS = 4
DRIFT_WINDOWS = 1
'''
How many windows the first roots may drift beyond ζ_i + π/2 before a
missing sign change counts as a missed root.
'''


@dataclass(frozen=True)
class SingularRecord:
    '''
    One singular value of J^n with its root and asymptotic split.
    '''
    n: int
    i: int
    z: Real
    lam: Real
    sigma: Real
    zeta: Real
    epsilon: Real

    @classmethod
    def from_root(cls, n: int, i: int, z: Real, ctx: PrecisionContext) -> 'SingularRecord':
        mp = ctx.mp
        z = mp.mpf(z)
        zeta = predict_seed(n, i, ctx)
        return cls(n, i, z, z ** (-2 * n), z ** (-n), zeta, z - zeta)


def predict_seed(n: int, i: int, ctx: PrecisionContext|None = None) -> Real:
    '''
    The asymptotic position ζ_i = (i - 1/2)π of the i-th root.
    '''
    if i < 1:
        raise ValueError(f'Invalid index: {i}')
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    return (i - mp.mpf(1) / 2) * mp.pi


def sign_changes(F: CharEquation, ctx: PrecisionContext,
                 steps_per_window: int = SCAN_STEPS_PER_WINDOW) -> Iterator[Bracket]:
    '''
    Brackets around successive sign changes of the scaled equation, scanning
    upward from z = 0.1 without end.
    '''
    mp = ctx.mp
    step = mp.pi / steps_per_window
    a = mp.mpf(SCAN_START)
    fa = evaluate_scaled(F, a, ctx)
    while True:
        b = a + step
        fb = evaluate_scaled(F, b, ctx)
        if sign(fa) != sign(fb):
            yield Bracket(a, b)
        a, fa = b, fb


def _brackets(F: CharEquation, count: int, ctx: PrecisionContext) -> list[Bracket]:
    # Brackets for the first `count` roots. The grid is refined until the
    # number of sign changes below the last window edge stops changing.
    mp = ctx.mp
    limit = predict_seed(F.n, count, ctx) + mp.pi / 2 + DRIFT_WINDOWS * mp.pi
    steps = SCAN_STEPS_PER_WINDOW
    found = _brackets_below(F, limit, ctx, steps)
    for _ in range(MAX_REFINEMENTS):
        finer = _brackets_below(F, limit, ctx, 2 * steps)
        if len(finer) == len(found):
            break
        logger.info('scan grid of %d steps per window missed roots; refining', steps)
        steps *= 2
        found = finer
    else:
        raise MissedRootError(f'Sign-change count below z={mpmath.nstr(limit, 8)} did not settle '
                              f'after {MAX_REFINEMENTS} refinements (n={F.n})')
    if len(found) < count:
        raise MissedRootError(f'Found {len(found)} sign changes below z={mpmath.nstr(limit, 8)}, '
                              f'expected at least {count} (n={F.n})')
    return take(count, iter(found))


def _brackets_below(F: CharEquation, limit: Real, ctx: PrecisionContext, steps: int) -> list[Bracket]:
    out: list[Bracket] = []
    for bracket in sign_changes(F, ctx, steps):
        if bracket.lo >= limit:
            break
        out.append(bracket)
    return out


def polish(F: CharEquation, bracket: Bracket, ctx: PrecisionContext) -> Real:
    '''
    Refine a bracketed root at a precision raised by the cancellation budget.
    '''
    work = ctx.raised(cancellation_bits(F, bracket.hi) + GUARD_BITS)
    z = find_root(lambda x: evaluate_scaled(F, x, work),
                  lambda x: evaluate_derivative_scaled(F, x, work),
                  bracket, work)
    logger.debug('root in [%s, %s] polished at %d bits: %s',
                 mpmath.nstr(bracket.lo, 6), mpmath.nstr(bracket.hi, 6), work.bits, mpmath.nstr(z, 20))
    return ctx.mpf(z)


def locate_zero(F: CharEquation, i: int, ctx: PrecisionContext) -> Real:
    '''
    The i-th positive root z_i of F_n, roots counted from z = 0.1 upward.

    PARAMETERS
    ----------
    F: CharEquation
    i: int
        Root index, 1-based.
    ctx: PrecisionContext

    RETURNS
    -------
    Real
        z_i with |F_scaled(z_i)| <= 8 target_tol |F_scaled'(z_i)|.
    '''
    if i < 1:
        raise ValueError(f'Invalid index: {i}')
    return polish(F, _brackets(F, i, ctx)[i - 1], ctx)


def singular_values(n: int, N: int, ctx: PrecisionContext,
                    F: CharEquation|None = None) -> list[SingularRecord]:
    '''
    The first N singular values of J^n, largest first.

    EXAMPLE
    -------
    >>> [r.z for r in singular_values(2, 2, PrecisionContext())]
    [mpf('1.8751040687119611664453082410782141625701117335311'), ...]
    '''
    if N < 1:
        raise ValueError(f'Invalid count: {N}')
    if F is None:
        F = build_char_equation(n, ctx)
    elif F.n != n:
        raise ValueError(f'Invalid equation: built for n={F.n}, not n={n}')
    logger.info('locating %d roots for n=%d at %d bits', N, n, ctx.bits)
    records = [SingularRecord.from_root(n, i, polish(F, bracket, ctx), ctx)
               for i, bracket in enumerate(_brackets(F, N, ctx), start=1)]
    return records


@dataclass(frozen=True)
class AsymptoticCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class AsymptoticReport:
    '''
    Results of the decay checks, plus the fitted decay exponent of σ_i in i.
    '''
    checks: tuple[AsymptoticCheck, ...]
    decay_exponent: Real|None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


BAND_RATIO = 4


def check_asymptotics(records: Sequence[SingularRecord]) -> AsymptoticReport:
    '''
    Check σ_i against its known decay.

    - σ strictly decreasing.
    - max/min of σ_i i^n below 4.
    - n = 1: 1/(πi) <= σ_i <= 2/(πi).
    - |ε_i| <= π/2 beyond the first window.

    The least-squares slope of -log σ_i against log i is reported as the decay
    exponent; it tends to n.
    '''
    checks: list[AsymptoticCheck] = []
    if not records:
        return AsymptoticReport((), None)
    n = records[0].n
    if any(r.n != n for r in records):
        raise ValueError('Invalid records: mixed orders')
    sigmas = [r.sigma for r in records]
    decreasing = all(a > b for a, b in zip(sigmas, sigmas[1:]))
    checks.append(AsymptoticCheck('decreasing', decreasing, f'{len(sigmas)} values'))
    band = [r.sigma * r.i ** n for r in records]
    ratio = max(band) / min(band)
    checks.append(AsymptoticCheck('band', ratio < BAND_RATIO,
                                  f'max/min of sigma_i i^{n} = {mpmath.nstr(ratio, 6)}'))
    if n == 1:
        # The upper bound is attained at i = 1; compare in the records' own
        # precision with a half-precision slack.
        mp = records[0].sigma.context
        slack = mp.ldexp(1, -mp.prec // 2)
        inside = all(1 - slack <= r.sigma * mp.pi * r.i <= 2 + slack for r in records)
        checks.append(AsymptoticCheck('bounds', inside, '1/(pi i) <= sigma_i <= 2/(pi i)'))
    pi = records[0].sigma.context.pi
    windows = all(abs(r.epsilon) <= pi / 2 for r in records if r.i > 1 + DRIFT_WINDOWS)
    checks.append(AsymptoticCheck('windows', windows, '|z_i - zeta_i| <= pi/2'))
    return AsymptoticReport(tuple(checks), decay_exponent(records))


def decay_exponent(records: Sequence[SingularRecord]) -> Real|None:
    '''
    Slope of the least-squares line through (log i, -log σ_i).
    '''
    if len(records) < 2:
        return None
    xs = [mpmath.log(r.i) for r in records]
    ys = [-mpmath.log(r.sigma) for r in records]
    mx = mpmath.fsum(xs) / len(xs)
    my = mpmath.fsum(ys) / len(ys)
    return (mpmath.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
            / mpmath.fsum((x - mx) ** 2 for x in xs))
