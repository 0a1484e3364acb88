'''
The verification suite: published values, closed forms and internal
consistency of the singular systems.

Each check is a `@check` function; `default_suite()` configures the standard
set and `run_suite()` runs it, timing every check.
'''

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import logging

import numpy as np

from nfold.char_equation import REFERENCE_EQUATIONS, build_char_equation, det_direct, evaluate
from nfold.cutoff import DataFunction, adjoint_Jn
from nfold.decorators import CheckResult, CheckWrapper, check
from nfold.eigen_solver import SingularRecord, check_asymptotics, singular_values
from nfold.eigenfunctions import (
    SingularTriple, apply_Jn_closed, boundary_residual, gram_matrix, ode_residual, singular_system,
    singular_threshold,
)
from nfold.epsilon_series import (
    check_epsilon_bounds, compute_a_coefficients, epsilon_from_series, series_variable,
)
from nfold.numerics import PrecisionContext, Real, converge
from nfold.unity import dominant_alpha

logger = logging.getLogger(__name__)

PUBLISHED_ROOTS: dict[int, tuple[str, ...]] = {
    2: ('1.875104068711961166445308241078214',
        '4.694091132974174576436391778019812',
        '7.854757438237612564861008582764570',
        '10.99554073487546699066734910785470',
        '14.13716839104647058091704681255177'),
    3: ('2.2247729764011889', '4.8026572459190195', '7.8476475910871745',
        '10.9951601546635699', '14.1371941952108977'),
    4: ('2.5902718684989891', '5.0106222998859963', '7.8970686069935174',
        '10.9949247590502524', '14.1366518856561214'),
}
'''
Roots z_i of the characteristic equation as published, to the digits given.
'''

PUBLISHED_GAMMA: tuple[tuple[str, tuple[str, str, str, str]], ...] = (
    ('0.0808907', ('0.1329522', '0.8670478', '-0.7340955', '1')),
    ('0.0020597', ('-0.0092337', '1.0092340', '-1.0184670', '1')),
    ('0.0002627', ('0.0003878', '0.9996122', '-0.9992245', '1')),
    ('0.0000684', ('-0.0000168', '1.0000170', '-1.0000340', '1')),
    ('0.0000250', ('0.0000007', '0.9999993', '-0.9999986', '1')),
)
'''
n = 2: λ_i and (γ_1..γ_4)/γ_4 for i = 1..5, rounded to 7 decimals.
'''

PUBLISHED_A = (Fraction(-2), Fraction(-4), Fraction(-34, 3), Fraction(-112, 3),
               Fraction(-2006, 15), Fraction(-1516, 3))

GAMMA_TOLERANCE = '1e-6'
LAMBDA_TOLERANCE = '1e-7'
GRAM_TOLERANCE = '1e-15'
SVD_TOLERANCE = '1e-20'

ORACLE_POINTS = 25
ORACLE_SEED = 20
ORACLE_RANGE = (0.1, 20.0)


def oracle_points(ctx: PrecisionContext, count: int = ORACLE_POINTS, seed: int = ORACLE_SEED) -> list[Real]:
    '''
    Seeded sample points z in (0.1, 20) for the proportionality checks.
    '''
    lo, hi = ORACLE_RANGE
    return [ctx.mpf(float(z)) for z in np.random.default_rng(seed).uniform(lo, hi, count)]


@lru_cache(maxsize=32)
def _records(n: int, count: int, ctx: PrecisionContext) -> tuple[SingularRecord, ...]:
    return tuple(singular_values(n, count, ctx))


@lru_cache(maxsize=32)
def _system(n: int, count: int, ctx: PrecisionContext) -> tuple[SingularTriple, ...]:
    return tuple(singular_system(n, count, ctx, records=_records(n, count, ctx)))


def _worst(values: Sequence[Real]) -> Real:
    return max(abs(v) for v in values)


@check(description='n=1: sigma_i = 2/((2i-1)pi), u_i = sqrt(2) cos((i-1/2)pi t), i <= {count}')
def closed_form_n1(ctx: PrecisionContext, /, count: int):
    mp = ctx.mp
    triples = _system(1, count, ctx)
    sigma_error = _worst([t.sigma - 2 / ((2 * t.record.i - 1) * mp.pi) for t in triples])
    points = [mp.mpf(k) / 7 for k in range(8)]
    u_error = _worst([t.u(x) - mp.sqrt(2) * mp.cos((t.record.i - mp.mpf(1) / 2) * mp.pi * x)
                      for t in triples for x in points])
    bound = 8 * ctx.target_tol
    return sigma_error <= bound and u_error <= mp.sqrt(ctx.target_tol), \
        f'sigma {mp.nstr(sigma_error, 3)}, u {mp.nstr(u_error, 3)}'


@check(description='n={n}: first roots match the published digits')
def published_roots(ctx: PrecisionContext, /, n: int):
    mp = ctx.mp
    expected = PUBLISHED_ROOTS[n]
    records = _records(n, len(expected), ctx)
    errors = []
    for r, text in zip(records, expected):
        decimals = len(text.split('.')[1])
        errors.append(abs(r.z - ctx.mpf(text)) / mp.mpf(10) ** -(decimals - 1))
    worst = max(errors)
    return worst <= 1, f'worst error {mp.nstr(worst, 3)} units of the last published digit but one'


@check(description='n=2: lambda_i and gamma ratios for i <= 5')
def gamma_ratios(ctx: PrecisionContext, /):
    triples = _system(2, len(PUBLISHED_GAMMA), ctx)
    lam_error = _worst([t.record.lam - ctx.mpf(lam) for t, (lam, _) in zip(triples, PUBLISHED_GAMMA)])
    gamma_error = _worst([g / t.u.gamma[-1] - ctx.mpf(p)
                          for t, (_, published) in zip(triples, PUBLISHED_GAMMA)
                          for g, p in zip(t.u.gamma, published)])
    return lam_error <= ctx.mpf(LAMBDA_TOLERANCE) and gamma_error <= ctx.mpf(GAMMA_TOLERANCE), \
        f'lambda {ctx.mp.nstr(lam_error, 3)}, gamma {ctx.mp.nstr(gamma_error, 3)}'


@check(description='epsilon-series: published a_1..a_6; strategies agree to K={K}')
def epsilon_coefficients(ctx: PrecisionContext, /, K: int):
    online = compute_a_coefficients(K, 'online')
    recompute = compute_a_coefficients(K, 'recompute')
    return online.coefficients[:len(PUBLISHED_A)] == PUBLISHED_A and online == recompute


@check(description='epsilon-series: K={K} terms against located roots, 2 <= i <= {count}')
def epsilon_oracle(ctx: PrecisionContext, /, K: int, count: int):
    mp = ctx.mp
    series = compute_a_coefficients(K + 1)
    worst = mp.zero
    for r in _records(2, count, ctx)[1:]:
        estimate = epsilon_from_series(series, r.i, K, ctx)
        x = series_variable(r.i, ctx)
        a_next = series[K + 1]
        bound = 10 * abs(mp.mpf(a_next.numerator) / a_next.denominator) * abs(x) ** (K + 1) + ctx.target_tol
        worst = max(worst, abs(estimate - r.epsilon) / bound)
    return worst <= 1, f'worst error {mp.nstr(worst, 3)} of the bound'


@check(description='n=2: epsilon sign and size bounds, i <= {count}')
def epsilon_bounds(ctx: PrecisionContext, /, count: int):
    report = check_epsilon_bounds(_records(2, count, ctx), ctx)
    return report.passed and report.h_at_second_root > 1, \
        f'h(exp(-3pi/2)) = {ctx.mp.nstr(report.h_at_second_root, 6)}'


@check(description='n={n}: F_n, direct determinant and closed form are proportional at {count} points')
def oracle_equivalence(ctx: PrecisionContext, /, n: int, count: int):
    mp = ctx.mp
    F = build_char_equation(n, ctx)
    points = oracle_points(ctx, count)
    families = [[det_direct(n, z, ctx) / evaluate(F, z, ctx) for z in points]]
    if n in REFERENCE_EQUATIONS:
        reference = REFERENCE_EQUATIONS[n]
        families.append([reference(z, ctx) / evaluate(F, z, ctx) for z in points])
    spread = max(abs(r / ratios[0] - 1) for ratios in families for r in ratios)
    return spread <= mp.sqrt(ctx.target_tol), f'ratio spread {mp.nstr(spread, 3)}'


@check(description='n={n}: leading alpha is cot(pi/2n)')
def leading_alpha(ctx: PrecisionContext, /, n: int):
    F = build_char_equation(n, ctx)
    error = abs(F.alpha_max - dominant_alpha(n, ctx))
    return error <= ctx.target_tol, f'error {ctx.mp.nstr(error, 3)}'


@check(description='n={n}: u_i and v_i orthonormal, i <= {count}')
def orthonormality(ctx: PrecisionContext, /, n: int, count: int):
    mp = ctx.mp
    triples = _system(n, count, ctx)
    worst = mp.zero
    for G in (gram_matrix([t.u for t in triples], ctx), gram_matrix([t.v for t in triples], ctx)):
        for a in range(count):
            for b in range(count):
                worst = max(worst, abs(G[a, b] - (1 if a == b else 0)))
    return worst <= ctx.mpf(GRAM_TOLERANCE), f'max |G - I| = {mp.nstr(worst, 3)}'


@check(description='n={n}: J^n u_i = sigma_i v_i, i <= {count}')
def svd_consistency(ctx: PrecisionContext, /, n: int, count: int):
    mp = ctx.mp
    triples = _system(n, count, ctx)
    images = [apply_Jn_closed(t.u) for t in triples]

    def squares(rule):
        return [rule.dot([(image(x) - t.sigma * t.v(x)) ** 2 for x in rule.nodes])
                for image, t in zip(images, triples)]

    worst = mp.sqrt(max(converge(squares, ctx, 4 * (count + n), what='SVD consistency')))
    return worst <= ctx.mpf(SVD_TOLERANCE), f'max ||J^n u - sigma v|| = {mp.nstr(worst, 3)}'


@check(description='n={n}: (J^n)* v_i = sigma_i u_i at sample points, i <= {count}')
def adjoint_relation(ctx: PrecisionContext, /, n: int, count: int):
    mp = ctx.mp
    worst = mp.zero
    for t in _system(n, count, ctx):
        w = adjoint_Jn(DataFunction(t.v, ctx), n, ctx)
        for x in (ctx.mpf('0.1'), ctx.mpf('0.5'), ctx.mpf('0.9')):
            worst = max(worst, abs(w(x) - t.sigma * t.u(x)))
    return worst <= mp.sqrt(ctx.target_tol), f'max deviation {mp.nstr(worst, 3)}'


@check(description='n={n}: boundary rows and ODE hold, i <= {count}')
def bvp_residuals(ctx: PrecisionContext, /, n: int, count: int):
    mp = ctx.mp
    triples = _system(n, count, ctx)
    boundary = max(boundary_residual(t.u, ctx) for t in triples)
    ode = max(abs(ode_residual(t.u, x)) for t in triples for x in (ctx.mpf('0.3'), ctx.mpf('0.8')))
    limit = 10 * singular_threshold(ctx)
    return boundary < limit and ode < limit, f'boundary {mp.nstr(boundary, 3)}, ode {mp.nstr(ode, 3)}'


@check(description='n={n}: sigma_i decay, i <= {count}')
def asymptotics(ctx: PrecisionContext, /, n: int, count: int):
    report = check_asymptotics(_records(n, count, ctx))
    failed = [c.name for c in report.checks if not c.passed]
    return report.passed, f'failed: {", ".join(failed)}' if failed else \
        f'decay exponent {ctx.mp.nstr(report.decay_exponent, 4)}'


@check(description='injected failure')
def forced_failure(ctx: PrecisionContext, /):
    return False, 'this check always fails'


def default_suite(inject_failure: bool = False) -> list[CheckWrapper]:
    '''
    The standard checks. `inject_failure` appends a check that always fails,
    to exercise failure reporting.
    '''
    suite = [
        closed_form_n1(count=5),
        *(published_roots(n=n) for n in (2, 3, 4)),
        gamma_ratios(),
        epsilon_coefficients(K=12),
        epsilon_oracle(K=20, count=6),
        epsilon_bounds(count=10),
        *(oracle_equivalence(n=n, count=ORACLE_POINTS) for n in (1, 2, 3, 4, 5, 6)),
        *(leading_alpha(n=n) for n in (2, 3, 4, 5, 6)),
        *(orthonormality(n=n, count=10) for n in (1, 2, 3, 4)),
        *(svd_consistency(n=n, count=10) for n in (1, 2, 3, 4)),
        adjoint_relation(n=2, count=3),
        *(bvp_residuals(n=n, count=5) for n in (2, 3, 4)),
        *(asymptotics(n=n, count=10) for n in (1, 2, 3)),
    ]
    if inject_failure:
        suite.append(forced_failure(tags=['injected']))
    return suite


@dataclass(frozen=True)
class SuiteReport:
    results: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    @property
    def seconds(self) -> float:
        return sum(r.seconds for r in self.results)


def run_suite(checks: Sequence[CheckWrapper], ctx: PrecisionContext) -> SuiteReport:
    '''
    Run every check at the given precision.
    '''
    logger.info('running %d checks at %d bits', len(checks), ctx.bits)
    report = SuiteReport(tuple(c(ctx) for c in checks))
    logger.info('%d of %d checks passed in %.1fs',
                len(report.results) - len(report.failures), len(report.results), report.seconds)
    return report
