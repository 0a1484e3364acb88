'''
The characteristic equation of (J^n)* J^n in closed form.

The eigenvalues λ = z^(-2n) are the positive roots z of

    F_n(z) = Σ coeff · cosh(α z) · cos(β z) = 0

obtained by expanding the boundary determinant over n-element subsets of the
unity roots and folding each symmetry orbit into one real term. The terms are
normalized so the dominant term, cosh(cot(π/2n) z) cos(z), has coefficient 1.

Because cosh(α_max z) grows without bound, root finding works with the scaled
form F_n(z) exp(-α_max z), which stays O(1).
'''

from collections.abc import Callable
from dataclasses import dataclass
import json
import logging
from typing import Any, Literal

import mpmath

from nfold.basis import boundary_matrix
from nfold.errors import NumericalError
from nfold.numerics import Complex, PrecisionContext, Real
from nfold.unity import MAX_ENUMERATION_ORDER, enumerate_orbits, valid_order
from nfold.utils import decimal_string

logger = logging.getLogger(__name__)

SCALE_CONVENTION = 'unit-dominant'
'''
The dominant term has coefficient exactly 1.
'''

type EquationFormat = Literal['json', 'text']


def valid_equation_format(fmt: Any) -> EquationFormat:
    match fmt:
        case 'json' | 'text':
            return fmt
        case _:
            raise ValueError(f'Invalid equation format: {fmt}')


@dataclass(frozen=True)
class CoshCosTerm:
    coeff: Real
    alpha: Real
    beta: Real


@dataclass(frozen=True)
class CharEquation:
    '''
    F_n(z) as a list of cosh·cos terms, sorted by decreasing α, then β.
    '''
    n: int
    terms: tuple[CoshCosTerm, ...]
    scale_convention: str = SCALE_CONVENTION

    @property
    def alpha_max(self) -> Real:
        return self.terms[0].alpha

    @property
    def variable(self) -> str:
        return f'z = lambda^(-1/{2 * self.n})'

    def __call__(self, z: Real, ctx: PrecisionContext) -> Real:
        return evaluate(self, z, ctx)


def _merge_key(x: Real, ctx: PrecisionContext) -> str:
    return mpmath.nstr(x, max(10, ctx.digits // 2))


def build_char_equation(n: int, ctx: PrecisionContext|None = None) -> CharEquation:
    '''
    Build F_n from the orbit enumeration.

    Each orbit contributes size · c_I · cosh(α z) cos(β z). The complex
    weights share one phase; dividing by the dominant orbit's weight makes
    them real. Terms with equal (α, β) are merged.

    PARAMETERS
    ----------
    n: int
        Order, 1 <= n <= 12.
    ctx: PrecisionContext|None

    RETURNS
    -------
    CharEquation

    EXAMPLE
    -------
    >>> print(emit_equation(build_char_equation(2), 'text'))
    cosh(z)*cos(z) + 1 = 0
    '''
    valid_order(n)
    if n > MAX_ENUMERATION_ORDER:
        raise ValueError(f'Invalid order: {n} exceeds the enumeration limit {MAX_ENUMERATION_ORDER}')
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    orbits = enumerate_orbits(n, ctx)
    dominant = max(orbits, key=lambda o: (o.alpha, o.beta))
    phase = dominant.weight
    merged: dict[tuple[str, str], CoshCosTerm] = {}
    for orbit in orbits:
        ratio = orbit.weight / phase
        if abs(ratio.imag) > ctx.target_tol * max(1, abs(ratio)):
            raise NumericalError(f'Orbit {orbit.representative} has a coefficient off the common phase: '
                                 f'{mpmath.nstr(ratio, 10)}')
        key = (_merge_key(orbit.alpha, ctx), _merge_key(orbit.beta, ctx))
        prior = merged.get(key)
        coeff = ratio.real if prior is None else prior.coeff + ratio.real
        merged[key] = CoshCosTerm(coeff, orbit.alpha, orbit.beta)
    terms = [t for t in merged.values() if abs(t.coeff) > ctx.target_tol]
    terms.sort(key=lambda t: (-t.alpha, -t.beta))
    lead = terms[0].coeff
    terms = [CoshCosTerm(mp.one if i == 0 else t.coeff / lead, t.alpha, t.beta)
             for i, t in enumerate(terms)]
    logger.debug('n=%d: %d orbits folded into %d terms', n, len(orbits), len(terms))
    return CharEquation(n, tuple(terms))


def evaluate(F: CharEquation, z: Real, ctx: PrecisionContext) -> Real:
    '''
    F_n(z), unscaled. Even in z.
    '''
    mp = ctx.mp
    z = mp.mpf(z)
    return mp.fsum(t.coeff * mp.cosh(t.alpha * z) * mp.cos(t.beta * z) for t in F.terms)


def evaluate_scaled(F: CharEquation, z: Real, ctx: PrecisionContext) -> Real:
    '''
    F_n(z) exp(-α_max z), computed without forming cosh(α_max z).

    EXAMPLE
    -------
    >>> evaluate_scaled(build_char_equation(2), 0, PrecisionContext())
    mpf('2.0')
    '''
    mp = ctx.mp
    z = mp.mpf(z)
    top = F.alpha_max
    return mp.fsum(t.coeff * (mp.exp((t.alpha - top) * z) + mp.exp((-t.alpha - top) * z)) / 2
                   * mp.cos(t.beta * z)
                   for t in F.terms)


def evaluate_derivative_scaled(F: CharEquation, z: Real, ctx: PrecisionContext) -> Real:
    '''
    d/dz of `evaluate_scaled`. For n = 2 at z = 0 this is -2.
    '''
    mp = ctx.mp
    z = mp.mpf(z)
    top = F.alpha_max
    total = []
    for t in F.terms:
        grow = mp.exp((t.alpha - top) * z)
        decay = mp.exp((-t.alpha - top) * z)
        c, s = mp.cos(t.beta * z), mp.sin(t.beta * z)
        total.append(t.coeff * (((t.alpha - top) * grow + (-t.alpha - top) * decay) / 2 * c
                                - (grow + decay) / 2 * t.beta * s))
    return mp.fsum(total)


def det_direct(n: int, z: Real, ctx: PrecisionContext) -> Real:
    '''
    Determinant of the unscaled boundary matrix, for cross-checking F_n.
    Proportional to F_n(z) with a z-independent constant.
    '''
    return ctx.mp.det(boundary_matrix(n, z, ctx, scaled=False))


def cancellation_bits(F: CharEquation, z: Real) -> int:
    '''
    Bits lost to cancellation when F_n is formed unscaled at z:
    ceil(α_max |z| / ln 2).
    '''
    return int(mpmath.ceil(F.alpha_max * abs(z) / mpmath.ln(2)))


def exponentials(F: CharEquation, ctx: PrecisionContext) -> dict[tuple[str, str], tuple[Complex, Real]]:
    '''
    F_n as a combination of exponentials exp(s z), s = ±α ± iβ.

    RETURNS
    -------
    dict[tuple[str, str], tuple[Complex, Real]]
        Keyed by the rounded (Re s, Im s); values are (s, coefficient).
    '''
    mp = ctx.mp
    out: dict[tuple[str, str], tuple[Complex, Real]] = {}
    for t in F.terms:
        for a in (t.alpha, -t.alpha):
            for b in (t.beta, -t.beta):
                s = mp.mpc(a, b)
                key = (_merge_key(s.real, ctx), _merge_key(s.imag, ctx))
                prior = out.get(key, (s, mp.zero))[1]
                out[key] = (s, prior + t.coeff / 4)
    return out


def emit_equation(F: CharEquation, fmt: EquationFormat = 'json', digits: int = 30) -> str:
    '''
    Serialize F_n.

    `json` follows the schema
    {"n": int, "variable": str, "scale_convention": str,
     "terms": [{"coeff": str, "alpha": str, "beta": str}, ...]}
    with decimal strings of `digits` significant digits.

    `text` is an equation such as `cosh(z)*cos(z) + 1 = 0`.
    '''
    match valid_equation_format(fmt):
        case 'json':
            return json.dumps({
                'n': F.n,
                'variable': F.variable,
                'scale_convention': F.scale_convention,
                'terms': [{'coeff': decimal_string(t.coeff, digits),
                           'alpha': decimal_string(t.alpha, digits),
                           'beta': decimal_string(t.beta, digits)}
                          for t in F.terms],
            }, indent=2)
        case 'text':
            return _equation_text(F, min(digits, 20))
        case _: # type: ignore
            raise ValueError(f'Invalid equation format: {fmt}')


def _unit(x: Real, digits: int) -> bool:
    return abs(x - 1) < mpmath.mpf(10) ** -digits


def _argument(x: Real, digits: int) -> str:
    return 'z' if _unit(x, digits) else f'{decimal_string(x, digits)}*z'


def _equation_text(F: CharEquation, digits: int) -> str:
    parts: list[str] = []
    for t in F.terms:
        factors = []
        if t.alpha != 0:
            factors.append(f'cosh({_argument(t.alpha, digits)})')
        if t.beta != 0:
            factors.append(f'cos({_argument(t.beta, digits)})')
        magnitude = abs(t.coeff)
        if not factors:
            body = decimal_string(magnitude, digits) if not _unit(magnitude, digits) else '1'
        elif _unit(magnitude, digits):
            body = '*'.join(factors)
        else:
            body = '*'.join([decimal_string(magnitude, digits), *factors])
        if not parts:
            parts.append(body if t.coeff > 0 else f'-{body}')
        else:
            parts.append(f'+ {body}' if t.coeff > 0 else f'- {body}')
    return ' '.join(parts) + ' = 0'


def load_equation(text: str, ctx: PrecisionContext|None = None) -> CharEquation:
    '''
    Read back the JSON form written by `emit_equation`.
    '''
    ctx = ctx or PrecisionContext()
    try:
        data = json.loads(text)
        terms = tuple(CoshCosTerm(ctx.mpf(t['coeff']), ctx.mpf(t['alpha']), ctx.mpf(t['beta']))
                      for t in data['terms'])
        return CharEquation(valid_order(data['n']), terms,
                            data.get('scale_convention', SCALE_CONVENTION))
    except (KeyError, TypeError, json.JSONDecodeError) as ex:
        raise ValueError(f'Invalid equation document: {ex}') from ex


def _reference_1(z: Real, ctx: PrecisionContext) -> Real:
    return ctx.mp.cos(z)


def _reference_2(z: Real, ctx: PrecisionContext) -> Real:
    mp = ctx.mp
    return mp.cos(z) * mp.cosh(z) + 1


def _reference_3(z: Real, ctx: PrecisionContext) -> Real:
    mp = ctx.mp
    r3 = mp.sqrt(3)
    return (8 * mp.cos(z) + mp.cos(2 * z) + 2 * mp.cos(z) * mp.cosh(r3 * z)
            + 16 * mp.cos(z / 2) * mp.cosh(r3 * z / 2) + 9)


def _reference_4(z: Real, ctx: PrecisionContext) -> Real:
    mp = ctx.mp
    r2 = mp.sqrt(2)
    h = z / r2
    cz, chz, sz, shz = mp.cos(z), mp.cosh(z), mp.sin(z), mp.sinh(z)
    c2, ch2 = mp.cos(r2 * z), mp.cosh(r2 * z)
    return (c2 + ch2 + 2 * cz * chz
            + 3 * (c2 + ch2) * cz * chz
            + 8 * (cz + chz) * mp.cos(h) * mp.cosh(h)
            + 4 * r2 * sz * mp.sin(h) * mp.cosh(h)
            - 4 * r2 * mp.cos(h) * shz * mp.sinh(h)
            + 2 * r2 * sz * mp.sin(r2 * z) * chz
            - 2 * r2 * cz * shz * mp.sinh(r2 * z)
            + 6)


REFERENCE_EQUATIONS: dict[int, Callable[[Real, PrecisionContext], Real]] = {
    1: _reference_1,
    2: _reference_2,
    3: _reference_3,
    4: _reference_4,
}
'''
Closed forms of the characteristic equation known for small n. Each agrees
with `build_char_equation(n)` up to a constant factor.
'''


def reference_equation(n: int) -> Callable[[Real, PrecisionContext], Real]:
    match REFERENCE_EQUATIONS.get(valid_order(n)):
        case None:
            raise ValueError(f'Invalid order: no closed form for n={n}')
        case f:
            return f
