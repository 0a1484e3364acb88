'''
The 2n-th roots of unity behind the n-fold integration operator, and the
enumeration of n-element subsets of them into symmetry orbits.

The roots used are the solutions of w^(2n) = (-1)^n:

    ω_k = exp(iπ(2k + p)/(2n)),  p = n mod 2,  k = 0..2n-1

The angle is kept as the integer numerator 2k + p over 2n, so conjugates,
reflections and exact values (±1, ±i) never suffer rounding.
'''

from dataclasses import dataclass
from itertools import combinations
import logging
from typing import Any

from nfold.numerics import Complex, PrecisionContext, Real

logger = logging.getLogger(__name__)

MAX_ENUMERATION_ORDER = 12
'''
The orbit enumeration visits C(2n, n) subsets; beyond n = 12 that is
millions of subsets.
'''

# i^k for k mod 4, as (re, im) pairs.
_I_POWERS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def valid_order(n: Any) -> int:
    '''
    Validate the integration order n >= 1.
    '''
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError(f'Invalid order: {n}')
    return n


@dataclass(frozen=True)
class UnityRoot:
    '''
    The root ω_k for order n.
    '''
    n: int
    k: int

    def __post_init__(self):
        valid_order(self.n)
        if not 0 <= self.k < 2 * self.n:
            raise ValueError(f'Invalid root index: {self.k} for n={self.n}')

    @property
    def angle_numerator(self) -> int:
        '''
        The angle of the root is π * angle_numerator / (2n).
        '''
        return 2 * self.k + self.n % 2

    def value(self, ctx: PrecisionContext) -> Complex:
        mp = ctx.mp
        turn = mp.mpf(self.angle_numerator) / (2 * self.n)
        return mp.mpc(mp.cospi(turn), mp.sinpi(turn))

    def conjugate(self) -> 'UnityRoot':
        angle = -self.angle_numerator % (4 * self.n)
        return UnityRoot(self.n, (angle - self.n % 2) // 2)

    @property
    def is_real(self) -> bool:
        return self.angle_numerator % (2 * self.n) == 0

    @property
    def upper(self) -> bool:
        '''
        True for roots strictly in the upper half plane.
        '''
        return 0 < self.angle_numerator < 2 * self.n


def omega(n: int, k: int) -> UnityRoot:
    '''
    The k-th root ω_k for order n, with exact angle arithmetic.

    EXAMPLE
    -------
    >>> omega(2, 1).value(PrecisionContext())
    mpc(real='0.0', imag='1.0')
    '''
    return UnityRoot(valid_order(n), k)


def unity_roots(n: int) -> list[UnityRoot]:
    return [UnityRoot(valid_order(n), k) for k in range(2 * n)]


def nu_roots(n: int, lam: Any, ctx: PrecisionContext) -> list[Complex]:
    '''
    The roots ν_k = λ^(-1/(2n)) ω_k of the characteristic polynomial
    λν^(2n) + (-1)^(n+1) = 0.

    PARAMETERS
    ----------
    n: int
        Order of integration.
    lam: Real
        Eigenvalue, positive.
    ctx: PrecisionContext

    RETURNS
    -------
    list[Complex]
        2n values of modulus λ^(-1/(2n)).
    '''
    mp = ctx.mp
    lam = mp.mpf(lam)
    if not lam > 0:
        raise ValueError(f'Invalid eigenvalue: {lam}')
    scale = lam ** (-mp.one / (2 * valid_order(n)))
    return [scale * w.value(ctx) for w in unity_roots(n)]


def _i_power(k: int, ctx: PrecisionContext) -> Complex:
    re, im = _I_POWERS[k % 4]
    return ctx.mp.mpc(re, im)


def valid_subset(n: int, subset: Any) -> tuple[int, ...]:
    '''
    Validate an n-element subset of 0..2n-1; returns it sorted.
    '''
    members = tuple(sorted(subset))
    if len(set(members)) != len(members) or len(members) != n:
        raise ValueError(f'Invalid subset: {subset} must have {n} distinct elements')
    if members and not (0 <= members[0] and members[-1] < 2 * n):
        raise ValueError(f'Invalid subset: {subset} out of range 0..{2 * n - 1}')
    return members


def complement(n: int, subset: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(k for k in range(2 * n) if k not in subset)


def reflect(n: int, subset: tuple[int, ...]) -> tuple[int, ...]:
    '''
    The subset of conjugate roots.
    '''
    return tuple(sorted(UnityRoot(n, k).conjugate().k for k in subset))


def _vandermonde(values: list[Complex], ctx: PrecisionContext) -> Complex:
    product = ctx.mp.mpc(1)
    for a, wk in enumerate(values):
        for wl in values[a + 1:]:
            product *= wl - wk
    return product


def subset_coefficient(n: int, subset: Any, ctx: PrecisionContext) -> Complex:
    '''
    The coefficient c_I of exp(z Σ_{k∈I} ω_k) in the expansion of the
    boundary determinant:

        c_I = (-1)^(n(n+1)/2) i^(pn) V(ω_I) V(ω_C)

    where C is the complement of I, p = n mod 2, and V is the Vandermonde
    product Π_{k<l} (ω_l - ω_k) in increasing index order.

    EXAMPLE
    -------
    >>> subset_coefficient(2, {0, 2}, PrecisionContext())
    mpc(real='0.0', imag='-4.0')
    '''
    members = valid_subset(valid_order(n), subset)
    roots = [w.value(ctx) for w in unity_roots(n)]
    chosen = [roots[k] for k in members]
    rest = [roots[k] for k in complement(n, members)]
    sign_ = -1 if (n * (n + 1) // 2) % 2 else 1
    return sign_ * _i_power((n % 2) * n, ctx) * _vandermonde(chosen, ctx) * _vandermonde(rest, ctx)


@dataclass(frozen=True)
class SubsetOrbit:
    '''
    An orbit {I, Ī, C, C̄} of n-element subsets under conjugation and
    complement, with the sum Σ_{k∈I} ω_k = α + iβ of its representative.
    '''
    n: int
    representative: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]
    alpha: Real
    beta: Real
    coefficient: Complex

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def weight(self) -> Complex:
        '''
        The orbit's contribution to the coefficient of cosh(αz)cos(βz).
        '''
        return self.size * self.coefficient


def _subset_sum(roots: list[Complex], subset: tuple[int, ...], ctx: PrecisionContext) -> Complex:
    return sum((roots[k] for k in subset), start=ctx.mp.mpc(0))


def enumerate_orbits(n: int, ctx: PrecisionContext|None = None) -> list[SubsetOrbit]:
    '''
    Partition the n-element subsets of 0..2n-1 into orbits under conjugation
    (I -> Ī) and complement (I -> C).

    The representative of each orbit is the member whose subset sum lies in
    the closed first quadrant (α >= 0, β >= 0), lexicographically smallest
    on ties. Orbits are returned in representative order.

    PARAMETERS
    ----------
    n: int
        Order, 1 <= n <= 12.
    ctx: PrecisionContext|None
        Precision of α, β and the coefficients.

    RETURNS
    -------
    list[SubsetOrbit]
        Their sizes add up to C(2n, n).
    '''
    valid_order(n)
    if n > MAX_ENUMERATION_ORDER:
        raise ValueError(f'Invalid order: {n} exceeds the enumeration limit {MAX_ENUMERATION_ORDER}')
    ctx = ctx or PrecisionContext()
    roots = [w.value(ctx) for w in unity_roots(n)]
    eps = ctx.target_tol
    seen: set[tuple[int, ...]] = set()
    orbits: list[SubsetOrbit] = []
    for subset in combinations(range(2 * n), n):
        if subset in seen:
            continue
        comp = complement(n, subset)
        members = tuple(sorted({subset, reflect(n, subset), comp, reflect(n, comp)}))
        seen.update(members)
        sums = {m: _subset_sum(roots, m, ctx) for m in members}
        quadrant = [m for m in members
                    if sums[m].real > -eps and sums[m].imag > -eps]
        rep = min(quadrant)
        s = sums[rep]
        # Exact zeros for sums on the axes.
        alpha = s.real if abs(s.real) > eps else ctx.mpf(0)
        beta = s.imag if abs(s.imag) > eps else ctx.mpf(0)
        orbits.append(SubsetOrbit(n, rep, members, alpha, beta,
                                  subset_coefficient(n, rep, ctx)))
    orbits.sort(key=lambda o: o.representative)
    logger.debug('n=%d: %d orbits', n, len(orbits))
    return orbits


def dominant_alpha(n: int, ctx: PrecisionContext|None = None) -> Real:
    '''
    The largest subset-sum real part, cot(π/(2n)); zero for n = 1.
    '''
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    turn = mp.one / (2 * valid_order(n))
    return mp.cospi(turn) / mp.sinpi(turn)


def subset_sums(n: int, ctx: PrecisionContext|None = None) -> list[tuple[Real, Real, int]]:
    '''
    All subset sums Σ_{k∈I} ω_k as distinct points (α, β) in the plane, with
    the number of subsets landing on each, sorted by (α, β).
    '''
    valid_order(n)
    if n > MAX_ENUMERATION_ORDER:
        raise ValueError(f'Invalid order: {n} exceeds the enumeration limit {MAX_ENUMERATION_ORDER}')
    ctx = ctx or PrecisionContext()
    mp = ctx.mp
    roots = [w.value(ctx) for w in unity_roots(n)]
    digits = ctx.digits // 2
    points: dict[tuple[str, str], tuple[Real, Real, int]] = {}
    for subset in combinations(range(2 * n), n):
        s = _subset_sum(roots, subset, ctx)
        re = s.real if abs(s.real) > ctx.target_tol else mp.zero
        im = s.imag if abs(s.imag) > ctx.target_tol else mp.zero
        key = (mp.nstr(re, digits), mp.nstr(im, digits))
        _, _, count = points.get(key, (re, im, 0))
        points[key] = (re, im, count + 1)
    return sorted(points.values(), key=lambda p: (p[0], p[1]))
