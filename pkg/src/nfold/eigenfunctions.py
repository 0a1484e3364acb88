'''
Singular functions of J^n.

For a root z_i the boundary matrix has a one-dimensional null space; its
vector γ gives the right singular function

    u_i(t) = Σ_k γ_k e_k(t)

over the real fundamental basis, and the left singular function is

    v_i = (-1)^n σ_i u_i^(n)

Both are kept in the basis representation, so derivatives and the action of
J^n are exact; only norms and inner products need quadrature.
'''

from collections.abc import Sequence
from dataclasses import dataclass
import logging
from typing import Any, Literal

import mpmath

from nfold.basis import BasisExpansion, FundamentalBasis, basis_boundary_matrix
from nfold.eigen_solver import SingularRecord, singular_values
from nfold.errors import NotSingularError, NullityError
from nfold.numerics import PrecisionContext, Real, converge

logger = logging.getLogger(__name__)

type Convention = Literal['last-coefficient-one', 'unit-l2-norm']
type FunctionKind = Literal['u', 'v']

DEFAULT_CONVENTION: Convention = 'unit-l2-norm'


def valid_convention(convention: Any) -> Convention:
    match convention:
        case 'last-coefficient-one' | 'unit-l2-norm':
            return convention
        case _:
            raise ValueError(f'Invalid convention: {convention}')


def singular_threshold(ctx: PrecisionContext) -> Real:
    '''
    Relative size below which a singular value of the boundary matrix counts
    as zero: the square root of the target tolerance.
    '''
    return ctx.mp.sqrt(ctx.target_tol)


def nullspace_gamma(A: Any, ctx: PrecisionContext) -> list[Real]:
    '''
    The null vector of a numerically singular square matrix.

    The right singular vector of the smallest singular value is returned,
    signed so that its last entry is positive. The singular values give the
    null vector and the nullity of the boundary matrix from one factorization,
    with a threshold relative to the largest one instead of a pivot cut-off.

    RAISES
    ------
    NotSingularError
        The smallest singular value is above the threshold.
    NullityError
        Two or more singular values are below it.
    '''
    mp = ctx.mp
    _, S, V = mp.svd_r(mp.matrix(A))
    values = [abs(S[k]) for k in range(len(S))]
    order = sorted(range(len(values)), key=lambda k: values[k])
    largest = values[order[-1]]
    threshold = singular_threshold(ctx) * largest
    smallest = values[order[0]]
    if smallest > threshold:
        raise NotSingularError(f'Smallest singular value {mpmath.nstr(smallest / largest, 5)} '
                               f'(relative) is above the threshold {mpmath.nstr(singular_threshold(ctx), 5)}')
    if len(order) > 1 and values[order[1]] <= threshold:
        raise NullityError('Boundary matrix has a null space of dimension 2 or more')
    row = order[0]
    gamma = [V[row, j] for j in range(V.cols)]
    pivot = next((g for g in reversed(gamma) if abs(g) > threshold), gamma[-1])
    if pivot < 0:
        gamma = [-g for g in gamma]
    return gamma


@dataclass(frozen=True)
class EigenFunction:
    '''
    A singular function u_i or v_i of J^n.
    '''
    record: SingularRecord
    expansion: BasisExpansion
    convention: Convention
    kind: FunctionKind

    def __call__(self, t: Real) -> Real:
        return self.expansion(t)

    @property
    def basis(self) -> FundamentalBasis:
        return self.expansion.basis

    @property
    def gamma(self) -> list[Real]:
        '''
        Coefficients over the unscaled basis; for n = 2 in the order
        (e^{zt}, e^{-zt}, sin zt, cos zt).
        '''
        return self.expansion.unscaled_gamma

    def derivative(self, j: int = 1) -> BasisExpansion:
        return self.expansion.derivative(j)


@dataclass(frozen=True)
class ExtendedFunction:
    '''
    A basis expansion plus a polynomial Σ_j p_j t^j. J^n maps basis functions
    into this form.
    '''
    expansion: BasisExpansion
    polynomial: tuple[Real, ...]

    def __call__(self, t: Real) -> Real:
        mp = self.expansion.basis.ctx.mp
        t = mp.mpf(t)
        return self.expansion(t) + mp.polyval(list(reversed(self.polynomial)), t)


@dataclass(frozen=True)
class SingularTriple:
    record: SingularRecord
    u: EigenFunction
    v: EigenFunction

    @property
    def sigma(self) -> Real:
        return self.record.sigma


def _rule_start(record: SingularRecord) -> int:
    return 4 * (record.i + record.n)


def _normalized(record: SingularRecord, expansion: BasisExpansion,
                convention: Convention, ctx: PrecisionContext) -> BasisExpansion:
    match valid_convention(convention):
        case 'last-coefficient-one':
            return expansion.scaled(1 / expansion.gamma[-1])
        case 'unit-l2-norm':
            norm2 = converge(lambda rule: [rule.dot([expansion(t) ** 2 for t in rule.nodes])],
                             ctx, _rule_start(record), what='norm')[0]
            scale = 1 / ctx.mp.sqrt(norm2)
            if expansion.gamma[-1] < 0:
                scale = -scale
            return expansion.scaled(scale)
        case _: # type: ignore
            raise ValueError(f'Invalid convention: {convention}')


def take_u(record: SingularRecord, gamma: Sequence[Real],
           convention: Convention, ctx: PrecisionContext) -> EigenFunction:
    '''
    The right singular function u_i from a null vector of the scaled
    boundary matrix.

    PARAMETERS
    ----------
    record: SingularRecord
    gamma: Sequence[Real]
        Null vector over the scaled basis (`boundary_matrix(..., scaled=True)`).
    convention: Convention
        'last-coefficient-one' divides by the cos(zt) coefficient;
        'unit-l2-norm' makes ||u_i|| = 1 with that coefficient positive.
    ctx: PrecisionContext
    '''
    basis = FundamentalBasis(record.n, record.z, ctx, scaled=True)
    expansion = BasisExpansion(basis, basis.weights(gamma))
    return EigenFunction(record, _normalized(record, expansion, convention, ctx),
                         valid_convention(convention), 'u')


def eigenfunction(record: SingularRecord, ctx: PrecisionContext,
                  convention: Convention = DEFAULT_CONVENTION) -> EigenFunction:
    '''
    u_i for a located root: boundary matrix, null vector, normalization.
    '''
    basis = FundamentalBasis(record.n, record.z, ctx, scaled=True)
    gamma = nullspace_gamma(basis_boundary_matrix(basis), ctx)
    return take_u(record, gamma, convention, ctx)


def evaluate_u(u: EigenFunction, t: Real, ctx: PrecisionContext|None = None) -> Real:
    return u(t)


def take_v(u: EigenFunction, ctx: PrecisionContext|None = None) -> EigenFunction:
    '''
    The left singular function v_i = (-1)^n σ_i u_i^(n), under the same
    convention as u_i.
    '''
    if u.kind != 'u':
        raise ValueError(f'Invalid function: expected u, got {u.kind}')
    n = u.record.n
    factor = (-1) ** n * u.record.sigma
    return EigenFunction(u.record, u.derivative(n).scaled(factor), u.convention, 'v')


def evaluate_v(v: EigenFunction, t: Real, ctx: PrecisionContext|None = None) -> Real:
    return v(t)


def apply_Jn_closed(u: EigenFunction|BasisExpansion, ctx: PrecisionContext|None = None) -> ExtendedFunction:
    '''
    J^n applied exactly to a basis expansion.

    With J^n e^{νt} = ν^{-n}(e^{νt} - Σ_{j<n} (νt)^j/j!), each weight w becomes
    w ν^{-n} and the polynomial coefficient of t^j is
    -Σ_m Re(w_m ν_m^{j-n} e^{-s_m}) / j!.
    '''
    expansion = u.expansion if isinstance(u, EigenFunction) else u
    basis = expansion.basis
    mp = basis.ctx.mp
    n = basis.n
    weights = tuple(w * nu ** -n for w, nu in zip(expansion.weights, basis.nu))
    polynomial = tuple(
        -mp.fsum((w * nu ** (j - n) * mp.exp(-s)).real
                 for w, nu, s in zip(expansion.weights, basis.nu, basis.shifts)) / mp.factorial(j)
        for j in range(n))
    return ExtendedFunction(BasisExpansion(basis, weights), polynomial)


def gram_matrix(fs: Sequence[EigenFunction], ctx: PrecisionContext):
    '''
    The matrix of L² inner products ⟨f_a, f_b⟩, by quadrature on shared
    Gauss-Legendre rules doubled until every entry settles.
    '''
    if not fs:
        raise ValueError('Invalid function list: empty')
    conventions = {f.convention for f in fs}
    if len(conventions) > 1:
        raise ValueError(f'Invalid function list: mixed conventions {sorted(conventions)}')
    mp = ctx.mp
    count = len(fs)
    pairs = [(a, b) for a in range(count) for b in range(a, count)]

    def entries(rule) -> list[Real]:
        samples = [[f(t) for t in rule.nodes] for f in fs]
        return [rule.dot([x * y for x, y in zip(samples[a], samples[b])]) for a, b in pairs]

    start = max(_rule_start(f.record) for f in fs)
    values = converge(entries, ctx, start, what='gram matrix')
    G = mp.matrix(count, count)
    for (a, b), value in zip(pairs, values):
        G[a, b] = G[b, a] = value
    return G


def boundary_residual(u: EigenFunction, ctx: PrecisionContext) -> Real:
    '''
    max_j |row_j · γ| / ||γ|| for the scaled boundary matrix at the root.
    '''
    mp = ctx.mp
    A = basis_boundary_matrix(u.basis)
    gamma = u.expansion.gamma
    norm = mp.sqrt(mp.fsum(g ** 2 for g in gamma))
    return max(abs(mp.fsum(A[j, k] * gamma[k] for k in range(len(gamma)))) for j in range(A.rows)) / norm


def ode_residual(u: EigenFunction, t: Real) -> Real:
    '''
    λ u^(2n)(t) + (-1)^(n+1) u(t), zero for an eigenfunction of (J^n)* J^n.
    '''
    n = u.record.n
    return u.record.lam * u.derivative(2 * n)(t) + (-1) ** (n + 1) * u(t)


def singular_system(n: int, N: int, ctx: PrecisionContext,
                    convention: Convention = DEFAULT_CONVENTION,
                    records: Sequence[SingularRecord]|None = None) -> list[SingularTriple]:
    '''
    The first N singular triples (σ_i, u_i, v_i) of J^n.
    '''
    valid_convention(convention)
    records = list(records) if records is not None else singular_values(n, N, ctx)
    triples: list[SingularTriple] = []
    for record in records[:N]:
        u = eigenfunction(record, ctx, convention)
        triples.append(SingularTriple(record, u, take_v(u, ctx)))
        logger.debug('n=%d: singular triple %d built', n, record.i)
    return triples
