'''
The real fundamental system of u^(2n) = (-1)^n z^(2n) u and its boundary matrix.

For each root ω = a + ib of w^(2n) = (-1)^n:

- a real root (±1, n even) contributes one column, exp(a z t);
- a pair ω, ω̄ with b > 0 contributes two columns, exp(a z t)·sin(b z t) and
  exp(a z t)·cos(b z t), in that order.

Real roots come first (+1, then -1), then the complex pairs by increasing
angle, with ω = i last, so the final column is always cos(z t). For n = 2 this
is (e^{zt}, e^{-zt}, sin zt, cos zt).

In the scaled basis every column with a > 0 is multiplied by exp(-a z), so all
entries stay O(1) on [0, 1]; the scaled boundary determinant is the direct one
times exp(-z cot(π/2n)).

Every function in the span is kept as complex mode weights w_m:

    u(t) = Σ_m Re(w_m exp(ν_m t - s_m)),  ν_m = z ω_m,  s_m = shift of mode m

so derivatives multiply w_m by ν_m^j and integration divides by ν_m.
'''

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

from nfold.numerics import Complex, PrecisionContext, Real
from nfold.unity import UnityRoot, unity_roots, valid_order

type BasisPart = Literal['exp', 'sin', 'cos']


@dataclass(frozen=True)
class BasisColumn:
    mode: int
    part: BasisPart


@dataclass(frozen=True)
class BasisMode:
    root: UnityRoot
    shifted: bool


def _mode_order(n: int) -> list[UnityRoot]:
    roots = unity_roots(n)
    real = sorted((w for w in roots if w.is_real), key=lambda w: w.angle_numerator)
    pairs = sorted((w for w in roots if w.upper),
                   key=lambda w: (w.angle_numerator == n, w.angle_numerator))
    return real + pairs


@dataclass(frozen=True)
class FundamentalBasis:
    '''
    The 2n real basis functions for a given z.

    PARAMETERS
    ----------
    n: int
        Order of integration.
    z: Real
        Frequency variable, z = λ^(-1/(2n)).
    ctx: PrecisionContext
    scaled: bool
        Multiply growing columns by exp(-a z).
    '''
    n: int
    z: Real
    ctx: PrecisionContext
    scaled: bool = True
    modes: tuple[BasisMode, ...] = field(init=False)
    columns: tuple[BasisColumn, ...] = field(init=False)
    nu: tuple[Complex, ...] = field(init=False)
    shifts: tuple[Real, ...] = field(init=False)

    def __post_init__(self):
        valid_order(self.n)
        mp = self.ctx.mp
        z = mp.mpf(self.z)
        object.__setattr__(self, 'z', z)
        modes: list[BasisMode] = []
        columns: list[BasisColumn] = []
        nu: list[Complex] = []
        shifts: list[Real] = []
        for index, root in enumerate(_mode_order(self.n)):
            w = root.value(self.ctx)
            shifted = self.scaled and w.real > 0
            modes.append(BasisMode(root, shifted))
            nu.append(z * w)
            shifts.append(w.real * z if shifted else mp.zero)
            if root.is_real:
                columns.append(BasisColumn(index, 'exp'))
            else:
                columns.append(BasisColumn(index, 'sin'))
                columns.append(BasisColumn(index, 'cos'))
        object.__setattr__(self, 'modes', tuple(modes))
        object.__setattr__(self, 'columns', tuple(columns))
        object.__setattr__(self, 'nu', tuple(nu))
        object.__setattr__(self, 'shifts', tuple(shifts))

    @property
    def size(self) -> int:
        return len(self.columns)

    def entry(self, column: BasisColumn, j: int, t: Real) -> Real:
        '''
        The j-th t-derivative of a basis column at t, divided by z^j.
        '''
        mp = self.ctx.mp
        mode = column.mode
        w = self.modes[mode].root.value(self.ctx)
        value = w ** j * mp.exp(self.nu[mode] * t - self.shifts[mode])
        return value.imag if column.part == 'sin' else value.real

    def weights(self, gamma: Sequence[Real]) -> tuple[Complex, ...]:
        '''
        Complex mode weights for column coefficients γ.
        '''
        if len(gamma) != self.size:
            raise ValueError(f'Invalid coefficient vector: {len(gamma)} entries for {self.size} columns')
        mp = self.ctx.mp
        weights = [mp.mpc(0) for _ in self.modes]
        for column, g in zip(self.columns, gamma):
            match column.part:
                case 'exp' | 'cos':
                    weights[column.mode] += g
                case 'sin':
                    weights[column.mode] -= mp.mpc(0, 1) * g
                case _: # type: ignore
                    raise ValueError(f'Invalid basis part: {column.part}')
        return tuple(weights)

    def gamma(self, weights: Sequence[Complex]) -> list[Real]:
        '''
        Column coefficients for complex mode weights; the inverse of `weights`.
        '''
        out: list[Real] = []
        for column in self.columns:
            w = weights[column.mode]
            out.append(-w.imag if column.part == 'sin' else w.real)
        return out

    def unscale(self, gamma: Sequence[Real]) -> list[Real]:
        '''
        Coefficients over the unscaled columns exp(a z t)·(sin|cos)(b z t).
        '''
        mp = self.ctx.mp
        return [g * mp.exp(-self.shifts[c.mode]) for c, g in zip(self.columns, gamma)]


def boundary_matrix(n: int, z: Real, ctx: PrecisionContext, scaled: bool = True):
    '''
    The 2n x 2n boundary matrix of the real basis, with the common factor z^j
    removed from row j.

    Rows 0..n-1 are the derivatives of order 0..n-1 at t = 1 (the conditions on
    u); rows n..2n-1 are the derivatives of order n..2n-1 at t = 0 (the
    conditions on v, which is proportional to u^(n)).

    RETURNS
    -------
    mpmath matrix
        Singular exactly when z is a root of the characteristic equation.
    '''
    basis = FundamentalBasis(n, z, ctx, scaled)
    return basis_boundary_matrix(basis)


def basis_boundary_matrix(basis: FundamentalBasis):
    mp = basis.ctx.mp
    n = basis.n
    one, zero = mp.one, mp.zero
    A = mp.matrix(2 * n, 2 * n)
    for j in range(2 * n):
        t = one if j < n else zero
        for col, column in enumerate(basis.columns):
            A[j, col] = basis.entry(column, j, t)
    return A


@dataclass(frozen=True)
class BasisExpansion:
    '''
    A function Σ_m Re(w_m exp(ν_m t - s_m)) in the span of a fundamental basis.
    '''
    basis: FundamentalBasis
    weights: tuple[Complex, ...]

    def __call__(self, t: Real) -> Real:
        mp = self.basis.ctx.mp
        t = mp.mpf(t)
        total = mp.zero
        for w, nu, s in zip(self.weights, self.basis.nu, self.basis.shifts):
            total += (w * mp.exp(nu * t - s)).real
        return total

    def derivative(self, j: int = 1) -> 'BasisExpansion':
        '''
        The j-th derivative in t.
        '''
        if j < 0:
            raise ValueError(f'Invalid derivative order: {j}')
        return BasisExpansion(self.basis,
                              tuple(w * nu ** j for w, nu in zip(self.weights, self.basis.nu)))

    def scaled(self, c: Real) -> 'BasisExpansion':
        return BasisExpansion(self.basis, tuple(c * w for w in self.weights))

    @property
    def gamma(self) -> list[Real]:
        '''
        Coefficients over the (possibly scaled) basis columns.
        '''
        return self.basis.gamma(self.weights)

    @property
    def unscaled_gamma(self) -> list[Real]:
        return self.basis.unscale(self.gamma)
