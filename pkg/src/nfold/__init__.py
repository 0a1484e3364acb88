'''
Singular systems of the n-fold integration operator on L²(0, 1), computed in
arbitrary precision, and their use for spectral cut-off regularization.
'''

from nfold.basis import BasisExpansion, FundamentalBasis, boundary_matrix
from nfold.char_equation import (
    CharEquation, CoshCosTerm,
    build_char_equation, det_direct, emit_equation, evaluate, evaluate_derivative_scaled,
    evaluate_scaled, load_equation, reference_equation,
)
from nfold.config import RunConfig, load_run_yaml, run_config
from nfold.cutoff import (
    CutoffSolution, DataFunction,
    add_noise, adjoint_Jn, choose_N_discrepancy, cutoff_solve, error_sweep, forward_Jn,
    reconstruction_error, synthetic_problem,
)
from nfold.data_tables import SampleTable
from nfold.decorators import CheckResult, check
from nfold.eigen_solver import (
    SingularRecord, check_asymptotics, locate_zero, predict_seed, singular_values,
)
from nfold.eigenfunctions import (
    EigenFunction, ExtendedFunction, SingularTriple,
    apply_Jn_closed, eigenfunction, evaluate_u, evaluate_v, gram_matrix, nullspace_gamma,
    singular_system, take_u, take_v,
)
from nfold.epsilon_series import (
    RationalSeries, check_epsilon_bounds, compute_a_coefficients, epsilon_from_series,
)
from nfold.errors import (
    ConfigError, ConvergenceError, InsufficientSystemError, InvalidBracketError, MissedRootError,
    NfoldError, NotSingularError, NullityError, NumericalError, PrecisionExhaustedError,
)
from nfold.numerics import (
    Bracket, PrecisionContext, QuadratureRule,
    find_root, gauss_legendre_rule, integrate,
)
from nfold.rich_tables import Table, tuple_table
from nfold.unity import SubsetOrbit, UnityRoot, enumerate_orbits, omega, subset_coefficient, subset_sums
from nfold.utils import console, decimal_string, take
from nfold.verify import default_suite, run_suite

__all__ = [
    'add_noise',
    'adjoint_Jn',
    'apply_Jn_closed',
    'BasisExpansion',
    'boundary_matrix',
    'Bracket',
    'build_char_equation',
    'CharEquation',
    'check',
    'check_asymptotics',
    'check_epsilon_bounds',
    'CheckResult',
    'choose_N_discrepancy',
    'compute_a_coefficients',
    'ConfigError',
    'console',
    'ConvergenceError',
    'CoshCosTerm',
    'cutoff_solve',
    'CutoffSolution',
    'DataFunction',
    'decimal_string',
    'default_suite',
    'det_direct',
    'eigenfunction',
    'EigenFunction',
    'emit_equation',
    'enumerate_orbits',
    'epsilon_from_series',
    'error_sweep',
    'evaluate',
    'evaluate_derivative_scaled',
    'evaluate_scaled',
    'evaluate_u',
    'evaluate_v',
    'ExtendedFunction',
    'find_root',
    'forward_Jn',
    'FundamentalBasis',
    'gauss_legendre_rule',
    'gram_matrix',
    'InsufficientSystemError',
    'integrate',
    'InvalidBracketError',
    'load_equation',
    'load_run_yaml',
    'locate_zero',
    'MissedRootError',
    'NfoldError',
    'NotSingularError',
    'nullspace_gamma',
    'NullityError',
    'NumericalError',
    'omega',
    'PrecisionContext',
    'PrecisionExhaustedError',
    'predict_seed',
    'QuadratureRule',
    'RationalSeries',
    'reconstruction_error',
    'reference_equation',
    'run_config',
    'run_suite',
    'RunConfig',
    'SampleTable',
    'singular_system',
    'singular_values',
    'SingularRecord',
    'SingularTriple',
    'subset_coefficient',
    'subset_sums',
    'SubsetOrbit',
    'synthetic_problem',
    'Table',
    'take',
    'take_u',
    'take_v',
    'tuple_table',
    'UnityRoot',
]
