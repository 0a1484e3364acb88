'''
Exceptions raised by the nfold package.

Numerical failures derive from `NumericalError`; bad arguments and bad
configuration derive from `ValueError`, so callers that only validate input
can keep catching `ValueError`.
'''


class NfoldError(Exception):
    '''
    Base class for all nfold errors.
    '''
    exit_code: int = 1


class NumericalError(NfoldError, ArithmeticError):
    '''
    A computation did not reach the requested accuracy.
    '''
    exit_code = 2


class ConvergenceError(NumericalError):
    '''
    An iteration hit its cap before meeting its tolerance.
    '''


class PrecisionExhaustedError(NumericalError):
    '''
    The working precision is too small for the requested tolerance.
    Retry with more bits.
    '''


class MissedRootError(NumericalError):
    '''
    The root scan found fewer sign changes than roots it was asked for,
    or the count changed when the scan grid was refined.
    '''


class NotSingularError(NumericalError):
    '''
    The boundary matrix is not numerically singular at the supplied root.
    '''


class NullityError(NumericalError):
    '''
    The boundary matrix has a null space of dimension greater than one.
    '''


class InvalidBracketError(NfoldError, ValueError):
    '''
    The function has the same sign at both ends of a bracket.
    '''
    exit_code = 3


class InsufficientSystemError(NfoldError, ValueError):
    '''
    A cut-off was requested beyond the number of computed singular triples.
    '''
    exit_code = 3


class ConfigError(NfoldError, ValueError):
    '''
    Invalid run configuration (command line, YAML run file or environment).
    '''
    exit_code = 3
