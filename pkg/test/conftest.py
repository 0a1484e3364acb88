'''
Test harnesses (fixtures) for the project.

These are used to set up the environment for the tests. They are defined with the `@pytest.fixture` decorator
and can be used in test functions by passing them as arguments. If defined as a generator that yields once,
they act similar to how a context manager works, running the code after the `yield` after the test function
completes, whether successfully or not.

Singular systems are expensive in pure-Python arbitrary precision, so the ones shared between test modules
are session fixtures.
'''

import logging

import pytest

from nfold.eigenfunctions import SingularTriple, singular_system
from nfold.numerics import PrecisionContext


@pytest.fixture(scope='session')
def ctx() -> PrecisionContext:
    '''
    The default working precision, 256 bits.
    '''
    return PrecisionContext(256)


@pytest.fixture(scope='session')
def ctx128() -> PrecisionContext:
    '''
    A cheaper precision for the regularization tests.
    '''
    return PrecisionContext(128)


@pytest.fixture(scope='session')
def system_n1(ctx128: PrecisionContext) -> list[SingularTriple]:
    return singular_system(1, 25, ctx128)


@pytest.fixture(scope='session')
def system_n2(ctx: PrecisionContext) -> list[SingularTriple]:
    return singular_system(2, 5, ctx)


@pytest.fixture(scope='session')
def system_n2_coarse(ctx128: PrecisionContext) -> list[SingularTriple]:
    return singular_system(2, 10, ctx128)


@pytest.fixture(autouse=True)
def package_logger():
    '''
    `cli.main` installs its own handler on the package logger and stops
    propagation; put it back so `caplog` sees records in later tests.
    '''
    logger = logging.getLogger('nfold')
    handlers, level, propagate = list(logger.handlers), logger.level, logger.propagate
    yield logger
    logger.handlers = handlers
    logger.setLevel(level)
    logger.propagate = propagate
