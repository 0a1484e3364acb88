'''
Decorators for the nfold package.

`@check` turns a function of a `PrecisionContext` into a configurable,
timed verification check:

    @check(description='n={n}: first {count} roots')
    def roots(ctx, /, n: int, count: int) -> bool:
        ...

    suite = [roots(n=2, count=5), roots(n=3, count=5)]
    results = [c(ctx) for c in suite]
'''

from abc import abstractmethod
from collections.abc import Callable
from dataclasses import dataclass
import logging
import re
import time
from typing import Any, Protocol

from nfold.errors import NfoldError
from nfold.numerics import PrecisionContext

logger = logging.getLogger(__name__)

type CheckOutcome = bool|tuple[bool, str]|None
'''
What a check function returns: a verdict, a verdict with detail, or None
for a check that passes unless it raises.
'''


class CheckHandler(Protocol):
    '''
    The signature for check functions, before applying the decorator.
    '''
    @abstractmethod
    def __call__(self, ctx: PrecisionContext, /, **kwargs: Any) -> CheckOutcome:
        '''
        PARAMETERS
        ----------
        ctx: PrecisionContext
            The precision the suite runs at.
        kwargs: dict
            Constant parameters of the check (orders, counts, tolerances),
            supplied when the check is added to a suite.
        '''
        ...

    __name__: str
    __doc__: str|None


class CheckSpecifier(Protocol):
    '''
    The signature after applying the decorator: call it with the check's
    parameters to get a runnable check.
    '''
    @abstractmethod
    def __call__(self, /, *, tags: list[str]|None = None, **kwargs: Any) -> 'CheckWrapper':
        ...

    __name__: str


@dataclass(frozen=True)
class CheckResult:
    name: str
    description: str
    passed: bool
    detail: str
    seconds: float
    tags: tuple[str, ...] = ()


class CheckWrapper:
    '''
    A configured check: the user function, its parameters and its
    formatted description.
    '''
    func: Callable[..., CheckOutcome]
    fn: Callable[..., 'CheckWrapper']
    description: str
    kwargs: dict[str, Any]
    tags: list[str]
    __doc__: str|None
    __name__: str
    __qualname__: str
    __module__: str

    def __init__(self, func: Callable[..., CheckOutcome],
                 fn: Callable[..., 'CheckWrapper'],
                 description: str,
                 /,
                 tags: list[str]|None = None,
                 **kwargs: Any) -> None:
        self.func = func
        self.__doc__ = func.__doc__
        self.__name__ = func.__name__
        self.__qualname__ = func.__qualname__
        self.__module__ = func.__module__
        self.fn = fn
        self.kwargs = kwargs
        self.tags = tags or []
        self.description = format_cell(description or func.__name__, **kwargs)

    def __call__(self, ctx: PrecisionContext, /) -> CheckResult:
        '''
        Run the check. Failures of the numerics are reported as failed checks,
        not raised.
        '''
        started = time.perf_counter()
        try:
            outcome = self.func(ctx, **self.kwargs)
        except (NfoldError, AssertionError, ArithmeticError) as ex:
            passed, detail = False, f'{type(ex).__name__}: {ex}'
        else:
            match outcome:
                case None:
                    passed, detail = True, ''
                case bool():
                    passed, detail = outcome, ''
                case (bool() as verdict, str() as text):
                    passed, detail = verdict, text
                case _:
                    raise ValueError(f'Invalid check outcome: {outcome!r} from {self.__name__}')
        seconds = time.perf_counter() - started
        logger.info('%s %s (%.2fs)', 'PASS' if passed else 'FAIL', self.description, seconds)
        return CheckResult(self.__name__, self.description, passed, detail, seconds, tuple(self.tags))

    def __repr__(self) -> str:
        return f'<{self.__name__} {self.description}>'


RE_VAR_REF = re.compile(r'^\{(\w+)\}$')


def format_cell(spec: str, /, **kwargs: Any) -> str:
    '''
    Fill a description from the check's parameters.

    A spec of the form `'{var}'` is the parameter's own string form; anything
    else goes through `str.format`.
    '''
    match RE_VAR_REF.match(spec):
        case None:
            return spec.format(**kwargs)
        case m:
            var = m.group(1)
            if var not in kwargs:
                raise ValueError(f'Value not supplied: {var}. Variables: {", ".join(kwargs.keys()) or "None"}')
            return str(kwargs[var])


def check(description: str = ''):
    '''
    A decorator for verification checks.

    The decorated function takes a `PrecisionContext` positionally plus
    keyword parameters, and returns a `CheckOutcome`. Calling the decorated
    name with the keyword parameters yields a `CheckWrapper`; calling that
    with a context runs the check.

    EXAMPLE
    -------
    @check(description='n={n}: sigma decreasing')
    def decreasing(ctx: PrecisionContext, /, n: int):
        records = singular_values(n, 5, ctx)
        return all(a.sigma > b.sigma for a, b in zip(records, records[1:]))

    result = decreasing(n=2)(PrecisionContext())
    '''

    def decorator(func: CheckHandler) -> CheckSpecifier:
        def configure(*, tags: list[str]|None = None, **kwargs: Any) -> CheckWrapper:
            return CheckWrapper(func, configure, description, tags=tags, **kwargs)
        configure.__name__ = func.__name__
        configure.__doc__ = func.__doc__
        return configure
    return decorator
