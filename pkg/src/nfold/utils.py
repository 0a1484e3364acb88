"""
Utilities for iterators, signs and decimal output.
"""

from itertools import islice
from collections.abc import Iterator
from typing import Any

from mpmath import nstr
from rich.console import Console

console = Console(stderr=True)
'''
The shared console. Diagnostics go to stderr; command output goes to stdout.
'''

def take[T](n: int, x: Iterator[T]) -> list[T]:
    """
    Take n from an iterator.

    PARAMETERS
    ----------
    n: int
        The number of items to take.
    x: Iterator[T]
        The iterator.

    RETURNS
    -------
    list[T]
        List wil be [] if the iterator is empty.
    """
    return list(islice(x, 0, n))


def sign(x: Any) -> int:
    '''
    The sign of a real number as -1 or 1. Zero counts as positive, so that
    a zero landing exactly on a scan point is counted once.
    '''
    return -1 if x < 0 else 1


def decimal_string(x: Any, digits: int) -> str:
    '''
    Format an mpmath real with a fixed number of significant digits.
    Exact zeros print as `0`.
    '''
    if x == 0:
        return '0'
    return nstr(x, digits, min_fixed=-8, max_fixed=digits + 1, strip_zeros=False)

