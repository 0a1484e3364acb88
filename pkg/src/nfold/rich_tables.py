'''
Terminal tables for singular records, coefficient lists and check reports.

A `Table` holds rows of values with labels and per-column formats. It renders
through rich, and converts to a pandas DataFrame of strings for CSV output.
'''

from collections.abc import Collection, Iterable, Sequence
from fractions import Fraction
from itertools import chain, repeat
from typing import Any, cast, overload

import pandas as pd

from rich.console import RenderableType
from rich.protocol import is_renderable
from rich.table import Table as RichTable
from rich.text import Text

from nfold.decorators import CheckResult
from nfold.eigen_solver import AsymptoticReport, SingularRecord
from nfold.eigenfunctions import EigenFunction
from nfold.epsilon_series import EpsilonReport, RationalSeries
from nfold.utils import decimal_string, take

DEFAULT_FORMAT = '20'
'''
Significant digits for real cells unless a column says otherwise.
'''


def format_value(value: Any, fmt: str = DEFAULT_FORMAT) -> str:
    '''
    Format one cell as plain text.

    Formats are digit counts for mpmath reals ('20'), Python format specs for
    floats ('>.3f'), or '' for str().
    '''
    match value:
        case None:
            return '--'
        case bool():
            return 'PASS' if value else 'FAIL'
        case str():
            return value
        case int() | Fraction():
            return str(value)
        case float():
            return f'{value:{fmt}}' if fmt and not fmt.isdigit() else repr(value)
        case _ if hasattr(value, '_mpf_'):
            return decimal_string(value, int(fmt) if fmt.isdigit() else int(DEFAULT_FORMAT))
        case _:
            return str(value)


class Table:
    '''
    A table of values, ready to be printed or written.
    '''
    labels: list[str]
    formats: list[str]
    values: list[tuple[Any, ...]]
    title: str|None
    __rich_table: RichTable|None

    def __init__(self,
                 /, *,
                 labels: Collection[str],
                 values: Iterable[tuple[Any, ...]],
                 formats: Iterable[str] = (),
                 title: str|None = None,
                 ):
        self.values = list(values)
        self.labels = list(labels)
        ncols = len(self.labels)
        if any(len(row) != ncols for row in self.values):
            raise ValueError(f'Invalid table: rows must have {ncols} cells')
        self.formats = take(ncols, chain(formats, repeat(DEFAULT_FORMAT)))
        self.title = title
        self.__rich_table = None

    @property
    def rich_table(self) -> RichTable:
        if self.__rich_table is None:
            table = RichTable(expand=False, title=self.title)
            for lbl in self.labels:
                table.add_column(lbl, justify='right', header_style='bold')

            def cell(value: Any, fmt: str) -> RenderableType:
                match value:
                    case bool():
                        return Text('PASS', style='green') if value else Text('FAIL', style='bold red')
                    case str():
                        return value
                    case _ if is_renderable(value):
                        return cast(RenderableType, value)
                    case _:
                        return format_value(value, fmt)

            for row in self.values:
                table.add_row(*(cell(v, fmt) for v, fmt in zip(row, self.formats)))
            self.__rich_table = table
        return self.__rich_table

    def __rich__(self):
        return self.rich_table

    @overload
    def __getitem__(self, i: int) -> tuple[Any, ...]: ...
    @overload
    def __getitem__(self, i: str) -> list[Any]: ...
    def __getitem__(self, i: int|str) -> Any:
        match i:
            case int():
                return self.values[i]
            case str():
                if i not in self.labels:
                    raise KeyError(f'No column {i}; columns are {", ".join(self.labels)}')
                col = self.labels.index(i)
                return [row[col] for row in self.values]
            case _: # type: ignore
                raise TypeError(f'Invalid table index: {i!r}')

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other: Any):
        if not isinstance(other, Table):
            return NotImplemented
        return self.labels == other.labels and self.values == other.values and self.formats == other.formats

    def __repr__(self):
        return f'Table of {", ".join(self.labels)} {len(self)} rows'

    def to_dataframe(self) -> pd.DataFrame:
        '''
        The table as formatted strings, so reals keep their digits when
        written out.
        '''
        return pd.DataFrame([[format_value(v, fmt) for v, fmt in zip(row, self.formats)]
                             for row in self.values],
                            columns=self.labels)


def tuple_table(values: Iterable[tuple[Any, ...]], /, *,
                labels: Collection[str] = (),
                formats: Iterable[str] = (),
                title: str|None = None,
                ) -> Table:
    '''
    A table from an iterable of rows. Missing labels become 'Series-k'.
    '''
    rows = list(values)
    ncols = len(rows[0]) if rows else len(labels)
    labels_ = [lbl or f'Series-{i + 1}' for i, lbl in enumerate(take(ncols, chain(labels, repeat(''))))]
    return Table(labels=labels_, values=rows, formats=formats, title=title)


def records_table(records: Sequence[SingularRecord], digits: int = 20) -> Table:
    fmt = str(digits)
    return tuple_table(((r.i, r.z, r.lam, r.sigma, r.epsilon) for r in records),
                       labels=['i', 'z', 'lambda', 'sigma', 'epsilon'],
                       formats=['', fmt, fmt, fmt, fmt],
                       title=f'Singular values of J^{records[0].n}' if records else None)


def gamma_table(functions: Sequence[EigenFunction], digits: int = 8) -> Table:
    '''
    γ vectors as ratios to their last entry, the form tables of eigenfunction
    coefficients are usually given in.
    '''
    if not functions:
        return tuple_table((), labels=['i'])
    size = len(functions[0].gamma)
    rows = []
    for f in functions:
        gamma = f.gamma
        rows.append((f.record.i, *(g / gamma[-1] for g in gamma)))
    return tuple_table(rows,
                       labels=['i', *(f'gamma_{k + 1}' for k in range(size))],
                       formats=['', *repeat(str(digits), size)],
                       title='Coefficient ratios')


def coefficients_table(series: RationalSeries, digits: int = 20) -> Table:
    return tuple_table(((m, a, float(a)) for m, a in enumerate(series.coefficients, start=1)),
                       labels=['k', 'a_k', 'approx'],
                       formats=['', '', '.6e'],
                       title='epsilon-series coefficients')


def asymptotic_table(report: AsymptoticReport) -> Table:
    return tuple_table(((c.name, c.passed, c.detail) for c in report.checks),
                       labels=['check', 'result', 'detail'],
                       title='Asymptotic checks')


def epsilon_table(report: EpsilonReport, digits: int = 10) -> Table:
    fmt = str(digits)
    return tuple_table(((c.i, c.epsilon, c.bound, c.sharper_bound, c.ratio, c.passed) for c in report.checks),
                       labels=['i', 'epsilon', 'bound', 'sharper', '|eps| e^zeta', 'result'],
                       formats=['', fmt, fmt, fmt, fmt, ''],
                       title='epsilon bounds')


def check_table(results: Sequence[CheckResult]) -> Table:
    return tuple_table(((r.description, r.passed, r.seconds, r.detail) for r in results),
                       labels=['check', 'result', 'seconds', 'detail'],
                       formats=['', '', '>.2f', ''],
                       title='Verification')
