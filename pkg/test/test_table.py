'''
Tests for the rich_tables module.
'''

from fractions import Fraction
from io import StringIO
from typing import Any

import pytest
from rich.console import Console

from nfold.decorators import CheckResult
from nfold.eigen_solver import AsymptoticReport, AsymptoticCheck, SingularRecord
from nfold.epsilon_series import compute_a_coefficients
from nfold.numerics import PrecisionContext
from nfold.rich_tables import (
    Table, asymptotic_table, check_table, coefficients_table, format_value, records_table, tuple_table,
)

CTX = PrecisionContext(128)

default_labels = ['i', 'z', 'sigma']


def t(*values: tuple[Any, ...],
      labels: list[str] = default_labels,
      formats: list[str] = ['', '12', '>.3f']) -> Table:
    '''
    Build a test table.
    '''
    return Table(labels=labels, formats=formats, values=list(values))


base_data = [
    (1, CTX.mpf('1.875104068711961166'), 0.2844),
    (2, CTX.mpf('4.694091132974174576'), 0.0454),
    (3, CTX.mpf('7.854757438237612564'), 0.0162),
]

base_table = t(*base_data)


@pytest.fixture(scope='module')
def simple_table() -> Table:
    return base_table


def test_table(simple_table: Table):
    assert simple_table.labels == ['i', 'z', 'sigma']
    assert simple_table.formats == ['', '12', '>.3f']
    assert len(simple_table) == 3
    assert repr(simple_table) == 'Table of i, z, sigma 3 rows'


def test_default_formats():
    table = Table(labels=['a', 'b'], values=[(1, 2)], formats=['>.1f'])
    assert table.formats == ['>.1f', '20']


@pytest.mark.parametrize('i, v', [
    (0, base_data[0]),
    (2, base_data[2]),
    (-1, base_data[2]),
    ('i', [1, 2, 3]),
    ('sigma', [0.2844, 0.0454, 0.0162]),
])
def test_table_subscription(i: Any, v: Any, simple_table: Table):
    assert simple_table[i] == v


def test_table_missing_column(simple_table: Table):
    with pytest.raises(KeyError):
        simple_table['lambda']


def test_table_row_length():
    with pytest.raises(ValueError, match='Invalid table'):
        t((1, 2))


def test_table_equality(simple_table: Table):
    assert simple_table == t(*base_data)
    assert simple_table != t(*base_data[:2])
    assert list(simple_table) == base_data


@pytest.mark.parametrize('value, fmt, expected', [
    (None, '', '--'),
    (True, '', 'PASS'),
    (False, '', 'FAIL'),
    ('text', '12', 'text'),
    (7, '12', '7'),
    (Fraction(-34, 3), '', '-34/3'),
    (0.5, '>.3f', '0.500'),
    (0.25, '20', '0.25'),
    (CTX.mpf('1.5'), '5', '1.5000'),
    (CTX.mpf(0), '5', '0'),
])
def test_format_value(value: Any, fmt: str, expected: str):
    assert format_value(value, fmt) == expected


def test_to_dataframe(simple_table: Table):
    df = simple_table.to_dataframe()
    assert list(df.columns) == ['i', 'z', 'sigma']
    assert df.iloc[0].tolist() == ['1', '1.87510406871', '0.284']


def test_rich_rendering(simple_table: Table):
    out = StringIO()
    Console(file=out, width=120).print(simple_table)
    text = out.getvalue()
    assert 'sigma' in text
    assert '4.69409113297' in text


def test_tuple_table_labels():
    table = tuple_table([(1, 2, 3)], labels=['a'])
    assert table.labels == ['a', 'Series-2', 'Series-3']
    assert tuple_table([], labels=['a']).labels == ['a']


def test_records_table():
    record = SingularRecord.from_root(2, 1, CTX.mpf('1.875104068711961166'), CTX)
    table = records_table([record], digits=6)
    assert table.labels == ['i', 'z', 'lambda', 'sigma', 'epsilon']
    assert table.title == 'Singular values of J^2'
    assert table.to_dataframe().iloc[0].tolist()[:2] == ['1', '1.87510']


def test_coefficients_table():
    table = coefficients_table(compute_a_coefficients(3))
    assert table['k'] == [1, 2, 3]
    assert table.to_dataframe()['a_k'].tolist() == ['-2', '-4', '-34/3']
    assert table.to_dataframe()['approx'].tolist()[2] == '-1.133333e+01'


def test_asymptotic_table():
    report = AsymptoticReport((AsymptoticCheck('band', True, 'ratio 2'),), None)
    assert asymptotic_table(report).values == [('band', True, 'ratio 2')]


def test_check_table():
    results = [CheckResult('a', 'first', True, '', 0.125), CheckResult('b', 'second', False, 'off', 1.5)]
    df = check_table(results).to_dataframe()
    assert df['result'].tolist() == ['PASS', 'FAIL']
    assert df['seconds'].tolist() == ['0.12', '1.50']
