'''
Sampled data on [0, 1]: read from CSV, interpolated by cubic splines.
'''

from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline


class SampleTable:
    '''
    Samples (t_k, y_k) of a function on [0, 1], with strictly increasing t_k.

    The CSV form has a header row; the first column is t and the value column
    is `column` (default: the second column).
    '''
    table: pd.DataFrame
    column: str
    _spline: CubicSpline

    def __init__(self, table: pd.DataFrame, column: str|None = None):
        if table.shape[1] < 2:
            raise ValueError(f'Invalid sample table: need a t column and a value column, got {list(table.columns)}')
        self.table = table
        self.column = column or str(table.columns[1])
        if self.column not in table:
            raise ValueError(f'Invalid sample table: no column {self.column}')
        t = self.grid
        if len(t) < 4:
            raise ValueError(f'Invalid sample table: {len(t)} samples, need at least 4')
        if not np.all(np.diff(t) > 0):
            raise ValueError('Invalid sample table: t must be strictly increasing')
        if t[0] < 0 or t[-1] > 1:
            raise ValueError(f'Invalid sample table: t spans [{t[0]}, {t[-1]}], outside [0, 1]')
        self._spline = CubicSpline(t, self.values)

    @classmethod
    def from_csv(cls, file: Path|str, column: str|None = None) -> 'SampleTable':
        return cls(pd.read_csv(file), column) # type: ignore

    @classmethod
    def from_samples(cls, grid: Sequence[Any], values: Sequence[Any]) -> 'SampleTable':
        if len(grid) != len(values):
            raise ValueError(f'Invalid samples: {len(grid)} points, {len(values)} values')
        return cls(pd.DataFrame({'t': [float(t) for t in grid],
                                 'y': [float(v) for v in values]}))

    @property
    def grid(self) -> np.ndarray:
        return self.table.iloc[:, 0].to_numpy(dtype=float)

    @property
    def values(self) -> np.ndarray:
        return self.table[self.column].to_numpy(dtype=float)

    def interpolate(self, t: Any) -> float:
        '''
        The spline value at t; extrapolated by the end cubics outside the grid.
        '''
        return float(self._spline(float(t)))

    def pieces(self) -> list[tuple[float, tuple[float, float, float, float]]]:
        '''
        The spline as (t_k, (c3, c2, c1, c0)) per interval, the cubic being
        Σ c_j (t - t_k)^j. Floats convert exactly, so the pieces can be
        evaluated at any precision.
        '''
        knots = self._spline.x
        coeffs = self._spline.c
        return [(float(knots[k]), tuple(float(c) for c in coeffs[:, k]))  # type: ignore
                for k in range(len(knots) - 1)]

    def to_csv(self, file: Path|str) -> None:
        self.table.to_csv(file, index=False)
