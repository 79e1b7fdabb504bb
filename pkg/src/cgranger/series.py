"""Multivariate time-series container and lag expansion.

A series is stored variable-major: ``values[i, t]`` is variable ``i`` at
timestep ``t``. The lag expansion lays out one column per
``(variable, lag)`` pair, variable-major then lag-ascending, so the column
for ``(i, lag)`` sits at index ``i * (tau + 1) + lag``.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import (
    DuplicateName,
    EmptyData,
    InsufficientSamples,
    InvalidLag,
    NonFiniteValue,
)

__all__ = [
    "MultivariateTimeSeries",
    "LaggedDesign",
    "from_matrix",
    "lagged_design",
    "standardize",
]


def _readonly(a):
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MultivariateTimeSeries:
    """``n`` named variables observed over ``T`` timesteps.

    Build instances with :func:`from_matrix`, which validates the input.
    """

    names: tuple
    values: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def T(self) -> int:
        return self.values.shape[1]

    def select(self, indices: Sequence[int]) -> "MultivariateTimeSeries":
        """Return the sub-series holding only ``indices`` (in that order)."""
        idx = list(indices)
        return from_matrix(self.values[idx], [self.names[i] for i in idx])

    def __eq__(self, other):
        if not isinstance(other, MultivariateTimeSeries):
            return NotImplemented
        return self.names == other.names and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.names, self.values.tobytes()))


def from_matrix(values, names: Optional[Sequence[str]] = None) -> MultivariateTimeSeries:
    """Validate an ``(n, T)`` matrix and wrap it as a series.

    Parameters
    ----------
    values : array-like of shape (n_variables, n_timesteps)
        A 1-D input is read as a single variable.
    names : sequence of str, optional
        Variable identifiers. Defaults to ``X1 .. Xn``.

    Raises
    ------
    EmptyData
        No variables or no timesteps, or a ragged matrix.
    NonFiniteValue
        A NaN or infinite entry; the exception carries its position.
    DuplicateName
        Repeated variable names or a name count different from ``n``.
    """
    try:
        arr = np.asarray(values, dtype=float)
    except ValueError as exc:
        raise EmptyData(f"values are not a rectangular numeric matrix: {exc}") from None
    if arr.ndim == 1:
        arr = arr[np.newaxis, :]
    if arr.ndim != 2 or arr.size == 0:
        raise EmptyData(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    n, T = arr.shape
    if T < 2:
        raise EmptyData(f"need at least 2 timesteps, got {T}")

    if names is None:
        names = [f"X{i + 1}" for i in range(n)]
    names = tuple(str(s) for s in names)
    if len(names) != n:
        raise DuplicateName(f"{len(names)} names given for {n} variables")
    if len(set(names)) != n:
        seen = set()
        dup = next(s for s in names if s in seen or seen.add(s))
        raise DuplicateName(f"duplicate variable name {dup!r}")

    bad = ~np.isfinite(arr)
    if bad.any():
        i, t = np.argwhere(bad)[0]
        raise NonFiniteValue(names[i], int(t), float(arr[i, t]))

    return MultivariateTimeSeries(names=names, values=_readonly(arr))


def standardize(series: MultivariateTimeSeries) -> MultivariateTimeSeries:
    """Per-variable z-scoring. Constant variables are only centred."""
    v = series.values
    mean = v.mean(axis=1, keepdims=True)
    sd = v.std(axis=1, keepdims=True)
    sd[sd == 0] = 1.0
    return from_matrix((v - mean) / sd, series.names)


@dataclass(frozen=True)
class LaggedDesign:
    """Lag-expanded view of a series for a maximum lag ``tau``.

    Row ``r`` corresponds to timestep ``r + tau`` of the source series.
    """

    source_n: int
    tau: int
    columns: tuple
    matrix: np.ndarray = field(repr=False)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    def index(self, variable: int, lag: int) -> int:
        if not 0 <= lag <= self.tau:
            raise InvalidLag(f"lag {lag} outside 0..{self.tau}")
        return variable * (self.tau + 1) + lag

    def column(self, variable: int, lag: int) -> np.ndarray:
        return self.matrix[:, self.index(variable, lag)]

    def block(self, pairs) -> np.ndarray:
        """Stack the columns for an iterable of ``(variable, lag)`` pairs."""
        idx = [self.index(v, l) for v, l in pairs]
        return self.matrix[:, idx]


def lagged_design(series: MultivariateTimeSeries, tau: int) -> LaggedDesign:
    """Expand ``series`` into ``n * (tau + 1)`` lagged columns.

    Column ``(i, lag)`` at row ``r`` equals ``values[i, r + tau - lag]``.
    Lag-0 columns are the prediction targets; lags ``1..tau`` are regressors.

    Raises
    ------
    InvalidLag
        ``tau < 1``.
    InsufficientSamples
        Fewer than ``n * tau + 2`` usable rows remain after shifting.
    """
    if isinstance(tau, bool) or int(tau) != tau or tau < 1:
        raise InvalidLag(f"lag order must be an integer >= 1, got {tau!r}")
    tau = int(tau)
    n, T = series.n, series.T
    rows = T - tau
    need = n * tau + 2
    if rows < need:
        raise InsufficientSamples(
            f"{T} timesteps leave {rows} usable rows at tau={tau}; "
            f"{n} variables need at least {need}"
        )
    v = series.values
    mat = np.empty((rows, n * (tau + 1)))
    cols = []
    for i in range(n):
        for lag in range(tau + 1):
            mat[:, i * (tau + 1) + lag] = v[i, tau - lag:T - lag]
            cols.append((i, lag))
    mat.setflags(write=False)
    return LaggedDesign(source_n=n, tau=tau, columns=tuple(cols), matrix=mat)
