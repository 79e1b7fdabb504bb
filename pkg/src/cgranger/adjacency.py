from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .exceptions import ShapeMismatch

__all__ = ["AdjacencyMatrix", "KINDS"]

KINDS = ("bvgc", "mvgc", "combined", "ground_truth")


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AdjacencyMatrix:
    """Directed graph over ``n`` variables.

    ``decisions[i, j]`` is True when the edge ``i -> j`` is present
    (row = source, column = target). ``strengths`` holds the Geweke
    log-variance ratios and ``p_values`` the edge test p-values; the
    diagonal is always empty, with strength 0 and p-value 1. Cycles and
    bidirectional pairs are allowed.
    """

    decisions: np.ndarray
    kind: str
    strengths: Optional[np.ndarray] = None
    p_values: Optional[np.ndarray] = None
    names: Optional[tuple] = None
    records: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown adjacency kind {self.kind!r}")
        d = np.asarray(self.decisions)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ShapeMismatch(f"adjacency must be square, got {d.shape}")
        n = d.shape[0]
        d = _frozen(d != 0, bool)
        if d.diagonal().any():
            d = d.copy()
            np.fill_diagonal(d, False)
            d.setflags(write=False)
        object.__setattr__(self, "decisions", d)
        s = np.zeros((n, n)) if self.strengths is None else self.strengths
        p = np.where(d, 0.0, 1.0) if self.p_values is None else self.p_values
        for name, arr in (("strengths", s), ("p_values", p)):
            if np.shape(arr) != (n, n):
                raise ShapeMismatch(f"{name} has shape {np.shape(arr)}, expected {(n, n)}")
        object.__setattr__(self, "strengths", _frozen(s, float))
        object.__setattr__(self, "p_values", _frozen(p, float))
        names = tuple(f"X{i + 1}" for i in range(n)) if self.names is None else tuple(self.names)
        if len(names) != n:
            raise ShapeMismatch(f"{len(names)} names for {n} variables")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "records", tuple(self.records))

    @property
    def n(self) -> int:
        return self.decisions.shape[0]

    def edges(self):
        """Sorted list of ``(source, target)`` index pairs."""
        return [(int(i), int(j)) for i, j in np.argwhere(self.decisions)]

    def edge_set(self):
        return set(self.edges())

    @classmethod
    def from_edges(cls, n, edges, kind="ground_truth", names=None):
        d = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            d[i, j] = True
        return cls(d, kind, names=names)
