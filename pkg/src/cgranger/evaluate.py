"""Scoring inferred graphs against a known truth."""

from dataclasses import asdict, dataclass
from typing import Iterable, List, Sequence

import numpy as np

from .adjacency import AdjacencyMatrix
from .cgc import InferenceConfig, cgc_infer
from .exceptions import ShapeMismatch

__all__ = ["ConfusionReport", "confusion", "sweep", "SweepRow", "format_table", "METHODS"]

METHODS = ("bvgc", "mvgc", "combined")


@dataclass(frozen=True)
class ConfusionReport:
    """Edge counts over the ``n (n - 1)`` ordered off-diagonal pairs.

    Precision is 1 when nothing is predicted and recall is 1 when the truth
    is empty. ``shd`` counts directed edge insertions plus deletions.
    """

    tp: int
    fp: int
    tn: int
    fn: int
    precision: float
    recall: float
    f1: float
    accuracy: float
    shd: int

    def to_dict(self):
        return asdict(self)


def _decisions(m):
    return m.decisions if isinstance(m, AdjacencyMatrix) else np.asarray(m, dtype=bool)


def confusion(truth, inferred) -> ConfusionReport:
    """Compare two directed graphs given as adjacency matrices or boolean arrays."""
    t, d = _decisions(truth), _decisions(inferred)
    if t.shape != d.shape or t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ShapeMismatch(f"truth {t.shape} and inferred {d.shape} differ")
    off = ~np.eye(t.shape[0], dtype=bool)
    tp = int((t & d & off).sum())
    fp = int((~t & d & off).sum())
    fn = int((t & ~d & off).sum())
    tn = int((~t & ~d & off).sum())
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    total = tp + fp + tn + fn
    accuracy = (tp + tn) / total if total else 1.0
    return ConfusionReport(tp, fp, tn, fn, precision, recall, f1, accuracy, fp + fn)


@dataclass(frozen=True)
class SweepRow:
    dataset: str
    alpha: float
    method: str
    report: ConfusionReport

    def to_dict(self):
        return {"dataset": self.dataset, "alpha": self.alpha, "method": self.method,
                **self.report.to_dict()}


def sweep(alpha_grid: Sequence[float], datasets: Iterable, config: InferenceConfig = None,
          n_jobs=None) -> List[SweepRow]:
    """Score every method at every significance level on every dataset.

    ``datasets`` yields ``(name, series, truth)`` where ``truth`` is an
    :class:`AdjacencyMatrix` or boolean array. Rows come out ordered by
    dataset, then alpha, then method.
    """
    alpha_grid = list(alpha_grid)
    datasets = list(datasets)
    if not alpha_grid or not datasets:
        raise ValueError("sweep needs at least one alpha and one dataset")
    base = config or InferenceConfig()
    rows = []
    for name, series, truth in datasets:
        for alpha in alpha_grid:
            cfg = InferenceConfig(**{**base.to_dict(), "alpha": alpha,
                                     "alpha_bvgc": None, "alpha_mvgc": None})
            rep = cgc_infer(series, config=cfg, n_jobs=n_jobs)
            mats = {"bvgc": rep.a_bvgc, "mvgc": rep.a_mvgc, "combined": rep.a_combined}
            for method in METHODS:
                rows.append(SweepRow(name, alpha, method, confusion(truth, mats[method])))
    return rows


_COLUMNS = ("dataset", "alpha", "method", "tp", "fp", "tn", "fn",
            "precision", "recall", "f1", "accuracy", "shd")


def format_table(rows: Sequence[SweepRow]) -> str:
    """Aligned plain-text table, one line per sweep row."""
    cells = [list(_COLUMNS)]
    for r in rows:
        d = r.to_dict()
        line = []
        for c in _COLUMNS:
            v = d[c]
            line.append(f"{v:.4f}" if isinstance(v, float) and c != "alpha" else str(v))
        cells.append(line)
    widths = [max(len(row[k]) for row in cells) for k in range(len(_COLUMNS))]
    return "\n".join(
        "  ".join(c.rjust(w) if k > 2 else c.ljust(w) for k, (c, w) in enumerate(zip(row, widths)))
        .rstrip()
        for row in cells
    )
