"""Causal Granger inference: bivariate AND multivariate.

The bivariate test rejects pairs that are marginally independent (which
removes links the multivariate test induces by conditioning on colliders),
while the multivariate test rejects pairs screened off by a third variable
(which removes chain and fork artefacts of the bivariate test). An edge is
kept only when both tests find it.
"""

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .adjacency import AdjacencyMatrix
from .exceptions import InvalidLag, ShapeMismatch
from .gc_tests import bvgc_matrix, mvgc_matrix
from .series import MultivariateTimeSeries, standardize

__all__ = ["InferenceConfig", "InferenceReport", "combine_and", "cgc_infer", "AdjacencyMatrix"]


@dataclass(frozen=True)
class InferenceConfig:
    """Knobs of one inference run.

    ``alpha_bvgc`` / ``alpha_mvgc`` override ``alpha`` for one sub-test;
    by default both use the same level.
    """

    tau: int = 1
    alpha: float = 0.05
    condition_lag0: bool = False
    bonferroni: bool = False
    standardize: bool = False
    extra_past: int = 0
    alpha_bvgc: Optional[float] = None
    alpha_mvgc: Optional[float] = None

    def __post_init__(self):
        if isinstance(self.tau, bool) or int(self.tau) != self.tau or self.tau < 1:
            raise InvalidLag(f"tau must be an integer >= 1, got {self.tau!r}")
        for name in ("alpha", "alpha_bvgc", "alpha_mvgc"):
            a = getattr(self, name)
            if a is not None and not 0.0 < a < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {a}")
        if self.extra_past < 0:
            raise InvalidLag("extra_past must be >= 0")

    def to_dict(self):
        return asdict(self)

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class InferenceReport:
    a_bvgc: AdjacencyMatrix
    a_mvgc: AdjacencyMatrix
    a_combined: AdjacencyMatrix
    config: InferenceConfig
    names: tuple
    fingerprint: str = field(default="")

    @property
    def tau(self):
        return self.config.tau

    @property
    def alpha(self):
        return self.config.alpha

    def edge_records(self):
        """``(bvgc_result, mvgc_result)`` pairs in row-major edge order."""
        return list(zip(self.a_bvgc.records, self.a_mvgc.records))


def combine_and(a_bvgc: AdjacencyMatrix, a_mvgc: AdjacencyMatrix) -> AdjacencyMatrix:
    """Keep the edges both matrices agree on.

    Strengths combine by minimum and p-values by maximum, so the combined
    annotations are as conservative as the weaker of the two tests.
    """
    if a_bvgc.n != a_mvgc.n:
        raise ShapeMismatch(f"cannot combine {a_bvgc.n}x{a_bvgc.n} with {a_mvgc.n}x{a_mvgc.n}")
    return AdjacencyMatrix(
        a_bvgc.decisions & a_mvgc.decisions,
        "combined",
        np.minimum(a_bvgc.strengths, a_mvgc.strengths),
        np.maximum(a_bvgc.p_values, a_mvgc.p_values),
        a_bvgc.names,
    )


def cgc_infer(series: MultivariateTimeSeries, tau: int = 1, alpha: float = 0.05,
              config: Optional[InferenceConfig] = None, *,
              n_jobs: Optional[int] = None) -> InferenceReport:
    """Run both edge-test matrices on ``series`` and AND them.

    ``config`` takes precedence over ``tau`` and ``alpha`` when given.
    ``n_jobs`` other than ``None``/1 computes the two matrices concurrently
    (each also spreading its edges over threads); the output is identical to
    the sequential run.
    """
    if config is None:
        config = InferenceConfig(tau=tau, alpha=alpha)
    data = standardize(series) if config.standardize else series
    a_b = config.alpha if config.alpha_bvgc is None else config.alpha_bvgc
    a_m = config.alpha if config.alpha_mvgc is None else config.alpha_mvgc

    def run_b():
        return bvgc_matrix(data, config.tau, a_b, extra_past=config.extra_past,
                           bonferroni=config.bonferroni, n_jobs=n_jobs)

    def run_m():
        return mvgc_matrix(data, config.tau, a_m, condition_lag0=config.condition_lag0,
                           extra_past=config.extra_past, bonferroni=config.bonferroni,
                           n_jobs=n_jobs)

    if n_jobs is None or n_jobs == 1:
        bv, mv = run_b(), run_m()
    else:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fb, fm = pool.submit(run_b), pool.submit(run_m)
            bv, mv = fb.result(), fm.result()
    return InferenceReport(bv, mv, combine_and(bv, mv), config, series.names,
                           config.fingerprint())
