"""scikit-learn style front end."""

import numpy as np
from sklearn.base import BaseEstimator

from .cgc import InferenceConfig, cgc_infer
from .series import from_matrix

__all__ = ["CausalGranger", "check_series"]


def check_series(X, feature_names=None):
    """Convert ``(n_samples, n_features)`` input into a validated series.

    Accepts arrays, nested lists and pandas DataFrames (column labels become
    variable names). Rows are timesteps.
    """
    if feature_names is None and hasattr(X, "columns"):
        feature_names = [str(c) for c in X.columns]
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, np.newaxis]
    if arr.ndim != 2:
        raise ValueError(f"expected 2-D input of shape (n_samples, n_features), got {arr.shape}")
    return from_matrix(arr.T, feature_names)


class CausalGranger(BaseEstimator):
    """Causal structure learner for multivariate time series.

    Parameters
    ----------
    tau : int, default=1
        Number of past timesteps pooled into each edge test.
    alpha : float, default=0.05
        Significance level of the F-tests.
    method : {"cgc", "bvgc", "mvgc"}, default="cgc"
        Which matrix ``adjacency_`` exposes. ``"cgc"`` is the AND of the
        bivariate and multivariate decisions.
    condition_lag0 : bool, default=False
        Also condition the multivariate test on contemporaneous values of
        third variables.
    bonferroni : bool, default=False
        Divide ``alpha`` by the number of ordered pairs.
    standardize : bool, default=False
        z-score each variable before testing. Decisions do not change.
    extra_past : int, default=0
        Extra source lags beyond ``tau`` kept in both nested models.
    n_jobs : int or None, default=None
        Thread count for edge tests; ``-1`` uses all cores.

    Attributes
    ----------
    report_ : InferenceReport
    adjacency_ : ndarray of shape (n_features, n_features)
        Boolean edge matrix, ``adjacency_[i, j]`` meaning ``i -> j``.
    strengths_ : ndarray of shape (n_features, n_features)
    p_values_ : ndarray of shape (n_features, n_features)
    n_features_in_ : int
    feature_names_in_ : ndarray of str
    """

    def __init__(self, tau=1, alpha=0.05, method="cgc", condition_lag0=False,
                 bonferroni=False, standardize=False, extra_past=0, n_jobs=None):
        self.tau = tau
        self.alpha = alpha
        self.method = method
        self.condition_lag0 = condition_lag0
        self.bonferroni = bonferroni
        self.standardize = standardize
        self.extra_past = extra_past
        self.n_jobs = n_jobs

    def _config(self):
        return InferenceConfig(
            tau=self.tau, alpha=self.alpha, condition_lag0=self.condition_lag0,
            bonferroni=self.bonferroni, standardize=self.standardize,
            extra_past=self.extra_past,
        )

    def fit(self, X, y=None):
        if self.method not in ("cgc", "bvgc", "mvgc"):
            raise ValueError(f"method must be 'cgc', 'bvgc' or 'mvgc', got {self.method!r}")
        series = check_series(X)
        report = cgc_infer(series, config=self._config(), n_jobs=self.n_jobs)
        chosen = {"cgc": report.a_combined, "bvgc": report.a_bvgc, "mvgc": report.a_mvgc}
        m = chosen[self.method]
        self.report_ = report
        self.adjacency_ = np.array(m.decisions)
        self.strengths_ = np.array(m.strengths)
        self.p_values_ = np.array(m.p_values)
        self.n_features_in_ = series.n
        self.feature_names_in_ = np.array(series.names, dtype=object)
        return self

    def edges(self):
        """Inferred edges as ``(source_name, target_name)`` pairs."""
        names = self.feature_names_in_
        return [(names[i], names[j]) for i, j in np.argwhere(self.adjacency_)]
