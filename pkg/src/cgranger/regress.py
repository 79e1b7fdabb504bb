"""Least squares, nested-model F-tests and the F distribution.

The F tail probabilities come from a self-contained regularized incomplete
beta function (modified Lentz continued fraction), so the significance
engine does not depend on a statistics package.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import qr, solve_triangular

from .exceptions import (
    DegenerateModel,
    InsufficientSamples,
    InvalidDof,
    NonConvergence,
    RankDeficient,
)

__all__ = [
    "RegressionFit",
    "NestedOLS",
    "FTestResult",
    "ols_fit",
    "f_test",
    "f_cdf",
    "f_sf",
    "betainc",
    "geweke_statistic",
]

RANK_TOL = 1e-10
BETACF_TOL = 1e-15
BETACF_MAX_ITER = 300
_TINY = 1e-300


@dataclass(frozen=True)
class RegressionFit:
    """Result of one least-squares fit.

    With an intercept, ``coefficients[0]`` is the constant term and the
    remaining entries follow the regressor column order.
    """

    coefficients: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)
    rss: float
    n_samples: int
    n_params: int

    @property
    def sigma2(self) -> float:
        """Maximum-likelihood residual variance ``rss / n_samples``."""
        return self.rss / self.n_samples


def ols_fit(regressors, target, include_intercept: bool = True) -> RegressionFit:
    """Ordinary least squares via an economic QR decomposition.

    Parameters
    ----------
    regressors : array-like of shape (rows, k)
        ``k`` may be zero, in which case only the intercept (if any) is fit.
    target : array-like of shape (rows,)
    include_intercept : bool
        Prepend a constant column.

    Raises
    ------
    InsufficientSamples
        ``rows`` does not exceed the number of parameters.
    RankDeficient
        A diagonal entry of R falls below ``1e-10`` times the largest one.
        The offending regressor columns are reported (``-1`` is the
        intercept).
    """
    y = np.asarray(target, dtype=float).ravel()
    X = np.asarray(regressors, dtype=float)
    if X.ndim == 1:
        X = X[:, np.newaxis]
    rows = y.shape[0]
    if X.shape[0] != rows:
        raise ValueError(f"regressors have {X.shape[0]} rows, target has {rows}")
    if include_intercept:
        X = np.hstack([np.ones((rows, 1)), X])
    p = X.shape[1]
    if rows <= p:
        raise InsufficientSamples(f"{rows} samples cannot identify {p} parameters")
    if p == 0:
        resid = y.copy()
        return RegressionFit(np.empty(0), resid, float(resid @ resid), rows, 0)

    Q, R = qr(X, mode="economic", check_finite=False)
    diag = np.abs(np.diag(R))
    small = np.flatnonzero(diag <= RANK_TOL * diag.max())
    if small.size or diag.max() == 0.0:
        offset = 1 if include_intercept else 0
        raise RankDeficient([int(c) - offset for c in small] or list(range(p)))
    beta = solve_triangular(R, Q.T @ y, check_finite=False)
    resid = y - X @ beta
    return RegressionFit(beta, resid, float(resid @ resid), rows, p)


class NestedOLS:
    """Residual sums of squares for many column subsets of one design.

    The widest model is factored once (``X = QR``). The RSS of a
    sub-model on columns ``S`` is the widest model's RSS plus the part of
    ``Q'y`` that the re-triangularized ``R[:, S]`` leaves unexplained, so
    each sub-model costs one QR of a small ``p x |S|`` matrix instead of a
    pass over all rows. Column indices count the intercept as column 0
    when ``include_intercept`` is set.
    """

    def __init__(self, regressors, target, include_intercept: bool = True):
        y = np.asarray(target, dtype=float).ravel()
        X = np.asarray(regressors, dtype=float)
        if X.ndim == 1:
            X = X[:, np.newaxis]
        if include_intercept:
            X = np.hstack([np.ones((X.shape[0], 1)), X])
        rows, p = X.shape
        if rows <= p:
            raise InsufficientSamples(f"{rows} samples cannot identify {p} parameters")
        Q, R = qr(X, mode="economic", check_finite=False)
        diag = np.abs(np.diag(R))
        small = np.flatnonzero(diag <= RANK_TOL * diag.max())
        if small.size:
            offset = 1 if include_intercept else 0
            raise RankDeficient([int(c) - offset for c in small])
        self.n_samples = rows
        self.n_columns = p
        self._R = R
        self._z = Q.T @ y
        resid = y - Q @ self._z
        self.rss_widest = float(resid @ resid)

    def rss(self, columns) -> float:
        cols = sorted(set(int(c) for c in columns))
        if len(cols) == self.n_columns:
            return self.rss_widest
        if not cols:
            return self.rss_widest + float(self._z @ self._z)
        Qs, _ = qr(self._R[:, cols], mode="full", check_finite=False)
        tail = (Qs.T @ self._z)[len(cols):]
        return self.rss_widest + float(tail @ tail)


@dataclass(frozen=True)
class FTestResult:
    f_statistic: float
    dof_num: int
    dof_den: int
    p_value: float
    significant: bool


def f_test(rss_red, rss_full, p1, p2, n, alpha=0.05) -> FTestResult:
    """Compare nested linear models with an F-test.

    ``F = ((rss_red - rss_full) / (p2 - p1)) / (rss_full / (n - p2))``, set
    to zero when the reduced model fits better through round-off. The
    result is significant when the upper-tail p-value is strictly below
    ``alpha``.
    """
    if p2 <= p1 or p1 < 0:
        raise InvalidDof(f"need p2 > p1 >= 0, got p1={p1}, p2={p2}")
    if n <= p2:
        raise InvalidDof(f"need n > p2, got n={n}, p2={p2}")
    if rss_full <= 0.0:
        raise DegenerateModel("full model has zero residual sum of squares")
    d1, d2 = int(p2 - p1), int(n - p2)
    diff = rss_red - rss_full
    if diff <= 0.0:
        return FTestResult(0.0, d1, d2, 1.0, False)
    f = (diff / d1) / (rss_full / d2)
    p = f_sf(f, d1, d2)
    return FTestResult(float(f), d1, d2, p, bool(p < alpha))


def geweke_statistic(var_reduced, var_full) -> float:
    """Log ratio of reduced-model to full-model residual variance."""
    if var_full <= 0.0:
        raise DegenerateModel("full-model residual variance is zero")
    if var_reduced <= 0.0:
        raise DegenerateModel("reduced-model residual variance is zero")
    return math.log(var_reduced / var_full)


def _log_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _betacf(a, b, x):
    # Continued fraction for I_x(a, b); converges fast for x < (a+1)/(a+b+2).
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, BETACF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < BETACF_TOL:
            return h
    raise NonConvergence(
        f"incomplete beta continued fraction did not converge "
        f"(a={a}, b={b}, x={x}) in {BETACF_MAX_ITER} iterations"
    )


def _betainc(a, b, x, xc):
    # xc = 1 - x, supplied separately so callers can avoid cancellation
    if x <= 0.0:
        return 0.0
    if xc <= 0.0:
        return 1.0
    log_front = a * math.log(x) + b * math.log(xc) - _log_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _betacf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _betacf(b, a, xc) / b


def betainc(a, b, x) -> float:
    """Regularized incomplete beta function ``I_x(a, b)``."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    x = min(max(x, 0.0), 1.0)
    return _betainc(a, b, x, 1.0 - x)


def f_cdf(x, d1, d2) -> float:
    """Cumulative distribution function of the F(d1, d2) law."""
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    den = d1 * x + d2
    return _betainc(d1 / 2.0, d2 / 2.0, d1 * x / den, d2 / den)


def f_sf(x, d1, d2) -> float:
    """Upper tail ``1 - f_cdf(x, d1, d2)``, evaluated without cancellation."""
    if x <= 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    den = d1 * x + d2
    return _betainc(d2 / 2.0, d1 / 2.0, d2 / den, d1 * x / den)
