"""Synthetic multivariate autoregressive data with known causal graphs.

Each variable follows

    x_i[t+1] = rho * x_i[t] + sum_lag sum_j A_lag[i, j] * x_j[t+1-lag] + eps_i[t+1]

with ``rho = 1`` in ``integrated`` mode (a unit self-root, so every
variable is a random walk plus its parents' input) and ``rho = 0.5`` in
``stationary`` mode. ``eps`` is additive noise with first-order temporal
correlation, drawn from a Gaussian, Laplace or uniform family.

Coefficient matrices are indexed ``[target, source]``; the aggregate graph
is indexed ``[source, target]`` like every other adjacency in the package.
"""

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy.signal import lfilter

from .adjacency import AdjacencyMatrix
from .exceptions import AllHidden, DivergenceDetected, InvalidDensity, InvalidLag
from .series import MultivariateTimeSeries, from_matrix

__all__ = [
    "GroundTruth",
    "NoiseConfig",
    "random_ground_truth",
    "stabilize",
    "spectral_radius",
    "simulate_ar",
    "correlated_noise",
    "motif",
    "mask_latent",
    "MODES",
    "FAMILIES",
    "MOTIFS",
]

MODES = ("stationary", "integrated")
FAMILIES = ("gaussian", "laplace", "uniform")
MOTIFS = ("chain", "fork", "collider")

STATIONARY_RHO = 0.5
BURN_IN = 200
DIVERGENCE_LIMIT = 1e8
COEF_RANGE = (0.2, 0.8)
RADIUS_LIMIT = 0.95
RADIUS_TARGET = 0.9


@dataclass(frozen=True)
class NoiseConfig:
    """Additive noise law.

    ``scale`` is the standard deviation for ``gaussian``, the Laplace
    diversity ``b`` for ``laplace`` and the half-width for ``uniform``.
    ``ar_coefficient`` is the first-order recursive filter applied to the
    i.i.d. draws.
    """

    family: str = "laplace"
    scale: float = 1.0
    ar_coefficient: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"noise family must be one of {FAMILIES}, got {self.family!r}")
        if not self.scale > 0:
            raise ValueError("noise scale must be positive")
        if not -1.0 < self.ar_coefficient < 1.0:
            raise ValueError("noise ar_coefficient must lie in (-1, 1)")

    def to_dict(self):
        return {"family": self.family, "scale": float(self.scale),
                "ar_coefficient": float(self.ar_coefficient), "seed": int(self.seed)}


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """Per-lag coefficient matrices of a simulated process.

    ``coefficients[k]`` is the ``(n, n)`` matrix for lag ``k + 1``, indexed
    ``[target, source]`` with a zero diagonal. ``scale`` records the
    shrink factor applied by :func:`stabilize` (1.0 when untouched).
    """

    coefficients: np.ndarray = field(repr=False)
    names: Optional[tuple] = None
    scale: float = 1.0
    seed: Optional[int] = None

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float, copy=True)
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[0] < 1:
            raise ValueError(f"coefficients must have shape (max_lag, n, n), got {c.shape}")
        for k in range(c.shape[0]):
            np.fill_diagonal(c[k], 0.0)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        n = c.shape[1]
        names = tuple(f"X{i + 1}" for i in range(n)) if self.names is None else tuple(self.names)
        object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return self.coefficients.shape[1]

    @property
    def max_lag(self) -> int:
        return self.coefficients.shape[0]

    @property
    def aggregate(self) -> np.ndarray:
        """``[source, target]`` boolean matrix: True when any lag carries the edge."""
        return (self.coefficients != 0).any(axis=0).T

    def adjacency(self) -> AdjacencyMatrix:
        return AdjacencyMatrix(self.aggregate, "ground_truth", names=self.names)

    def edge_list(self):
        """``(source, target, lag, coefficient)`` tuples, sorted."""
        out = []
        for k, j, i in np.argwhere(self.coefficients != 0):
            out.append((int(i), int(j), int(k) + 1, float(self.coefficients[k, j, i])))
        return sorted(out)

    @classmethod
    def from_edges(cls, n, edges, max_lag=None, **kw):
        edges = list(edges)
        L = max_lag or max([e[2] for e in edges], default=1)
        c = np.zeros((L, n, n))
        for src, tgt, lag, coef in edges:
            if not 1 <= lag <= L:
                raise InvalidLag(f"edge lag {lag} outside 1..{L}")
            c[lag - 1, tgt, src] = coef
        return cls(c, **kw)


def _companion(coefficients, rho):
    L, n, _ = coefficients.shape
    top = coefficients.copy()
    top[0] = top[0] + rho * np.eye(n)
    C = np.zeros((n * L, n * L))
    C[:n, :] = np.hstack(list(top))
    if L > 1:
        C[n:, :-n] = np.eye(n * (L - 1))
    return C


def spectral_radius(truth: GroundTruth, rho: float = STATIONARY_RHO) -> float:
    """Largest eigenvalue modulus of the process companion matrix."""
    return float(np.abs(np.linalg.eigvals(_companion(truth.coefficients, rho))).max())


def stabilize(truth: GroundTruth, rho: float = STATIONARY_RHO,
              limit: float = RADIUS_LIMIT, target: float = RADIUS_TARGET) -> GroundTruth:
    """Shrink all cross coefficients until the companion radius drops below ``limit``.

    Each round multiplies every coefficient by ``target / radius``. The self
    term ``rho`` is left alone, so ``rho`` must itself be below ``limit``.
    """
    if abs(rho) >= limit:
        raise ValueError(f"self coefficient {rho} cannot be stabilized below {limit}")
    coef = truth.coefficients.copy()
    scale = truth.scale
    for _ in range(1000):
        radius = float(np.abs(np.linalg.eigvals(_companion(coef, rho))).max())
        if radius < limit:
            break
        factor = target / radius
        coef *= factor
        scale *= factor
    else:  # pragma: no cover - geometric shrinkage always terminates
        raise DivergenceDetected("stabilization did not converge")
    return replace(truth, coefficients=coef, scale=scale)


def random_ground_truth(n: int, density: float, max_lag: int = 3, rng_seed=None, *,
                        coef_range=COEF_RANGE, stabilize_for: Optional[str] = "stationary",
                        names: Optional[Sequence[str]] = None) -> GroundTruth:
    """Draw a random multi-lag graph.

    Every ordered pair ``i != j`` becomes an edge with probability
    ``density``; its lag is uniform on ``1..max_lag`` and its coefficient is
    uniform on ``coef_range`` with a random sign. Cycles and bidirectional
    pairs are allowed. With ``stabilize_for="stationary"`` the result is
    passed through :func:`stabilize`.
    """
    if not 0.0 < density <= 1.0:
        raise InvalidDensity(f"density must lie in (0, 1], got {density}")
    if n < 2:
        raise ValueError("need at least 2 variables")
    if max_lag < 1:
        raise InvalidLag("max_lag must be >= 1")
    rng = np.random.default_rng(rng_seed)
    coef = np.zeros((max_lag, n, n))
    present = rng.random((n, n)) < density
    lags = rng.integers(0, max_lag, size=(n, n))
    mags = rng.uniform(coef_range[0], coef_range[1], size=(n, n))
    signs = rng.choice([-1.0, 1.0], size=(n, n))
    for src in range(n):
        for tgt in range(n):
            if src != tgt and present[src, tgt]:
                coef[lags[src, tgt], tgt, src] = signs[src, tgt] * mags[src, tgt]
    seed = int(rng_seed) if isinstance(rng_seed, (int, np.integer)) else None
    truth = GroundTruth(coef, names=names, seed=seed)
    if stabilize_for == "stationary":
        truth = stabilize(truth)
    return truth


def _innovations(rng, shape, noise):
    if noise.family == "gaussian":
        return rng.normal(0.0, noise.scale, size=shape)
    if noise.family == "laplace":
        return rng.laplace(0.0, noise.scale, size=shape)
    return rng.uniform(-noise.scale, noise.scale, size=shape)


def _filtered(rng, shape, noise):
    draws = _innovations(rng, shape, noise)
    if noise.ar_coefficient == 0.0:
        return draws
    return lfilter([1.0], [1.0, -noise.ar_coefficient], draws, axis=-1)


def correlated_noise(T: int, noise: NoiseConfig = NoiseConfig()) -> np.ndarray:
    """Length-``T`` noise: i.i.d. draws passed through an AR(1) filter."""
    return _filtered(np.random.default_rng(noise.seed), (T,), noise)


def simulate_ar(truth: GroundTruth, T: int, noise: NoiseConfig = NoiseConfig(),
                mode: str = "stationary", burn_in: int = BURN_IN) -> MultivariateTimeSeries:
    """Generate ``T`` timesteps of the autoregressive process driven by ``truth``.

    The recursion starts from zeros and the first ``burn_in`` samples are
    discarded. Raises :class:`DivergenceDetected` once any value exceeds
    ``1e8`` in magnitude.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if T < 2:
        raise ValueError("T must be at least 2")
    rho = 1.0 if mode == "integrated" else STATIONARY_RHO
    n, L = truth.n, truth.max_lag
    total = T + burn_in
    eps = _filtered(np.random.default_rng(noise.seed), (n, total), noise)

    # x[:, s] holds time s - L; the first L columns are the zero initial state.
    x = np.zeros((n, total + L))
    stacked = np.hstack(list(truth.coefficients))  # (n, n*L), lag-major
    has_edges = bool(np.any(stacked))
    window = np.zeros(n * L)
    check_every = 64
    with np.errstate(over="ignore", invalid="ignore"):
        for s in range(L, total + L):
            prev = x[:, s - 1]
            val = rho * prev + eps[:, s - L]
            if has_edges:
                for k in range(L):
                    window[k * n:(k + 1) * n] = x[:, s - 1 - k]
                val = val + stacked @ window
            x[:, s] = val
            if (s - L) % check_every == 0 or s == total + L - 1:
                peak = np.max(np.abs(val))
                if not peak <= DIVERGENCE_LIMIT:
                    raise DivergenceDetected(
                        f"process diverged at step {s - L} (|x| = {peak:.3g}); "
                        f"coefficients are unstable for {mode} mode"
                    )
    out = x[:, L + burn_in:]
    if not np.all(np.abs(out) <= DIVERGENCE_LIMIT):
        raise DivergenceDetected("process exceeded 1e8 in magnitude")
    return from_matrix(out, truth.names)


_MOTIF_EDGES = {
    # (source, target) pairs over X1, X2, X3 (indices 0, 1, 2), all at lag 1
    "chain": [(0, 2), (2, 1)],
    "fork": [(2, 0), (2, 1)],
    "collider": [(0, 2), (1, 2)],
}


def motif(kind: str, coefficient: float = 0.6, T: int = 5000,
          noise: NoiseConfig = NoiseConfig()):
    """Three-variable chain, fork or collider with unit-lag edges.

    * chain: ``X1 -> X3 -> X2``
    * fork: ``X1 <- X3 -> X2``
    * collider: ``X1 -> X3 <- X2``

    Returns ``(series, truth)`` simulated in stationary mode.
    """
    if kind not in _MOTIF_EDGES:
        raise ValueError(f"motif kind must be one of {MOTIFS}, got {kind!r}")
    if not 0.2 <= abs(coefficient) <= 0.95:
        raise ValueError("motif coefficient magnitude must lie in [0.2, 0.95]")
    truth = GroundTruth.from_edges(
        3, [(s, t, 1, coefficient) for s, t in _MOTIF_EDGES[kind]], max_lag=1,
        seed=noise.seed,
    )
    return simulate_ar(truth, T, noise, mode="stationary"), truth


def mask_latent(series: MultivariateTimeSeries, truth: GroundTruth, hidden):
    """Drop ``hidden`` variables from both the data and the true graph.

    Paths through hidden nodes are not replaced by direct edges, so the
    projected truth only keeps edges between observed variables.
    """
    hidden = set(int(h) for h in hidden)
    keep = [i for i in range(series.n) if i not in hidden]
    if not keep:
        raise AllHidden("every variable is hidden")
    if len(keep) < 2:
        raise AllHidden(f"only {len(keep)} observed variable would remain; need 2")
    if not hidden:
        raise ValueError("hidden set is empty")
    coef = truth.coefficients[:, keep][:, :, keep]
    projected = GroundTruth(coef, names=[truth.names[i] for i in keep],
                            scale=truth.scale, seed=truth.seed)
    return series.select(keep), projected
