import math
from functools import lru_cache

import numpy as np
import pytest

from cgranger.simulate import NoiseConfig, motif


def f_density(x, d1, d2):
    """F(d1, d2) density written out from the gamma-function form."""
    if x <= 0:
        return 0.0
    log_b = math.lgamma(d1 / 2) + math.lgamma(d2 / 2) - math.lgamma((d1 + d2) / 2)
    return math.exp(
        0.5 * d1 * math.log(d1 / d2)
        + (0.5 * d1 - 1) * math.log(x)
        - 0.5 * (d1 + d2) * math.log1p(d1 * x / d2)
        - log_b
    )


def f_cdf_quadrature(x, d1, d2):
    from scipy.integrate import quad

    if x <= 0:
        return 0.0
    # split at the mode region so quad sees the singularity at 0 for d1 = 1
    val, _ = quad(f_density, 0.0, x, args=(d1, d2), epsabs=1e-14, epsrel=1e-12, limit=500)
    return val


@lru_cache(maxsize=None)
def cached_motif(kind, seed, coefficient=0.6, T=5000, ar=0.5):
    return motif(kind, coefficient, T, NoiseConfig(seed=seed, ar_coefficient=ar))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
