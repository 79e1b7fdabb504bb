"""Causal Granger causality for multivariate time series.

An edge ``i -> j`` is reported only when both the bivariate and the
multivariate (all-other-variables conditioned) Granger tests find it.
"""

from .adjacency import AdjacencyMatrix
from .cgc import InferenceConfig, InferenceReport, cgc_infer, combine_and
from .estimator import CausalGranger
from .evaluate import ConfusionReport, confusion, sweep
from .gc_tests import bvgc_matrix, bvgc_test, mvgc_matrix, mvgc_test, residual_ci_test
from .series import MultivariateTimeSeries, from_matrix, lagged_design, standardize
from .simulate import GroundTruth, NoiseConfig, mask_latent, motif, random_ground_truth, simulate_ar

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix",
    "CausalGranger",
    "ConfusionReport",
    "GroundTruth",
    "InferenceConfig",
    "InferenceReport",
    "MultivariateTimeSeries",
    "NoiseConfig",
    "bvgc_matrix",
    "bvgc_test",
    "cgc_infer",
    "combine_and",
    "confusion",
    "from_matrix",
    "lagged_design",
    "mask_latent",
    "motif",
    "mvgc_matrix",
    "mvgc_test",
    "random_ground_truth",
    "residual_ci_test",
    "simulate_ar",
    "standardize",
    "sweep",
]
