from enum import Enum

import numpy as np


class EstimatorMode(Enum):
    CENTROID = "centroid"
    LAPLACE = "laplace"
    MLE = "mle"


def estimate(counts: np.ndarray, mode: EstimatorMode) -> np.ndarray:
    """Point estimates for count vectors stacked along the last axis."""
    counts = np.asarray(counts, dtype=float)
    k = counts.shape[-1]
    n = counts.sum(axis=-1, keepdims=True)
    if mode == EstimatorMode.CENTROID:
        # mean centroid of the Dirichlet(1, n_1..n_k) polytope
        return (counts + 1.0 / k) / (n + 1.0)
    if mode == EstimatorMode.LAPLACE:
        return (counts + 1.0) / (n + k)
    if mode == EstimatorMode.MLE:
        return counts / n
    raise NotImplementedError
