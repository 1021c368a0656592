from dataclasses import dataclass
from itertools import combinations
from typing import List, Tuple

import numpy as np

from dspoly.core import (
    CONSTRUCTION_TOLERANCE,
    NullModel,
    RandomPolytope,
    SimplexPoint,
    check_dimensions,
)
from dspoly.core.exceptions import LatticeTooLarge, MissingFallbackResolution
from dspoly.core.statistics import TestStatisticSpec, weighted_quadratic
from dspoly.sampling import PolytopeBatch


LATTICE_MAX_K: int = 6


@dataclass(frozen=True)
class EnvelopeTriple:
    t_lower: float
    t_mean: float
    t_upper: float


def vertices(poly: RandomPolytope) -> List[SimplexPoint]:
    z = np.array(poly.z)
    return [
        SimplexPoint(p=tuple(float(v) for v in z + poly.z0 * np.eye(poly.k)[j]))
        for j in range(poly.k)
    ]


def centroid(poly: RandomPolytope) -> SimplexPoint:
    return SimplexPoint(p=tuple(z + poly.z0 / poly.k for z in poly.z))


def contains(poly: RandomPolytope, p: SimplexPoint) -> bool:
    check_dimensions(poly.k, p.k)
    return all(p_i >= z_i - CONSTRUCTION_TOLERANCE for p_i, z_i in zip(p.p, poly.z))


def lattice(k: int, resolution: int) -> np.ndarray:
    """All mixing weights m / resolution with nonnegative integer m summing to it."""
    if k > LATTICE_MAX_K:
        raise LatticeTooLarge(f"Lattice search supports k <= {LATTICE_MAX_K}")
    slots = resolution + k - 1
    bars = np.array(list(combinations(range(slots), k - 1)), dtype=int)
    low = np.full((len(bars), 1), -1)
    high = np.full((len(bars), 1), slots)
    edges = np.hstack([low, bars.reshape(len(bars), k - 1), high])
    return (np.diff(edges, axis=1) - 1) / resolution


def _lattice_extremes(
    batch: PolytopeBatch, p0: np.ndarray, n: int, spec: TestStatisticSpec
) -> Tuple[np.ndarray, np.ndarray]:
    if spec.fallback_resolution is None:
        raise MissingFallbackResolution(
            f"Statistic {spec.kind} needs a lattice fallback resolution"
        )
    statistic = spec.statistic()
    k = batch.z.shape[-1]
    # the centroid keeps t_lower <= t_mean <= t_upper on coarse lattices
    grid = lattice(k, spec.fallback_resolution)
    theta = np.vstack([grid, np.full((1, k), 1.0 / k)])
    lows = np.empty(len(batch))
    highs = np.empty(len(batch))
    for index in range(len(batch)):
        values = statistic.evaluate(batch.z[index] + batch.z0[index] * theta, p0, n)
        lows[index] = values.min()
        highs[index] = values.max()
    return lows, highs


def projection_minimum(
    z0: np.ndarray, z: np.ndarray, p0: np.ndarray, n: int
) -> np.ndarray:
    """
    Exact minimum of the weighted quadratic over each polytope.

    Minimizes sum_i w_i (x_i - p0_i)^2 subject to x >= z and sum(x) = 1, with
    w_i = n / p0_i. At the optimum x_i = max(z_i, p0_i + mu / w_i); coordinates
    leave their lower bound in increasing order of w_i (z_i - p0_i), so mu is
    found by one sort and cumulative sums.
    """
    inverse_weights = p0 / n
    breaks = (z - p0) * (n / p0)
    order = np.argsort(breaks, axis=-1, kind="stable")
    sorted_breaks = np.take_along_axis(breaks, order, axis=-1)
    cumulative_p0 = np.cumsum(p0[order], axis=-1)
    cumulative_inverse = np.cumsum(inverse_weights[order], axis=-1)
    cumulative_z = np.cumsum(np.take_along_axis(z, order, axis=-1), axis=-1)
    remaining_z = cumulative_z[..., -1:] - cumulative_z

    # total mass of the projection when mu sits at each breakpoint
    level = cumulative_p0 + sorted_breaks * cumulative_inverse + remaining_z
    free = np.count_nonzero(level <= 1.0 + CONSTRUCTION_TOLERANCE, axis=-1)
    last = np.maximum(free, 1)[..., np.newaxis] - 1

    mu = (
        1.0
        - np.take_along_axis(remaining_z, last, axis=-1)
        - np.take_along_axis(cumulative_p0, last, axis=-1)
    ) / np.take_along_axis(cumulative_inverse, last, axis=-1)
    mu = np.minimum(mu, 0.0)
    x = np.maximum(z, p0 + mu * inverse_weights)
    return weighted_quadratic(x, p0, n)


def upper_batch(
    batch: PolytopeBatch, p0: np.ndarray, n: int, spec: TestStatisticSpec
) -> np.ndarray:
    if spec.convex_in_p:
        # a convex function attains its maximum over a polytope at a vertex
        values = spec.statistic().evaluate_vertices(batch.z0, batch.z, p0, n)
        return values.max(axis=-1)
    _lows, highs = _lattice_extremes(batch, p0, n, spec)
    return highs


def lower_batch(
    batch: PolytopeBatch, p0: np.ndarray, n: int, spec: TestStatisticSpec
) -> np.ndarray:
    statistic = spec.statistic()
    if statistic.QUADRATIC_TRANSFORM:
        return statistic.from_quadratic(projection_minimum(batch.z0, batch.z, p0, n))
    lows, _highs = _lattice_extremes(batch, p0, n, spec)
    return lows


def mean_batch(
    batch: PolytopeBatch, p0: np.ndarray, n: int, spec: TestStatisticSpec
) -> np.ndarray:
    k = batch.z.shape[-1]
    centroids = batch.z + batch.z0[:, np.newaxis] / k
    return spec.statistic().evaluate(centroids, p0, n)


def envelope_batch(
    batch: PolytopeBatch, null: NullModel, n: int, spec: TestStatisticSpec
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    check_dimensions(batch.z.shape[-1], null.k)
    p0 = null.as_array()
    return (
        lower_batch(batch, p0, n, spec),
        mean_batch(batch, p0, n, spec),
        upper_batch(batch, p0, n, spec),
    )


def _as_batch(poly: RandomPolytope) -> PolytopeBatch:
    return PolytopeBatch(z0=np.array([poly.z0]), z=np.array([poly.z]))


def upper_stat(
    poly: RandomPolytope, null: NullModel, n: int, spec: TestStatisticSpec
) -> float:
    check_dimensions(poly.k, null.k)
    return float(upper_batch(_as_batch(poly), null.as_array(), n, spec)[0])


def lower_stat(
    poly: RandomPolytope, null: NullModel, n: int, spec: TestStatisticSpec
) -> float:
    check_dimensions(poly.k, null.k)
    return float(lower_batch(_as_batch(poly), null.as_array(), n, spec)[0])


def mean_stat(
    poly: RandomPolytope, null: NullModel, n: int, spec: TestStatisticSpec
) -> float:
    check_dimensions(poly.k, null.k)
    return float(mean_batch(_as_batch(poly), null.as_array(), n, spec)[0])


def envelope(
    poly: RandomPolytope, null: NullModel, n: int, spec: TestStatisticSpec
) -> EnvelopeTriple:
    lows, means, highs = envelope_batch(_as_batch(poly), null, n, spec)
    return EnvelopeTriple(
        t_lower=float(lows[0]), t_mean=float(means[0]), t_upper=float(highs[0])
    )


def brute_force_envelope(
    poly: RandomPolytope,
    null: NullModel,
    n: int,
    spec: TestStatisticSpec,
    resolution: int,
) -> Tuple[float, float]:
    check_dimensions(poly.k, null.k)
    theta = lattice(poly.k, resolution)
    points = np.array(poly.z) + poly.z0 * theta
    values = spec.statistic().evaluate(points, null.as_array(), n)
    return float(values.min()), float(values.max())
