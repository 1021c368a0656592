from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Optional, Type

import numpy as np

from dspoly.core.exceptions import InvalidConfig, UnknownStatistic


ALL_STATISTICS: Dict[str, Type["TestStatistic"]] = {}


def weighted_quadratic(points: np.ndarray, p0: np.ndarray, n: int) -> np.ndarray:
    return n * np.sum((points - p0) ** 2 / p0, axis=-1)


class TestStatistic(ABC):
    KIND: str
    CONVEX_IN_P: bool
    # nondecreasing transform of weighted_quadratic, so its minimum over a
    # polytope is found by the exact projection kernel
    QUADRATIC_TRANSFORM: bool = False

    def __init_subclass__(cls) -> None:
        ALL_STATISTICS[cls.KIND] = cls

    @abstractmethod
    def evaluate(self, points: np.ndarray, p0: np.ndarray, n: int) -> np.ndarray:
        raise NotImplementedError

    def from_quadratic(self, quadratic: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def evaluate_vertices(
        self, z0: np.ndarray, z: np.ndarray, p0: np.ndarray, n: int
    ) -> np.ndarray:
        k = z.shape[-1]
        vertices = z[..., np.newaxis, :] + z0[..., np.newaxis, np.newaxis] * np.eye(k)
        return self.evaluate(vertices, p0, n)


class ChiSquared(TestStatistic):
    KIND: str = "chi_squared"
    CONVEX_IN_P: bool = True
    QUADRATIC_TRANSFORM: bool = True

    def evaluate(self, points: np.ndarray, p0: np.ndarray, n: int) -> np.ndarray:
        return weighted_quadratic(points, p0, n)

    def from_quadratic(self, quadratic: np.ndarray) -> np.ndarray:
        return quadratic

    def evaluate_vertices(
        self, z0: np.ndarray, z: np.ndarray, p0: np.ndarray, n: int
    ) -> np.ndarray:
        base = weighted_quadratic(z, p0, n)[..., np.newaxis]
        width = z0[..., np.newaxis]
        return base + n * (2.0 * width * (z - p0) + width**2) / p0


class RootChiSquared(ChiSquared):
    KIND: str = "root_chi_squared"

    def evaluate(self, points: np.ndarray, p0: np.ndarray, n: int) -> np.ndarray:
        return np.sqrt(super().evaluate(points, p0, n))

    def from_quadratic(self, quadratic: np.ndarray) -> np.ndarray:
        return np.sqrt(quadratic)

    def evaluate_vertices(
        self, z0: np.ndarray, z: np.ndarray, p0: np.ndarray, n: int
    ) -> np.ndarray:
        return np.sqrt(super().evaluate_vertices(z0, z, p0, n))


@dataclass(frozen=True)
class TestStatisticSpec:
    kind: str = ChiSquared.KIND
    convex_in_p: bool = True
    fallback_resolution: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in ALL_STATISTICS:
            raise UnknownStatistic(f"Unknown statistic: {self.kind}")
        if self.convex_in_p and not ALL_STATISTICS[self.kind].CONVEX_IN_P:
            raise InvalidConfig(f"Statistic {self.kind} is not convex in p")
        if self.fallback_resolution is not None and self.fallback_resolution < 1:
            raise InvalidConfig("Lattice resolution must be positive")

    @classmethod
    def of(
        cls, kind: str, fallback_resolution: Optional[int] = None
    ) -> "TestStatisticSpec":
        if kind not in ALL_STATISTICS:
            raise UnknownStatistic(f"Unknown statistic: {kind}")
        return cls(
            kind=kind,
            convex_in_p=ALL_STATISTICS[kind].CONVEX_IN_P,
            fallback_resolution=fallback_resolution,
        )

    def statistic(self) -> TestStatistic:
        # pyre-ignore[45]: Cannot instantiate abstract class TestStatistic
        return ALL_STATISTICS[self.kind]()
