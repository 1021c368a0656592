import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np
from mashumaro import DataClassDictMixin

from dspoly.core.estimators import EstimatorMode, estimate
from dspoly.core.exceptions import (
    DimensionMismatch,
    EmptyCounts,
    InvalidConfig,
    InvalidNullModel,
    InvalidTailPair,
    NegativeCount,
)
from dspoly.core.statistics import TestStatisticSpec


CONSTRUCTION_TOLERANCE: float = 1e-12
ARITHMETIC_TOLERANCE: float = 1e-9
MAX_SEED: int = 2**64 - 1


@dataclass(frozen=True)
class CountData(DataClassDictMixin):
    counts: Tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if len(self.counts) < 2:
            raise EmptyCounts("At least two cells are required")
        if any(count < 0 for count in self.counts):
            raise NegativeCount(f"Negative cell count in {list(self.counts)}")
        if self.n != sum(self.counts):
            raise InvalidConfig(f"Total {self.n} does not match the cell counts")
        if self.n < 1:
            raise EmptyCounts("All cell counts are zero")

    @property
    def k(self) -> int:
        return len(self.counts)

    def as_array(self) -> np.ndarray:
        return np.array(self.counts, dtype=float)


@dataclass(frozen=True)
class NullModel(DataClassDictMixin):
    p0: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.p0) < 2:
            raise InvalidNullModel("A null model needs at least two cells")
        if any(not p > 0.0 for p in self.p0):
            raise InvalidNullModel("Null probabilities must be strictly positive")
        total = math.fsum(self.p0)
        if abs(total - 1.0) > CONSTRUCTION_TOLERANCE:
            raise InvalidNullModel(f"Null probabilities sum to {total}, not 1")

    @classmethod
    def uniform(cls, k: int) -> "NullModel":
        return cls(p0=tuple([1.0 / k] * k))

    @property
    def k(self) -> int:
        return len(self.p0)

    def as_array(self) -> np.ndarray:
        return np.array(self.p0, dtype=float)


@dataclass(frozen=True)
class SimplexPoint(DataClassDictMixin):
    p: Tuple[float, ...]

    def __post_init__(self) -> None:
        if any(value < -ARITHMETIC_TOLERANCE for value in self.p):
            raise InvalidConfig(f"Negative coordinate in {list(self.p)}")
        total = math.fsum(self.p)
        if abs(total - 1.0) > ARITHMETIC_TOLERANCE:
            raise InvalidConfig(f"Simplex point sums to {total}, not 1")

    @property
    def k(self) -> int:
        return len(self.p)

    def as_array(self) -> np.ndarray:
        return np.array(self.p, dtype=float)


@dataclass(frozen=True)
class RandomPolytope:
    z0: float
    z: Tuple[float, ...]

    def __post_init__(self) -> None:
        if not 0.0 <= self.z0 <= 1.0:
            raise InvalidConfig(f"Polytope width {self.z0} is outside [0, 1]")
        if any(value < 0.0 for value in self.z):
            raise InvalidConfig("Polytope location has a negative coordinate")
        total = math.fsum(self.z) + self.z0
        if abs(total - 1.0) > CONSTRUCTION_TOLERANCE:
            raise InvalidConfig(f"Polytope coordinates sum to {total}, not 1")

    @property
    def k(self) -> int:
        return len(self.z)


class Decision(Enum):
    REJECT = "Reject"
    ACCEPT = "Accept"
    UNKNOWN = "Unknown"

    @property
    def friendly_name(self) -> str:
        if self == Decision.ACCEPT:
            return "Accept (fail-to-reject with confidence)"
        return self.value


class Anchor(Enum):
    NULL = "null"
    OBSERVED = "observed"


@dataclass(frozen=True)
class TailPair(DataClassDictMixin):
    q_lower_env: float
    q_upper_env: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.q_lower_env <= self.q_upper_env <= 1.0:
            raise InvalidTailPair(
                f"Expected 0 <= {self.q_lower_env} <= {self.q_upper_env} <= 1"
            )


@dataclass(frozen=True)
class TestConfig(DataClassDictMixin):
    seed: int
    alpha: float = 0.05
    replicates: int = 1000
    weaken_alpha: float = 0.0
    estimator: EstimatorMode = EstimatorMode.CENTROID
    statistic: TestStatisticSpec = field(default_factory=TestStatisticSpec)
    anchor: Anchor = Anchor.NULL

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise InvalidConfig(f"alpha must be in (0, 1), got {self.alpha}")
        if self.replicates < 1:
            raise InvalidConfig(f"replicates must be >= 1, got {self.replicates}")
        if not self.weaken_alpha >= 0.0:
            raise InvalidConfig(f"weaken must be >= 0, got {self.weaken_alpha}")
        if not 0 <= self.seed <= MAX_SEED:
            raise InvalidConfig(f"seed must be a 64-bit unsigned int, got {self.seed}")


@dataclass(frozen=True)
class FrequentistReport(DataClassDictMixin):
    p_value: float
    t_obs: float
    resamples: int


@dataclass(frozen=True)
class Diagnostics(DataClassDictMixin):
    q_mean_env: float
    mean_width: float


@dataclass(frozen=True)
class DecisionReport:
    data: CountData
    null: NullModel
    config: TestConfig
    t_obs: float
    point_estimate: SimplexPoint
    tails: TailPair
    decision: Decision
    diagnostics: Diagnostics
    freq: Optional[FrequentistReport] = None

    @property
    def belief(self) -> float:
        return 1.0 - self.tails.q_upper_env

    @property
    def plausibility(self) -> float:
        return 1.0 - self.tails.q_lower_env


def validate_counts(raw: Sequence[int]) -> CountData:
    if len(raw) < 2:
        raise EmptyCounts(f"Expected at least two counts, got {len(raw)}")
    counts = []
    for value in raw:
        if int(value) != value:
            raise InvalidConfig(f"Counts must be integers, got {value}")
        counts.append(int(value))
    return CountData(counts=tuple(counts), n=sum(counts))


def check_dimensions(*sizes: int) -> None:
    if len(set(sizes)) != 1:
        raise DimensionMismatch(f"Dimension mismatch: {list(sizes)}")


def chi_squared_stat(p_hat: SimplexPoint, null: NullModel, n: int) -> float:
    return statistic_value(TestStatisticSpec(), p_hat, null, n)


def statistic_value(
    spec: TestStatisticSpec, p_hat: SimplexPoint, null: NullModel, n: int
) -> float:
    check_dimensions(p_hat.k, null.k)
    return float(spec.statistic().evaluate(p_hat.as_array(), null.as_array(), n))


def point_estimate(data: CountData, mode: EstimatorMode) -> SimplexPoint:
    return SimplexPoint(p=tuple(float(p) for p in estimate(data.as_array(), mode)))
