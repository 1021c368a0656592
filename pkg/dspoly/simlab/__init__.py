from dataclasses import dataclass, replace
from enum import Enum
from functools import partial
from typing import List, Optional, Sequence, Tuple

from mashumaro import DataClassDictMixin

from dspoly.core import (
    ARITHMETIC_TOLERANCE,
    CountData,
    Decision,
    NullModel,
    SimplexPoint,
    TestConfig,
)
from dspoly.core.exceptions import ScenarioError
from dspoly.dstest import ds_test
from dspoly.dstest.frequentist import freq_resampled_test
from dspoly.logging import logger
from dspoly.sampling import Channel, generator_for
from dspoly.utils import parallel_map


DEFAULT_DATASETS_PER_SIZE: int = 500
DEFAULT_WEAKEN_GRID: Tuple[float, ...] = (0.0, 2.0, 5.0, 10.0, 20.0)
DEFAULT_FREQ_RESAMPLES: int = 1000


def _matches_null(truth: SimplexPoint, null: NullModel) -> bool:
    return all(
        abs(p - p0) <= ARITHMETIC_TOLERANCE for p, p0 in zip(truth.p, null.p0)
    )


class StudyKind(Enum):
    CERTAINTY = "certainty"
    SAMPLE_SIZE = "samplesize"
    WEAKENING = "weakening"


@dataclass(frozen=True)
class Scenario(DataClassDictMixin):
    truth: SimplexPoint
    null: NullModel
    sample_sizes: Tuple[int, ...]
    config: TestConfig
    datasets_per_size: int = DEFAULT_DATASETS_PER_SIZE
    weaken_grid: Tuple[float, ...] = DEFAULT_WEAKEN_GRID
    freq_resamples: int = DEFAULT_FREQ_RESAMPLES
    name: str = "scenario"

    def __post_init__(self) -> None:
        if not self.sample_sizes:
            raise ScenarioError("sample_sizes must not be empty")
        if any(n < 1 for n in self.sample_sizes):
            raise ScenarioError("sample sizes must be positive")
        if not self.weaken_grid:
            raise ScenarioError("weaken_grid must not be empty")
        if any(not alpha >= 0.0 for alpha in self.weaken_grid):
            raise ScenarioError("weakening values must be >= 0")
        if self.datasets_per_size < 1:
            raise ScenarioError("datasets_per_size must be positive")
        if self.freq_resamples < 1:
            raise ScenarioError("freq_resamples must be positive")
        if self.truth.k != self.null.k:
            raise ScenarioError(
                f"truth has {self.truth.k} cells but the null has {self.null.k}"
            )

    @property
    def truth_is_null(self) -> bool:
        return _matches_null(self.truth, self.null)


@dataclass(frozen=True)
class StudyRow(DataClassDictMixin):
    study: str
    n: int
    weaken_alpha: float
    fraction_reject: float
    fraction_accept: float
    fraction_unknown: float
    freq_fraction_reject: float
    certain_correct: Optional[float]
    total_correct: Optional[float]
    datasets: int
    replicates: int
    seed: int


@dataclass(frozen=True)
class _Outcome:
    decision: Decision
    freq_reject: bool


def _simulate_dataset(
    dataset_index: int,
    size_index: int,
    n: int,
    truth: SimplexPoint,
    scenario: Scenario,
    config: TestConfig,
) -> _Outcome:
    seed = config.seed
    rng = generator_for(seed, size_index, dataset_index, Channel.DATA)
    counts = rng.multinomial(n, truth.as_array())
    data = CountData(counts=tuple(int(count) for count in counts), n=n)
    prefix = (size_index, dataset_index)
    report = ds_test(data, scenario.null, config, prefix=prefix)
    freq = freq_resampled_test(
        data,
        scenario.null,
        scenario.freq_resamples,
        seed,
        estimator=config.estimator,
        spec=config.statistic,
        prefix=prefix,
    )
    return _Outcome(
        decision=report.decision, freq_reject=freq.p_value <= config.alpha
    )


def _summarize(
    study: str,
    n: int,
    config: TestConfig,
    outcomes: Sequence[_Outcome],
    truth_is_null: bool,
) -> StudyRow:
    total = len(outcomes)
    rejects = sum(1 for o in outcomes if o.decision == Decision.REJECT)
    accepts = sum(1 for o in outcomes if o.decision == Decision.ACCEPT)
    unknowns = total - rejects - accepts
    correct = accepts if truth_is_null else rejects
    certain = rejects + accepts
    return StudyRow(
        study=study,
        n=n,
        weaken_alpha=config.weaken_alpha,
        fraction_reject=rejects / total,
        fraction_accept=accepts / total,
        fraction_unknown=unknowns / total,
        freq_fraction_reject=sum(1 for o in outcomes if o.freq_reject) / total,
        certain_correct=correct / certain if certain > 0 else None,
        total_correct=correct / total,
        datasets=total,
        replicates=config.replicates,
        seed=config.seed,
    )


def _run_size(
    study: str,
    size_index: int,
    n: int,
    truth: SimplexPoint,
    scenario: Scenario,
    config: TestConfig,
    workers: int,
) -> StudyRow:
    logger.info(
        f"{study}: n={n}, weaken {config.weaken_alpha}, "
        f"{scenario.datasets_per_size} datasets"
    )
    outcomes = parallel_map(
        partial(
            _simulate_dataset,
            size_index=size_index,
            n=n,
            truth=truth,
            scenario=scenario,
            config=config,
        ),
        range(scenario.datasets_per_size),
        workers,
    )
    return _summarize(
        study, n, config, outcomes, _matches_null(truth, scenario.null)
    )


def run_certainty_study(scenario: Scenario, workers: int = 1) -> List[StudyRow]:
    return [
        _run_size(
            StudyKind.CERTAINTY.value,
            size_index,
            n,
            scenario.truth,
            scenario,
            scenario.config,
            workers,
        )
        for size_index, n in enumerate(scenario.sample_sizes)
    ]


def run_sample_size_study(scenario: Scenario, workers: int = 1) -> List[StudyRow]:
    null_truth = SimplexPoint(p=scenario.null.p0)
    variants = [
        (f"{StudyKind.SAMPLE_SIZE.value}-null", null_truth),
        (f"{StudyKind.SAMPLE_SIZE.value}-alt", scenario.truth),
    ]
    return [
        _run_size(study, size_index, n, truth, scenario, scenario.config, workers)
        for study, truth in variants
        for size_index, n in enumerate(scenario.sample_sizes)
    ]


def run_weakening_study(scenario: Scenario, workers: int = 1) -> List[StudyRow]:
    # datasets and polytope streams do not depend on the weakening, so every
    # grid value sees the same draws
    return [
        _run_size(
            StudyKind.WEAKENING.value,
            size_index,
            n,
            scenario.truth,
            scenario,
            replace(scenario.config, weaken_alpha=weaken_alpha),
            workers,
        )
        for size_index, n in enumerate(scenario.sample_sizes)
        for weaken_alpha in scenario.weaken_grid
    ]


def run_study(kind: StudyKind, scenario: Scenario, workers: int = 1) -> List[StudyRow]:
    if kind == StudyKind.CERTAINTY:
        return run_certainty_study(scenario, workers)
    if kind == StudyKind.SAMPLE_SIZE:
        return run_sample_size_study(scenario, workers)
    if kind == StudyKind.WEAKENING:
        return run_weakening_study(scenario, workers)
    raise NotImplementedError
