import io
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import partial
from typing import Dict, List, Optional, Sequence, Type

import pandas
from mashumaro import DataClassDictMixin
from pyre_extensions import none_throws

from dspoly.core import (
    CountData,
    Decision,
    DecisionReport,
    FrequentistReport,
    TestConfig,
)
from dspoly.core.exceptions import InvalidConfig, UnknownPolicy
from dspoly.dstest import decide, ds_test
from dspoly.logging import logger
from dspoly.textscreen import WordCauseTable
from dspoly.utils import parallel_map, write_output


DEFAULT_MIN_COUNT: int = 50
SCREENING_COLUMNS: List[str] = [
    "word",
    "count",
    "q_lower_env",
    "q_upper_env",
    "freq_p",
    "ds_decision",
]
ALL_POLICIES: Dict[str, Type["SelectionPolicy"]] = {}


@dataclass(frozen=True)
class ScreeningRow(DataClassDictMixin):
    word: str
    count: int
    q_lower_env: float
    q_upper_env: float
    freq_p: float
    ds_decision: str


@dataclass(frozen=True)
class ScreenResult:
    word: str
    usage: int
    ds: DecisionReport
    freq: FrequentistReport

    def __post_init__(self) -> None:
        if self.usage < 1:
            raise InvalidConfig(f"Word {self.word} is never used")

    def row(self) -> ScreeningRow:
        return ScreeningRow(
            word=self.word,
            count=self.usage,
            q_lower_env=self.ds.tails.q_lower_env,
            q_upper_env=self.ds.tails.q_upper_env,
            freq_p=self.freq.p_value,
            ds_decision=self.ds.decision.value,
        )


def _screen_word(
    word_index: int,
    table: WordCauseTable,
    config: TestConfig,
    freq_resamples: int,
) -> ScreenResult:
    counts = table.counts[word_index]
    data = CountData(counts=tuple(int(c) for c in counts), n=int(counts.sum()))
    report = ds_test(
        data,
        table.prevalence,
        config,
        prefix=(word_index,),
        freq_resamples=freq_resamples,
    )
    return ScreenResult(
        word=table.words[word_index],
        usage=data.n,
        ds=report,
        freq=none_throws(report.freq),
    )


def screen_corpus(
    table: WordCauseTable,
    config: TestConfig,
    freq_resamples: int = 1000,
    workers: int = 1,
) -> List[ScreenResult]:
    """Tests every word's usage across causes against the cause prevalence."""
    logger.info(
        f"screening {len(table.words)} words over {len(table.causes)} causes"
    )
    return parallel_map(
        partial(
            _screen_word, table=table, config=config, freq_resamples=freq_resamples
        ),
        range(len(table.words)),
        workers,
    )


class SelectionPolicy(ABC):
    NAME: str

    def __init_subclass__(cls) -> None:
        ALL_POLICIES[cls.NAME] = cls

    def __init__(self, alpha: float, min_count: int = DEFAULT_MIN_COUNT) -> None:
        self.alpha = alpha
        self.min_count = min_count

    @classmethod
    def create(
        cls, name: str, alpha: float, min_count: int = DEFAULT_MIN_COUNT
    ) -> "SelectionPolicy":
        if name not in ALL_POLICIES:
            raise UnknownPolicy(
                f"Unknown policy {name}, expected one of {', '.join(ALL_POLICIES)}"
            )
        # pyre-ignore[45]: Cannot instantiate abstract class SelectionPolicy
        return ALL_POLICIES[name](alpha, min_count)

    @property
    def label(self) -> str:
        return self.NAME

    def decision(self, result: ScreenResult) -> Decision:
        return decide(result.ds.tails, self.alpha)

    @abstractmethod
    def keeps(self, result: ScreenResult) -> bool:
        raise NotImplementedError


class AllWords(SelectionPolicy):
    NAME: str = "all"

    def keeps(self, result: ScreenResult) -> bool:
        return True


class MinCount(SelectionPolicy):
    NAME: str = "min_count"

    @property
    def label(self) -> str:
        return f"{self.NAME}({self.min_count})"

    def keeps(self, result: ScreenResult) -> bool:
        return result.usage >= self.min_count


class FreqReject(SelectionPolicy):
    NAME: str = "freq_reject"

    def keeps(self, result: ScreenResult) -> bool:
        return result.freq.p_value <= self.alpha


class DsReject(SelectionPolicy):
    NAME: str = "ds_reject"

    def keeps(self, result: ScreenResult) -> bool:
        return self.decision(result) == Decision.REJECT


class DsRejectOrUnknown(SelectionPolicy):
    NAME: str = "ds_reject_or_unknown"

    def keeps(self, result: ScreenResult) -> bool:
        return self.decision(result) != Decision.ACCEPT


def select_words(
    results: Sequence[ScreenResult], policy: SelectionPolicy
) -> List[str]:
    return [result.word for result in results if policy.keeps(result)]


def screening_frame(results: Sequence[ScreenResult]) -> pandas.DataFrame:
    return pandas.DataFrame(
        [result.row().to_dict() for result in results], columns=SCREENING_COLUMNS
    )


def screening_csv(
    results: Sequence[ScreenResult], path: Optional[str] = None
) -> str:
    buffer = io.StringIO()
    screening_frame(results).to_csv(
        buffer, index=False, float_format="%.6f", lineterminator="\n"
    )
    contents = buffer.getvalue()
    if path is not None:
        write_output(path, contents)
    return contents
