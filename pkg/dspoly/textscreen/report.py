from dataclasses import dataclass
from typing import List, Optional

from mashumaro import DataClassDictMixin
from mashumaro.mixins.json import DataClassJSONMixin

from dspoly.core import TestConfig
from dspoly.textscreen.screening import ScreeningRow, ScreenResult
from dspoly.textscreen.tariff import AccuracyRow


@dataclass(frozen=True)
class CorpusSettings(DataClassDictMixin):
    """Resolved settings of a corpus run, defaults included."""

    corpus: str
    stopwords: Optional[str]
    stems: Optional[str]
    alpha: float
    replicates: int
    weaken_alpha: float
    estimator: str
    statistic: str
    anchor: str
    seed: int
    freq_resamples: int

    @classmethod
    def of(
        cls,
        config: TestConfig,
        freq_resamples: int,
        corpus: str,
        stopwords: Optional[str] = None,
        stems: Optional[str] = None,
    ) -> "CorpusSettings":
        return cls(
            corpus=corpus,
            stopwords=stopwords,
            stems=stems,
            alpha=config.alpha,
            replicates=config.replicates,
            weaken_alpha=config.weaken_alpha,
            estimator=config.estimator.value,
            statistic=config.statistic.kind,
            anchor=config.anchor.value,
            seed=config.seed,
            freq_resamples=freq_resamples,
        )


@dataclass(frozen=True)
class ScreeningDocument(DataClassJSONMixin):
    settings: CorpusSettings
    words: List[ScreeningRow]

    @classmethod
    def of(
        cls, settings: CorpusSettings, results: List[ScreenResult]
    ) -> "ScreeningDocument":
        return cls(settings=settings, words=[result.row() for result in results])


@dataclass(frozen=True)
class AccuracyDocument(DataClassJSONMixin):
    settings: CorpusSettings
    policies: List[str]
    min_count: int
    folds: int
    eval_corpus: Optional[str]
    rows: List[AccuracyRow]
