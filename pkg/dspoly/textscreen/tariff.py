"""
Tariff-style cause scoring.

For cause i and word j, p_ij is the fraction of cause-i documents using the
word. The tariff is (p_ij - median_i p_ij) / IQR_i p_ij, with quartiles by
inclusive linear interpolation (``numpy.percentile``'s default). A word whose
usage fractions have zero spread gets all-zero tariffs. A document scores
each cause by summing the tariffs of the selected words it uses, and the
highest score wins, ties going to the lowest cause index.
"""
import io
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
import pandas
from mashumaro import DataClassDictMixin

from dspoly.core.exceptions import CorpusError, EmptyWordSet, InvalidConfig
from dspoly.logging import logger
from dspoly.sampling import Channel, generator_for
from dspoly.textscreen import WordCauseTable, label_indices, usage_matrix
from dspoly.textscreen.screening import ScreenResult, SelectionPolicy, select_words
from dspoly.utils import write_output


ACCURACY_COLUMNS: List[str] = ["policy", "words", "accuracy"]


@dataclass(frozen=True, eq=False)
class TariffModel:
    causes: Tuple[str, ...]
    words: Tuple[str, ...]
    # causes x words
    tariffs: np.ndarray

    @classmethod
    def constant(cls, causes: Sequence[str]) -> "TariffModel":
        return cls(
            causes=tuple(causes), words=(), tariffs=np.zeros((len(causes), 0))
        )


@dataclass(frozen=True)
class AccuracyRow(DataClassDictMixin):
    policy: str
    words: int
    accuracy: float


def fit_tariffs(
    counts: np.ndarray,
    deaths: np.ndarray,
    causes: Sequence[str],
    words: Sequence[str],
) -> TariffModel:
    """Fits tariffs from causes x words usage counts and per-cause deaths."""
    fractions = np.divide(
        counts,
        deaths[:, np.newaxis],
        out=np.zeros(counts.shape, dtype=float),
        where=deaths[:, np.newaxis] > 0,
    )
    median = np.median(fractions, axis=0)
    q1, q3 = np.percentile(fractions, [25.0, 75.0], axis=0)
    spread = q3 - q1
    tariffs = np.divide(
        fractions - median,
        spread,
        out=np.zeros(fractions.shape, dtype=float),
        where=spread > 0.0,
    )
    return TariffModel(causes=tuple(causes), words=tuple(words), tariffs=tariffs)


def tariff_fit(table: WordCauseTable, words: Sequence[str]) -> TariffModel:
    if not words:
        raise EmptyWordSet("Cannot fit tariffs without words")
    index = table.word_index()
    missing = [word for word in words if word not in index]
    if missing:
        raise InvalidConfig(f"Words not in the table: {', '.join(missing[:5])}")
    columns = [index[word] for word in words]
    return fit_tariffs(
        table.counts[columns].T,
        np.array(table.deaths_per_cause),
        table.causes,
        words,
    )


def cause_scores(
    model: TariffModel, token_sets: Sequence[FrozenSet[str]]
) -> np.ndarray:
    """Documents x causes summed tariffs."""
    return usage_matrix(token_sets, model.words).astype(float) @ model.tariffs.T


def tariff_predict(model: TariffModel, tokens: FrozenSet[str]) -> str:
    scores = cause_scores(model, [tokens])[0]
    # argmax keeps the first maximum
    return model.causes[int(np.argmax(scores))]


def _predict_indices(
    model: TariffModel, token_sets: Sequence[FrozenSet[str]]
) -> np.ndarray:
    return np.argmax(cause_scores(model, token_sets), axis=1)


def evaluate_accuracy(
    model: TariffModel,
    token_sets: Sequence[FrozenSet[str]],
    labels: Sequence[str],
) -> float:
    if len(token_sets) != len(labels):
        raise CorpusError("Every document needs exactly one cause label")
    if not labels:
        raise CorpusError("No documents to classify")
    truth = label_indices(labels, model.causes)
    return float(np.mean(_predict_indices(model, token_sets) == truth))


def cross_validated_accuracy(
    table: WordCauseTable,
    token_sets: Sequence[FrozenSet[str]],
    labels: Sequence[str],
    words: Sequence[str],
    folds: int,
    seed: int,
) -> float:
    """Refits on all but one fold and predicts the held-out fold, in turn."""
    documents = len(token_sets)
    if folds < 2 or folds > documents:
        raise InvalidConfig(f"folds must be in [2, {documents}], got {folds}")
    truth = label_indices(labels, table.causes)
    usage = usage_matrix(token_sets, words).astype(np.int64)
    membership = np.zeros((documents, len(table.causes)), dtype=np.int64)
    membership[np.arange(documents), truth] = 1

    order = generator_for(seed, Channel.FOLDS).permutation(documents)
    predictions = np.empty(documents, dtype=int)
    for fold in np.array_split(order, folds):
        training = np.ones(documents, dtype=bool)
        training[fold] = False
        model = fit_tariffs(
            membership[training].T @ usage[training],
            membership[training].sum(axis=0),
            table.causes,
            words,
        )
        predictions[fold] = _predict_indices(model, [token_sets[i] for i in fold])
    return float(np.mean(predictions == truth))


def accuracy_report(
    table: WordCauseTable,
    token_sets: Sequence[FrozenSet[str]],
    labels: Sequence[str],
    results: Sequence[ScreenResult],
    policies: Sequence[SelectionPolicy],
    folds: int = 0,
    seed: int = 0,
    holdout: Optional[Tuple[Sequence[FrozenSet[str]], Sequence[str]]] = None,
) -> List[AccuracyRow]:
    """
    Accuracy of the tariff classifier for each word selection policy.

    With ``folds`` = 0 the training documents are classified by tariffs fitted
    on themselves. ``holdout`` replaces them with a separate labeled set.
    """
    rows = []
    for policy in policies:
        words = select_words(results, policy)
        model = (
            tariff_fit(table, words) if words else TariffModel.constant(table.causes)
        )
        if holdout is not None:
            accuracy = evaluate_accuracy(model, *holdout)
        elif folds:
            accuracy = cross_validated_accuracy(
                table, token_sets, labels, words, folds, seed
            )
        else:
            accuracy = evaluate_accuracy(model, token_sets, labels)
        logger.info(f"{policy.label}: {len(words)} words, accuracy {accuracy:.6f}")
        rows.append(
            AccuracyRow(policy=policy.label, words=len(words), accuracy=accuracy)
        )
    return rows


def accuracy_csv(rows: Sequence[AccuracyRow], path: Optional[str] = None) -> str:
    buffer = io.StringIO()
    pandas.DataFrame(
        [[row.policy, row.words, row.accuracy] for row in rows],
        columns=ACCURACY_COLUMNS,
    ).to_csv(buffer, index=False, float_format="%.6f", lineterminator="\n")
    contents = buffer.getvalue()
    if path is not None:
        write_output(path, contents)
    return contents
