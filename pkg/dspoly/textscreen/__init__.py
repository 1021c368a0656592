import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from mashumaro import DataClassDictMixin

from dspoly.core import NullModel
from dspoly.core.exceptions import CorpusError


_LETTER_RUNS = re.compile(r"[^\W\d_]+")
MIN_TOKEN_LENGTH: int = 2


@dataclass(frozen=True)
class Document(DataClassDictMixin):
    id: str
    cause: str
    text: str


@dataclass(frozen=True)
class TokenRules:
    stopwords: FrozenSet[str] = frozenset()
    # prefix -> replacement, longest matching prefix wins
    stems: Mapping[str, str] = field(default_factory=dict)

    def normalize(self, token: str) -> str:
        for prefix in sorted(self.stems, key=len, reverse=True):
            if token.startswith(prefix):
                return self.stems[prefix]
        return token


def tokenize(text: str, rules: TokenRules = TokenRules()) -> FrozenSet[str]:
    tokens = set()
    for token in _LETTER_RUNS.findall(text.lower()):
        if len(token) < MIN_TOKEN_LENGTH or token in rules.stopwords:
            continue
        tokens.add(rules.normalize(token))
    return frozenset(tokens)


def tokenize_corpus(
    corpus: Sequence[Document], rules: TokenRules = TokenRules()
) -> List[FrozenSet[str]]:
    return [tokenize(document.text, rules) for document in corpus]


@dataclass(frozen=True, eq=False)
class WordCauseTable:
    """Documents of each cause that use each word, with causes ordered by deaths."""

    words: Tuple[str, ...]
    causes: Tuple[str, ...]
    # words x causes
    counts: np.ndarray
    deaths_per_cause: Tuple[int, ...]
    prevalence: NullModel

    @property
    def usage(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def word_index(self) -> Dict[str, int]:
        return {word: index for index, word in enumerate(self.words)}

    def cause_index(self) -> Dict[str, int]:
        return {cause: index for index, cause in enumerate(self.causes)}

    def word_counts(self, word: str) -> Tuple[int, ...]:
        row = self.counts[self.word_index()[word]]
        return tuple(int(count) for count in row)


def order_causes(labels: Sequence[str]) -> Tuple[str, ...]:
    deaths = Counter(labels)
    return tuple(sorted(deaths, key=lambda cause: (-deaths[cause], cause)))


def usage_matrix(
    token_sets: Sequence[FrozenSet[str]], words: Sequence[str]
) -> np.ndarray:
    """Documents x words presence indicators."""
    index = {word: position for position, word in enumerate(words)}
    usage = np.zeros((len(token_sets), len(words)), dtype=bool)
    for row, tokens in enumerate(token_sets):
        columns = [index[token] for token in tokens if token in index]
        usage[row, columns] = True
    return usage


def label_indices(labels: Sequence[str], causes: Sequence[str]) -> np.ndarray:
    index = {cause: position for position, cause in enumerate(causes)}
    unknown = sorted({label for label in labels if label not in index})
    if unknown:
        raise CorpusError(f"Unknown cause labels: {', '.join(unknown)}")
    return np.array([index[label] for label in labels], dtype=int)


def build_table(
    corpus: Sequence[Document],
    rules: TokenRules = TokenRules(),
    token_sets: Optional[Sequence[FrozenSet[str]]] = None,
) -> WordCauseTable:
    if not corpus:
        raise CorpusError("The corpus has no documents")
    labels = [document.cause for document in corpus]
    causes = order_causes(labels)
    if len(causes) < 2:
        raise CorpusError(f"At least two causes are required, got {list(causes)}")
    if token_sets is None:
        token_sets = tokenize_corpus(corpus, rules)
    words = tuple(sorted(set().union(*token_sets)))

    usage = usage_matrix(token_sets, words)
    membership = np.zeros((len(corpus), len(causes)), dtype=np.int64)
    membership[np.arange(len(corpus)), label_indices(labels, causes)] = 1
    deaths = membership.sum(axis=0)
    total = len(corpus)
    return WordCauseTable(
        words=words,
        causes=causes,
        counts=usage.astype(np.int64).T @ membership,
        deaths_per_cause=tuple(int(count) for count in deaths),
        prevalence=NullModel(p0=tuple(float(count) / total for count in deaths)),
    )
