from dataclasses import dataclass
from string import ascii_lowercase
from typing import Dict, List, Tuple

import numpy as np

from dspoly.core.exceptions import InvalidConfig
from dspoly.sampling import Channel, generator_for
from dspoly.textscreen import Document


PLANTED_OWN_RATE: float = 0.8
PLANTED_OTHER_RATE: float = 0.02
NOISE_RATE_RANGE: Tuple[float, float] = (0.02, 0.3)


@dataclass(frozen=True)
class SyntheticCorpus:
    documents: List[Document]
    causes: Tuple[str, ...]
    # planted word -> the cause it signals
    planted: Dict[str, str]
    noise: Tuple[str, ...]


def _letters(index: int, width: int = 3) -> str:
    letters = []
    for _ in range(width):
        index, remainder = divmod(index, len(ascii_lowercase))
        letters.append(ascii_lowercase[remainder])
    return "".join(reversed(letters))


def synthetic_corpus(
    causes: int = 8,
    documents: int = 1000,
    planted: int = 20,
    noise: int = 200,
    seed: int = 0,
) -> SyntheticCorpus:
    """
    Labeled documents built from two kinds of words.

    Planted words are assigned to causes round-robin and appear in most
    documents of their cause and rarely elsewhere. Noise words appear at a
    fixed per-word rate regardless of cause, so their usage follows the cause
    prevalence. Cause weights decrease linearly with the cause index.
    """
    if causes < 2:
        raise InvalidConfig("A synthetic corpus needs at least two causes")
    if documents < causes:
        raise InvalidConfig("Need at least one document per cause")
    rng = generator_for(seed, Channel.DATA)
    labels = tuple(f"cause_{_letters(i, 2)}" for i in range(causes))
    weights = np.arange(causes, 0, -1, dtype=float)
    deaths = rng.multinomial(documents - causes, weights / weights.sum()) + 1
    cause_of = np.repeat(np.arange(causes), deaths)

    planted_words = [f"sig{_letters(i)}" for i in range(planted)]
    noise_words = [f"bg{_letters(i)}" for i in range(noise)]
    planted_cause = np.arange(planted) % causes
    planted_rates = np.where(
        planted_cause[np.newaxis, :] == cause_of[:, np.newaxis],
        PLANTED_OWN_RATE,
        PLANTED_OTHER_RATE,
    )
    noise_rates = rng.uniform(*NOISE_RATE_RANGE, size=noise)
    rates = np.hstack(
        [planted_rates, np.broadcast_to(noise_rates, (documents, noise))]
    )
    used = rng.random(rates.shape) < rates
    vocabulary = np.array(planted_words + noise_words)

    corpus = []
    for row in rng.permutation(documents):
        words = vocabulary[used[row]]
        corpus.append(
            Document(
                id=f"doc{len(corpus):05d}",
                cause=labels[cause_of[row]],
                text=" ".join(rng.permutation(words).tolist()),
            )
        )
    return SyntheticCorpus(
        documents=corpus,
        causes=labels,
        planted={
            word: labels[cause] for word, cause in zip(planted_words, planted_cause)
        },
        noise=tuple(noise_words),
    )
