from typing import List, Optional, Sequence

import pandas

from dspoly.core.exceptions import CorpusError
from dspoly.textscreen import Document, TokenRules


CORPUS_COLUMNS: List[str] = ["id", "cause", "text"]


def load_corpus(path: str) -> List[Document]:
    try:
        frame = pandas.read_csv(
            path, dtype=str, keep_default_na=False, encoding="utf-8"
        )
    except FileNotFoundError:
        raise CorpusError(f"Corpus file not found: {path}")
    except pandas.errors.EmptyDataError:
        raise CorpusError(f"Corpus file is empty: {path}")
    except (pandas.errors.ParserError, UnicodeDecodeError, OSError) as ex:
        raise CorpusError(f"Cannot parse corpus {path}: {ex}") from ex

    missing = [column for column in CORPUS_COLUMNS if column not in frame.columns]
    if missing:
        raise CorpusError(f"Corpus {path} is missing columns: {', '.join(missing)}")
    if frame.empty:
        raise CorpusError(f"Corpus {path} has no documents")
    if (frame["cause"].str.strip() == "").any():
        raise CorpusError(f"Corpus {path} has documents without a cause")

    return [
        Document(id=row.id, cause=row.cause.strip(), text=row.text)
        for row in frame[CORPUS_COLUMNS].itertuples(index=False)
    ]


def save_corpus(documents: Sequence[Document], path: str) -> None:
    frame = pandas.DataFrame(
        [document.to_dict() for document in documents], columns=CORPUS_COLUMNS
    )
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")


def _read_lines(path: str) -> List[str]:
    try:
        with open(path, "r", encoding="utf-8") as fd:
            return [line.strip() for line in fd if line.strip()]
    except OSError as ex:
        raise CorpusError(f"Cannot read {path}: {ex}") from ex


def load_token_rules(
    stopwords_path: Optional[str] = None, stems_path: Optional[str] = None
) -> TokenRules:
    """
    Reads a stopword list (one word per line) and a stem map (``prefix,stem``
    per line). Either file may be omitted.
    """
    stopwords = (
        frozenset(line.lower() for line in _read_lines(stopwords_path))
        if stopwords_path is not None
        else frozenset()
    )
    stems = {}
    if stems_path is not None:
        for line in _read_lines(stems_path):
            prefix, separator, stem = line.partition(",")
            if not separator or not prefix.strip() or not stem.strip():
                raise CorpusError(f"Expected 'prefix,stem' in {stems_path}: {line}")
            stems[prefix.strip().lower()] = stem.strip().lower()
    return TokenRules(stopwords=stopwords, stems=stems)
