from collections import Counter
from dataclasses import dataclass
from typing import FrozenSet, List

from wasabi import msg

from dspoly.cli.core import (
    Command,
    CorpusArgumentParser,
    config_from_args,
    resolve_seed,
    token_rules,
)
from dspoly.core import Decision, TestConfig
from dspoly.textscreen import Document, WordCauseTable, build_table, tokenize_corpus
from dspoly.textscreen.corpus import load_corpus
from dspoly.textscreen.report import CorpusSettings, ScreeningDocument
from dspoly.textscreen.screening import ScreenResult, screen_corpus, screening_csv
from dspoly.utils import json_encoder


@dataclass(frozen=True)
class ScreenedCorpus:
    documents: List[Document]
    token_sets: List[FrozenSet[str]]
    table: WordCauseTable
    config: TestConfig
    settings: CorpusSettings
    results: List[ScreenResult]


def screen_from_args(args: CorpusArgumentParser, workers: int) -> ScreenedCorpus:
    config = config_from_args(args, resolve_seed(args.seed, args.format))
    documents = load_corpus(args.corpus)
    token_sets = tokenize_corpus(documents, token_rules(args))
    table = build_table(documents, token_sets=token_sets)
    results = screen_corpus(table, config, args.freq_resamples, workers)
    return ScreenedCorpus(
        documents=documents,
        token_sets=token_sets,
        table=table,
        config=config,
        settings=CorpusSettings.of(
            config, args.freq_resamples, args.corpus, args.stopwords, args.stems
        ),
        results=results,
    )


class ScreenArguments(CorpusArgumentParser):
    pass


class ScreenCommand(Command[ScreenArguments]):
    TRIGGER: str = "screen"

    def main(self, args: ScreenArguments) -> int:
        screened = screen_from_args(args, self.workers)
        contents = screening_csv(screened.results, args.out)

        if args.format == "json":
            document = ScreeningDocument.of(screened.settings, screened.results)
            print(document.to_json(encoder=json_encoder))
        elif args.format == "csv":
            if args.out is None:
                print(contents, end="")
        else:
            decisions = Counter(result.ds.decision for result in screened.results)
            freq_rejects = sum(
                1
                for result in screened.results
                if result.freq.p_value <= screened.config.alpha
            )
            msg.divider(f"Screened {len(screened.results)} words")
            msg.table(
                [
                    ("Documents", str(len(screened.documents))),
                    ("Causes", ", ".join(screened.table.causes)),
                    ("Seed", str(screened.config.seed)),
                    *[
                        (f"DS {decision.value}", str(decisions[decision]))
                        for decision in Decision
                    ],
                    ("Frequentist rejections", str(freq_rejects)),
                ]
            )
            if args.out is not None:
                msg.good(f"Wrote {args.out}")
        return 0
