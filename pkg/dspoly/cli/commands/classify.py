from typing import List, Optional

from wasabi import msg

from dspoly.cli.commands.screen import screen_from_args
from dspoly.cli.core import Command, CorpusArgumentParser, token_rules
from dspoly.textscreen import tokenize_corpus
from dspoly.textscreen.corpus import load_corpus
from dspoly.textscreen.report import AccuracyDocument
from dspoly.textscreen.screening import DEFAULT_MIN_COUNT, SelectionPolicy
from dspoly.textscreen.tariff import accuracy_csv, accuracy_report
from dspoly.utils import json_encoder


class ClassifyArguments(CorpusArgumentParser):
    policy: str = "all"
    min_count: int = DEFAULT_MIN_COUNT
    folds: int = 0
    eval_corpus: Optional[str] = None


class ClassifyCommand(Command[ClassifyArguments]):
    TRIGGER: str = "classify"

    def _policy_names(self, args: ClassifyArguments) -> List[str]:
        return [name.strip() for name in args.policy.split(",") if name.strip()]

    def main(self, args: ClassifyArguments) -> int:
        names = self._policy_names(args)
        policies = [
            SelectionPolicy.create(name, args.alpha, args.min_count) for name in names
        ]
        screened = screen_from_args(args, self.workers)
        holdout = None
        if args.eval_corpus is not None:
            evaluation = load_corpus(args.eval_corpus)
            holdout = (
                tokenize_corpus(evaluation, token_rules(args)),
                [document.cause for document in evaluation],
            )
        rows = accuracy_report(
            screened.table,
            screened.token_sets,
            [document.cause for document in screened.documents],
            screened.results,
            policies,
            folds=args.folds,
            seed=screened.config.seed,
            holdout=holdout,
        )
        contents = accuracy_csv(rows, args.out)

        if args.format == "json":
            document = AccuracyDocument(
                settings=screened.settings,
                policies=names,
                min_count=args.min_count,
                folds=args.folds,
                eval_corpus=args.eval_corpus,
                rows=rows,
            )
            print(document.to_json(encoder=json_encoder))
        elif args.format == "csv":
            if args.out is None:
                print(contents, end="")
        else:
            msg.divider(f"Tariff accuracy (seed {screened.config.seed})")
            msg.table(
                [(row.policy, str(row.words), f"{row.accuracy:.4f}") for row in rows],
                header=("Policy", "Words", "Accuracy"),
            )
            if args.out is not None:
                msg.good(f"Wrote {args.out}")
        return 0
