from typing import List, Tuple

from wasabi import msg, Printer

from dspoly.cli.core import (
    DsArgumentParser,
    Command,
    config_from_args,
    resolve_seed,
)
from dspoly.config import parse_counts, parse_null
from dspoly.core import Decision, DecisionReport
from dspoly.dstest import ds_test
from dspoly.dstest.report import ReportDocument
from dspoly.utils import json_encoder


render = Printer(no_print=True)


def _vector(values: Tuple[float, ...]) -> str:
    return ", ".join(f"{value:.4f}" for value in values)


# pyre-ignore[13]: counts is unitialized
class TestCommandArguments(DsArgumentParser):
    counts: str
    null: str = "uniform"
    with_freq: bool = False


class TestCommand(Command[TestCommandArguments]):
    TRIGGER: str = "test"

    def _render_decision(self, decision: Decision) -> str:
        if decision == Decision.REJECT:
            return render.fail(decision.friendly_name)
        if decision == Decision.ACCEPT:
            return render.good(decision.friendly_name)
        return render.warn(decision.friendly_name)

    def _summary(self, report: DecisionReport) -> List[Tuple[str, str]]:
        config = report.config
        rows = [
            ("Counts", ", ".join(str(count) for count in report.data.counts)),
            ("Null", _vector(report.null.p0)),
            ("Estimate", _vector(report.point_estimate.p)),
            ("Estimator", config.estimator.value),
            ("Statistic", config.statistic.kind),
            ("Anchor", config.anchor.value),
            ("Alpha", f"{config.alpha:g}"),
            ("Replicates", str(config.replicates)),
            ("Weakening", f"{config.weaken_alpha:g}"),
            ("Seed", str(config.seed)),
            ("Observed statistic", f"{report.t_obs:.4f}"),
            ("Lower tail", f"{report.tails.q_lower_env:.4f}"),
            ("Upper tail", f"{report.tails.q_upper_env:.4f}"),
            ("Belief", f"{report.belief:.4f}"),
            ("Plausibility", f"{report.plausibility:.4f}"),
            ("Mean tail", f"{report.diagnostics.q_mean_env:.4f}"),
            ("Mean width", f"{report.diagnostics.mean_width:.4f}"),
        ]
        if report.freq is not None:
            rows.append(("Frequentist p", f"{report.freq.p_value:.4f}"))
        rows.append(("Decision", self._render_decision(report.decision)))
        return rows

    def main(self, args: TestCommandArguments) -> int:
        data = parse_counts(args.counts)
        null = parse_null(args.null, data.k)
        config = config_from_args(args, resolve_seed(args.seed, args.format))
        report = ds_test(
            data,
            null,
            config,
            workers=self.workers,
            freq_resamples=args.freq_resamples if args.with_freq else None,
        )

        document = ReportDocument.from_report(report)
        if args.format == "json":
            print(document.to_json(encoder=json_encoder))
        elif args.format == "csv":
            print(document.to_csv(), end="")
        else:
            msg.divider("Dempster-Shafer test")
            msg.table(self._summary(report))
        return 0
