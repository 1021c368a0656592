import io
import os
from typing import Literal

from wasabi import msg

from dspoly.cli.core import BaseArgumentParser, Command
from dspoly.config import load_scenario
from dspoly.simlab import StudyKind, run_study
from dspoly.simlab.emit import (
    CSV_FLOAT_FORMAT,
    StudyDocument,
    emit_study,
    study_frame,
)
from dspoly.utils import json_encoder


TABLE_HEADER = ("Study", "n", "Weakening", "Reject", "Accept", "Unknown", "Freq")


# pyre-ignore[13]: study and config are unitialized
class SimulateArguments(BaseArgumentParser):
    study: Literal["certainty", "samplesize", "weakening"]
    config: str
    out: str = "."
    svg: bool = False


class SimulateCommand(Command[SimulateArguments]):
    TRIGGER: str = "simulate"

    def main(self, args: SimulateArguments) -> int:
        kind = StudyKind(args.study)
        scenario = load_scenario(args.config, default_name=kind.value)
        rows = run_study(kind, scenario, self.workers)
        written = emit_study(
            rows, os.path.join(args.out, f"{kind.value}.csv"), svg=args.svg
        )

        if args.format == "json":
            document = StudyDocument(study=kind.value, scenario=scenario, rows=rows)
            print(document.to_json(encoder=json_encoder))
        elif args.format == "csv":
            buffer = io.StringIO()
            study_frame(rows).to_csv(
                buffer, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
            )
            print(buffer.getvalue(), end="")
        else:
            msg.divider(f"{scenario.name}: {kind.value} study")
            msg.table(
                [
                    (
                        row.study,
                        row.n,
                        f"{row.weaken_alpha:g}",
                        f"{row.fraction_reject:.3f}",
                        f"{row.fraction_accept:.3f}",
                        f"{row.fraction_unknown:.3f}",
                        f"{row.freq_fraction_reject:.3f}",
                    )
                    for row in rows
                ],
                header=TABLE_HEADER,
            )
            for path in written:
                msg.good(f"Wrote {path}")
        return 0
