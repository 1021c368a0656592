import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import matplotlib
import pandas
from mashumaro.mixins.json import DataClassJSONMixin
from matplotlib.figure import Figure

from dspoly.core.exceptions import InvalidConfig
from dspoly.logging import logger
from dspoly.simlab import Scenario, StudyRow


CSV_COLUMNS: List[str] = [
    "study",
    "n",
    "weaken_alpha",
    "ds_reject",
    "ds_accept",
    "ds_unknown",
    "freq_reject",
    "certain_correct",
    "total_correct",
    "datasets",
    "replicates",
    "seed",
]
CSV_FLOAT_FORMAT = "%.6f"
SVG_HASH_SALT = "dspoly"
_SERIES = {
    "reject": "fraction_reject",
    "accept": "fraction_accept",
    "unknown": "fraction_unknown",
}


@dataclass(frozen=True)
class StudyDocument(DataClassJSONMixin):
    study: str
    scenario: Scenario
    rows: List[StudyRow]


def _csv_record(row: StudyRow) -> Dict[str, object]:
    return {
        "study": row.study,
        "n": row.n,
        "weaken_alpha": row.weaken_alpha,
        "ds_reject": row.fraction_reject,
        "ds_accept": row.fraction_accept,
        "ds_unknown": row.fraction_unknown,
        "freq_reject": row.freq_fraction_reject,
        "certain_correct": row.certain_correct,
        "total_correct": row.total_correct,
        "datasets": row.datasets,
        "replicates": row.replicates,
        "seed": row.seed,
    }


def study_frame(rows: Sequence[StudyRow]) -> pandas.DataFrame:
    return pandas.DataFrame([_csv_record(row) for row in rows], columns=CSV_COLUMNS)


def _x_axis(rows: Sequence[StudyRow]) -> str:
    sizes = {row.n for row in rows}
    weakenings = {row.weaken_alpha for row in rows}
    if len(sizes) == 1 and len(weakenings) > 1:
        return "weaken_alpha"
    return "n"


def _plot(rows: Sequence[StudyRow], path: str) -> None:
    x_key = _x_axis(rows)
    figure = Figure(figsize=(6.4, 4.0))
    axes = figure.subplots()
    studies: List[str] = []
    for row in rows:
        if row.study not in studies:
            studies.append(row.study)
    for study in studies:
        selected = [row for row in rows if row.study == study]
        xs = [getattr(row, x_key) for row in selected]
        for label, attribute in _SERIES.items():
            name = label if len(studies) == 1 else f"{study}-{label}"
            axes.plot(
                xs,
                [getattr(row, attribute) for row in selected],
                marker="o",
                label=name,
                gid=f"series-{name}",
            )
    axes.set_xlabel("weakening" if x_key == "weaken_alpha" else "sample size")
    axes.set_ylabel("fraction of datasets")
    axes.set_ylim(-0.02, 1.02)
    axes.legend()
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        figure.savefig(path, format="svg", metadata={"Date": None})


def emit_study(
    rows: Sequence[StudyRow], path: str, svg: bool = False
) -> List[str]:
    """
    Writes the study table as CSV and, optionally, a plot next to it.

    The plot lands at ``path`` with an ``.svg`` suffix. Returns the written paths.
    """
    if not rows:
        raise InvalidConfig("No study rows to write")
    directory = os.path.dirname(path)
    svg_path: Optional[str] = os.path.splitext(path)[0] + ".svg" if svg else None
    try:
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fd:
            study_frame(rows).to_csv(
                fd,
                index=False,
                float_format=CSV_FLOAT_FORMAT,
                lineterminator="\n",
            )
        if svg_path is not None:
            _plot(rows, svg_path)
    except OSError as ex:
        raise InvalidConfig(f"Cannot write study output to {path}: {ex}") from ex
    written = [path] if svg_path is None else [path, svg_path]
    logger.info(f"wrote {', '.join(written)}")
    return written
