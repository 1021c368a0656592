import io
from dataclasses import dataclass
from typing import List, Optional

import pandas
from mashumaro.mixins.json import DataClassJSONMixin

from dspoly.core import DecisionReport, Diagnostics, FrequentistReport


CSV_FLOAT_FORMAT = "%.6f"


@dataclass(frozen=True)
class ReportDocument(DataClassJSONMixin):
    counts: List[int]
    null: List[float]
    alpha: float
    replicates: int
    weaken_alpha: float
    estimator: str
    statistic: str
    anchor: str
    seed: int
    t_obs: float
    point_estimate: List[float]
    q_lower_env: float
    q_upper_env: float
    decision: str
    belief: float
    plausibility: float
    diagnostics: Diagnostics
    freq: Optional[FrequentistReport] = None

    @classmethod
    def from_report(cls, report: DecisionReport) -> "ReportDocument":
        config = report.config
        return cls(
            counts=list(report.data.counts),
            null=list(report.null.p0),
            alpha=config.alpha,
            replicates=config.replicates,
            weaken_alpha=config.weaken_alpha,
            estimator=config.estimator.value,
            statistic=config.statistic.kind,
            anchor=config.anchor.value,
            seed=config.seed,
            t_obs=report.t_obs,
            point_estimate=list(report.point_estimate.p),
            q_lower_env=report.tails.q_lower_env,
            q_upper_env=report.tails.q_upper_env,
            decision=report.decision.value,
            belief=report.belief,
            plausibility=report.plausibility,
            diagnostics=report.diagnostics,
            freq=report.freq,
        )

    def to_csv(self) -> str:
        row = {
            "counts": ";".join(str(count) for count in self.counts),
            "null": ";".join(f"{p:.6f}" for p in self.null),
            "alpha": self.alpha,
            "replicates": self.replicates,
            "weaken_alpha": self.weaken_alpha,
            "estimator": self.estimator,
            "statistic": self.statistic,
            "anchor": self.anchor,
            "seed": self.seed,
            "t_obs": self.t_obs,
            "q_lower_env": self.q_lower_env,
            "q_upper_env": self.q_upper_env,
            "decision": self.decision,
            "belief": self.belief,
            "plausibility": self.plausibility,
            "q_mean_env": self.diagnostics.q_mean_env,
            "freq_p": self.freq.p_value if self.freq is not None else None,
        }
        buffer = io.StringIO()
        pandas.DataFrame([row]).to_csv(
            buffer, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
        )
        return buffer.getvalue()
