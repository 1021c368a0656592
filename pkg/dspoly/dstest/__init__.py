from dataclasses import dataclass
from functools import partial
from typing import Optional, Sequence, Tuple

import numpy as np

from dspoly.core import (
    Anchor,
    CountData,
    Decision,
    DecisionReport,
    Diagnostics,
    NullModel,
    TailPair,
    TestConfig,
    check_dimensions,
    point_estimate,
    statistic_value,
)
from dspoly.core.exceptions import InvalidConfig
from dspoly.dstest.frequentist import freq_resampled_test
from dspoly.envelope import envelope_batch
from dspoly.logging import logger
from dspoly.sampling import polytope_block, replicate_blocks
from dspoly.utils import parallel_map


@dataclass(frozen=True)
class _Tally:
    lower: int
    mean: int
    upper: int
    width: float


def reference_shapes(data: CountData, null: NullModel, anchor: Anchor) -> np.ndarray:
    if anchor == Anchor.OBSERVED:
        return data.as_array()
    # posterior of a sample of size n that matches the null exactly
    return data.n * null.as_array()


def observed_statistic(data: CountData, null: NullModel, config: TestConfig) -> float:
    check_dimensions(data.k, null.k)
    estimate = point_estimate(data, config.estimator)
    return statistic_value(config.statistic, estimate, null, data.n)


def _tally_block(
    block_and_rows: Tuple[int, int],
    data: CountData,
    null: NullModel,
    config: TestConfig,
    t_obs: float,
    prefix: Tuple[int, ...],
) -> _Tally:
    block, rows = block_and_rows
    shapes = reference_shapes(data, null, config.anchor)
    batch = polytope_block(
        shapes, config.weaken_alpha, config.seed, block, prefix
    ).head(rows)
    lows, means, highs = envelope_batch(batch, null, data.n, config.statistic)
    logger.debug(f"block {block}: {rows} polytopes, prefix {prefix}")
    return _Tally(
        lower=int(np.count_nonzero(lows >= t_obs)),
        mean=int(np.count_nonzero(means >= t_obs)),
        upper=int(np.count_nonzero(highs >= t_obs)),
        width=float(batch.z0.sum()),
    )


def _tail_tallies(
    data: CountData,
    null: NullModel,
    config: TestConfig,
    t_obs: float,
    prefix: Sequence[int],
    workers: int,
) -> Tuple[TailPair, Diagnostics]:
    check_dimensions(data.k, null.k)
    tallies = parallel_map(
        partial(
            _tally_block,
            data=data,
            null=null,
            config=config,
            t_obs=t_obs,
            prefix=tuple(prefix),
        ),
        replicate_blocks(config.replicates),
        workers,
    )
    replicates = config.replicates
    tails = TailPair(
        q_lower_env=sum(tally.lower for tally in tallies) / replicates,
        q_upper_env=sum(tally.upper for tally in tallies) / replicates,
    )
    diagnostics = Diagnostics(
        q_mean_env=sum(tally.mean for tally in tallies) / replicates,
        mean_width=sum(tally.width for tally in tallies) / replicates,
    )
    return tails, diagnostics


def tail_probabilities(
    data: CountData,
    null: NullModel,
    config: TestConfig,
    prefix: Sequence[int] = (),
    workers: int = 1,
) -> TailPair:
    t_obs = observed_statistic(data, null, config)
    tails, _diagnostics = _tail_tallies(data, null, config, t_obs, prefix, workers)
    return tails


def decide(tails: TailPair, alpha: float) -> Decision:
    if not 0.0 < alpha < 1.0:
        raise InvalidConfig(f"alpha must be in (0, 1), got {alpha}")
    if tails.q_upper_env <= alpha:
        return Decision.REJECT
    if tails.q_lower_env > alpha:
        return Decision.ACCEPT
    return Decision.UNKNOWN


def ds_test(
    data: CountData,
    null: NullModel,
    config: TestConfig,
    prefix: Sequence[int] = (),
    workers: int = 1,
    freq_resamples: Optional[int] = None,
) -> DecisionReport:
    logger.info(
        f"DS test on {list(data.counts)}: {config.replicates} replicates, "
        f"weaken {config.weaken_alpha}, seed {config.seed}, prefix {list(prefix)}"
    )
    estimate = point_estimate(data, config.estimator)
    t_obs = observed_statistic(data, null, config)
    tails, diagnostics = _tail_tallies(data, null, config, t_obs, prefix, workers)
    decision = decide(tails, config.alpha)
    freq = (
        freq_resampled_test(
            data,
            null,
            freq_resamples,
            config.seed,
            estimator=config.estimator,
            spec=config.statistic,
            prefix=prefix,
        )
        if freq_resamples is not None
        else None
    )
    logger.info(
        f"t_obs {t_obs:.6f}, q_lower_env {tails.q_lower_env:.6f}, "
        f"q_upper_env {tails.q_upper_env:.6f}: {decision.value}"
    )
    return DecisionReport(
        data=data,
        null=null,
        config=config,
        t_obs=t_obs,
        point_estimate=estimate,
        tails=tails,
        decision=decision,
        diagnostics=diagnostics,
        freq=freq,
    )
