from typing import Sequence

import numpy as np

from dspoly.core import (
    CountData,
    FrequentistReport,
    NullModel,
    check_dimensions,
    point_estimate,
    statistic_value,
)
from dspoly.core.estimators import EstimatorMode, estimate
from dspoly.core.exceptions import InvalidConfig
from dspoly.core.statistics import TestStatisticSpec
from dspoly.sampling import Channel, generator_for


def freq_resampled_test(
    data: CountData,
    null: NullModel,
    resamples: int,
    seed: int,
    estimator: EstimatorMode = EstimatorMode.CENTROID,
    spec: TestStatisticSpec = TestStatisticSpec(),
    prefix: Sequence[int] = (),
) -> FrequentistReport:
    """Monte-Carlo p-value of the statistic under multinomial(n, p0) sampling."""
    check_dimensions(data.k, null.k)
    if resamples < 1:
        raise InvalidConfig(f"resamples must be >= 1, got {resamples}")
    p0 = null.as_array()
    t_obs = statistic_value(spec, point_estimate(data, estimator), null, data.n)

    rng = generator_for(seed, *prefix, Channel.RESAMPLE)
    resampled = rng.multinomial(data.n, p0, size=resamples)
    values = spec.statistic().evaluate(estimate(resampled, estimator), p0, data.n)
    exceedances = int(np.count_nonzero(values >= t_obs))

    return FrequentistReport(
        p_value=(1 + exceedances) / (resamples + 1),
        t_obs=t_obs,
        resamples=resamples,
    )
