import json
import os
from typing import Any, Dict, Sequence, Tuple, Union

import strictyaml
from strictyaml import CommaSeparated, Enum, Float, Int, Map, Optional, Str

from dspoly.core import (
    Anchor,
    CountData,
    NullModel,
    SimplexPoint,
    TestConfig,
    validate_counts,
)
from dspoly.core.estimators import EstimatorMode
from dspoly.core.exceptions import InvalidConfig, InvalidInputError, ScenarioError
from dspoly.core.statistics import ALL_STATISTICS, TestStatisticSpec
from dspoly.simlab import (
    DEFAULT_DATASETS_PER_SIZE,
    DEFAULT_FREQ_RESAMPLES,
    DEFAULT_WEAKEN_GRID,
    Scenario,
)


UNIFORM_NULL = "uniform"
SCENARIO_KEYS = frozenset(
    {
        "name",
        "truth",
        "null",
        "sample_sizes",
        "datasets_per_size",
        "alpha",
        "replicates",
        "weaken_alpha",
        "weaken_grid",
        "estimator",
        "statistic",
        "anchor",
        "seed",
        "freq_resamples",
    }
)

SCENARIO_SCHEMA = Map(
    {
        Optional("name"): Str(),
        "truth": CommaSeparated(Float()),
        Optional("null"): Str(),
        "sample_sizes": CommaSeparated(Int()),
        Optional("datasets_per_size"): Int(),
        Optional("alpha"): Float(),
        Optional("replicates"): Int(),
        Optional("weaken_alpha"): Float(),
        Optional("weaken_grid"): CommaSeparated(Float()),
        Optional("estimator"): Enum([mode.value for mode in EstimatorMode]),
        Optional("statistic"): Enum(sorted(ALL_STATISTICS)),
        Optional("anchor"): Enum([anchor.value for anchor in Anchor]),
        "seed": Int(),
        Optional("freq_resamples"): Int(),
    }
)


def _split(text: str) -> Sequence[str]:
    parts = [part.strip() for part in text.split(",")]
    if not parts or any(part == "" for part in parts):
        raise InvalidConfig(f"Expected a comma-separated list, got {text!r}")
    return parts


def parse_counts(text: str) -> CountData:
    try:
        values = [int(part) for part in _split(text)]
    except ValueError:
        raise InvalidConfig(f"Counts must be integers, got {text!r}")
    return validate_counts(values)


def parse_probabilities(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(part) for part in _split(text))
    except ValueError:
        raise InvalidConfig(f"Probabilities must be numbers, got {text!r}")


def parse_null(text: str, k: int) -> NullModel:
    if text.strip().lower() == UNIFORM_NULL:
        return NullModel.uniform(k)
    return NullModel(p0=parse_probabilities(text))


def _floats(value: Union[str, Sequence[Any]]) -> Tuple[float, ...]:
    if isinstance(value, str):
        return parse_probabilities(value)
    return tuple(float(item) for item in value)


def _ints(value: Union[str, int, Sequence[Any]]) -> Tuple[int, ...]:
    if isinstance(value, int):
        return (value,)
    if isinstance(value, str):
        return tuple(int(part) for part in _split(value))
    return tuple(int(item) for item in value)


def _scenario_from_mapping(data: Dict[str, Any], default_name: str) -> Scenario:
    for key in ("truth", "sample_sizes", "seed"):
        if key not in data:
            raise ScenarioError(f"Scenario is missing required key '{key}'")
    truth = SimplexPoint(p=_floats(data["truth"]))
    null = (
        parse_null(str(data["null"]), truth.k)
        if "null" in data
        else NullModel.uniform(truth.k)
    )
    config = TestConfig(
        seed=int(data["seed"]),
        alpha=float(data.get("alpha", 0.05)),
        replicates=int(data.get("replicates", 1000)),
        weaken_alpha=float(data.get("weaken_alpha", 0.0)),
        estimator=EstimatorMode(data.get("estimator", EstimatorMode.CENTROID.value)),
        statistic=TestStatisticSpec.of(
            str(data.get("statistic", TestStatisticSpec().kind))
        ),
        anchor=Anchor(data.get("anchor", Anchor.NULL.value)),
    )
    return Scenario(
        name=str(data.get("name", default_name)),
        truth=truth,
        null=null,
        sample_sizes=_ints(data["sample_sizes"]),
        config=config,
        datasets_per_size=int(
            data.get("datasets_per_size", DEFAULT_DATASETS_PER_SIZE)
        ),
        weaken_grid=(
            _floats(data["weaken_grid"])
            if "weaken_grid" in data
            else DEFAULT_WEAKEN_GRID
        ),
        freq_resamples=int(data.get("freq_resamples", DEFAULT_FREQ_RESAMPLES)),
    )


def parse_scenario(contents: str, default_name: str = "scenario") -> Scenario:
    try:
        data = strictyaml.load(contents, SCENARIO_SCHEMA).data
    except strictyaml.YAMLValidationError as ex:
        raise ScenarioError(f"Invalid scenario: {ex}") from ex
    except Exception as ex:
        # malformed YAML surfaces as a parser error, not a validation error
        raise ScenarioError(f"Invalid scenario: {ex}") from ex
    return _build(data, default_name)


def parse_json_scenario(contents: str, default_name: str = "scenario") -> Scenario:
    try:
        data = json.loads(contents)
    except json.JSONDecodeError as ex:
        raise ScenarioError(f"Invalid scenario JSON: {ex}") from ex
    if not isinstance(data, dict):
        raise ScenarioError("Scenario JSON must be an object")
    unknown = set(data) - SCENARIO_KEYS
    if unknown:
        raise ScenarioError(f"Unknown scenario keys: {', '.join(sorted(unknown))}")
    return _build(data, default_name)


def _build(data: Dict[str, Any], default_name: str) -> Scenario:
    try:
        return _scenario_from_mapping(data, default_name)
    except ScenarioError:
        raise
    except (InvalidInputError, ValueError, TypeError) as ex:
        raise ScenarioError(f"Invalid scenario: {ex}") from ex


def load_scenario(path: str, default_name: str = "scenario") -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fd:
            contents = fd.read()
    except OSError as ex:
        raise ScenarioError(f"Cannot read scenario {path}: {ex}") from ex
    if os.path.splitext(path)[1].lower() == ".json":
        return parse_json_scenario(contents, default_name)
    return parse_scenario(contents, default_name)
