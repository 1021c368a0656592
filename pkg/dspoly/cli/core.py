from abc import ABC, abstractmethod
from typing import (
    Dict,
    Generic,
    Literal,
    Optional,
    Sequence,
    Type,
    TypeVar,
    cast,
    get_args,
)

import numpy as np
from tap import Tap

from dspoly.core import MAX_SEED, Anchor, TestConfig
from dspoly.core.estimators import EstimatorMode
from dspoly.core.exceptions import DsPolyError, InvalidConfig, InvalidInputError
from dspoly.core.statistics import TestStatisticSpec
from dspoly.logging import enable_file_logging, logger
from dspoly.textscreen import TokenRules
from dspoly.textscreen.corpus import load_token_rules
from dspoly.utils import resolve_workers


OutputFormat = Literal["human", "json", "csv"]


class BaseArgumentParser(Tap):
    format: OutputFormat = "human"
    workers: Optional[int] = None
    log_file: Optional[str] = None


class DsArgumentParser(BaseArgumentParser):
    alpha: float = 0.05
    replicates: int = 1000
    seed: Optional[int] = None
    weaken: float = 0.0
    estimator: Literal["centroid", "laplace", "mle"] = "centroid"
    statistic: str = "chi_squared"
    anchor: Literal["null", "observed"] = "null"
    freq_resamples: int = 1000


# pyre-ignore[13]: corpus is unitialized
class CorpusArgumentParser(DsArgumentParser):
    corpus: str
    out: Optional[str] = None
    stopwords: Optional[str] = None
    stems: Optional[str] = None


TArgumentParser = TypeVar("TArgumentParser", bound=BaseArgumentParser)


ALL_COMMANDS: Dict[str, Type["Command[BaseArgumentParser]"]] = {}


def resolve_seed(seed: Optional[int], output_format: str) -> int:
    if seed is not None:
        return seed
    if output_format != "human":
        raise InvalidConfig("--seed is required for json and csv output")
    # pyre-ignore[58]: entropy is an int when drawn from the OS
    return int(np.random.SeedSequence().entropy % (MAX_SEED + 1))


def config_from_args(args: DsArgumentParser, seed: int) -> TestConfig:
    return TestConfig(
        seed=seed,
        alpha=args.alpha,
        replicates=args.replicates,
        weaken_alpha=args.weaken,
        estimator=EstimatorMode(args.estimator),
        statistic=TestStatisticSpec.of(args.statistic),
        anchor=Anchor(args.anchor),
    )


def token_rules(args: CorpusArgumentParser) -> TokenRules:
    return load_token_rules(args.stopwords, args.stems)


class Command(Generic[TArgumentParser], ABC):
    TRIGGER: str
    workers: int

    def __init__(self, workers: int) -> None:
        self.workers = workers

    def __init_subclass__(cls: Type[object]) -> None:
        subclass = cast(Type[Command[BaseArgumentParser]], cls)
        ALL_COMMANDS[f"{subclass.TRIGGER}"] = subclass

    @classmethod
    def run(cls, trigger: str, argv: Sequence[str]) -> int:
        command_klass = ALL_COMMANDS[trigger]
        # pyre-ignore[16]: command_klass has no __orig_bases__ attribute
        args_klass = get_args(command_klass.__orig_bases__[0])[0]
        args = args_klass(
            prog=f"dspoly {trigger}", underscores_to_dashes=True
        ).parse_args(argv)

        # this had to be an inline import so the tests would use the
        # WASABI_LOG_FRIENDLY env variable correctly ¯\_(ツ)_/¯
        from wasabi import msg

        try:
            enable_file_logging(args.log_file)
            # pyre-ignore[45]: cannot instantiate Command with abstract method
            command = command_klass(resolve_workers(args.workers))
            return command.main(args)
        except InvalidInputError as ex:
            logger.error(f"{trigger}: {ex}")
            msg.fail(type(ex).__name__, text=str(ex))
            return 2
        except DsPolyError as ex:
            logger.exception(f"{trigger} failed")
            msg.fail(type(ex).__name__, text=str(ex))
            return 1

    @classmethod
    def is_valid(cls, trigger: str) -> bool:
        return trigger in ALL_COMMANDS.keys()

    @abstractmethod
    def main(self, args: TArgumentParser) -> int:
        raise NotImplementedError
