import json
import os
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Callable, Iterable, List, Optional, TypeVar

from dspoly.core.exceptions import InvalidConfig


WORKERS_ENVIRONMENT_VARIABLE = "DS_WORKERS"

# encoder for the documents printed by --format json
json_encoder = partial(json.dumps, indent=2)


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        raw = os.environ.get(WORKERS_ENVIRONMENT_VARIABLE)
        if raw is None or raw.strip() == "":
            return 1
        try:
            workers = int(raw)
        except ValueError:
            raise InvalidConfig(f"{WORKERS_ENVIRONMENT_VARIABLE} must be an integer")
    if workers < 1:
        raise InvalidConfig(f"workers must be >= 1, got {workers}")
    return workers


TItem = TypeVar("TItem")
TResult = TypeVar("TResult")


def parallel_map(
    func: Callable[[TItem], TResult], items: Iterable[TItem], workers: int = 1
) -> List[TResult]:
    """Maps ``func`` over ``items`` keeping input order, whatever ``workers`` is."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def write_output(path: str, contents: str) -> None:
    directory = os.path.dirname(path)
    try:
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fd:
            fd.write(contents)
    except OSError as ex:
        raise InvalidConfig(f"Cannot write {path}: {ex}") from ex
