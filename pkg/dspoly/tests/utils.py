import io
import os
import re
from contextlib import contextmanager, redirect_stderr, redirect_stdout
from typing import Dict, Iterator, List, Tuple
from unittest.mock import patch

from dspoly.logging import CustomFileHandler, logger


@contextmanager
def captured_output() -> Iterator[Tuple[io.StringIO, io.StringIO]]:
    stdout, stderr = io.StringIO(), io.StringIO()
    with redirect_stdout(stdout), redirect_stderr(stderr):
        yield stdout, stderr


@contextmanager
def cli_arguments(arguments: List[str]) -> Iterator[None]:
    with patch("sys.argv", ["dspoly"] + arguments):
        yield


ENV_VARIABLES: Dict[str, str] = {}


@contextmanager
def environment_variable(name: str, value: str) -> Iterator[None]:
    ENV_VARIABLES[name] = value
    with patch.dict(os.environ, ENV_VARIABLES):
        yield
    del ENV_VARIABLES[name]


def strip_colors(text: str) -> str:
    return re.sub(r"\x1b\[[0-9;]*m", "", text)


def write_text(directory: str, name: str, contents: str) -> str:
    path = os.path.join(directory, name)
    with open(path, "w", encoding="utf-8") as fd:
        fd.write(contents)
    return path


def remove_file_handlers() -> None:
    for handler in list(logger.handlers):
        if isinstance(handler, CustomFileHandler):
            logger.removeHandler(handler)
            handler.close()
