import logging
import os
from typing import Optional


class CustomFileHandler(logging.FileHandler):
    def __init__(self, filename: str) -> None:
        directory = os.path.dirname(filename)
        if directory:
            os.makedirs(directory, exist_ok=True)
        logging.FileHandler.__init__(self, filename, encoding="utf-8")


LOG_FILE_ENVIRONMENT_VARIABLE = "DS_LOG_FILE"

logger: logging.Logger = logging.getLogger("dspoly")
logger.addHandler(logging.NullHandler())
logger.setLevel(logging.DEBUG)

formatter = logging.Formatter("%(asctime)s %(levelname)s %(message)s")


def enable_file_logging(filename: Optional[str] = None) -> Optional[str]:
    filename = filename or os.environ.get(LOG_FILE_ENVIRONMENT_VARIABLE)
    if not filename:
        return None
    path = os.path.abspath(filename)
    for handler in logger.handlers:
        if isinstance(handler, CustomFileHandler) and handler.baseFilename == path:
            return path
    handler = CustomFileHandler(path)
    handler.setFormatter(formatter)
    logger.addHandler(handler)
    return path
