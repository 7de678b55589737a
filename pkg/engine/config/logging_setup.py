"""
📝 Logging Setup
Root logger configuration for the command-line entry point
"""

import logging
import sys
from typing import Optional

from pythonjsonlogger import jsonlogger

from config.settings import logging_config

_HANDLER_NAME = "engine-stderr"
_FILE_HANDLER_NAME = "engine-file"


def configure_logging(level: Optional[str] = None, json_format: Optional[bool] = None) -> logging.Logger:
    """Attach a single stderr handler to the root logger.

    Plain text by default; JSON lines when ``json_format`` (or ENGINE_LOG_JSON) is set.
    Calling it again replaces the previous handler instead of stacking a new one.
    """
    root = logging.getLogger()
    level_name = (level or logging_config.LEVEL).upper()
    use_json = logging_config.JSON if json_format is None else json_format

    for handler in list(root.handlers):
        if handler.get_name() in (_HANDLER_NAME, _FILE_HANDLER_NAME):
            root.removeHandler(handler)
            handler.close()

    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    if use_json:
        handler.setFormatter(jsonlogger.JsonFormatter(logging_config.FORMAT))
    else:
        handler.setFormatter(logging.Formatter(logging_config.FORMAT))

    root.addHandler(handler)

    if logging_config.FILE_PATH:
        file_handler = logging.FileHandler(logging_config.FILE_PATH)
        file_handler.set_name(_FILE_HANDLER_NAME)
        file_handler.setFormatter(handler.formatter)
        root.addHandler(file_handler)

    root.setLevel(level_name)
    return root
