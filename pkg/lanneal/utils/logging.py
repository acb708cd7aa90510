# -*- coding: utf-8 -*-
"""
Logging for the command line interface.

Every command logs to the terminal and to :code:`lanneal.log` in its output
directory. Modules only ever create loggers with
:code:`logging.getLogger(__name__)`, the handlers are attached here to the
package logger.
"""

import logging
import os
import sys
from typing import Any, Dict, Optional, Union

from ..errors import ConfigurationError

PACKAGE_LOGGER = "lanneal"
STREAM_FORMAT = "%(asctime)s %(name)s %(levelname)-8s: %(message)s"
FILE_FORMAT = "%(asctime)s %(name)s %(levelname)-8s: %(message)s"


def parse_log_level(log_level: Union[str, int]) -> int:
    """Convert a level name, e.g. :code:`'debug'`, or a number to a level.

    Raises
    ------
    ConfigurationError
        If the name is not a logging level.
    """
    if isinstance(log_level, str):
        level = logging.getLevelName(log_level.upper())
        if not isinstance(level, int):
            raise ConfigurationError(f"log_level {log_level} not understood")
        return level
    return int(log_level)


def _get_stream(stream):
    if not isinstance(stream, str):
        return stream
    if stream.lower() not in ("stderr", "stdout"):
        raise ConfigurationError(
            f"Unknown stream: {stream}. Choose from: [stderr, stdout]"
        )
    return getattr(sys, stream.lower())


def _remove_handlers(logger: logging.Logger) -> None:
    for handler in list(logger.handlers):
        if isinstance(handler, logging.StreamHandler):
            handler.close()
            logger.removeHandler(handler)


def setup_logger(
    output: Optional[str] = None,
    log_level: Union[str, int] = "INFO",
    filename: Optional[str] = "lanneal.log",
    stream=None,
) -> logging.Logger:
    """Attach a stream handler and a file handler to the package logger.

    Handlers from a previous call are replaced, so running several commands
    in one process writes each log to its own output directory.

    Parameters
    ----------
    output : str, optional
        Output directory of the log file. Defaults to the current directory.
    log_level : str or int
        Logging level, e.g. :code:`'INFO'`.
    filename : str, optional
        Name of the log file. If None, no file is written.
    stream : {'stderr', 'stdout'} or file-object, optional
        Stream of the terminal handler. Defaults to stderr.

    Returns
    -------
    :obj:`logging.Logger`
        The package logger.
    """
    from .. import __version__ as version

    level = parse_log_level(log_level)
    stream = _get_stream(stream)
    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.setLevel(level)
    _remove_handlers(logger)

    stream_handler = logging.StreamHandler(stream)
    stream_handler.setFormatter(
        logging.Formatter(STREAM_FORMAT, datefmt="%m-%d %H:%M")
    )
    logger.addHandler(stream_handler)

    if filename:
        output = output or "."
        os.makedirs(output, exist_ok=True)
        file_handler = logging.FileHandler(os.path.join(output, filename))
        file_handler.setFormatter(
            logging.Formatter(FILE_FORMAT, datefmt="%H:%M:%S")
        )
        logger.addHandler(file_handler)

    for handler in logger.handlers:
        handler.setLevel(level)

    logger.info(f"Running lanneal version {version}")
    return logger


def log_configuration(flat: Dict[str, Any], logger=None) -> None:
    """Log every configuration value at debug level, one key per line."""
    logger = logger or logging.getLogger(PACKAGE_LOGGER)
    if not logger.isEnabledFor(logging.DEBUG):
        return
    width = max((len(k) for k in flat), default=0)
    for key in sorted(flat):
        logger.debug(f"{key:<{width}} = {flat[key]}")
