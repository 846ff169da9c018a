"""
Logging setup shared by the CLI and the HTTP service.

Records go to stderr, so numeric summaries printed on stdout stay clean.
"""

import logging
import sys

from pythonjsonlogger.json import JsonFormatter

from .settings import Settings

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(settings: Settings, level: str | None = None) -> None:
    """Install a stderr handler (plain or JSON) and an optional file handler."""
    if settings.log_json:
        formatter: logging.Formatter = JsonFormatter(
            "%(asctime)s %(name)s %(levelname)s %(message)s",
            rename_fields={"levelname": "level", "asctime": "time"},
        )
    else:
        formatter = logging.Formatter(LOG_FORMAT)

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file))
    for handler in handlers:
        handler.setFormatter(formatter)

    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        handlers=handlers,
        force=True,
    )
