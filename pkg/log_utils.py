import logging
import os
import sys

from pythonjsonlogger import jsonlogger

# Configuration
LOG_LEVEL_ENV = "ZONOSET_LOG_LEVEL"
DEFAULT_LOG_LEVEL = "WARNING"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def setup_logging(level: str = None) -> logging.Logger:
    """Attach a JSON formatter on stderr to the root logger (idempotent)."""
    level = (level or os.environ.get(LOG_LEVEL_ENV) or DEFAULT_LOG_LEVEL).upper()
    root = logging.getLogger()

    for handler in root.handlers:
        if getattr(handler, "_zonoset", False):
            root.setLevel(level)
            return root

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(jsonlogger.JsonFormatter(LOG_FORMAT))
    handler._zonoset = True
    root.addHandler(handler)
    root.setLevel(level)
    return root
