import logging
import sys
from typing import Optional

from app.core.config import settings

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def setup_logging(level: Optional[str] = None) -> None:
    """Configure the root logger once; diagnostics always go to stderr."""
    level_name = (level or settings.LOG_LEVEL).upper()
    root = logging.getLogger()
    if not any(getattr(h, "_packer", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._packer = True
        root.addHandler(handler)
    root.setLevel(getattr(logging, level_name, logging.INFO))
