import logging
from typing import Any, Dict, Sequence

import numpy as np

from app.core.config import Settings, settings as default_settings
from app.core.exceptions import DimensionMismatch
from app.models.records import StatSummary


class BaseService:
    """Base class for the packer's services with common functionality."""

    def __init__(self, config: Settings = None):
        self.settings = config or default_settings
        self.logger = logging.getLogger(type(self).__module__)

    def _require_same_size(self, reference: Any, *others: Any, what: str = "layer") -> None:
        """Raise unless every raster has the reference raster's dimensions."""
        for other in others:
            if other.size != reference.size:
                raise DimensionMismatch(
                    f"{what} is {other.width}x{other.height}, "
                    f"expected {reference.width}x{reference.height}"
                )

    def _summarize(self, values: Sequence[float]) -> StatSummary:
        """Average, variance, minimum and maximum over the finite values."""
        data = np.asarray(list(values), dtype=np.float64)
        finite = data[np.isfinite(data)]
        summary: Dict[str, Any] = {"count": int(data.size), "infinite": int(data.size - finite.size)}
        if finite.size:
            summary.update(
                average=float(finite.mean()),
                variance=float(finite.var()),
                minimum=float(finite.min()),
                maximum=float(finite.max()),
            )
        return StatSummary(**summary)

