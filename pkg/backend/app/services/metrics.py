"""Full-reference quality metrics: MSE, PSNR and mean SSIM.

SSIM uses the reference defaults: an 11x11 Gaussian window (sigma 1.5),
K1 = 0.01, K2 = 0.03, L = 255, population statistics, averaged only over
windows that lie fully inside the image.
"""

import logging
import math
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator
from skimage.metrics import (
    mean_squared_error,
    peak_signal_noise_ratio,
    structural_similarity,
)

from app.core.config import settings
from app.core.exceptions import DimensionMismatch, ImageTooSmall
from app.models.images import Channel, GrayImage, RgbImage
from app.models.records import MetricsReport, QualityScore

logger = logging.getLogger(__name__)

MAX_VALUE = 255
# skimage truncates its Gaussian window at 3.5 sigma
GAUSSIAN_TRUNCATE = 3.5

Plane = Union[GrayImage, Channel]


class SsimParams(BaseModel):
    window_size: int = Field(default_factory=lambda: settings.SSIM_WINDOW_SIZE, ge=3)
    k1: float = Field(default_factory=lambda: settings.SSIM_K1, gt=0)
    k2: float = Field(default_factory=lambda: settings.SSIM_K2, gt=0)
    dynamic_range: float = MAX_VALUE
    sigma: float = Field(default_factory=lambda: settings.SSIM_SIGMA, gt=0)
    weighting: Literal["gaussian", "uniform"] = Field(
        default_factory=lambda: settings.SSIM_WEIGHTING
    )

    @field_validator("window_size")
    @classmethod
    def odd_window(cls, v: int) -> int:
        if v % 2 == 0:
            raise ValueError("window size must be odd")
        return v

    @model_validator(mode="after")
    def gaussian_extent(self) -> "SsimParams":
        if self.weighting == "gaussian" and self.window_size != gaussian_window_size(self.sigma):
            raise ValueError(
                f"a Gaussian window with sigma {self.sigma} spans "
                f"{gaussian_window_size(self.sigma)} pixels, not {self.window_size}"
            )
        return self


def gaussian_window_size(sigma: float) -> int:
    return 2 * int(GAUSSIAN_TRUNCATE * sigma + 0.5) + 1


def _values(img: Plane) -> np.ndarray:
    return img.samples.astype(np.float64)


def _same_size(x: Plane, y: Plane) -> None:
    if x.size != y.size:
        raise DimensionMismatch(
            f"cannot compare {x.width}x{x.height} with {y.width}x{y.height}"
        )


def mse(x: Plane, y: Plane) -> float:
    _same_size(x, y)
    return float(mean_squared_error(_values(x), _values(y)))


def psnr(x: Plane, y: Plane, max_value: int = MAX_VALUE) -> float:
    _same_size(x, y)
    if np.array_equal(x.samples, y.samples):
        return math.inf
    return float(peak_signal_noise_ratio(_values(x), _values(y), data_range=max_value))


def _structural_similarity(x: Plane, y: Plane, params: SsimParams, full: bool = False):
    _same_size(x, y)
    n = params.window_size
    if x.height < n or x.width < n:
        raise ImageTooSmall(f"SSIM needs at least {n}x{n} pixels, got {x.width}x{x.height}")
    return structural_similarity(
        _values(x),
        _values(y),
        win_size=n,
        gaussian_weights=params.weighting == "gaussian",
        sigma=params.sigma,
        use_sample_covariance=False,
        data_range=params.dynamic_range,
        K1=params.k1,
        K2=params.k2,
        full=full,
    )


def ssim_map(x: Plane, y: Plane, params: Optional[SsimParams] = None) -> np.ndarray:
    """SSIM of every fully-interior window, indexed by window position."""
    params = params or SsimParams()
    _, full_map = _structural_similarity(x, y, params, full=True)
    pad = (params.window_size - 1) // 2
    return full_map[pad:x.height - pad, pad:x.width - pad]


def mssim(x: Plane, y: Plane, params: Optional[SsimParams] = None) -> float:
    return float(_structural_similarity(x, y, params or SsimParams()))


def luminance(img: RgbImage) -> GrayImage:
    """BT.601 luma rounded to the nearest integer."""
    rgb = img.samples.astype(np.int64)
    y = (299 * rgb[..., 0] + 587 * rgb[..., 1] + 114 * rgb[..., 2] + 500) // 1000
    return GrayImage(y.astype(np.uint8))


def _score(x: Plane, y: Plane, params: SsimParams) -> QualityScore:
    n = params.window_size
    structural = mssim(x, y, params) if x.height >= n and x.width >= n else None
    return QualityScore(psnr=psnr(x, y), mssim=structural)


def channel_metrics(
    original: RgbImage, marked: RgbImage, params: Optional[SsimParams] = None
) -> MetricsReport:
    """PSNR and MSSIM of luminance and each color component.

    MSSIM is left out for images smaller than the SSIM window.
    """
    params = params or SsimParams()
    _same_size(original, marked)
    report = MetricsReport(
        luminance=_score(luminance(original), luminance(marked), params),
        r=_score(original.channel(0), marked.channel(0), params),
        g=_score(original.channel(1), marked.channel(1), params),
        b=_score(original.channel(2), marked.channel(2), params),
    )
    logger.debug(
        "Quality: luminance %.2f dB, R %.2f dB, B %.2f dB",
        report.luminance.psnr, report.r.psnr, report.b.psnr,
    )
    return report
