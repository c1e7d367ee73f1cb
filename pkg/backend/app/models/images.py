"""Raster buffers passed between the packer's stages.

All buffers are numpy arrays in row-major order, indexed ``[y, x]``. They
are treated as immutable: operations return new instances and never write
into the array they were given.
"""

from dataclasses import dataclass
from typing import ClassVar, Tuple

import numpy as np

from app.core.exceptions import InvalidParameter


class _Raster:
    samples: np.ndarray
    ndim: ClassVar[int] = 2

    def _validate(self, max_value: int) -> None:
        if not isinstance(self.samples, np.ndarray):
            raise InvalidParameter(f"{type(self).__name__} needs a numpy array")
        if self.samples.ndim != self.ndim:
            raise InvalidParameter(
                f"{type(self).__name__} expects {self.ndim} dimensions, got {self.samples.ndim}"
            )
        if self.samples.shape[0] < 1 or self.samples.shape[1] < 1:
            raise InvalidParameter(f"{type(self).__name__} must be at least 1x1")
        if self.samples.dtype != np.uint8:
            if self.samples.size and (self.samples.min() < 0 or self.samples.max() > max_value):
                raise InvalidParameter(f"{type(self).__name__} samples out of range")
            object.__setattr__(self, "samples", self.samples.astype(np.uint8))
        elif max_value < 255 and self.samples.size and int(self.samples.max()) > max_value:
            raise InvalidParameter(
                f"{type(self).__name__} samples must be <= {max_value}"
            )
        frozen = self.samples.view()
        frozen.setflags(write=False)
        object.__setattr__(self, "samples", frozen)

    @property
    def height(self) -> int:
        return int(self.samples.shape[0])

    @property
    def width(self) -> int:
        return int(self.samples.shape[1])

    @property
    def size(self) -> Tuple[int, int]:
        return self.width, self.height

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self.samples, other.samples)

    def __repr__(self) -> str:
        return f"<{type(self).__name__}({self.width}x{self.height})>"


@dataclass(frozen=True, eq=False, repr=False)
class RgbImage(_Raster):
    """General color layer: ``samples`` has shape (height, width, 3)."""

    samples: np.ndarray
    ndim: ClassVar[int] = 3

    def __post_init__(self):
        self._validate(255)
        if self.samples.shape[2] != 3:
            raise InvalidParameter("RgbImage needs exactly three components")

    def channel(self, index: int) -> "Channel":
        return Channel(np.ascontiguousarray(self.samples[:, :, index]))

    def with_channel(self, index: int, channel: "Channel") -> "RgbImage":
        samples = self.samples.copy()
        samples[:, :, index] = channel.samples
        return RgbImage(samples)


@dataclass(frozen=True, eq=False, repr=False)
class GrayImage(_Raster):
    """8-bit single-plane image (luminance, or a tri-level layer on disk)."""

    samples: np.ndarray

    def __post_init__(self):
        self._validate(255)


@dataclass(frozen=True, eq=False, repr=False)
class Channel(_Raster):
    """One 8-bit color plane of an ``RgbImage``."""

    samples: np.ndarray

    def __post_init__(self):
        self._validate(255)


@dataclass(frozen=True, eq=False, repr=False)
class BiLevelImage(_Raster):
    """1-bit raster; 1 means ink."""

    samples: np.ndarray

    def __post_init__(self):
        self._validate(1)

    @property
    def bits(self) -> np.ndarray:
        return self.samples


@dataclass(frozen=True, eq=False, repr=False)
class TriLevelLayer(_Raster):
    """3-bit special color layer, levels 0..7 (level/7 is the ink density)."""

    samples: np.ndarray

    def __post_init__(self):
        self._validate(7)

    @property
    def levels(self) -> np.ndarray:
        return self.samples

    @classmethod
    def from_gray(cls, img: GrayImage) -> "TriLevelLayer":
        return cls(img.samples)
