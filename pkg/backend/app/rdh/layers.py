"""Bit-plane decomposition of the 3-bit special color layer.

The three planes are laid side by side, most significant plane on the
left, so that a single bilevel image can be compressed. The order is part
of container version 1.
"""

import numpy as np

from app.core.exceptions import DimensionMismatch
from app.models.images import BiLevelImage, TriLevelLayer

TRI_BITS = 3


def decompose_3bit(layer: TriLevelLayer) -> BiLevelImage:
    levels = layer.samples
    planes = [(levels >> bit) & 1 for bit in range(TRI_BITS - 1, -1, -1)]
    return BiLevelImage(np.concatenate(planes, axis=1).astype(np.uint8))


def recompose_3bit(planes: BiLevelImage, original_width: int) -> TriLevelLayer:
    if original_width < 1 or planes.width != TRI_BITS * original_width:
        raise DimensionMismatch(
            f"plane image is {planes.width} wide, expected {TRI_BITS} x {original_width}"
        )
    levels = np.zeros((planes.height, original_width), dtype=np.uint8)
    for i, bit in enumerate(range(TRI_BITS - 1, -1, -1)):
        plane = planes.samples[:, i * original_width:(i + 1) * original_width]
        levels |= plane.astype(np.uint8) << bit
    return TriLevelLayer(levels)
