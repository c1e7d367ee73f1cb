"""Synthetic illustration-like images and the special color layers derived from them.

Illustrations use few colors in flat regions, so every channel histogram
is sparse. Generation is integer-only and fully determined by the seed.
"""

from typing import Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import InvalidParameter
from app.models.images import BiLevelImage, RgbImage, TriLevelLayer
from app.services.metrics import luminance

MIN_COLORS = 2
MAX_COLORS = 64
SITES_PER_COLOR = 3


def gen_illustration(width: int, height: int, n_colors: int, seed: int) -> RgbImage:
    """Voronoi mosaic of ``n_colors`` distinct RGB colors, all of them present."""
    if not MIN_COLORS <= n_colors <= MAX_COLORS:
        raise InvalidParameter(f"n_colors must be in {MIN_COLORS}..{MAX_COLORS}, got {n_colors}")
    if width < 1 or height < 1:
        raise InvalidParameter(f"cannot generate a {width}x{height} image")
    pixels = width * height
    if pixels < n_colors:
        raise InvalidParameter(f"{width}x{height} pixels cannot show {n_colors} colors")

    rng = np.random.default_rng(seed)
    codes = rng.choice(1 << 24, size=n_colors, replace=False)
    palette = np.stack([(codes >> 16) & 0xFF, (codes >> 8) & 0xFF, codes & 0xFF], axis=1)

    n_sites = min(pixels, n_colors * SITES_PER_COLOR)
    sites = rng.choice(pixels, size=n_sites, replace=False)
    site_y, site_x = np.divmod(sites, width)
    # the first n_colors sites take one color each, so every color appears
    site_color = np.concatenate(
        [np.arange(n_colors), rng.integers(0, n_colors, size=n_sites - n_colors)]
    )

    ys, xs = np.mgrid[0:height, 0:width]
    nearest = np.full((height, width), np.iinfo(np.int64).max, dtype=np.int64)
    owner = np.zeros((height, width), dtype=np.int64)
    for k in range(n_sites):
        distance = (ys - site_y[k]) ** 2 + (xs - site_x[k]) ** 2
        closer = distance < nearest
        nearest[closer] = distance[closer]
        owner[closer] = k

    return RgbImage(palette[site_color[owner]].astype(np.uint8))


def gen_layers(
    img: RgbImage,
    threshold: int = None,
    level_step: int = None,
) -> Tuple[BiLevelImage, TriLevelLayer]:
    """Quantize luminance into a bilevel layer and an 8-level layer."""
    threshold = settings.BINARY_THRESHOLD if threshold is None else threshold
    level_step = settings.TRI_LEVEL_STEP if level_step is None else level_step
    if level_step < 1:
        raise InvalidParameter("level step must be positive")

    y = luminance(img).samples.astype(np.int64)
    binary = BiLevelImage((y >= threshold).astype(np.uint8))
    tri = TriLevelLayer(np.minimum(y // level_step, 7).astype(np.uint8))
    return binary, tri
