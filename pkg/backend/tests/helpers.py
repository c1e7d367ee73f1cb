import numpy as np

from app.models.images import BiLevelImage, RgbImage, TriLevelLayer


def zero_layers(width: int, height: int):
    return (
        BiLevelImage(np.zeros((height, width), dtype=np.uint8)),
        TriLevelLayer(np.zeros((height, width), dtype=np.uint8)),
    )


def striped_image(width: int, height: int, period: int = 16, seed: int = 0) -> RgbImage:
    """R and B cycle through ``period`` values in raster order; G is noise."""
    cycle = (np.arange(width * height) % period).reshape(height, width).astype(np.uint8)
    noise = np.random.default_rng(seed).integers(0, 256, size=(height, width), dtype=np.uint8)
    return RgbImage(np.stack([cycle, noise, cycle], axis=2))


def uniform_histogram_image(width: int = 64, height: int = 64) -> RgbImage:
    """Every channel value 0..255 occurs equally often, so no bin is empty."""
    ramp = (np.arange(width * height) % 256).reshape(height, width).astype(np.uint8)
    return RgbImage(np.stack([ramp, ramp, ramp], axis=2))


def rectangles_layer(width: int, height: int) -> BiLevelImage:
    """A few solid ink blocks on a blank page."""
    bits = np.zeros((height, width), dtype=np.uint8)
    bits[height // 8:height // 3, width // 8:width // 2] = 1
    bits[height // 2:height - height // 8, width // 3:width - width // 10] = 1
    bits[height // 5:height // 4, :] = 1
    return BiLevelImage(bits)
