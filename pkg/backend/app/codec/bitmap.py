"""Lossless bilevel image codec in the style of JBIG2 generic-region coding.

Every pixel is coded with the adaptive range coder under a context built
from ten causal neighbours (pixels outside the image read as 0):

    row y-2:          x-1  x  x+1
    row y-1:    x-2   x-1  x  x+1  x+2
    row y:      x-2   x-1  ?

Before each row a typical-prediction flag (its own adaptive state) says
whether the row repeats the one above; such rows code no pixels. The row
above row 0 is all zeros.

Serialized layout: ``b"SBC1"``, width u32, height u32, body length u32
(all big-endian), then the arithmetic-coded body.
"""

import logging
import math
import struct
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from app.codec.range_coder import RangeDecoder, RangeEncoder
from app.core.exceptions import CorruptStream
from app.models.images import BiLevelImage
from app.models.records import CompressionReport

logger = logging.getLogger(__name__)

MAGIC = b"SBC1"
HEADER = struct.Struct(">4sIII")
MAX_PIXELS = 1 << 28

# (dy, dx) of each template pixel, most significant context bit first.
TEMPLATE = (
    (-2, -1), (-2, 0), (-2, 1),
    (-1, -2), (-1, -1), (-1, 0), (-1, 1), (-1, 2),
    (0, -2), (0, -1),
)
TEMPLATE_CONTEXTS = 1 << len(TEMPLATE)
TYPICAL_ROW_CTX = TEMPLATE_CONTEXTS
CODER_CONTEXTS = TEMPLATE_CONTEXTS + 1

_PAD_TOP = 2
_PAD_SIDE = 2


@dataclass(frozen=True)
class CompressedBitmap:
    width: int
    height: int
    body: bytes

    def to_bytes(self) -> bytes:
        return HEADER.pack(MAGIC, self.width, self.height, len(self.body)) + self.body

    @classmethod
    def read_from(cls, data: bytes, offset: int = 0) -> Tuple["CompressedBitmap", int]:
        """Parse one bitmap starting at ``offset``; returns it and the end offset."""
        if len(data) - offset < HEADER.size:
            raise CorruptStream("compressed bitmap header is truncated")
        magic, width, height, length = HEADER.unpack_from(data, offset)
        if magic != MAGIC:
            raise CorruptStream("not a compressed bitmap")
        if width == 0 or height == 0:
            raise CorruptStream("compressed bitmap has a zero dimension")
        if width * height > MAX_PIXELS:
            raise CorruptStream(f"compressed bitmap claims {width}x{height} pixels")
        start = offset + HEADER.size
        end = start + length
        if end > len(data):
            raise CorruptStream("compressed bitmap body is truncated")
        return cls(width, height, bytes(data[start:end])), end

    @classmethod
    def from_bytes(cls, data: bytes) -> "CompressedBitmap":
        bitmap, end = cls.read_from(data)
        if end != len(data):
            raise CorruptStream(f"{len(data) - end} trailing bytes after compressed bitmap")
        return bitmap


def _padded(bits: np.ndarray) -> np.ndarray:
    h, w = bits.shape
    padded = np.zeros((h + _PAD_TOP, w + 2 * _PAD_SIDE), dtype=np.int32)
    padded[_PAD_TOP:, _PAD_SIDE:_PAD_SIDE + w] = bits
    return padded


def context_map(bits: np.ndarray) -> np.ndarray:
    """Template context of every pixel, computed from the whole bitmap at once."""
    h, w = bits.shape
    padded = _padded(bits)
    ctx = np.zeros((h, w), dtype=np.int32)
    for k, (dy, dx) in enumerate(TEMPLATE):
        shift = len(TEMPLATE) - 1 - k
        y0 = _PAD_TOP + dy
        x0 = _PAD_SIDE + dx
        ctx |= padded[y0:y0 + h, x0:x0 + w] << shift
    return ctx


def encode_bitmap(img: BiLevelImage) -> CompressedBitmap:
    bits = img.samples
    h, w = bits.shape
    contexts = context_map(bits)
    encoder = RangeEncoder(CODER_CONTEXTS)

    ltp = 0
    above = np.zeros(w, dtype=bits.dtype)
    for y in range(h):
        row = bits[y]
        typical = int(np.array_equal(row, above))
        encoder.encode_bit(TYPICAL_ROW_CTX, typical ^ ltp)
        ltp = typical
        if not typical:
            for ctx, bit in zip(contexts[y].tolist(), row.tolist()):
                encoder.encode_bit(ctx, bit)
        above = row

    return CompressedBitmap(w, h, encoder.finish())


def decode_bitmap(c: CompressedBitmap) -> BiLevelImage:
    if c.width < 1 or c.height < 1:
        raise CorruptStream("compressed bitmap has a zero dimension")
    h, w = c.height, c.width
    decoder = RangeDecoder(c.body, CODER_CONTEXTS)
    padded = np.zeros((h + _PAD_TOP, w + 2 * _PAD_SIDE), dtype=np.int32)
    upper_template = TEMPLATE[:-2]

    ltp = 0
    for y in range(h):
        py = _PAD_TOP + y
        ltp ^= decoder.decode_bit(TYPICAL_ROW_CTX)
        if ltp:
            padded[py] = padded[py - 1]
            continue

        upper = np.zeros(w, dtype=np.int32)
        for k, (dy, dx) in enumerate(upper_template):
            shift = len(TEMPLATE) - 1 - k
            x0 = _PAD_SIDE + dx
            upper |= padded[py + dy, x0:x0 + w] << shift

        row = [0] * w
        c2 = c1 = 0
        for x, up in enumerate(upper.tolist()):
            bit = decoder.decode_bit(up | (c2 << 1) | c1)
            row[x] = bit
            c2, c1 = c1, bit
        padded[py, _PAD_SIDE:_PAD_SIDE + w] = row

    decoder.finish()
    return BiLevelImage(padded[_PAD_TOP:, _PAD_SIDE:_PAD_SIDE + w].astype(np.uint8))


def compression_report(
    img: BiLevelImage, compressed: Optional[CompressedBitmap] = None
) -> CompressionReport:
    """Packed size against serialized compressed size, as in a compression table."""
    if compressed is None:
        compressed = encode_bitmap(img)
    before = math.ceil(img.width * img.height / 8)
    after = len(compressed.to_bytes())
    ratio = (1.0 - after / before) * 100.0
    logger.info(
        "Compressed %dx%d bilevel image: %d -> %d bytes (%.2f%%)",
        img.width, img.height, before, after, ratio,
    )
    return CompressionReport(
        width=img.width,
        height=img.height,
        before_bytes=before,
        after_bytes=after,
        ratio_percent=round(ratio, 2),
    )
