"""Single-channel histogram-shifting reversible data hiding.

One round picks a peak point PP and a zero point ZP (or, when every bin is
occupied, a lowest point LP whose pixels are listed in a location map),
moves every value strictly between them one step toward ZP, then visits
the PP-valued pixels in raster order: a 1 bit moves the pixel into the
freed bin, a 0 bit leaves it. Extraction reads PP as 0 and PP±1 as 1 and
shifts the range back.

Every function accepts an optional ``exclude`` mask; excluded pixels are
not counted, shifted or embedded into.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import (
    CapacityExceeded,
    ImageTooSmall,
    InvalidParameter,
    InvalidSideInfo,
    NoUsableZp,
)
from app.models.images import Channel
from app.models.records import RoundRecord, SideInfo

logger = logging.getLogger(__name__)

LEVELS = 256
SIDE_INFO_PIXELS = 16


@dataclass(frozen=True)
class Histogram:
    bins: np.ndarray

    @property
    def total(self) -> int:
        return int(self.bins.sum())

    def __getitem__(self, value: int) -> int:
        return int(self.bins[value])


def _active(ch: Channel, exclude: Optional[np.ndarray]) -> np.ndarray:
    if exclude is None:
        return np.ones(ch.samples.size, dtype=bool)
    if exclude.shape != ch.samples.shape:
        raise InvalidParameter("exclusion mask does not match the channel")
    return ~exclude.ravel()


def side_info_mask(height: int, width: int) -> np.ndarray:
    """Mask of the first 16 pixels of the bottom row."""
    if width < SIDE_INFO_PIXELS:
        raise ImageTooSmall(f"side information needs a width of at least {SIDE_INFO_PIXELS}")
    mask = np.zeros((height, width), dtype=bool)
    mask[-1, :SIDE_INFO_PIXELS] = True
    return mask


def compute_histogram(ch: Channel, exclude: Optional[np.ndarray] = None) -> Histogram:
    values = ch.samples.ravel()[_active(ch, exclude)]
    return Histogram(np.bincount(values, minlength=LEVELS).astype(np.int64))


def select_pp(h: Histogram) -> int:
    # argmax returns the first maximum, i.e. the smallest tied value
    return int(np.argmax(h.bins))


def select_zp(h: Histogram, pp: int, allow_adjacent_lp: bool = True) -> Tuple[int, bool]:
    """Nearest empty bin to ``pp`` (larger value on ties), else the lowest point.

    Returns ``(value, used_lp)``. The lowest point is the smallest value among
    the least frequent bins other than ``pp``; with ``allow_adjacent_lp=False``
    the two neighbours of ``pp`` are not candidates either.
    """
    if not 0 <= pp < LEVELS:
        raise NoUsableZp(f"peak point {pp} is outside 0..255")

    values = np.arange(LEVELS)
    empty = values[(h.bins == 0) & (values != pp)]
    if empty.size:
        distance = np.abs(empty - pp)
        return int(empty[distance == distance.min()].max()), False

    candidates = values != pp
    if not allow_adjacent_lp:
        candidates &= np.abs(values - pp) > 1
    if not candidates.any():
        raise NoUsableZp("no bin other than the peak point is available")
    counts = np.where(candidates, h.bins, np.iinfo(np.int64).max)
    return int(np.argmin(counts)), True


def round_capacity(h: Histogram) -> int:
    return int(h.bins[select_pp(h)])


def shift_and_embed(
    ch: Channel,
    pp: int,
    zp: int,
    used_lp: bool,
    payload_bits: Sequence[int],
    exclude: Optional[np.ndarray] = None,
) -> Tuple[Channel, RoundRecord]:
    """Embed one round. Fewer bits than the capacity are padded with zeros."""
    if pp == zp:
        raise InvalidSideInfo("pp and zp must differ")
    active = _active(ch, exclude)
    flat = ch.samples.ravel().astype(np.int16)
    bits = np.asarray(payload_bits, dtype=np.uint8).ravel()
    if bits.size and int(bits.max()) > 1:
        raise InvalidParameter("payload bits must be 0 or 1")

    positions = np.flatnonzero((flat == pp) & active)
    if bits.size > positions.size:
        raise CapacityExceeded(f"{bits.size} bits offered, capacity is {positions.size}")

    at_zp = (flat == zp) & active
    if used_lp:
        lp_map = np.flatnonzero(at_zp)
    elif at_zp.any():
        raise InvalidSideInfo(f"zero point {zp} is not empty")
    else:
        lp_map = np.empty(0, dtype=np.int64)

    direction = 1 if zp > pp else -1
    lo, hi = min(pp, zp), max(pp, zp)
    marked = flat.copy()
    marked[(flat > lo) & (flat < hi) & active] += direction
    marked[positions[:bits.size][bits == 1]] += direction

    record = RoundRecord(
        pp=pp,
        zp=zp,
        used_lp=used_lp,
        lp_map=lp_map.tolist(),
        bits_embedded=int(positions.size),
    )
    logger.debug(
        "Embedded round pp=%d zp=%d lp=%s capacity=%d payload=%d",
        pp, zp, used_lp, positions.size, bits.size,
    )
    return Channel(marked.reshape(ch.samples.shape).astype(np.uint8)), record


def _readable(
    ch: Channel,
    zp: int,
    used_lp: bool,
    lp_map: Sequence[int],
    exclude: Optional[np.ndarray],
) -> np.ndarray:
    active = _active(ch, exclude)
    flat = ch.samples.ravel()
    lp = np.asarray(lp_map, dtype=np.int64).ravel()
    if lp.size:
        if not used_lp:
            raise InvalidSideInfo("location map given for a round without a lowest point")
        if lp[0] < 0 or lp[-1] >= flat.size or np.any(np.diff(lp) <= 0):
            raise InvalidSideInfo("location map indices are not valid for this channel")
        if not active[lp].all() or np.any(flat[lp] != zp):
            raise InvalidSideInfo("location map does not point at lowest-point pixels")
    readable = active.copy()
    readable[lp] = False
    return readable


def read_round_bits(
    ch: Channel,
    pp: int,
    zp: int,
    used_lp: bool = False,
    lp_map: Sequence[int] = (),
    exclude: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Bits of one round in raster order, without touching the channel."""
    if pp == zp:
        raise InvalidSideInfo("pp and zp must differ")
    readable = _readable(ch, zp, used_lp, lp_map, exclude)
    flat = ch.samples.ravel().astype(np.int16)
    moved = pp + (1 if zp > pp else -1)
    positions = np.flatnonzero(((flat == pp) | (flat == moved)) & readable)
    return (flat[positions] == moved).astype(np.uint8)


def extract_and_unshift(
    ch: Channel,
    pp: int,
    zp: int,
    used_lp: bool,
    lp_map: Sequence[int],
    exclude: Optional[np.ndarray] = None,
) -> Tuple[Channel, np.ndarray]:
    """Read one round's bits in raster order and restore the channel."""
    bits = read_round_bits(ch, pp, zp, used_lp, lp_map, exclude)
    readable = _readable(ch, zp, used_lp, lp_map, exclude)
    flat = ch.samples.ravel().astype(np.int16)

    direction = 1 if zp > pp else -1
    if direction == 1:
        shifted = (flat > pp) & (flat <= zp)
    else:
        shifted = (flat >= zp) & (flat < pp)
    restored = flat.copy()
    restored[shifted & readable] -= direction

    return Channel(restored.reshape(ch.samples.shape).astype(np.uint8)), bits


def _byte_bits(value: int) -> np.ndarray:
    return np.unpackbits(np.array([value], dtype=np.uint8))


def write_lsb_sideinfo(ch: Channel, info: SideInfo) -> Tuple[Channel, np.ndarray]:
    """Store PP then ZP (MSB first) in the LSBs of the first 16 bottom-row pixels.

    Returns the marked channel and the 16 LSBs that were overwritten.
    """
    if ch.width < SIDE_INFO_PIXELS:
        raise ImageTooSmall(f"side information needs a width of at least {SIDE_INFO_PIXELS}")
    samples = ch.samples.copy()
    block = samples[-1, :SIDE_INFO_PIXELS]
    original = (block & 1).astype(np.uint8)
    pattern = np.concatenate([_byte_bits(info.pp), _byte_bits(info.zp)])
    samples[-1, :SIDE_INFO_PIXELS] = (block & 0xFE) | pattern
    return Channel(samples), original


def read_lsb_sideinfo(ch: Channel) -> SideInfo:
    if ch.width < SIDE_INFO_PIXELS:
        raise ImageTooSmall(f"side information needs a width of at least {SIDE_INFO_PIXELS}")
    lsbs = (ch.samples[-1, :SIDE_INFO_PIXELS] & 1).astype(np.uint8)
    pp, zp = np.packbits(lsbs).tolist()
    return SideInfo(pp=pp, zp=zp)


def restore_lsbs(ch: Channel, original_lsbs: Sequence[int]) -> Channel:
    """Put the overwritten side-information LSBs back."""
    lsbs = np.asarray(original_lsbs, dtype=np.uint8).ravel()
    if lsbs.size != SIDE_INFO_PIXELS or (lsbs.size and int(lsbs.max()) > 1):
        raise InvalidSideInfo("original LSB block must be 16 bits")
    samples = ch.samples.copy()
    samples[-1, :SIDE_INFO_PIXELS] = (samples[-1, :SIDE_INFO_PIXELS] & 0xFE) | lsbs
    return Channel(samples)
