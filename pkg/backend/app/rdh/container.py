"""Everything that travels inside a channel's embedded payload.

A channel carries one sealed layer container, split across hiding rounds.
Each round's bits start with a chain header, MSB first:

    terminal:1  used_lp:1  lp_count:u32  lp_index:u32 * lp_count
    terminal=1: original_lsbs:16
    terminal=0: prev_pp:u8  prev_zp:u8  prev_bits:u32
    fragment_bits:u32

followed by ``fragment_bits`` body bits and zero padding up to the round's
capacity. The LSB side information holds the last round's PP/ZP; each
header then names the round before it, and round 1 ends the chain and
keeps the 16 LSBs the side information replaced. A round's own location
map is in its own header because it is known before the round is embedded
and is needed again only after the round's bits have been read.

Container bytes: ``b"SPNK"``, version u8, layer kind u8, original layer
width u32, the compressed bitmap, then CRC-32 (big-endian) of everything
before it.
"""

import struct
import zlib
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np
from bitarray import bitarray
from bitarray.util import ba2int, int2ba, zeros

from app.codec.bitmap import CompressedBitmap
from app.core.exceptions import (
    BadCrc,
    BadMagic,
    BadVersion,
    CorruptStream,
    MalformedHeader,
    RoundTooSmall,
)
from app.models.records import LayerKind, RoundRecord

MAGIC = b"SPNK"
VERSION = 1
PREFIX = struct.Struct(">4sBBI")
CRC = struct.Struct(">I")
MIN_CONTAINER = PREFIX.size + 16 + CRC.size

KIND_CODES = {"binary": 0, "tri": 1}
KIND_NAMES = {code: name for name, code in KIND_CODES.items()}

LSB_BITS = 16
U8 = 8
U32 = 32


@dataclass(frozen=True)
class PayloadContainer:
    layer_kind: LayerKind
    compressed: CompressedBitmap
    original_layer_width: int
    version: int = VERSION


@dataclass(frozen=True)
class RoundChainHeader:
    terminal: bool
    used_lp: bool = False
    lp_map: Tuple[int, ...] = ()
    original_lsbs: Tuple[int, ...] = ()
    prev_pp: int = 0
    prev_zp: int = 0
    prev_bits_embedded: int = 0
    fragment_bits: int = 0

    def bit_length(self) -> int:
        size = 1 + 1 + U32 + U32 * len(self.lp_map) + U32
        return size + (LSB_BITS if self.terminal else 2 * U8 + U32)

    def to_bits(self) -> bitarray:
        out = bitarray(endian="big")
        out.append(int(self.terminal))
        out.append(int(self.used_lp))
        out.extend(int2ba(len(self.lp_map), length=U32, endian="big"))
        for index in self.lp_map:
            out.extend(int2ba(index, length=U32, endian="big"))
        if self.terminal:
            out.extend(bitarray(list(self.original_lsbs), endian="big"))
        else:
            out.extend(int2ba(self.prev_pp, length=U8, endian="big"))
            out.extend(int2ba(self.prev_zp, length=U8, endian="big"))
            out.extend(int2ba(self.prev_bits_embedded, length=U32, endian="big"))
        out.extend(int2ba(self.fragment_bits, length=U32, endian="big"))
        return out


class _BitCursor:
    def __init__(self, bits: bitarray):
        self.bits = bits
        self.pos = 0

    def take(self, n: int) -> bitarray:
        if self.pos + n > len(self.bits):
            raise MalformedHeader("round header runs past the embedded bits")
        chunk = self.bits[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def uint(self, n: int) -> int:
        return ba2int(self.take(n))


def build_round_payload(
    round_index: int,
    previous: Optional[RoundRecord],
    body_remainder: bitarray,
    capacity: int,
    *,
    used_lp: bool = False,
    lp_map: Sequence[int] = (),
    original_lsbs: Sequence[int] = (),
) -> Tuple[bitarray, bitarray]:
    """Lay out one round: header, as much body as fits, zero padding.

    Returns exactly ``capacity`` bits and the body bits left for later rounds.
    """
    if round_index == 1:
        if len(original_lsbs) != LSB_BITS:
            raise MalformedHeader("round 1 must carry the 16 original LSBs")
        header = RoundChainHeader(
            terminal=True,
            used_lp=used_lp,
            lp_map=tuple(lp_map),
            original_lsbs=tuple(int(b) for b in original_lsbs),
        )
    else:
        if previous is None:
            raise MalformedHeader(f"round {round_index} needs the previous round's record")
        header = RoundChainHeader(
            terminal=False,
            used_lp=used_lp,
            lp_map=tuple(lp_map),
            prev_pp=previous.pp,
            prev_zp=previous.zp,
            prev_bits_embedded=previous.bits_embedded,
        )

    header_bits = header.bit_length()
    if header_bits > capacity:
        raise RoundTooSmall(header_bits, capacity)
    take = min(capacity - header_bits, len(body_remainder))
    header = replace(header, fragment_bits=take)

    out = header.to_bits()
    out.extend(body_remainder[:take])
    out.extend(zeros(capacity - len(out), endian="big"))
    return out, body_remainder[take:]


def parse_round_payload(
    bits: bitarray, declared_len: Optional[int] = None
) -> Tuple[RoundChainHeader, bitarray]:
    """Inverse of ``build_round_payload``; bits past the fragment are padding."""
    if declared_len is not None:
        bits = bits[:declared_len]
    cursor = _BitCursor(bits)
    terminal = bool(cursor.uint(1))
    used_lp = bool(cursor.uint(1))
    lp_count = cursor.uint(U32)
    if lp_count * U32 > len(bits):
        raise MalformedHeader(f"location map of {lp_count} entries cannot fit")
    if lp_count and not used_lp:
        raise MalformedHeader("location map present without a lowest point")
    lp_map = tuple(cursor.uint(U32) for _ in range(lp_count))
    if any(a >= b for a, b in zip(lp_map, lp_map[1:])):
        raise MalformedHeader("location map indices are not increasing")

    if terminal:
        original_lsbs = tuple(cursor.take(LSB_BITS).tolist())
        header = RoundChainHeader(
            terminal=True, used_lp=used_lp, lp_map=lp_map, original_lsbs=original_lsbs
        )
    else:
        header = RoundChainHeader(
            terminal=False,
            used_lp=used_lp,
            lp_map=lp_map,
            prev_pp=cursor.uint(U8),
            prev_zp=cursor.uint(U8),
            prev_bits_embedded=cursor.uint(U32),
        )
    fragment_bits = cursor.uint(U32)
    fragment = cursor.take(fragment_bits)
    return replace(header, fragment_bits=fragment_bits), fragment


def header_bits_for(round_index: int, lp_count: int) -> int:
    """Size of a round's chain header before any body bits."""
    header = RoundChainHeader(terminal=round_index == 1, lp_map=(0,) * lp_count)
    return header.bit_length()


def bytes_to_bits(data: bytes) -> bitarray:
    out = bitarray(endian="big")
    out.frombytes(data)
    return out


def bits_to_bytes(bits: bitarray) -> bytes:
    if len(bits) % 8:
        raise MalformedHeader(f"reassembled body of {len(bits)} bits is not whole bytes")
    return bits.tobytes()


def bits_to_array(bits: bitarray) -> np.ndarray:
    return np.frombuffer(bits.unpack(), dtype=np.uint8)


def array_to_bits(values: np.ndarray) -> bitarray:
    out = bitarray(endian="big")
    out.pack(np.asarray(values, dtype=np.uint8).tobytes())
    return out


def seal_layer(kind: LayerKind, compressed: CompressedBitmap, original_width: int) -> bytes:
    head = PREFIX.pack(MAGIC, VERSION, KIND_CODES[kind], original_width)
    data = head + compressed.to_bytes()
    return data + CRC.pack(zlib.crc32(data) & 0xFFFFFFFF)


def seal_container(
    binary_compressed: CompressedBitmap,
    tri_compressed: CompressedBitmap,
    tri_width: int,
) -> Tuple[bytes, bytes]:
    """Containers for the R channel (binary layer) and the B channel (3-bit layer)."""
    return (
        seal_layer("binary", binary_compressed, binary_compressed.width),
        seal_layer("tri", tri_compressed, tri_width),
    )


def open_container(data: bytes) -> PayloadContainer:
    if len(data) < MIN_CONTAINER:
        raise BadMagic(f"{len(data)} bytes is too short for a layer container")
    (expected,) = CRC.unpack_from(data, len(data) - CRC.size)
    body = data[:-CRC.size]
    if zlib.crc32(body) & 0xFFFFFFFF != expected:
        raise BadCrc("layer container checksum mismatch")

    magic, version, kind_code, original_width = PREFIX.unpack_from(body)
    if magic != MAGIC:
        raise BadMagic("not a layer container")
    if version != VERSION:
        raise BadVersion(f"container version {version} is not supported")
    if kind_code not in KIND_NAMES:
        raise MalformedHeader(f"unknown layer kind {kind_code}")
    try:
        compressed, end = CompressedBitmap.read_from(body, PREFIX.size)
    except CorruptStream as e:
        raise MalformedHeader(str(e)) from e
    if end != len(body):
        raise MalformedHeader("unexpected bytes after the compressed layer")

    kind = KIND_NAMES[kind_code]
    planes = 3 if kind == "tri" else 1
    if original_width < 1 or compressed.width != planes * original_width:
        raise MalformedHeader(
            f"{kind} layer of width {original_width} cannot be a {compressed.width}-wide bitmap"
        )
    return PayloadContainer(
        layer_kind=kind,
        compressed=compressed,
        original_layer_width=original_width,
        version=version,
    )
