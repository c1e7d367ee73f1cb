import struct
import zlib

import numpy as np
import pytest
from bitarray import bitarray
from bitarray.util import urandom

from app.codec.bitmap import encode_bitmap
from app.core.exceptions import (
    BadCrc,
    BadMagic,
    BadVersion,
    MalformedHeader,
    RoundTooSmall,
)
from app.models.images import BiLevelImage, TriLevelLayer
from app.models.records import RoundRecord
from app.rdh.container import (
    array_to_bits,
    bits_to_array,
    bits_to_bytes,
    build_round_payload,
    bytes_to_bits,
    header_bits_for,
    open_container,
    parse_round_payload,
    seal_container,
)
from app.rdh.layers import decompose_3bit

LSBS = [1, 0] * 8


def sealed(width=1, height=1):
    binary = BiLevelImage(np.zeros((height, width), dtype=np.uint8))
    tri = TriLevelLayer(np.zeros((height, width), dtype=np.uint8))
    return seal_container(encode_bitmap(binary), encode_bitmap(decompose_3bit(tri)), width)


def reseal(body: bytes) -> bytes:
    return body + struct.pack(">I", zlib.crc32(body) & 0xFFFFFFFF)


class TestHeaderSizes:
    def test_terminal_and_chained(self):
        assert header_bits_for(1, 0) == 82
        assert header_bits_for(2, 0) == 114
        assert header_bits_for(3, 2) == 114 + 64


class TestRoundPayload:
    def test_body_fits_in_first_round(self):
        body = urandom(100, endian="big")
        bits, leftover = build_round_payload(1, None, body, 200, original_lsbs=LSBS)
        assert len(bits) == 200
        assert len(leftover) == 0

        header, fragment = parse_round_payload(bits)
        assert header.terminal
        assert list(header.original_lsbs) == LSBS
        assert header.fragment_bits == 100
        assert fragment == body

    def test_body_spills_over(self):
        body = urandom(300, endian="big")
        bits, leftover = build_round_payload(1, None, body, 200, original_lsbs=LSBS)
        assert len(bits) == 200
        assert len(leftover) == 300 - (200 - 82)
        _, fragment = parse_round_payload(bits)
        assert fragment + leftover == body

    def test_header_does_not_fit(self):
        previous = RoundRecord(pp=3, zp=4, bits_embedded=10)
        with pytest.raises(RoundTooSmall) as exc:
            build_round_payload(2, previous, bitarray("1"), 8, lp_map=[1, 2, 3], used_lp=True)
        assert exc.value.header_bits == 114 + 96
        assert exc.value.capacity == 8

    def test_chained_header_names_previous_round(self):
        previous = RoundRecord(pp=17, zp=20, bits_embedded=4242)
        bits, _ = build_round_payload(
            2, previous, bitarray("1011"), 200, used_lp=True, lp_map=[4, 99]
        )
        header, fragment = parse_round_payload(bits)
        assert not header.terminal
        assert (header.prev_pp, header.prev_zp, header.prev_bits_embedded) == (17, 20, 4242)
        assert header.used_lp and header.lp_map == (4, 99)
        assert fragment == bitarray("1011")

    def test_declared_length_drops_padding(self):
        bits, _ = build_round_payload(1, None, bitarray("11"), 120, original_lsbs=LSBS)
        header, fragment = parse_round_payload(bits, declared_len=84)
        assert fragment == bitarray("11")

    def test_round_one_needs_lsbs(self):
        with pytest.raises(MalformedHeader):
            build_round_payload(1, None, bitarray("1"), 200)

    def test_later_rounds_need_previous_record(self):
        with pytest.raises(MalformedHeader):
            build_round_payload(2, None, bitarray("1"), 200)

    def test_truncated_header(self):
        with pytest.raises(MalformedHeader):
            parse_round_payload(bitarray("10" + "0" * 20))

    def test_fragment_longer_than_round(self):
        bits, _ = build_round_payload(1, None, bitarray("1" * 10), 100, original_lsbs=LSBS)
        with pytest.raises(MalformedHeader):
            parse_round_payload(bits, declared_len=85)

    def test_location_map_must_increase(self):
        previous = RoundRecord(pp=1, zp=2, bits_embedded=1)
        bits, _ = build_round_payload(2, previous, bitarray(), 200, used_lp=True, lp_map=[5, 9])
        lp_start = 2 + 32
        bits[lp_start:lp_start + 32], bits[lp_start + 32:lp_start + 64] = (
            bits[lp_start + 32:lp_start + 64],
            bits[lp_start:lp_start + 32],
        )
        with pytest.raises(MalformedHeader):
            parse_round_payload(bits)


@pytest.mark.parametrize("rounds", [1, 2, 5, 17, 64])
def test_chain_reassembles_body(rounds, rng):
    body = bytes_to_bits(rng.integers(0, 256, size=rounds * 12, dtype=np.uint8).tobytes())
    remaining = body
    streams = []
    previous = None
    for index in range(1, rounds + 1):
        header = header_bits_for(index, 0)
        if index == rounds:
            capacity = header + len(remaining) + int(rng.integers(0, 40))
        else:
            capacity = header + int(rng.integers(0, 2 * len(body) // rounds + 1))
        bits, remaining = build_round_payload(
            index, previous, remaining, capacity, original_lsbs=LSBS
        )
        streams.append(bits)
        previous = RoundRecord(pp=index % 200, zp=index % 200 + 1, bits_embedded=capacity)
    assert len(remaining) == 0

    fragments = []
    expected_bits = None
    for bits in reversed(streams):
        if expected_bits is not None:
            assert len(bits) == expected_bits
        header, fragment = parse_round_payload(bits)
        fragments.append(fragment)
        expected_bits = header.prev_bits_embedded
    assert header.terminal

    rebuilt = bitarray(endian="big")
    for fragment in reversed(fragments):
        rebuilt.extend(fragment)
    assert bits_to_bytes(rebuilt) == bits_to_bytes(body)


class TestBitConversions:
    def test_bytes_and_arrays(self):
        bits = bytes_to_bits(b"\xa5")
        assert bits_to_array(bits).tolist() == [1, 0, 1, 0, 0, 1, 0, 1]
        assert array_to_bits(np.array([1, 0, 1, 0, 0, 1, 0, 1])) == bits

    def test_partial_byte(self):
        with pytest.raises(MalformedHeader):
            bits_to_bytes(bitarray("101"))


class TestContainer:
    def test_round_trip(self):
        r_bytes, b_bytes = sealed()
        binary = open_container(r_bytes)
        tri = open_container(b_bytes)
        assert binary.layer_kind == "binary" and binary.version == 1
        assert tri.layer_kind == "tri"
        assert tri.original_layer_width == 1
        assert tri.compressed.width == 3

    def test_layout(self):
        r_bytes, _ = sealed()
        assert r_bytes[:4] == b"SPNK"
        assert r_bytes[4] == 1
        assert r_bytes[5] == 0
        assert r_bytes[6:10] == b"\x00\x00\x00\x01"
        assert r_bytes[10:14] == b"SBC1"
        (crc,) = struct.unpack(">I", r_bytes[-4:])
        assert crc == zlib.crc32(r_bytes[:-4])

    def test_tri_records_layer_width(self):
        _, b_bytes = sealed(width=7, height=3)
        container = open_container(b_bytes)
        assert container.original_layer_width == 7
        assert container.compressed.width == 21

    def test_deterministic(self):
        assert sealed(5, 4) == sealed(5, 4)

    def test_every_single_byte_corruption_is_caught(self):
        for data in sealed(9, 5):
            for pos in range(len(data)):
                for flip in (0x01, 0x80, 0xFF):
                    damaged = bytearray(data)
                    damaged[pos] ^= flip
                    with pytest.raises(BadCrc):
                        open_container(bytes(damaged))

    def test_random_single_byte_corruption(self, rng):
        r_bytes, b_bytes = sealed(12, 10)
        for trial in range(10_000):
            data = bytearray(r_bytes if trial % 2 else b_bytes)
            pos = int(rng.integers(len(data)))
            data[pos] ^= int(rng.integers(1, 256))
            with pytest.raises(BadCrc):
                open_container(bytes(data))

    def test_too_short(self):
        with pytest.raises(BadMagic):
            open_container(b"SPNK")

    def test_bad_magic_with_valid_crc(self):
        r_bytes, _ = sealed()
        with pytest.raises(BadMagic):
            open_container(reseal(b"XPNK" + r_bytes[4:-4]))

    def test_unknown_version(self):
        r_bytes, _ = sealed()
        with pytest.raises(BadVersion):
            open_container(reseal(r_bytes[:4] + b"\x02" + r_bytes[5:-4]))

    def test_unknown_kind(self):
        r_bytes, _ = sealed()
        with pytest.raises(MalformedHeader):
            open_container(reseal(r_bytes[:5] + b"\x07" + r_bytes[6:-4]))

    def test_width_must_match_bitmap(self):
        _, b_bytes = sealed(width=4)
        with pytest.raises(MalformedHeader):
            open_container(reseal(b_bytes[:6] + struct.pack(">I", 5) + b_bytes[10:-4]))

    def test_trailing_bytes_inside_container(self):
        r_bytes, _ = sealed()
        with pytest.raises(MalformedHeader):
            open_container(reseal(r_bytes[:-4] + b"\x00"))
