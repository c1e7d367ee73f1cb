import pytest
from hypothesis import given, settings, strategies as st

from app.codec.range_coder import PROB_INIT, RangeDecoder, RangeEncoder, initial_states
from app.core.exceptions import CorruptStream


def encode(bits, contexts):
    encoder = RangeEncoder(max(contexts) + 1 if contexts else 1)
    for ctx, bit in zip(contexts, bits):
        encoder.encode_bit(ctx, bit)
    return encoder.finish()


def test_initial_states_are_uniform():
    assert initial_states(3) == [PROB_INIT] * 3


def test_single_one_bit_golden():
    assert encode([1], [0]) == bytes.fromhex("007ffff800")


def test_empty_stream_is_five_bytes():
    data = RangeEncoder(1).finish()
    assert data == bytes(5)
    RangeDecoder(data, 1).finish()


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 1)), max_size=400))
def test_decoder_recovers_every_bit(pairs):
    contexts = [ctx for ctx, _ in pairs]
    bits = [bit for _, bit in pairs]
    data = encode(bits, contexts)

    decoder = RangeDecoder(data, max(contexts) + 1 if contexts else 1)
    assert [decoder.decode_bit(ctx) for ctx in contexts] == bits
    decoder.finish()


def test_skewed_source_compresses():
    bits = [0] * 5000 + [1] * 20
    data = encode(bits, [0] * len(bits))
    assert len(data) < 60


def test_bad_lead_byte():
    with pytest.raises(CorruptStream):
        RangeDecoder(b"\x01\x00\x00\x00\x00", 1)


def test_truncated_body():
    with pytest.raises(CorruptStream):
        RangeDecoder(b"\x00\x7f", 1)


def test_trailing_bytes():
    data = encode([1], [0]) + b"\x00"
    decoder = RangeDecoder(data, 1)
    decoder.decode_bit(0)
    with pytest.raises(CorruptStream):
        decoder.finish()


def test_reading_past_the_end():
    data = encode([0, 1, 1, 0] * 50, [0] * 200)
    decoder = RangeDecoder(data[:6], 1)
    with pytest.raises(CorruptStream):
        for _ in range(200):
            decoder.decode_bit(0)
