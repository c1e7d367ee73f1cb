"""Adaptive binary range coder.

A 32-bit carry-propagating range coder driven by per-context adaptive
probabilities. Each context keeps a 12-bit estimate of P(bit == 0),
starting from 1/2 and moving 1/32 of the way toward every coded bit.

The encoder emits one leading zero byte (the carry slot of the first
output byte) and flushes four more bytes at the end, so a body of N bytes
is consumed exactly by the decoder: reading past the end or leaving bytes
behind both mean the stream is corrupt.
"""

from typing import List

from app.core.exceptions import CorruptStream

PROB_BITS = 12
PROB_ONE = 1 << PROB_BITS
PROB_INIT = PROB_ONE // 2
ADAPT_SHIFT = 5

TOP = 1 << 24
MASK32 = 0xFFFFFFFF


def initial_states(count: int) -> List[int]:
    """A fresh set of context probabilities, all at the uniform estimate."""
    return [PROB_INIT] * count


class RangeEncoder:
    def __init__(self, contexts: int):
        self.probs = initial_states(contexts)
        self.low = 0
        self.range = MASK32
        self.cache = 0
        self.cache_size = 1
        self.data = bytearray()

    def encode_bit(self, ctx: int, bit: int) -> None:
        p = self.probs[ctx]
        bound = (self.range >> PROB_BITS) * p
        if bit:
            self.low += bound
            self.range -= bound
            self.probs[ctx] = p - (p >> ADAPT_SHIFT)
        else:
            self.range = bound
            self.probs[ctx] = p + ((PROB_ONE - p) >> ADAPT_SHIFT)
        while self.range < TOP:
            self.range = (self.range << 8) & MASK32
            self._shift_low()

    def _shift_low(self) -> None:
        low = self.low
        if low < 0xFF000000 or low > MASK32:
            carry = low >> 32
            temp = self.cache
            while True:
                self.data.append((temp + carry) & 0xFF)
                temp = 0xFF
                self.cache_size -= 1
                if self.cache_size == 0:
                    break
            self.cache = (low >> 24) & 0xFF
        self.cache_size += 1
        self.low = (low & 0x00FFFFFF) << 8

    def finish(self) -> bytes:
        for _ in range(5):
            self._shift_low()
        return bytes(self.data)


class RangeDecoder:
    def __init__(self, data: bytes, contexts: int):
        if len(data) < 5:
            raise CorruptStream("arithmetic-coded body is truncated")
        if data[0] != 0:
            raise CorruptStream("arithmetic-coded body has a bad lead byte")
        self.probs = initial_states(contexts)
        self.data = data
        self.pos = 5
        self.range = MASK32
        self.code = int.from_bytes(data[1:5], "big")
        if self.code == MASK32:
            raise CorruptStream("arithmetic decoder desynchronised")

    def decode_bit(self, ctx: int) -> int:
        p = self.probs[ctx]
        bound = (self.range >> PROB_BITS) * p
        if self.code < bound:
            self.range = bound
            self.probs[ctx] = p + ((PROB_ONE - p) >> ADAPT_SHIFT)
            bit = 0
        else:
            self.code -= bound
            self.range -= bound
            self.probs[ctx] = p - (p >> ADAPT_SHIFT)
            bit = 1
        while self.range < TOP:
            if self.pos >= len(self.data):
                raise CorruptStream("arithmetic-coded body is truncated")
            self.range = (self.range << 8) & MASK32
            self.code = ((self.code << 8) | self.data[self.pos]) & MASK32
            self.pos += 1
        if self.code >= self.range:
            raise CorruptStream("arithmetic decoder desynchronised")
        return bit

    def finish(self) -> None:
        if self.pos != len(self.data):
            raise CorruptStream(
                f"{len(self.data) - self.pos} trailing bytes after the coded bitmap"
            )
