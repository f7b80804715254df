"""Bit-exact wire encodings: bit streams, fixed-weight vectors, subspaces.

The signature formats pack every field back to back with no per-field byte
alignment; the whole blob is padded to a byte boundary at the very end.
Bits are written MSB-first within the stream.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


class ParseError(ValueError):
    """Malformed or truncated wire data."""


class BitWriter:
    def __init__(self):
        self._chunks = []   # (value, nbits)
        self._total = 0

    def write_uint(self, value: int, nbits: int):
        if value < 0 or (nbits < value.bit_length()):
            raise ValueError("value does not fit the field width")
        self._chunks.append((value, nbits))
        self._total += nbits

    def write_bytes(self, data: bytes):
        self.write_uint(int.from_bytes(data, "big"), 8 * len(data))

    def write_bits(self, bits: np.ndarray):
        """0/1 uint8 array, first entry becomes the most significant bit."""
        n = int(bits.shape[0])
        if n:
            val = int.from_bytes(np.packbits(bits, bitorder="big").tobytes(), "big")
            val >>= (-n) % 8
            self.write_uint(val, n)

    @property
    def bit_length(self) -> int:
        return self._total

    def getvalue(self) -> bytes:
        acc = 0
        for value, nbits in self._chunks:
            acc = (acc << nbits) | value
        pad = (-self._total) % 8
        acc <<= pad
        return acc.to_bytes((self._total + pad) // 8, "big")


class BitReader:
    def __init__(self, data: bytes):
        self._value = int.from_bytes(data, "big")
        self._nbits = 8 * len(data)
        self._pos = 0

    def read_uint(self, nbits: int) -> int:
        if self._pos + nbits > self._nbits:
            raise ParseError("truncated stream")
        shift = self._nbits - self._pos - nbits
        self._pos += nbits
        return (self._value >> shift) & ((1 << nbits) - 1)

    def read_bytes(self, n: int) -> bytes:
        return self.read_uint(8 * n).to_bytes(n, "big")

    def read_bits(self, n: int) -> np.ndarray:
        val = self.read_uint(n)
        raw = val.to_bytes((n + 7) // 8, "big")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="big")
        return bits[(-n) % 8:].copy()

    @property
    def bits_left(self) -> int:
        return self._nbits - self._pos


# ---------------------------------------------------------------------------
# Fixed-weight vectors: combinadic ranking
# ---------------------------------------------------------------------------
#
# A weight-w length-n vector costs ceil(log2 C(n, w)) bits, the term the
# signature size analysis books as ~0.5 n for the paper's rates.  The rank
# is the colexicographic index of the support set.

@lru_cache(maxsize=None)
def _binom_table(n: int, w: int):
    """table[i][p] = C(p, i) for 1 <= i <= w, 0 <= p <= n."""
    table = [None] * (w + 1)
    for i in range(1, w + 1):
        row = [0] * (n + 1)
        for p in range(i, n + 1):
            row[p] = math.comb(p, i)
        table[i] = row
    return table


def fixed_weight_bits(n: int, w: int) -> int:
    """ceil(log2 C(n, w)) -- width of a combinadic rank field."""
    return (math.comb(n, w) - 1).bit_length()


def encode_fixed_weight(v: np.ndarray, w: int) -> int:
    """Colex rank of the support of a weight-w vector."""
    positions = np.nonzero(v)[0]
    if positions.shape[0] != w:
        raise ValueError("vector weight mismatch")
    table = _binom_table(v.shape[0], w)
    return sum(table[i + 1][int(p)] for i, p in enumerate(positions))


def decode_fixed_weight(rank: int, n: int, w: int) -> np.ndarray:
    """Inverse of encode_fixed_weight; raises ParseError on out-of-range rank."""
    if rank >= math.comb(n, w):
        raise ParseError("fixed-weight rank out of range")
    table = _binom_table(n, w)
    out = np.zeros(n, dtype=np.uint8)
    p = n - 1
    for i in range(w, 0, -1):
        row = table[i]
        while row[p] > rank:
            p -= 1
        out[p] = 1
        rank -= row[p]
        p -= 1
    return out


# ---------------------------------------------------------------------------
# Rank-metric responses: support subspace + coordinates
# ---------------------------------------------------------------------------
#
# A rank-w vector over F2^m of length n is shipped as its support in reduced
# row echelon form plus per-coordinate combinations: m bits of pivot mask,
# w*(m-w) echelon entries (non-pivot columns, fixed size), and n*w
# combination bits -- the w(m+n-w) budget of the size tables plus the m-bit
# pivot mask, which the documented reconciliation accounts for.

def encode_subspace(basis: list, m: int, w: int, writer: BitWriter):
    if len(basis) != w:
        raise ValueError("basis dimension mismatch")
    pivots = [b.bit_length() - 1 for b in basis]  # descending, unique
    mask = 0
    for p in pivots:
        mask |= 1 << p
    writer.write_uint(mask, m)
    nonpivot = [c for c in range(m - 1, -1, -1) if not mask >> c & 1]
    for b in basis:
        for c in nonpivot:
            writer.write_uint(b >> c & 1, 1)


def decode_subspace(reader: BitReader, m: int, w: int) -> list:
    mask = reader.read_uint(m)
    if bin(mask).count("1") != w:
        raise ParseError("bad pivot mask")
    pivots = sorted([c for c in range(m) if mask >> c & 1], reverse=True)
    nonpivot = [c for c in range(m - 1, -1, -1) if not mask >> c & 1]
    basis = []
    for p in pivots:
        b = 1 << p
        for c in nonpivot:
            if reader.read_uint(1):
                b |= 1 << c
        if b.bit_length() - 1 != p:
            raise ParseError("echelon row exceeds its pivot")
        basis.append(b)
    return basis


def encode_rank_vector(vec: np.ndarray, basis: list, m: int, w: int, writer: BitWriter):
    """vec entries must lie in span(basis); writes the combination bits."""
    pivots = [b.bit_length() - 1 for b in basis]
    for x in vec:
        x = int(x)
        combo = 0
        for t, b in enumerate(basis):
            if x >> pivots[t] & 1:
                combo |= 1 << t
                x ^= b
        if x:
            raise ValueError("coordinate outside the claimed support")
        writer.write_uint(combo, w)


def decode_rank_vector(reader: BitReader, basis: list, n: int, w: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.uint64)
    for j in range(n):
        combo = reader.read_uint(w)
        val = 0
        for t in range(w):
            if combo >> t & 1:
                val ^= basis[t]
        out[j] = val
    return out


def rank_vector_bits(m: int, n: int, w: int) -> int:
    return m + w * (m - w) + n * w


def permutation_bits(n: int) -> int:
    return n * max((n - 1).bit_length(), 1)


def encode_permutation(perm: np.ndarray, writer: BitWriter):
    width = max((perm.shape[0] - 1).bit_length(), 1)
    for img in perm:
        writer.write_uint(int(img), width)


def decode_permutation(reader: BitReader, n: int) -> np.ndarray:
    width = max((n - 1).bit_length(), 1)
    perm = np.empty(n, dtype=np.int32)
    seen = set()
    for i in range(n):
        v = reader.read_uint(width)
        if v >= n or v in seen:
            raise ParseError("not a permutation")
        seen.add(v)
        perm[i] = v
    return perm


def fq_vector_bits(n: int, q: int) -> int:
    return n * (q - 1).bit_length()


def encode_fq_vector(vec: np.ndarray, q: int, writer: BitWriter):
    width = (q - 1).bit_length()
    for x in vec:
        writer.write_uint(int(x), width)


def decode_fq_vector(reader: BitReader, n: int, q: int) -> np.ndarray:
    width = (q - 1).bit_length()
    out = np.empty(n, dtype=np.int32)
    for i in range(n):
        v = reader.read_uint(width)
        if v >= q:
            raise ParseError("field element out of range")
        out[i] = v
    return out
