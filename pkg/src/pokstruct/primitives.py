"""Hash-based commitments, PRG expansion, GGM seed trees and seeded samplers.

Everything here is a pure function of its inputs.  The single symmetric
primitive is SHAKE256; each use is separated by a leading domain byte:

    0x01  per-index commitment (com1_i)
    0x02  aggregated first commitment (com1)
    0x03  second commitment (com2)
    0x04  first Fiat-Shamir challenge hash
    0x05  second Fiat-Shamir challenge hash
    0x06  seed-tree node derivation
    0x07  PRG / stream expansion

Seeds are 16 bytes (lambda = 128), commitments and salts 32 bytes (2*lambda).
The tree and all samplers absorb a caller-provided context string (salt,
repetition index, ...) so that no two expansions in a signature collide.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

from .fields import gf2_batch_full_rank, gf2_rank

LAMBDA_BYTES = 16
DIGEST_BYTES = 32
SALT_BYTES = 32

DOM_COM1_LEAF = 0x01
DOM_COM1_ROOT = 0x02
DOM_COM2 = 0x03
DOM_CHALLENGE1 = 0x04
DOM_CHALLENGE2 = 0x05
DOM_TREE = 0x06
DOM_PRG = 0x07


def _frame(domain: int, ctx: bytes, payload: bytes) -> bytes:
    return bytes([domain]) + struct.pack(">H", len(ctx)) + ctx + payload


def shake(domain: int, ctx: bytes, payload: bytes, n: int = DIGEST_BYTES) -> bytes:
    return hashlib.shake_256(_frame(domain, ctx, payload)).digest(n)


def commit(domain: int, ctx: bytes, randomness: bytes, message: bytes) -> bytes:
    """Com(r, m): 2*lambda-bit hash commitment with explicit randomness."""
    return shake(domain, ctx, randomness + message, DIGEST_BYTES)


def prg(seed: bytes, domain: bytes, nbytes: int) -> bytes:
    """Deterministic stream: distinct `domain` strings give independent streams."""
    return hashlib.shake_256(_frame(DOM_PRG, domain, seed)).digest(nbytes)


class XofReader:
    """Incremental reader over a SHAKE256 stream.

    hashlib exposes only one-shot squeezing, so the reader re-digests with a
    geometrically growing length; SHAKE output is prefix-stable, which keeps
    every previously served byte unchanged.
    """

    def __init__(self, seed: bytes, domain: bytes, initial: int = 256):
        self._input = _frame(DOM_PRG, domain, seed)
        self._pos = 0
        self._buf = hashlib.shake_256(self._input).digest(initial)

    def read(self, n: int) -> bytes:
        end = self._pos + n
        if end > len(self._buf):
            size = max(2 * len(self._buf), end)
            self._buf = hashlib.shake_256(self._input).digest(size)
        out = self._buf[self._pos:end]
        self._pos = end
        return out

    def read_u64_array(self, count: int) -> np.ndarray:
        return np.frombuffer(self.read(8 * count), dtype=np.uint64)


# ---------------------------------------------------------------------------
# GGM seed tree
# ---------------------------------------------------------------------------
#
# Balanced binary tree over an arbitrary leaf count.  A node is addressed by
# its leaf range [lo, hi); children split at lo + ceil(size/2).  Children are
# derived from the parent by one SHAKE call, so revealing the co-path of a
# hidden set discloses exactly the complementary leaves.

def _tree_children(lo: int, hi: int):
    mid = lo + (hi - lo + 1) // 2
    return (lo, mid), (mid, hi)


def _derive_children(seed: bytes, ctx: bytes, lo: int, hi: int):
    blob = shake(DOM_TREE, ctx, struct.pack(">II", lo, hi) + seed, 2 * LAMBDA_BYTES)
    return blob[:LAMBDA_BYTES], blob[LAMBDA_BYTES:]


class SeedTree:
    """GGM tree: leaves reproducible from the root, all-but-hidden openings."""

    def __init__(self, root: bytes, leaves: int, ctx: bytes = b""):
        if leaves < 1:
            raise ValueError("tree needs at least one leaf")
        self.leaves = leaves
        self.ctx = ctx
        self.nodes = {(0, leaves): root}
        stack = [(0, leaves)]
        while stack:
            lo, hi = stack.pop()
            if hi - lo == 1:
                continue
            left, right = _tree_children(lo, hi)
            ls, rs = _derive_children(self.nodes[(lo, hi)], ctx, lo, hi)
            self.nodes[left] = ls
            self.nodes[right] = rs
            stack.extend([left, right])

    def leaf(self, i: int) -> bytes:
        return self.nodes[(i, i + 1)]

    def all_leaves(self) -> list:
        return [self.leaf(i) for i in range(self.leaves)]

    def open_except(self, hidden) -> list:
        """Co-path covering every leaf not in `hidden`, in DFS order.

        Returns a list of (lo, hi, seed) triples; for a single hidden leaf of
        a 2^d-leaf tree this is exactly d nodes.
        """
        hidden = set(hidden)
        if not hidden:
            return [(0, self.leaves, self.nodes[(0, self.leaves)])]
        out = []
        stack = [(0, self.leaves)]
        while stack:
            lo, hi = stack.pop()
            marked = any(lo <= h < hi for h in hidden)
            if not marked:
                out.append((lo, hi, self.nodes[(lo, hi)]))
            elif hi - lo > 1:
                left, right = _tree_children(lo, hi)
                stack.append(right)
                stack.append(left)
        return out


def tree_copath_ranges(leaves: int, hidden) -> list:
    """Node ranges of open_except, derivable without any seed material."""
    hidden = set(hidden)
    out = []
    stack = [(0, leaves)]
    while stack:
        lo, hi = stack.pop()
        marked = any(lo <= h < hi for h in hidden)
        if not marked:
            out.append((lo, hi))
        elif hi - lo > 1:
            left, right = _tree_children(lo, hi)
            stack.append(right)
            stack.append(left)
    return out


def tree_recover(opening: list, leaves: int, hidden, ctx: bytes = b"") -> dict:
    """Rebuild all non-hidden leaves from an opening.

    `opening` is a list of (lo, hi, seed).  Raises ValueError when the node
    set does not exactly cover the complement of `hidden`.
    """
    hidden = set(hidden)
    expected = tree_copath_ranges(leaves, hidden)
    got = [(lo, hi) for lo, hi, _ in opening]
    if got != expected:
        raise ValueError("malformed seed-tree opening")
    out = {}
    for lo, hi, seed in opening:
        stack = [(lo, hi, seed)]
        while stack:
            a, b, s = stack.pop()
            if b - a == 1:
                out[a] = s
                continue
            (al, bl), (ar, br) = _tree_children(a, b)
            ls, rs = _derive_children(s, ctx, a, b)
            stack.append((al, bl, ls))
            stack.append((ar, br, rs))
    return out


# ---------------------------------------------------------------------------
# Samplers
# ---------------------------------------------------------------------------

def sample_permutation(reader: XofReader, n: int) -> np.ndarray:
    """Uniform permutation of [0, n) as an int32 image array.

    Sorts fresh 64-bit keys; duplicate keys (probability ~ n^2/2^64) trigger
    a full redraw, so the output is exactly uniform and seed-deterministic.
    """
    if n < 1:
        raise ValueError("n must be positive")
    while True:
        keys = reader.read_u64_array(n)
        order = np.argsort(keys, kind="stable")
        if n == 1 or np.all(keys[order[1:]] != keys[order[:-1]]):
            perm = np.empty(n, dtype=np.int32)
            perm[order] = np.arange(n, dtype=np.int32)
            return perm


def sample_permutations(reader: XofReader, count: int, n: int) -> np.ndarray:
    """`count` independent permutations from one stream, batched argsort."""
    keys = reader.read_u64_array(count * n).reshape(count, n)
    order = np.argsort(keys, kind="stable", axis=1)
    perms = np.empty((count, n), dtype=np.int32)
    rows = np.arange(count)[:, None]
    perms[rows, order] = np.arange(n, dtype=np.int32)[None, :]
    sorted_keys = np.take_along_axis(keys, order, axis=1)
    bad = np.nonzero(np.any(sorted_keys[:, 1:] == sorted_keys[:, :-1], axis=1))[0]
    for i in bad:
        perms[i] = sample_permutation(reader, n)
    return perms


def sample_f2_vector(reader: XofReader, n: int) -> np.ndarray:
    raw = np.frombuffer(reader.read((n + 7) // 8), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].copy()


def sample_f2_matrix(reader: XofReader, rows: int, cols: int) -> np.ndarray:
    raw = np.frombuffer(reader.read(rows * ((cols + 7) // 8)), dtype=np.uint8)
    bits = np.unpackbits(raw.reshape(rows, -1), axis=1, bitorder="little")
    return bits[:, :cols].copy()


def sample_mod(reader: XofReader, bound: int) -> int:
    """Uniform integer in [0, bound) by rejection on ceil(log2) bits."""
    nbits = max((bound - 1).bit_length(), 1)
    nbytes = (nbits + 7) // 8
    mask = (1 << nbits) - 1
    while True:
        v = int.from_bytes(reader.read(nbytes), "big") & mask
        if v < bound:
            return v


def sample_fq_vector(reader: XofReader, n: int, q: int) -> np.ndarray:
    """Uniform vector over Fq, batched rejection sampling."""
    nbits = (q - 1).bit_length()
    out = np.empty(n, dtype=np.int32)
    filled = 0
    while filled < n:
        need = n - filled
        batch = int(need * 1.3) + 8
        if nbits <= 8:
            raw = np.frombuffer(reader.read(batch), dtype=np.uint8).astype(np.int32)
            raw &= (1 << nbits) - 1
        else:
            raw = np.frombuffer(reader.read(2 * batch), dtype=">u2").astype(np.int32)
            raw &= (1 << nbits) - 1
        good = raw[raw < q]
        take = min(need, good.shape[0])
        out[filled:filled + take] = good[:take]
        filled += take
    return out


def sample_fqm_vector(reader: XofReader, n: int, m: int) -> np.ndarray:
    """Uniform vector over F2^m as uint64 bitmasks."""
    words = reader.read_u64_array(n).copy()
    return words & np.uint64((1 << m) - 1)


def sample_fixed_weight(reader: XofReader, n: int, w: int) -> np.ndarray:
    """Uniform weight-w binary vector: a sampled permutation applied to 1^w 0^(n-w)."""
    if not 0 <= w <= n:
        raise ValueError("weight out of range")
    base = np.zeros(n, dtype=np.uint8)
    base[:w] = 1
    perm = sample_permutation(reader, n)
    out = np.empty(n, dtype=np.uint8)
    out[perm] = base
    return out


def sample_invertible(reader: XofReader, s: int) -> np.ndarray:
    """Uniform invertible s x s matrix over F2 (rejection on full rank)."""
    if s < 1:
        raise ValueError("s must be positive")
    if s > 64:
        raise ValueError("s > 64 not supported")
    while True:
        words = reader.read_u64_array(s).copy() & np.uint64((1 << s) - 1)
        if gf2_batch_full_rank(words[None, :])[0]:
            shifts = np.arange(s, dtype=np.uint64)[None, :]
            return ((words[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)


def sample_invertible_batch(readers: list, s: int) -> list:
    """One invertible matrix per reader, rank checks vectorized across lanes."""
    mask = np.uint64((1 << s) - 1)
    pending = list(range(len(readers)))
    out = [None] * len(readers)
    while pending:
        cand = np.stack([readers[i].read_u64_array(s) & mask for i in pending])
        ok = gf2_batch_full_rank(cand)
        still = []
        for lane, idx in enumerate(pending):
            if ok[lane]:
                shifts = np.arange(s, dtype=np.uint64)[None, :]
                out[idx] = ((cand[lane][:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
            else:
                still.append(idx)
        pending = still
    return out


def sample_support_basis(reader: XofReader, m: int, w: int) -> list:
    """w F2-independent elements of F2^m (a dimension-w support basis)."""
    if w > m:
        raise ValueError("dimension exceeds field degree")
    while True:
        elems = [int(x) for x in sample_fqm_vector(reader, w, m)]
        if _int_rank(elems) == w:
            return elems


def _int_rank(vals: list) -> int:
    pivots = {}
    for v in vals:
        for p in sorted(pivots, reverse=True):
            if v >> p & 1:
                v ^= pivots[p]
        if v:
            pivots[v.bit_length() - 1] = v
    return len(pivots)


def sample_support_vectors(reader: XofReader, m: int, n: int, w: int, count: int):
    """Support basis E of dimension w plus `count` vectors with Sup(x) = E.

    Coordinates are E-combinations; the combination matrix is resampled until
    it has rank w, so every basis element appears in the coordinate span.
    """
    if w > min(m, n):
        raise ValueError("support dimension exceeds min(m, n)")
    basis = sample_support_basis(reader, m, w)
    basis_arr = np.array(basis, dtype=np.uint64)
    vectors = []
    for _ in range(count):
        while True:
            combo = sample_f2_matrix(reader, w, n)
            if gf2_rank(combo) == w:
                break
        vec = np.zeros(n, dtype=np.uint64)
        for t in range(w):
            vec ^= np.where(combo[t] == 1, basis_arr[t], np.uint64(0))
        vectors.append(vec)
    return basis, vectors


# ---------------------------------------------------------------------------
# Challenge derivation
# ---------------------------------------------------------------------------

def challenge_reader(digest: bytes, label: bytes) -> XofReader:
    return XofReader(digest, b"ch/" + label)


def derive_alpha_list(digest: bytes, count: int, n: int) -> list:
    """Second challenges: `count` uniform indices in [0, N)."""
    reader = challenge_reader(digest, b"alpha")
    return [sample_mod(reader, n) for _ in range(count)]


def derive_kappa_list(digest: bytes, count: int, q: int) -> list:
    """IPKP first challenges: uniform over Fq* (zero rejected)."""
    reader = challenge_reader(digest, b"kappa")
    out = []
    while len(out) < count:
        v = sample_mod(reader, q)
        if v != 0:
            out.append(v)
    return out


def derive_mu_kappa_list(digest: bytes, count: int, m_instances: int, k: int) -> list:
    """QCSD first challenges: uniform (mu, kappa) in [M] x [k], packed index."""
    reader = challenge_reader(digest, b"mukappa")
    out = []
    for _ in range(count):
        v = sample_mod(reader, m_instances * k)
        out.append((v % m_instances, v // m_instances))
    return out


def derive_gamma_list(digest: bytes, count: int, m_instances: int, k: int) -> list:
    """IRSL first challenges: non-zero binary (M, k) matrices."""
    reader = challenge_reader(digest, b"gamma")
    out = []
    while len(out) < count:
        g = sample_f2_matrix(reader, m_instances, k)
        if np.any(g):
            out.append(g)
    return out


def derive_subset(digest: bytes, universe: int, size: int) -> list:
    """Cut-and-choose subset: `size` distinct indices of [0, universe), sorted."""
    reader = challenge_reader(digest, b"subset")
    chosen = []
    seen = set()
    while len(chosen) < size:
        v = sample_mod(reader, universe)
        if v not in seen:
            seen.add(v)
            chosen.append(v)
    return sorted(chosen)
