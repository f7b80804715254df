"""Finite-field arithmetic and dense linear algebra over F2, prime Fq and F2^m.

Representations (used consistently across the package):

    F2 vector        numpy uint8 array of 0/1, shape (n,)
    F2 matrix        numpy uint8 array, shape (r, c)
    packed F2 row    numpy uint64 array, little bit order (bit i of word w
                     is coordinate 64*w + i)
    Fq vector        numpy int32 array, canonical representatives in [0, q)
    F2^m element     python int / uint64 bitmask in the polynomial basis
                     (1, X, ..., X^(m-1)) modulo a fixed irreducible
    F2^m vector      numpy uint64 array, shape (n,)
    coordinate form  numpy uint8 array, shape (m, n); column j holds the
                     basis coordinates of element j

Gaussian elimination pivots on the first non-zero entry of the leftmost
unfinished column, lowest row index first, so solve() is deterministic.
"""

from __future__ import annotations

import numpy as np

# Irreducible reduction polynomials for F2^m, bitmask encoded (bit i = X^i).
# Low-weight entries from the standard tables of irreducible trinomials /
# pentanomials; degrees not listed are found by search (smallest mask).
REDUCTION_POLY = {
    2: 0b111,                     # X^2+X+1
    3: (1 << 3) | 0b011,          # X^3+X+1
    4: (1 << 4) | 0b011,          # X^4+X+1
    5: (1 << 5) | 0b101,          # X^5+X^2+1
    6: (1 << 6) | 0b011,          # X^6+X+1
    7: (1 << 7) | 0b1001,         # X^7+X^3+1
    8: (1 << 8) | 0b11101,        # X^8+X^4+X^3+X^2+1
    31: (1 << 31) | (1 << 3) | 1,                       # X^31+X^3+1
    37: (1 << 37) | (1 << 6) | (1 << 4) | (1 << 1) | 1,  # X^37+X^6+X^4+X+1
}


class ShapeError(ValueError):
    """Operand dimensions do not match."""


class NoSolutionError(ValueError):
    """Linear system is inconsistent."""


# ---------------------------------------------------------------------------
# F2 vectors and matrices
# ---------------------------------------------------------------------------

def pack_bits(v: np.ndarray) -> np.ndarray:
    """Pack a 0/1 uint8 vector into uint64 words (little bit order)."""
    n = v.shape[-1]
    pad = (-n) % 64
    if pad:
        v = np.concatenate([v, np.zeros(v.shape[:-1] + (pad,), dtype=np.uint8)], axis=-1)
    return np.packbits(v, axis=-1, bitorder="little").view(np.uint64)


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of pack_bits; returns shape (..., n) uint8."""
    bits = np.unpackbits(words.view(np.uint8), axis=-1, bitorder="little")
    return bits[..., :n].copy()


def bits_to_bytes(v: np.ndarray) -> bytes:
    """Canonical byte serialization of a 0/1 vector (little bit order)."""
    return np.packbits(v.astype(np.uint8), bitorder="little").tobytes()


def gf2_matvec_packed(rows_packed: np.ndarray, x: np.ndarray) -> np.ndarray:
    """y = H x^T over F2.  rows_packed: (r, W) uint64, x: (n,) uint8."""
    xp = pack_bits(x)
    if rows_packed.shape[1] != xp.shape[0]:
        raise ShapeError("column count mismatch")
    acc = np.bitwise_count(rows_packed & xp[None, :]).sum(axis=1)
    return (acc & 1).astype(np.uint8)


def gf2_rank(rows: np.ndarray) -> int:
    """Row rank of a 0/1 matrix over F2."""
    rows = np.asarray(rows, dtype=np.uint8)
    if rows.ndim != 2:
        raise ShapeError("expected a matrix")
    words = [int(w) for w in _rows_to_ints(rows)]
    return _int_rows_rank(words)


def _rows_to_ints(rows: np.ndarray) -> list:
    packed = pack_bits(rows)
    out = []
    for i in range(rows.shape[0]):
        val = 0
        for w in range(packed.shape[1] - 1, -1, -1):
            val = (val << 64) | int(packed[i, w])
        out.append(val)
    return out


def _int_rows_rank(words: list) -> int:
    pivots = {}
    rank = 0
    for row in words:
        for p in sorted(pivots, reverse=True):
            if row >> p & 1:
                row ^= pivots[p]
        if row:
            pivots[row.bit_length() - 1] = row
            rank += 1
    return rank


def gf2_solve(a: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Deterministic solution x of A x^T = y^T over F2; free variables are 0.

    Raises NoSolutionError if the system is inconsistent.
    """
    a = np.asarray(a, dtype=np.uint8)
    y = np.asarray(y, dtype=np.uint8)
    r, c = a.shape
    if y.shape[0] != r:
        raise ShapeError("rhs length mismatch")
    m = np.concatenate([a, y[:, None]], axis=1).astype(np.uint8)
    pivot_cols = []
    row = 0
    for col in range(c):
        sub = np.nonzero(m[row:, col])[0]
        if sub.size == 0:
            continue
        pr = row + int(sub[0])
        if pr != row:
            m[[row, pr]] = m[[pr, row]]
        hits = np.nonzero(m[:, col])[0]
        for h in hits:
            if h != row:
                m[h] ^= m[row]
        pivot_cols.append(col)
        row += 1
        if row == r:
            break
    if np.any(m[row:, c]):
        raise NoSolutionError("inconsistent F2 system")
    x = np.zeros(c, dtype=np.uint8)
    for i, col in enumerate(pivot_cols):
        x[col] = m[i, c]
    return x


def gf2_mul_mat(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dense matrix product over F2 (uint8 in, uint8 out)."""
    if a.shape[1] != b.shape[0]:
        raise ShapeError("inner dimension mismatch")
    return (a.astype(np.int64) @ b.astype(np.int64) & 1).astype(np.uint8)


def gf2_inv(a: np.ndarray) -> np.ndarray:
    """Inverse of an invertible s x s matrix over F2."""
    s = a.shape[0]
    if a.shape[1] != s:
        raise ShapeError("matrix not square")
    m = np.concatenate([a.astype(np.uint8), np.eye(s, dtype=np.uint8)], axis=1)
    for col in range(s):
        sub = np.nonzero(m[col:, col])[0]
        if sub.size == 0:
            raise NoSolutionError("matrix is singular")
        pr = col + int(sub[0])
        if pr != col:
            m[[col, pr]] = m[[pr, col]]
        hits = np.nonzero(m[:, col])[0]
        for h in hits:
            if h != col:
                m[h] ^= m[col]
    return m[:, s:].copy()


def hamming_weight(v: np.ndarray) -> int:
    """Number of non-zero coordinates."""
    return int(np.count_nonzero(v))


# Batched full-rank test over F2 for s x s matrices given as uint64 row words.
# Used by the isometry sampler where tens of thousands of candidates are
# checked per signature.
def gf2_batch_full_rank(words: np.ndarray) -> np.ndarray:
    """words: (B, s) uint64, each row a bitmask of <= 64 columns.

    Returns a (B,) bool array marking matrices of full rank s.
    """
    b, s = words.shape
    basis = np.zeros((b, 64), dtype=np.uint64)
    ok = np.ones(b, dtype=bool)
    for r in range(s):
        row = words[:, r].copy()
        for j in range(s - 1, -1, -1):
            hit = ((row >> np.uint64(j)) & np.uint64(1)).astype(bool) & (basis[:, j] != 0)
            row ^= np.where(hit, basis[:, j], np.uint64(0))
        ok &= row != 0
        safe = np.where(row == 0, np.uint64(1), row)
        pos = np.floor(np.log2(safe.astype(np.float64))).astype(np.int64)
        lanes = np.arange(b)
        keep = (row != 0) & ok
        basis[lanes[keep], pos[keep]] = row[keep]
    return ok


# ---------------------------------------------------------------------------
# Prime fields
# ---------------------------------------------------------------------------

class PrimeField:
    """Arithmetic mod a prime q on int32 numpy arrays."""

    def __init__(self, q: int):
        if q < 2 or any(q % p == 0 for p in range(2, min(q, 1000)) if p * p <= q):
            raise ValueError(f"q={q} is not prime")
        self.q = q
        self.bits = (q - 1).bit_length()

    def matvec(self, h: np.ndarray, x: np.ndarray) -> np.ndarray:
        if h.shape[1] != x.shape[0]:
            raise ShapeError("column count mismatch")
        return (h.astype(np.int64) @ x.astype(np.int64) % self.q).astype(np.int32)

    def rank(self, a: np.ndarray) -> int:
        m = a.astype(np.int64) % self.q
        r, c = m.shape
        rank = 0
        for col in range(c):
            sub = np.nonzero(m[rank:, col])[0]
            if sub.size == 0:
                continue
            pr = rank + int(sub[0])
            if pr != rank:
                m[[rank, pr]] = m[[pr, rank]]
            inv = pow(int(m[rank, col]), self.q - 2, self.q)
            m[rank] = m[rank] * inv % self.q
            hits = np.nonzero(m[:, col])[0]
            for h in hits:
                if h != rank:
                    m[h] = (m[h] - m[h, col] * m[rank]) % self.q
            rank += 1
            if rank == r:
                break
        return rank

    def solve(self, a: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Deterministic x with A x^T = y^T mod q; free variables are 0."""
        q = self.q
        r, c = a.shape
        if y.shape[0] != r:
            raise ShapeError("rhs length mismatch")
        m = np.concatenate([a.astype(np.int64) % q, (y.astype(np.int64) % q)[:, None]], axis=1)
        pivot_cols = []
        row = 0
        for col in range(c):
            sub = np.nonzero(m[row:, col])[0]
            if sub.size == 0:
                continue
            pr = row + int(sub[0])
            if pr != row:
                m[[row, pr]] = m[[pr, row]]
            inv = pow(int(m[row, col]), q - 2, q)
            m[row] = m[row] * inv % q
            hits = np.nonzero(m[:, col])[0]
            for h in hits:
                if h != row:
                    m[h] = (m[h] - m[h, col] * m[row]) % q
            pivot_cols.append(col)
            row += 1
            if row == r:
                break
        if np.any(m[row:, c]):
            raise NoSolutionError("inconsistent Fq system")
        x = np.zeros(c, dtype=np.int32)
        for i, col in enumerate(pivot_cols):
            x[col] = m[i, c]
        return x


# ---------------------------------------------------------------------------
# Binary extension fields F2^m
# ---------------------------------------------------------------------------

def f2poly_mulmod(a: int, b: int, mod: int) -> int:
    """Carry-less product of F2[X] polynomials, reduced mod `mod`."""
    deg = mod.bit_length() - 1
    res = 0
    while b:
        if b & 1:
            res ^= a
        b >>= 1
        a <<= 1
        if a >> deg & 1:
            a ^= mod
    return res


def f2poly_is_irreducible(p: int) -> bool:
    """Rabin irreducibility test for a polynomial over F2."""
    deg = p.bit_length() - 1
    if deg < 1 or not p & 1:
        return deg == 1 and p == 2  # X itself
    # X^(2^deg) == X mod p, and gcd condition for every prime factor of deg
    def xpow2k(k):
        r = 2  # X
        for _ in range(k):
            r = f2poly_mulmod(r, r, p)
        return r

    if xpow2k(deg) != 2:
        return False
    d = deg
    factors = set()
    f = 2
    while f * f <= d:
        while d % f == 0:
            factors.add(f)
            d //= f
        f += 1
    if d > 1:
        factors.add(d)
    for f in factors:
        h = xpow2k(deg // f) ^ 2  # X^(2^(deg/f)) - X
        if _f2poly_gcd(h, p) != 1:
            return False
    return True


def _f2poly_gcd(a: int, b: int) -> int:
    while b:
        while a.bit_length() >= b.bit_length() and a:
            a ^= b << (a.bit_length() - b.bit_length())
        a, b = b, a
    return a


def smallest_irreducible(deg: int) -> int:
    """Lexicographically smallest irreducible polynomial of given degree."""
    base = 1 << deg
    for low in range(1, base, 2):
        p = base | low
        if f2poly_is_irreducible(p):
            return p
    raise ValueError(f"no irreducible of degree {deg}")  # unreachable


class BinExtField:
    """F2^m with the fixed polynomial basis (1, X, ..., X^(m-1))."""

    def __init__(self, m: int):
        self.m = m
        self.poly = REDUCTION_POLY.get(m) or smallest_irreducible(m)
        if not f2poly_is_irreducible(self.poly):
            raise ValueError("reduction polynomial is reducible")
        self.mask = (1 << m) - 1
        # X^(m+t) mod poly for t in [0, m): used by the vectorized multiplier
        red = []
        cur = self.poly ^ (1 << m)  # X^m mod poly
        for _ in range(m):
            red.append(cur)
            cur <<= 1
            if cur >> m & 1:
                cur ^= self.poly
        self._xm_table = red

    def mul(self, a: int, b: int) -> int:
        return f2poly_mulmod(a, b, self.poly)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        # a^(2^m - 2) by square and multiply
        res, base, e = 1, a, (1 << self.m) - 2
        while e:
            if e & 1:
                res = self.mul(res, base)
            base = self.mul(base, base)
            e >>= 1
        return res

    def vec_scalar_mul(self, vec: np.ndarray, scalar: int) -> np.ndarray:
        """Multiply every element of a uint64 F2^m vector by one scalar."""
        acc = np.zeros_like(vec)
        shifted = vec.copy()
        for t in range(self.m):
            if scalar >> t & 1:
                acc ^= shifted
            if t + 1 < self.m:
                shifted = self._mul_by_x(shifted)
        return acc

    def _mul_by_x(self, vec: np.ndarray) -> np.ndarray:
        top = (vec >> np.uint64(self.m - 1)) & np.uint64(1)
        out = (vec << np.uint64(1)) & np.uint64(self.mask)
        return out ^ top * np.uint64(self.poly & self.mask)

    # -- coordinate-matrix view ------------------------------------------

    def to_coords(self, vec: np.ndarray) -> np.ndarray:
        """uint64 vector -> (m, n) uint8 coordinate matrix."""
        shifts = np.arange(self.m, dtype=np.uint64)[:, None]
        return ((vec[None, :] >> shifts) & np.uint64(1)).astype(np.uint8)

    def from_coords(self, mat: np.ndarray) -> np.ndarray:
        """(m, n) uint8 coordinate matrix -> uint64 vector."""
        weights = (np.uint64(1) << np.arange(self.m, dtype=np.uint64))[:, None]
        return (mat.astype(np.uint64) * weights).sum(axis=0, dtype=np.uint64)

    def rank_weight(self, vec: np.ndarray) -> int:
        """Rank of the coordinate matrix of vec."""
        return _int_rows_rank([int(x) for x in vec])

    def support(self, vec: np.ndarray) -> list:
        """Reduced echelon basis of the F2-span of the coordinates.

        Returned as a sorted list of ints (descending), canonical per
        subspace, with len == rank_weight(vec).
        """
        pivots = {}
        for x in vec:
            row = int(x)
            for p in sorted(pivots, reverse=True):
                if row >> p & 1:
                    row ^= pivots[p]
            if row:
                pivots[row.bit_length() - 1] = row
        # back-reduce to the unique reduced basis
        for p in sorted(pivots):
            for p2 in sorted(pivots, reverse=True):
                if p2 > p and pivots[p2] >> p & 1:
                    pivots[p2] ^= pivots[p]
        return sorted(pivots.values(), reverse=True)

    def mat_rank(self, a) -> int:
        """Rank of a matrix with F2^m entries (list of lists / object array)."""
        rows = [list(map(int, r)) for r in a]
        if not rows:
            return 0
        cols = len(rows[0])
        rank = 0
        for col in range(cols):
            pr = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
            if pr is None:
                continue
            rows[rank], rows[pr] = rows[pr], rows[rank]
            inv = self.inv(rows[rank][col])
            rows[rank] = [self.mul(inv, x) for x in rows[rank]]
            for i in range(len(rows)):
                if i != rank and rows[i][col]:
                    f = rows[i][col]
                    rows[i] = [x ^ self.mul(f, y) for x, y in zip(rows[i], rows[rank])]
            rank += 1
            if rank == len(rows):
                break
        return rank


def isometry_apply(p: np.ndarray, coords: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Rank-preserving map on coordinate matrices: P . M . Q over F2."""
    return gf2_mul_mat(gf2_mul_mat(p, coords), q)
