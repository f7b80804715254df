"""Parity-check matrices in plain, quasi-cyclic and ideal form.

All structured codes have index 2: n = 2k and H = [I_k | B] with B a
circulant (quasi-cyclic, over F2) or an ideal matrix IM_P(h) (over F2^m,
P irreducible of degree k).  Both are one picture: the right half acts by
multiplication with a fixed ring element modulo P, where P = X^k - 1 in
the quasi-cyclic case.

Convention.  The ideal matrix has row i equal to X^i * v mod P, and the
parity-check algebra multiplies on the ring side: the syndrome of
x = (x1 || x2) is

    y = x1 + x2 * h mod P        (x2 read as a polynomial over the field)

which equals the row-vector product x * [I | IM_P(h)]^T.  The dense
expansion therefore places IM_P(h)^T in the right block so that the usual
column action H x^T reproduces the same syndrome.  (Either transpose is "a
circulant"; the ring-sided reading is the one under which H x^T = y^T
implies H rot_r(x)^T = rot_r(y)^T.)

The rot operator acts per length-k half:

    quasi-cyclic   rot_r = cyclic right shift by r   (= X^r mod X^k - 1)
    ideal          rot_r = multiplication by X^r mod P

A plain coordinate shift would break the identity for ideal codes because
an irreducible P never divides X^k - 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import (
    BinExtField,
    ShapeError,
    f2poly_is_irreducible,
    gf2_matvec_packed,
    pack_bits,
    smallest_irreducible,
)

# Ideal-code moduli, fixed per k: the lexicographically smallest irreducible.
IDEAL_MODULUS = {17: (1 << 17) | (1 << 3) | 1}


class ParameterError(ValueError):
    """Structural parameter validation failed."""


def ideal_modulus(k: int) -> int:
    poly = IDEAL_MODULUS.get(k) or smallest_irreducible(k)
    if not f2poly_is_irreducible(poly):
        raise ParameterError("ideal modulus must be irreducible")
    return poly


def validate_primitive_prime(k: int) -> None:
    """Require k prime with 2 primitive mod k.

    The security argument for the quasi-cyclic reduction needs the circulant
    size to be a prime where X^k - 1 splits as (X-1) times one irreducible;
    toy parameter sets may bypass this check explicitly.
    """
    if k < 3 or any(k % p == 0 for p in range(2, k) if p * p <= k):
        raise ParameterError(f"k={k} is not an odd prime")
    order, acc = 1, 2 % k
    while acc != 1:
        acc = acc * 2 % k
        order += 1
    if order != k - 1:
        raise ParameterError(f"2 is not primitive mod {k}")


# ---------------------------------------------------------------------------
# rot operators
# ---------------------------------------------------------------------------

def rot(v: np.ndarray, r: int, k: int) -> np.ndarray:
    """Cyclic right shift by r on each length-k block of v (length k or 2k).

    rot_r(a) = (a_{k-r+1}, ..., a_{k-r}) in 1-based notation: position i
    moves to position i + r mod k.
    """
    if not 0 <= r < k:
        raise ValueError("rotation amount out of range")
    if v.shape[0] == k:
        return np.roll(v, r)
    if v.shape[0] == 2 * k:
        return np.concatenate([np.roll(v[:k], r), np.roll(v[k:], r)])
    raise ShapeError("vector length must be k or 2k")


def ideal_rot(v: np.ndarray, r: int, modulus: int) -> np.ndarray:
    """Multiply each length-k block (polynomial over F2^m) by X^r mod P."""
    k = modulus.bit_length() - 1
    if v.shape[0] == k:
        return _xmul_poly(v, r, modulus)
    if v.shape[0] == 2 * k:
        return np.concatenate([_xmul_poly(v[:k], r, modulus), _xmul_poly(v[k:], r, modulus)])
    raise ShapeError("vector length must be k or 2k")


def _xmul_poly(coeffs: np.ndarray, r: int, modulus: int) -> np.ndarray:
    # One X step: shift coefficients up, fold the overflow back through the
    # F2 feedback taps of the modulus.  P has F2 coefficients, so this only
    # ever XORs field elements.
    k = modulus.bit_length() - 1
    taps = [t for t in range(k) if modulus >> t & 1]
    out = coeffs.copy()
    zero = coeffs.dtype.type(0)
    for _ in range(r):
        top = out[-1].copy()
        out[1:] = out[:-1]
        out[0] = zero
        for t in taps:
            out[t] = out[t] ^ top
    return out


# ---------------------------------------------------------------------------
# Packed F2 operator for extension-field parity checks
# ---------------------------------------------------------------------------

class _F2Operator:
    """An F2^m-linear map stored as a packed F2 matrix for fast evaluation.

    Input x in (F2^m)^n flattens column-major to n*m bits (element j, basis
    coordinate t -> bit j*m + t); output likewise with `rows` elements.
    """

    def __init__(self, fext: BinExtField, columns: np.ndarray, rows: int, n: int):
        # columns: (n*m, rows) uint64 -- image of each input basis bit
        m = fext.m
        bits = np.zeros((n * m, rows * m), dtype=np.uint8)
        shifts = np.arange(m, dtype=np.uint64)
        for c in range(n * m):
            img = columns[c]
            bits[c] = (((img[:, None] >> shifts[None, :]) & np.uint64(1))
                       .astype(np.uint8).reshape(-1))
        self._packed = pack_bits(bits.T.copy())
        self._fext = fext
        self._rows = rows
        self._n = n

    def apply(self, x: np.ndarray) -> np.ndarray:
        m = self._fext.m
        coords = self._fext.to_coords(x)            # (m, n)
        flat = coords.T.reshape(-1)                  # column-major bits
        out = gf2_matvec_packed(self._packed, flat)  # (rows*m,)
        return self._fext.from_coords(out.reshape(self._rows, m).T)


def _basis_images(fext: BinExtField, element_cols, rows: int, n: int) -> np.ndarray:
    """element_cols[j] = image of basis element e_j; X^t images follow by
    repeated multiplication with X."""
    m = fext.m
    cols = np.zeros((n * m, rows), dtype=np.uint64)
    for j in range(n):
        img = element_cols[j].astype(np.uint64)
        for t in range(m):
            cols[j * m + t] = img
            if t + 1 < m:
                img = fext._mul_by_x(img)
    return cols


# ---------------------------------------------------------------------------
# Parity-check matrices
# ---------------------------------------------------------------------------

@dataclass
class PlainPCM:
    """Dense (n-k) x n parity-check matrix over F2."""

    matrix: np.ndarray  # uint8 (n-k, n)
    _packed: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.uint8)
        self._packed = pack_bits(self.matrix)

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    def syndrome(self, x: np.ndarray) -> np.ndarray:
        if x.shape[0] != self.n:
            raise ShapeError("vector length mismatch")
        return gf2_matvec_packed(self._packed, x)


@dataclass
class ExtPlainPCM:
    """Dense (n-k) x n parity-check matrix over F2^m (entries uint64)."""

    fext: BinExtField
    matrix: np.ndarray  # uint64 (n-k, n)
    _op: _F2Operator = field(init=False, repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.uint64)
        r, n = self.matrix.shape
        self._op = _F2Operator(
            self.fext, _basis_images(self.fext, [self.matrix[:, j] for j in range(n)], r, n), r, n)

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    def syndrome(self, x: np.ndarray) -> np.ndarray:
        if x.shape[0] != self.n:
            raise ShapeError("vector length mismatch")
        return self._op.apply(x)


@dataclass
class QuasiCyclicPCM:
    """H = [I_k | B] over F2, B circulant with first row b (row i = rot_i(b))."""

    b: np.ndarray  # uint8 (k,)

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=np.uint8)

    @property
    def k(self) -> int:
        return self.b.shape[0]

    @property
    def n(self) -> int:
        return 2 * self.k

    def syndrome(self, x: np.ndarray) -> np.ndarray:
        """x1 + x2 * b mod X^k - 1, via circular convolution."""
        k = self.k
        if x.shape[0] != 2 * k:
            raise ShapeError("vector length mismatch")
        conv = np.convolve(self.b.astype(np.int64), x[k:].astype(np.int64))
        folded = conv[:k].copy()
        folded[: conv.shape[0] - k] += conv[k:]
        return ((x[:k] + folded) & 1).astype(np.uint8)

    def circulant(self) -> np.ndarray:
        """The definitional circulant: row i = rot_i(b)."""
        return np.stack([np.roll(self.b, i) for i in range(self.k)])

    def expand(self) -> PlainPCM:
        """Dense form whose column action equals syndrome(): [I | B^T]."""
        k = self.k
        h = np.zeros((k, 2 * k), dtype=np.uint8)
        h[:, :k] = np.eye(k, dtype=np.uint8)
        h[:, k:] = self.circulant().T
        return PlainPCM(h)


@dataclass
class IdealPCM:
    """H = [I_k | IM_P(h)] over F2^m, P irreducible of degree k."""

    fext: BinExtField
    modulus: int
    h: np.ndarray  # uint64 (k,)
    _rows: np.ndarray = field(init=False, repr=False)
    _op: _F2Operator = field(init=False, repr=False)

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=np.uint64)
        k = self.k
        if self.modulus.bit_length() - 1 != k or not f2poly_is_irreducible(self.modulus):
            raise ParameterError("modulus must be irreducible of degree k")
        rows = np.zeros((k, k), dtype=np.uint64)
        cur = self.h.copy()
        for i in range(k):
            rows[i] = cur
            cur = _xmul_poly(cur, 1, self.modulus)
        self._rows = rows
        cols = [_unit_vec(k, j) for j in range(k)] + [rows[j] for j in range(k)]
        self._op = _F2Operator(self.fext, _basis_images(self.fext, cols, k, 2 * k), k, 2 * k)

    @property
    def k(self) -> int:
        return self.h.shape[0]

    @property
    def n(self) -> int:
        return 2 * self.k

    def ideal_matrix(self) -> np.ndarray:
        """IM_P(h) per its definition: row i = X^i * h mod P."""
        return self._rows.copy()

    def syndrome(self, x: np.ndarray) -> np.ndarray:
        """x1 + x2 * h mod P (ring product)."""
        if x.shape[0] != 2 * self.k:
            raise ShapeError("vector length mismatch")
        return self._op.apply(x)

    def expand(self) -> ExtPlainPCM:
        """Dense form whose column action equals syndrome(): [I | IM_P(h)^T]."""
        k = self.k
        h = np.zeros((k, 2 * k), dtype=np.uint64)
        h[np.arange(k), np.arange(k)] = 1
        h[:, k:] = self._rows.T
        return ExtPlainPCM(self.fext, h)


def _unit_vec(k: int, j: int) -> np.ndarray:
    v = np.zeros(k, dtype=np.uint64)
    v[j] = 1
    return v


def rotation_identity_check(pcm, x: np.ndarray, y: np.ndarray, r: int) -> bool:
    """True iff syndrome(rot_r(x)) == rot_r(y); assumes H x^T = y^T."""
    if isinstance(pcm, QuasiCyclicPCM):
        return bool(np.array_equal(pcm.syndrome(rot(x, r, pcm.k)), rot(y, r, pcm.k)))
    if isinstance(pcm, IdealPCM):
        lhs = pcm.syndrome(ideal_rot(x, r, pcm.modulus))
        rhs = ideal_rot(y, r, pcm.modulus)
        return bool(np.array_equal(lhs, rhs))
    raise TypeError("structured parity-check matrix expected")
