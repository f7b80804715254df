"""Algebra layer: checked against naive loop oracles and exhaustive sweeps."""

import numpy as np
import pytest

from pokstruct.fields import (
    BinExtField,
    NoSolutionError,
    PrimeField,
    ShapeError,
    f2poly_is_irreducible,
    gf2_batch_full_rank,
    gf2_inv,
    gf2_matvec_packed,
    gf2_mul_mat,
    gf2_rank,
    gf2_solve,
    hamming_weight,
    isometry_apply,
    pack_bits,
    smallest_irreducible,
    unpack_bits,
)

rng = np.random.default_rng(0xF1E1D)


def naive_matvec_f2(h, x):
    out = np.zeros(h.shape[0], dtype=np.uint8)
    for i in range(h.shape[0]):
        acc = 0
        for j in range(h.shape[1]):
            acc ^= int(h[i, j]) & int(x[j])
        out[i] = acc
    return out


def test_pack_roundtrip():
    for n in [1, 7, 64, 65, 130]:
        v = rng.integers(0, 2, n).astype(np.uint8)
        assert np.array_equal(unpack_bits(pack_bits(v), n), v)


def test_matvec_identity_and_zero():
    x = np.array([1, 0, 1], dtype=np.uint8)
    eye = np.eye(3, dtype=np.uint8)
    assert np.array_equal(gf2_matvec_packed(pack_bits(eye), x), x)
    z = np.zeros((4, 3), dtype=np.uint8)
    assert np.array_equal(gf2_matvec_packed(pack_bits(z), x), np.zeros(4, np.uint8))


def test_matvec_against_naive_oracle():
    for _ in range(100):
        r, c = rng.integers(1, 20, 2)
        h = rng.integers(0, 2, (r, c)).astype(np.uint8)
        x = rng.integers(0, 2, c).astype(np.uint8)
        assert np.array_equal(gf2_matvec_packed(pack_bits(h), x), naive_matvec_f2(h, x))


def test_matvec_planted_weight2():
    h = rng.integers(0, 2, (4, 8)).astype(np.uint8)
    x = np.zeros(8, dtype=np.uint8)
    x[[2, 5]] = 1
    assert np.array_equal(gf2_matvec_packed(pack_bits(h), x), (h[:, 2] ^ h[:, 5]))


def test_matvec_shape_error():
    h = pack_bits(np.eye(3, dtype=np.uint8))
    with pytest.raises(ShapeError):
        gf2_matvec_packed(h, np.zeros(100, dtype=np.uint8))


def row_space_size(rows):
    """Brute-force oracle: enumerate the row space."""
    space = {0}
    for r in rows:
        key = int.from_bytes(np.packbits(r).tobytes(), "big")
        space |= {s ^ key for s in space}
    return len(space)


def test_rank_identity_zero_and_dependent_rows():
    assert gf2_rank(np.eye(5, dtype=np.uint8)) == 5
    assert gf2_rank(np.zeros((3, 4), dtype=np.uint8)) == 0
    r1 = rng.integers(0, 2, 4).astype(np.uint8)
    r2 = rng.integers(0, 2, 4).astype(np.uint8)
    m = np.stack([r1, r2, r1 ^ r2])
    assert gf2_rank(m) == row_space_size([r1, r2]).bit_length() - 1


def test_rank_equals_transpose_rank():
    for _ in range(50):
        r, c = rng.integers(1, 12, 2)
        m = rng.integers(0, 2, (r, c)).astype(np.uint8)
        assert gf2_rank(m) == gf2_rank(m.T)


def test_solve_identity_zero_and_reverify():
    y = rng.integers(0, 2, 6).astype(np.uint8)
    assert np.array_equal(gf2_solve(np.eye(6, dtype=np.uint8), y), y)
    h = rng.integers(0, 2, (5, 10)).astype(np.uint8)
    assert np.array_equal(gf2_solve(h, np.zeros(5, np.uint8)), np.zeros(10, np.uint8))
    for _ in range(20):
        h = rng.integers(0, 2, (5, 10)).astype(np.uint8)
        x0 = rng.integers(0, 2, 10).astype(np.uint8)
        y = naive_matvec_f2(h, x0)
        x = gf2_solve(h, y)
        assert np.array_equal(naive_matvec_f2(h, x), y)


def test_solve_deterministic_and_inconsistent():
    h = rng.integers(0, 2, (4, 9)).astype(np.uint8)
    y = naive_matvec_f2(h, rng.integers(0, 2, 9).astype(np.uint8))
    assert np.array_equal(gf2_solve(h, y), gf2_solve(h.copy(), y.copy()))
    bad = np.zeros((2, 3), dtype=np.uint8)
    with pytest.raises(NoSolutionError):
        gf2_solve(bad, np.array([1, 0], dtype=np.uint8))


def test_gf2_inverse():
    for _ in range(20):
        s = int(rng.integers(1, 10))
        m = rng.integers(0, 2, (s, s)).astype(np.uint8)
        if gf2_rank(m) < s:
            continue
        inv = gf2_inv(m)
        assert np.array_equal(gf2_mul_mat(m, inv), np.eye(s, dtype=np.uint8))


def test_hamming_weight_cases():
    assert hamming_weight(np.zeros(3, np.uint8)) == 0
    assert hamming_weight(np.ones(3, np.uint8)) == 3
    assert hamming_weight(np.array([0, 5, 0, 3], dtype=np.int32)) == 2


def test_batch_full_rank_matches_rank():
    s = 9
    words = []
    expect = []
    for _ in range(200):
        m = rng.integers(0, 2, (s, s)).astype(np.uint8)
        words.append([int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")
                      for row in m])
        expect.append(gf2_rank(m) == s)
    got = gf2_batch_full_rank(np.array(words, dtype=np.uint64))
    assert list(got) == expect


# -- prime field -----------------------------------------------------------

def test_prime_field_axioms_small():
    f = PrimeField(3)
    for a in range(3):
        for b in range(3):
            assert (a + b) % 3 == (b + a) % 3
            if a:
                assert a * pow(a, 1, 3) % 3 == a * a % 3
    for a in range(1, 3):
        inv = pow(a, 1, 3)  # q-2 = 1
        assert a * inv % 3 == 1


def test_prime_field_matvec_and_solve():
    f = PrimeField(997)
    h = rng.integers(0, 997, (5, 9)).astype(np.int32)
    x0 = rng.integers(0, 997, 9).astype(np.int32)
    y = f.matvec(h, x0)
    oracle = np.array([sum(int(h[i, j]) * int(x0[j]) for j in range(9)) % 997
                       for i in range(5)])
    assert np.array_equal(y, oracle)
    x = f.solve(h, y)
    assert np.array_equal(f.matvec(h, x), y)


def test_prime_field_rank_transpose():
    f = PrimeField(7)
    for _ in range(50):
        m = rng.integers(0, 7, (6, 4)).astype(np.int32)
        assert f.rank(m) == f.rank(m.T)


def test_prime_field_rejects_composite():
    with pytest.raises(ValueError):
        PrimeField(15)


# -- binary extension fields ------------------------------------------------

def test_reduction_polys_irreducible():
    for m in [2, 3, 4, 6, 31, 37]:
        f = BinExtField(m)
        assert f2poly_is_irreducible(f.poly)
        assert f.poly.bit_length() - 1 == m


def test_smallest_irreducible_degree_17():
    # X^17 + X^3 + 1, the first odd mask of degree 17 passing Rabin's test
    assert smallest_irreducible(17) == (1 << 17) | (1 << 3) | 1


def test_field_axioms_exhaustive_f4():
    f = BinExtField(2)
    els = range(4)
    for a in els:
        for b in els:
            assert f.mul(a, b) == f.mul(b, a)
            for c in els:
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)
    for a in range(1, 4):
        assert f.mul(a, f.inv(a)) == 1


def test_inverse_random_f2_37():
    f = BinExtField(37)
    for _ in range(50):
        a = int(rng.integers(1, 1 << 37))
        assert f.mul(a, f.inv(a)) == 1


def test_vec_scalar_mul_matches_scalar_loop():
    f = BinExtField(6)
    vec = rng.integers(0, 64, 20).astype(np.uint64)
    s = int(rng.integers(1, 64))
    got = f.vec_scalar_mul(vec, s)
    assert [int(x) for x in got] == [f.mul(int(v), s) for v in vec]


def span_f2(elements):
    space = {0}
    for e in elements:
        space |= {s ^ int(e) for s in space}
    return space


def test_rank_weight_cases():
    f = BinExtField(2)
    assert f.rank_weight(np.zeros(4, np.uint64)) == 0
    assert f.rank_weight(np.ones(5, np.uint64)) == 1
    g = 0b10  # the generator X
    v = np.array([1, g, 1 ^ g], dtype=np.uint64)
    assert f.rank_weight(v) == len(span_f2(v)).bit_length() - 1 == 2


def test_rank_weight_equals_support_dim():
    f = BinExtField(6)
    for _ in range(100):
        v = rng.integers(0, 64, 10).astype(np.uint64)
        sup = f.support(v)
        assert f.rank_weight(v) == len(sup)
        space = span_f2(sup)
        assert all(int(x) in space for x in v)


def test_support_trivial_cases():
    f = BinExtField(3)
    assert f.support(np.zeros(3, np.uint64)) == []
    g = 0b10
    assert f.support(np.array([g, g, g], dtype=np.uint64)) == [g]


def test_support_canonical():
    f = BinExtField(5)
    v = rng.integers(0, 32, 8).astype(np.uint64)
    sup1 = f.support(v)
    perm = rng.permutation(8)
    sup2 = f.support(v[perm])
    assert sup1 == sup2


def test_coords_roundtrip():
    f = BinExtField(37)
    v = rng.integers(0, 1 << 37, 12).astype(np.uint64)
    assert np.array_equal(f.from_coords(f.to_coords(v)), v)


def test_mat_rank_extension_field():
    f = BinExtField(4)
    a = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]  # row2 = X*row1 -> dependent
    r = f.mat_rank(a)
    rows = [[f.mul(2, x) for x in a[0]]]
    assert rows[0] == a[1]
    assert r == 2
    assert f.mat_rank(list(zip(*a))) == r


def test_isometry_rank_preservation():
    from pokstruct.primitives import XofReader, sample_invertible
    f = BinExtField(6)
    m, n = 6, 8
    for trial in range(100):
        reader = XofReader(trial.to_bytes(16, "big"), b"iso-test")
        p = sample_invertible(reader, m)
        q = sample_invertible(reader, n)
        v = rng.integers(0, 64, n).astype(np.uint64)
        img = isometry_apply(p, f.to_coords(v), q)
        assert f.rank_weight(f.from_coords(img)) == f.rank_weight(v)
