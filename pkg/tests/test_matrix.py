"""Matrix layer: products, Strassen, eliminations, inversion."""

from __future__ import annotations

import random

import pytest

from orthoform import (
    Matrix,
    OpCounters,
    PrimeField,
    QuadraticField,
    RationalField,
    RationalQuaternions,
    ShapeError,
    SingularMatrixError,
    invert,
    left_row_reduce,
    matmul,
    matmul_classical,
    matmul_strassen,
    right_column_reduce,
)

GF7 = PrimeField(7)
GF9 = QuadraticField(3, "frobenius")
HH = RationalQuaternions()


def random_matrix(ring, n, m, rng):
    return Matrix(ring, [[ring.random(rng) for _ in range(m)] for _ in range(n)], validate=False)


def test_frozen_product_gf7():
    a = Matrix(GF7, [[1, 2], [3, 4]])
    b = Matrix(GF7, [[5, 6], [0, 1]])
    # [[5, 8], [15, 22]] reduced mod 7
    assert matmul_classical(a, b).rows == [[5, 1], [1, 1]]


def test_matrix_validation_and_shape():
    with pytest.raises(ValueError):
        Matrix(GF7, [[1, 9]])
    with pytest.raises(ValueError):
        Matrix(GF7, [[1, 2], [3]])
    m = Matrix(GF7, [[1, 2, 3]])
    assert m.shape == (1, 3)
    with pytest.raises(ShapeError):
        matmul_classical(m, m)


def test_classical_product_counts_exactly():
    rng = random.Random(0)
    n, k, m = 3, 4, 5
    a, b = random_matrix(GF7, n, k, rng), random_matrix(GF7, k, m, rng)
    counters = OpCounters()
    matmul_classical(a, b, counters)
    assert counters.multiplications == n * m * k
    assert counters.additions == n * m * (k - 1)
    assert counters.inversions == 0


def test_numpy_and_generic_routes_agree():
    # large modulus keeps the int64 path on; a quaternion product of the same
    # shape exercises the generic route, then both are cross-checked entrywise
    rng = random.Random(1)
    big = PrimeField(1009)
    a, b = random_matrix(big, 17, 13, rng), random_matrix(big, 13, 9, rng)
    fast = matmul_classical(a, b)
    slow_rows = []
    for i in range(17):
        row = []
        for j in range(9):
            acc = big.zero
            for t in range(13):
                acc = big.add(acc, big.mul(a.rows[i][t], b.rows[t][j]))
            row.append(acc)
        slow_rows.append(row)
    assert fast.rows == slow_rows


def test_quadratic_field_numpy_route_matches_definition():
    rng = random.Random(2)
    a, b = random_matrix(GF9, 8, 6, rng), random_matrix(GF9, 6, 7, rng)
    fast = matmul_classical(a, b)
    for i in range(8):
        for j in range(7):
            acc = GF9.zero
            for t in range(6):
                acc = GF9.add(acc, GF9.mul(a.rows[i][t], b.rows[t][j]))
            assert fast.rows[i][j] == acc


@pytest.mark.parametrize("ring", [GF7, GF9, HH], ids=["gf7", "gf9", "quat"])
def test_strassen_equals_classical(ring):
    rng = random.Random(3)
    for n, k, m in [(1, 1, 1), (2, 3, 2), (5, 5, 5), (8, 8, 8), (9, 7, 11)]:
        a, b = random_matrix(ring, n, k, rng), random_matrix(ring, k, m, rng)
        assert matmul_strassen(a, b, cutoff=2) == matmul_classical(a, b)
        assert matmul_strassen(a, b, cutoff=4) == matmul_classical(a, b)


def test_strassen_on_rectangular_odd_sizes():
    rng = random.Random(4)
    ring = PrimeField(101)
    a, b = random_matrix(ring, 63, 65, rng), random_matrix(ring, 65, 63, rng)
    assert matmul_strassen(a, b, cutoff=16) == matmul_classical(a, b)


def test_strassen_is_noncommutative_safe():
    # quaternions detect any accidental operand swap in the seven products
    rng = random.Random(5)
    a, b = random_matrix(HH, 6, 6, rng), random_matrix(HH, 6, 6, rng)
    assert matmul_strassen(a, b, cutoff=2) == matmul_classical(a, b)
    assert matmul_classical(a, b) != matmul_classical(b, a)


def test_strassen_cutoff_validation_and_dispatch():
    a = Matrix(GF7, [[1]])
    with pytest.raises(ValueError):
        matmul_strassen(a, a, cutoff=1)
    assert matmul(a, a, cutoff=0) == matmul(a, a, cutoff=None) == matmul(a, a, cutoff=8)


def test_left_row_reduce_contract():
    rng = random.Random(6)
    for ring in (GF7, GF9, HH):
        for _ in range(25):
            n, m = rng.randrange(1, 6), rng.randrange(1, 6)
            mtx = random_matrix(ring, n, m, rng)
            a, rank = left_row_reduce(mtx)
            assert 0 <= rank <= min(n, m)
            invert(a)  # must not raise
            reduced = matmul_classical(a, mtx)
            for i in range(rank, n):
                assert all(v == ring.zero for v in reduced.rows[i])
            # the top rows really are independent: reducing them again keeps rank
            if rank:
                top = Matrix(ring, reduced.rows[:rank], validate=False)
                assert left_row_reduce(top)[1] == rank


def test_right_column_reduce_contract():
    rng = random.Random(7)
    for ring in (GF7, GF9, HH):
        for _ in range(25):
            n, m = rng.randrange(1, 6), rng.randrange(1, 6)
            mtx = random_matrix(ring, n, m, rng)
            a, rank = right_column_reduce(mtx)
            invert(a)
            reduced = matmul_classical(mtx, a)
            for i in range(n):
                for j in range(rank, m):
                    assert reduced.rows[i][j] == ring.zero


def test_right_column_reduce_full_row_rank_gives_invertible_lead():
    # for X with independent rows, X*A = [C | 0] with C square invertible
    rng = random.Random(8)
    for _ in range(20):
        f = rng.randrange(1, 4)
        m = f + rng.randrange(0, 4)
        mtx = random_matrix(GF7, f, m, rng)
        a, rank = right_column_reduce(mtx)
        if rank < f:
            continue
        xa = matmul_classical(mtx, a)
        lead = Matrix(GF7, [row[:f] for row in xa.rows], validate=False)
        invert(lead)
        for i in range(f):
            for j in range(f, m):
                assert xa.rows[i][j] == GF7.zero


def test_invert_round_trip_and_singular():
    rng = random.Random(9)
    for ring in (GF7, GF9, HH):
        found = 0
        while found < 15:
            n = rng.randrange(1, 5)
            m = random_matrix(ring, n, n, rng)
            try:
                mi = invert(m)
            except SingularMatrixError:
                continue
            found += 1
            assert matmul_classical(m, mi) == Matrix.identity(ring, n)
            assert matmul_classical(mi, m) == Matrix.identity(ring, n)
    with pytest.raises(SingularMatrixError):
        invert(Matrix(GF7, [[1, 2], [2, 4]]))
    with pytest.raises(ShapeError):
        invert(Matrix(GF7, [[1, 2]]))


def test_sigma_transpose():
    m = Matrix(GF9, [[(1, 2), (0, 1)], [(2, 0), (1, 1)]])
    t = m.sigma_transpose()
    assert t.rows == [[(1, 1), (2, 0)], [(0, 2), (1, 2)]]
    counters = OpCounters()
    m.sigma_transpose(counters)
    assert counters.sigma_applications == 4


def test_submatrix_and_is_zero():
    m = Matrix(GF7, [[0, 0, 1], [0, 0, 0], [2, 0, 0]])
    assert not m.is_zero()
    assert m.submatrix(1, 2, 0, 3).is_zero()
    assert m.submatrix(0, 2, 0, 2).is_zero()
    assert m.submatrix(0, 1, 2, 3).rows == [[1]]
