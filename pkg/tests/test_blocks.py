"""The recursive block decomposition and its agreement with the sequential one."""

from __future__ import annotations

import math
import random

import pytest

from orthoform import (
    HermitianForm,
    InvariantViolation,
    JBlock,
    Matrix,
    PrimeField,
    QuadraticField,
    RationalField,
    RationalQuaternions,
    block_anisotropic,
    block_isotropic,
    check_decomposition,
    decompose_blocks,
    decompose_gs,
    detect_radical,
    invariants_of,
    left_row_reduce,
    random_form,
)
from helpers import snapshot

GF7 = PrimeField(7)
GF2 = PrimeField(2)
GF9 = QuadraticField(3, "frobenius")
QQ = RationalField()
HH = RationalQuaternions()


def values(dec):
    return ["J" if isinstance(b, JBlock) else b.value for b in dec.blocks]


def test_diagonal_input_splits_without_work():
    form = HermitianForm.from_rows(GF7, [[3, 0, 0], [0, 1, 0], [0, 0, 5]], 1)
    dec = decompose_blocks(form)
    assert values(dec) == [3, 1, 5]
    assert dec.radical_dim == 0


def test_frozen_double_hyperbolic():
    rows = [
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
    ]
    form = HermitianForm.from_rows(GF7, rows, 1)
    dec = decompose_blocks(form)
    assert values(dec) == [2, 5, 2, 5]
    assert dec.isotropic_steps == 2
    rep = check_decomposition(Matrix(GF7, rows), 1, dec)
    assert rep.passed, rep.details


def test_alternating_goes_to_j_blocks():
    rows = [[0, 3], [-3, 0]]
    form = HermitianForm.from_rows(QQ, rows, -1)
    dec = decompose_blocks(form)
    assert values(dec) == ["J"]
    assert check_decomposition(Matrix(QQ, rows), -1, dec).passed


def test_radical_is_split_off_first():
    rows = [[0, 0, 0], [0, 3, 0], [0, 0, 0]]
    form = HermitianForm.from_rows(GF7, rows, 1)
    dec = decompose_blocks(form)
    assert values(dec) == [3, 0, 0]
    assert dec.radical_dim == 2
    assert check_decomposition(Matrix(GF7, rows), 1, dec).passed


def test_dim_zero_and_one():
    dec = decompose_blocks(HermitianForm.from_rows(GF7, [], 1))
    assert dec.blocks == [] and dec.radical_dim == 0
    dec = decompose_blocks(HermitianForm.from_rows(GF7, [[4]], 1))
    assert values(dec) == [4]


def test_detect_radical_matches_independent_rank():
    rng = random.Random(50)
    for ring, s in [(GF7, 1), (GF9, 1), (QQ, -1), (HH, 1)]:
        for _ in range(15):
            d = rng.randrange(1, 8)
            r = rng.randrange(0, d + 1)
            if s == -1:
                r -= r % 2
            form = random_form(ring, s, d, rng, rank=r)
            before = snapshot(form.m)
            rad = detect_radical(form)
            assert rad == d - left_row_reduce(before)[1] == d - r


SWEEP = [
    (GF7, 1),
    (GF7, -1),
    (GF2, 1),
    (GF9, 1),
    (QQ, 1),
    (QQ, -1),
    (HH, 1),
]


@pytest.mark.parametrize("ring,s", SWEEP, ids=lambda v: str(v))
def test_sweep_verifies(ring, s):
    rng = random.Random(51)
    for _ in range(20):
        d = rng.randrange(0, 9)
        form = random_form(ring, s, d, rng)
        original = snapshot(form.m)
        dec = decompose_blocks(form)
        rep = check_decomposition(original, s, dec)
        assert rep.passed, (repr(ring), s, d, rep.details)


@pytest.mark.parametrize("ring,s", [(GF7, 1), (GF7, -1), (GF9, 1), (QQ, 1), (HH, 1)])
def test_both_algorithms_agree_on_invariants(ring, s):
    rng = random.Random(52)
    for _ in range(15):
        d = rng.randrange(0, 9)
        form = random_form(ring, s, d, rng)
        twin = HermitianForm(ring, snapshot(form.m), s, validate=False)
        a = decompose_gs(form)
        b = decompose_blocks(twin)
        ia, ib = invariants_of(a), invariants_of(b)
        assert ia.rank == ib.rank
        assert ia.radical_dim == ib.radical_dim
        assert ia.square_classes == ib.square_classes
        if ring.characteristic != 2:
            assert ia.j_blocks == ib.j_blocks


def test_gf2_j_count_can_legitimately_differ():
    # over GF(2) the unit [1] + hyperbolic plane is congruent to the identity
    # (orthonormal basis (1,1,0),(1,0,1),(1,1,1)), so two correct refinements
    # of one non-alternating form may have different J counts; both must
    # still verify
    rows = [[1, 0, 0], [0, 0, 1], [0, 1, 0]]
    f1 = HermitianForm.from_rows(GF2, rows, 1)
    f2 = HermitianForm.from_rows(GF2, [row[:] for row in rows], 1)
    a = decompose_gs(f1)
    b = decompose_blocks(f2)
    assert check_decomposition(Matrix(GF2, rows), 1, a).passed
    assert check_decomposition(Matrix(GF2, rows), 1, b).passed
    assert invariants_of(a).rank == invariants_of(b).rank == 3


def test_strassen_cutoff_does_not_change_the_result():
    rng = random.Random(53)
    for ring, s in [(GF7, 1), (GF9, 1)]:
        for d in (6, 12, 17):
            form = random_form(ring, s, d, rng)
            mats = [snapshot(form.m) for _ in range(3)]
            runs = []
            for cutoff, mat in zip((0, 8, 64), mats):
                f = HermitianForm(ring, mat, s, validate=False)
                runs.append(decompose_blocks(f, strassen_cutoff=cutoff))
            base = runs[0]
            for other in runs[1:]:
                assert other.blocks == base.blocks
                assert other.log == base.log
                assert other.radical_dim == base.radical_dim
            # counters are excluded on purpose: Strassen performs a different
            # number of ring operations by design


def test_recursion_depth_is_logarithmic():
    rng = random.Random(54)
    for d in (1, 2, 3, 7, 16, 33):
        form = random_form(PrimeField(101), 1, d, rng)
        dec = decompose_blocks(form)
        bound = 2 * math.ceil(math.log2(d)) + 2 if d > 1 else 2
        assert dec.recursion_depth <= bound, (d, dec.recursion_depth)


def test_wrapper_guards():
    # anisotropic entry point refuses a singular window
    form = HermitianForm.from_rows(GF7, [[0, 0], [0, 3]], 1)
    with pytest.raises(ValueError, match="singular"):
        block_anisotropic(form)
    # isotropic entry point needs the leading f x f zero corner
    form = HermitianForm.from_rows(GF7, [[1, 0], [0, 3]], 1)
    with pytest.raises(ValueError):
        block_isotropic(form, 1)
    # and full row rank of the coupling strip
    form = HermitianForm.from_rows(GF7, [[0, 0, 0], [0, 0, 0], [0, 0, 1]], 1)
    with pytest.raises(ValueError):
        block_isotropic(form, 2)
    with pytest.raises(ValueError):
        decompose_blocks(HermitianForm.from_rows(GF7, [[1]], 1), strassen_cutoff=1)
    with pytest.raises(ValueError):
        decompose_blocks(HermitianForm.from_rows(GF7, [[1]], 1), strassen_cutoff=-2)


def test_entry_points_compose_like_the_driver():
    # split the radical by hand, then run the anisotropic kernel on the core
    rng = random.Random(55)
    form = random_form(GF7, 1, 6, rng, rank=4)
    original = snapshot(form.m)
    rad = detect_radical(form)
    assert rad == 2
    blocks = block_anisotropic(form, 0, 6 - rad)
    assert sum(b.size for b in blocks) == 4


def test_invariant_violation_type():
    assert issubclass(InvariantViolation, RuntimeError)
