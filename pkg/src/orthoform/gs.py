"""One-position-at-a-time orthogonal decomposition.

Walks the form left to right keeping a live window [pos, hi).  An anisotropic
position is cleared against its diagonal entry; an isotropic position pairs
with the first partner its row meets, the pair is cleared and standardized;
a row-column orthogonal to the whole window is swapped to the tail, shrinking
the window.  The result is a list of 1x1 blocks and [[0,1],[s,0]] blocks with
the radical zeros at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .form import HermitianForm, OpCounters, TransformLog
from .matrix import Matrix
from .rings import Ring


@dataclass(frozen=True)
class ScalarBlock:
    value: object

    @property
    def size(self) -> int:
        return 1


@dataclass(frozen=True)
class JBlock:
    """The 2x2 block [[0, 1], [s, 0]]; s is carried by the decomposition."""

    @property
    def size(self) -> int:
        return 2


Block = Union[ScalarBlock, JBlock]


@dataclass
class Decomposition:
    ring: Ring
    s: int
    dim: int
    blocks: list
    log: TransformLog
    counters: OpCounters
    radical_dim: int
    isotropic_steps: int = 0
    recursion_depth: int = 0

    def direct_sum_matrix(self) -> Matrix:
        ring = self.ring
        rows = [[ring.zero] * self.dim for _ in range(self.dim)]
        pos = 0
        for block in self.blocks:
            if isinstance(block, ScalarBlock):
                rows[pos][pos] = block.value
                pos += 1
            else:
                rows[pos][pos + 1] = ring.one
                rows[pos + 1][pos] = ring.from_int(self.s)
                pos += 2
        if pos != self.dim:
            raise ValueError(f"blocks cover {pos} positions, form has {self.dim}")
        return Matrix(ring, rows, validate=False)

    def block_sizes(self) -> list[int]:
        return [b.size for b in self.blocks]


def standardize_at(form: HermitianForm, pos: int) -> list:
    """Finish the 2x2 corner [[0, 1], [s, alpha]] sitting at [pos, pos+2).

    With alpha nonzero the corner splits into two anisotropic 1x1 blocks via
    one transvection.  With alpha zero, s = 1, and characteristic not 2 the
    corner is diagonalized by [[1, 1], [1, -1]].  Otherwise it is already the
    standard [[0, 1], [s, 0]] block.  Returns the blocks emitted, reading the
    actual entries after the operations.
    """
    ring = form.ring
    rows = form.m.rows
    alpha = rows[pos + 1][pos + 1]
    form.counters.equality_tests += 1
    if alpha != ring.zero:
        ainv = form._pivot_inverse(alpha)
        form.transvect(pos, pos + 1, ring.neg(ainv), lo=pos, hi=pos + 2)
        return [ScalarBlock(rows[pos][pos]), ScalarBlock(rows[pos + 1][pos + 1])]
    if form.s == 1 and ring.characteristic != 2:
        two = ring.from_int(2)
        split = Matrix(ring, [[ring.one, ring.one], [ring.one, ring.neg(ring.one)]], validate=False)
        form.block_congruence(pos, split, pos, pos + 2)
        if rows[pos][pos] != two:
            raise ArithmeticError("corner split produced an unexpected diagonal")
        return [ScalarBlock(rows[pos][pos]), ScalarBlock(rows[pos + 1][pos + 1])]
    return [JBlock()]


def standardize(ring: Ring, s: int, alpha) -> tuple[TransformLog, list]:
    """Standalone corner finisher: builds [[0, 1], [s, alpha]] and runs
    standardize_at on it, returning the log fragment and emitted blocks.
    """
    if alpha != ring.apply_sign(s, ring.sigma(alpha)):
        raise ValueError("corner entry must satisfy alpha = s*sigma(alpha)")
    rows = [[ring.zero, ring.one], [ring.from_int(s), alpha]]
    form = HermitianForm(ring, Matrix(ring, rows, validate=False), s, validate=False)
    blocks = standardize_at(form, 0)
    return form.log, blocks


def decompose_gs(form: HermitianForm) -> Decomposition:
    """Decompose by row-column elimination; mutates `form` into the direct sum.

    Per window position this spends one diagonal test plus one test per
    scanned or cleared entry, one inversion per anisotropic pivot, and at
    most two inversions per isotropic pair, within the e^3/3 + O(d^2)
    addition and multiplication envelope.
    """
    ring = form.ring
    rows = form.m.rows
    c = form.counters
    d = form.dim
    blocks: list = []
    pos = 0
    hi = d
    iso_steps = 0
    neg_one = ring.neg(ring.one)
    while pos < hi:
        c.equality_tests += 1
        beta = rows[pos][pos]
        if beta != ring.zero:
            form.clear_row_column(pos, pos, lo=pos, hi=hi)
            blocks.append(ScalarBlock(beta))
            pos += 1
            continue
        partner = None
        for j in range(pos + 1, hi):
            c.equality_tests += 1
            if rows[pos][j] != ring.zero:
                partner = j
                break
        if partner is None:
            if pos != hi - 1:
                form.swap_row_columns(pos, hi - 1, lo=pos, hi=hi)
            hi -= 1
            continue
        iso_steps += 1
        if partner != pos + 1:
            form.swap_row_columns(partner, pos + 1, lo=pos, hi=hi)
        gamma = rows[pos][pos + 1]
        if gamma != ring.one:
            if gamma == neg_one:
                lam = neg_one
            else:
                c.inversions += 1
                c.sigma_applications += 1
                lam = ring.sigma(ring.inv(gamma))
            form.scale_row_column(pos + 1, lam, lo=pos, hi=hi)
        form.clear_row_column(pos + 1, pos, lo=pos, hi=hi)
        form.clear_row_column(pos, pos + 1, lo=pos, hi=hi)
        blocks.extend(standardize_at(form, pos))
        pos += 2
    radical_dim = d - hi
    blocks.extend(ScalarBlock(ring.zero) for _ in range(radical_dim))
    return Decomposition(
        ring=ring,
        s=form.s,
        dim=d,
        blocks=blocks,
        log=form.log,
        counters=c,
        radical_dim=radical_dim,
        isotropic_steps=iso_steps,
        recursion_depth=0,
    )
