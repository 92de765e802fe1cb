"""Divide-and-conquer orthogonal decomposition built on block congruences.

The driver first splits off the radical (once, globally), then recurses on a
nonsingular window: the leading half is radical-detected, its nonsingular
part is handled recursively, and the complement, which carries a full-row-rank
off-diagonal block X, is turned into hyperbolic pairs by column-reducing X,
normalizing the cross block to an identity, and sweeping the remaining
coupling away with block transvections.  All heavy lifting is matrix
multiplication, so the Strassen threshold fans through every step; results
are identical for every threshold because the products are exact.

A window [lo, hi) is always zero outside itself, which makes windowed block
congruences global congruences.  Each displayed intermediate shape is
re-checked after the step that should have produced it; a failure raises
InvariantViolation rather than letting a bad transform propagate.
"""

from __future__ import annotations

from typing import Optional

from .form import BlockLeft, HermitianForm
from .gs import Decomposition, ScalarBlock, standardize_at
from .matrix import Matrix, invert, left_row_reduce, matmul, right_column_reduce


class InvariantViolation(RuntimeError):
    """An intermediate matrix failed the shape its construction guarantees."""


def _region_is_zero(form: HermitianForm, r0: int, r1: int, c0: int, c1: int) -> bool:
    z = form.ring.zero
    rows = form.m.rows
    return all(rows[r][c] == z for r in range(r0, r1) for c in range(c0, c1))


def _require_zero(form: HermitianForm, r0: int, r1: int, c0: int, c1: int, context: str) -> None:
    if not _region_is_zero(form, r0, r1, c0, c1):
        raise InvariantViolation(f"{context}: rows [{r0},{r1}) x cols [{c0},{c1}) not zero")


def _require_identity(form: HermitianForm, r0: int, c0: int, n: int, context: str) -> None:
    ring = form.ring
    rows = form.m.rows
    for i in range(n):
        for j in range(n):
            expect = ring.one if i == j else ring.zero
            if rows[r0 + i][c0 + j] != expect:
                raise InvariantViolation(
                    f"{context}: block at ({r0},{c0}) size {n} is not the identity"
                )


def _sign_scaled(m: Matrix, sign: int) -> Matrix:
    if sign == 1:
        return m.copy()
    neg = m.ring.neg
    return Matrix(m.ring, [[neg(v) for v in row] for row in m.rows], validate=False)


def detect_radical(form: HermitianForm, cutoff: int = 0) -> int:
    """Congruate the radical to the tail; returns its dimension.

    Row-reduces the whole matrix to find an invertible A with A*B of full row
    rank on top, then applies A as a congruence, leaving
    [[core, 0], [0, 0]] with the core nonsingular in the leading window.
    """
    d = form.dim
    if d == 0:
        return 0
    a, rank = left_row_reduce(form.m, form.counters)
    if a != Matrix.identity(form.ring, d):
        form.block_congruence(0, a, 0, d, cutoff)
    _require_zero(form, rank, d, 0, d, "radical split")
    _require_zero(form, 0, rank, rank, d, "radical split")
    return d - rank


class _BlockRun:
    def __init__(self, form: HermitianForm, cutoff: int):
        self.form = form
        self.ring = form.ring
        self.s = form.s
        self.cutoff = cutoff
        self.blocks: list = []
        self.depth = 0
        self.max_depth = 0
        self.iso_pairs = 0

    def _enter(self) -> None:
        self.depth += 1
        if self.depth > self.max_depth:
            self.max_depth = self.depth

    def aniso(self, lo: int, hi: int) -> None:
        """Decompose the nonsingular window [lo, hi)."""
        self._enter()
        try:
            self._aniso_body(lo, hi)
        finally:
            self.depth -= 1

    def _aniso_body(self, lo: int, hi: int) -> None:
        form = self.form
        rows = form.m.rows
        m = hi - lo
        if m == 0:
            return
        if m == 1:
            self.blocks.append(ScalarBlock(rows[lo][lo]))
            return
        h = (m + 1) // 2
        sub = form.submatrix(lo, lo + h, lo, lo + h)
        a1, k = left_row_reduce(sub, form.counters)
        if a1 != Matrix.identity(self.ring, h):
            form.block_congruence(lo, a1, lo, hi, self.cutoff)
        _require_zero(form, lo + k, lo + h, lo, lo + h, "half split")
        _require_zero(form, lo, lo + h, lo + k, lo + h, "half split")
        if k == 0:
            if m != 2 * h:
                raise InvariantViolation(
                    "zero leading half in an odd window: the input was singular"
                )
            self.iso(lo, hi, h)
            return
        coupling = form.submatrix(lo, lo + k, lo + h, hi)
        if not coupling.is_zero():
            core = form.submatrix(lo, lo + k, lo, lo + k)
            core_inv = invert(core, form.counters)
            y = _sign_scaled(
                matmul(coupling.sigma_transpose(form.counters), core_inv, self.cutoff, form.counters),
                -self.s,
            )
            self._block_transvect(lo + h, lo, y, lo, hi)
        _require_zero(form, lo + h, hi, lo, lo + k, "coupling sweep")
        _require_zero(form, lo, lo + k, lo + h, hi, "coupling sweep")
        self.aniso(lo, lo + k)
        f = h - k
        if f == 0:
            self.aniso(lo + h, hi)
        else:
            self.iso(lo + k, hi, f)

    def _block_transvect(self, t_lo: int, s_lo: int, coeff: Matrix, lo: int, hi: int) -> None:
        """Rows [t_lo, ...) += coeff * rows [s_lo, ...), then the mirrored columns."""
        form = self.form
        rows = form.m.rows
        ring = self.ring
        nt, ns = coeff.nrows, coeff.ncols
        add = ring.add
        width = hi - lo
        embed = Matrix.identity(ring, width)
        for a in range(nt):
            row = embed.rows[t_lo - lo + a]
            row[s_lo - lo : s_lo - lo + ns] = coeff.rows[a]
        form.log.append(BlockLeft(embed, lo))
        src = form.submatrix(s_lo, s_lo + ns, lo, hi)
        delta = matmul(coeff, src, self.cutoff, form.counters)
        for a in range(nt):
            target = rows[t_lo + a]
            for c in range(lo, hi):
                target[c] = add(target[c], delta.rows[a][c - lo])
        form.counters.additions += nt * width
        src_cols = form.submatrix(lo, hi, s_lo, s_lo + ns)
        delta = matmul(src_cols, coeff.sigma_transpose(form.counters), self.cutoff, form.counters)
        for r in range(lo, hi):
            target = rows[r]
            for a in range(nt):
                target[t_lo + a] = add(target[t_lo + a], delta.rows[r - lo][a])
        form.counters.additions += nt * width

    def iso(self, lo: int, hi: int, f: int) -> None:
        """Pair off [lo, lo+2f) hyperbolically; here B[lo:lo+f, lo:lo+f] = 0 and
        the block X right of it has full row rank f."""
        self._enter()
        try:
            self._iso_body(lo, hi, f)
        finally:
            self.depth -= 1

    def _iso_body(self, lo: int, hi: int, f: int) -> None:
        form = self.form
        ring = self.ring
        rows = form.m.rows
        m = hi - lo
        if f < 1 or m < 2 * f:
            raise InvariantViolation(f"hyperbolic window [{lo},{hi}) cannot hold {f} pairs")
        x = form.submatrix(lo, lo + f, lo + f, hi)
        a, xrank = right_column_reduce(x, form.counters)
        if xrank != f:
            raise InvariantViolation("coupling block X lost full row rank")
        xa = matmul(x, a, self.cutoff, form.counters)
        lead = xa.submatrix(0, f, 0, f)
        if not xa.submatrix(0, f, f, m - f).is_zero():
            raise InvariantViolation("column reduction left residue right of the lead block")
        lead_inv = invert(lead, form.counters)
        form.block_congruence(lo, lead_inv, lo, hi, self.cutoff)
        form.block_congruence(lo + f, a.sigma_transpose(form.counters), lo, hi, self.cutoff)
        _require_zero(form, lo, lo + f, lo, lo + f, "hyperbolic normalization")
        _require_identity(form, lo, lo + f, f, "hyperbolic normalization")
        _require_zero(form, lo, lo + f, lo + 2 * f, hi, "hyperbolic normalization")
        if hi > lo + 2 * f:
            tail = form.submatrix(lo + f, lo + 2 * f, lo + 2 * f, hi)
            if not tail.is_zero():
                coeff = _sign_scaled(tail.sigma_transpose(form.counters), -self.s)
                width = m
                embed = Matrix.identity(ring, width)
                for a_ in range(hi - (lo + 2 * f)):
                    row = embed.rows[2 * f + a_]
                    row[0:f] = coeff.rows[a_]
                form.log.append(BlockLeft(embed, lo))
                zero = ring.zero
                for r in range(lo + f, lo + 2 * f):
                    for c in range(lo + 2 * f, hi):
                        rows[r][c] = zero
                        rows[c][r] = zero
        _require_zero(form, lo + f, lo + 2 * f, lo + 2 * f, hi, "tail decoupling")
        _require_zero(form, lo + 2 * f, hi, lo + f, lo + 2 * f, "tail decoupling")
        z = form.submatrix(lo + f, lo + 2 * f, lo + f, lo + 2 * f)
        upper = Matrix.zeros(ring, f, f)
        has_upper = False
        for i in range(f):
            for j in range(i + 1, f):
                v = z.rows[i][j]
                if v != ring.zero:
                    upper.rows[i][j] = v
                    has_upper = True
        if has_upper:
            corner = Matrix.identity(ring, 2 * f)
            neg = ring.neg
            for i in range(f):
                for j in range(i + 1, f):
                    corner.rows[f + i][j] = neg(upper.rows[i][j])
            form.block_congruence(lo, corner, lo, lo + 2 * f, self.cutoff)
        for i in range(f):
            for j in range(f):
                if i != j and rows[lo + f + i][lo + f + j] != ring.zero:
                    raise InvariantViolation("pair diagonalization left off-diagonal residue")
        for i in range(f):
            v = rows[lo + f + i][lo + f + i]
            if v != ring.apply_sign(self.s, ring.sigma(v)):
                raise InvariantViolation("pair diagonal violates the symmetry law")
        # Interleave: row lo+i and its partner lo+f+i become adjacent at lo+2i.
        n = 2 * f
        pos_of = list(range(n))
        at = list(range(n))
        for t in range(n):
            want = t // 2 if t % 2 == 0 else f + t // 2
            p = pos_of[want]
            if p != t:
                form.swap_row_columns(lo + t, lo + p, lo=lo, hi=lo + n)
                other = at[t]
                at[t], at[p] = want, other
                pos_of[want], pos_of[other] = t, p
        self.iso_pairs += f
        for i in range(f):
            self.blocks.extend(standardize_at(form, lo + 2 * i))
        if hi > lo + 2 * f:
            self.aniso(lo + 2 * f, hi)


def block_anisotropic(form: HermitianForm, lo: int = 0, hi: Optional[int] = None, cutoff: int = 0) -> list:
    """Decompose a nonsingular window; returns the blocks emitted.

    Raises:
        ValueError: if the window is singular (detect the radical first).
    """
    if hi is None:
        hi = form.dim
    _, rank = left_row_reduce(form.submatrix(lo, hi, lo, hi))
    if rank != hi - lo:
        raise ValueError(f"window [{lo},{hi}) is singular; split off the radical first")
    run = _BlockRun(form, cutoff)
    run.aniso(lo, hi)
    return run.blocks


def block_isotropic(form: HermitianForm, f: int, lo: int = 0, hi: Optional[int] = None, cutoff: int = 0) -> list:
    """Pair off a window whose leading f x f block is zero; returns the blocks.

    Raises:
        ValueError: if the leading block is not zero or X is not of full row rank.
    """
    if hi is None:
        hi = form.dim
    if not _region_is_zero(form, lo, lo + f, lo, lo + f):
        raise ValueError(f"leading {f} x {f} block of window [{lo},{hi}) is not zero")
    _, xrank = right_column_reduce(form.submatrix(lo, lo + f, lo + f, hi))
    if xrank != f:
        raise ValueError("coupling block X must have full row rank")
    run = _BlockRun(form, cutoff)
    run.iso(lo, hi, f)
    return run.blocks


def decompose_blocks(form: HermitianForm, strassen_cutoff: int = 64) -> Decomposition:
    """Decompose by block congruences; mutates `form` into the direct sum.

    strassen_cutoff = 0 keeps every product classical; any value >= 2 switches
    products above that size to Strassen's scheme.  The decomposition itself
    is identical either way.
    """
    if strassen_cutoff < 0 or strassen_cutoff == 1:
        raise ValueError(f"strassen cutoff must be 0 (classical) or >= 2, got {strassen_cutoff}")
    d = form.dim
    radical = detect_radical(form, strassen_cutoff)
    run = _BlockRun(form, strassen_cutoff)
    core = d - radical
    if core:
        run.aniso(0, core)
    run.blocks.extend(ScalarBlock(form.ring.zero) for _ in range(radical))
    return Decomposition(
        ring=form.ring,
        s=form.s,
        dim=d,
        blocks=run.blocks,
        log=form.log,
        counters=form.counters,
        radical_dim=radical,
        isotropic_steps=run.iso_pairs,
        recursion_depth=run.max_depth,
    )
