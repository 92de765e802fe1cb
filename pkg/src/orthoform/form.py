"""Forms b(u,v) = u B sigma(v)^t with B = s*B^{sigma t}, plus congruence plumbing.

A form is held as a mutable square matrix together with its sign s and the
ring (which carries the involution sigma).  Congruence operations
B -> A B A^{sigma t} for elementary A are exposed as mutation methods; each
appends one entry to the form's transformation log and ticks the operation
counters, so both decomposition algorithms are costed with one instrument.

Operation windows: every primitive takes an optional column/row window
[lo, hi).  The logged operation is always the global elementary matrix, so a
windowed call is a valid congruence only when the touched rows and columns
are zero outside the window.  Callers (the decomposition loops) maintain that
invariant; standalone use should keep the default full window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .matrix import Matrix, ShapeError, matmul, row_axpy
from .rings import PrimeField, QuadraticField, RationalQuaternions, Ring


@dataclass
class OpCounters:
    """Ring-operation tallies: the cost-model units of both algorithms."""

    additions: int = 0
    multiplications: int = 0
    inversions: int = 0
    equality_tests: int = 0
    sigma_applications: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "additions": self.additions,
            "multiplications": self.multiplications,
            "inversions": self.inversions,
            "equality_tests": self.equality_tests,
            "sigma_applications": self.sigma_applications,
        }

    def copy(self) -> "OpCounters":
        return OpCounters(**self.as_dict())


@dataclass(frozen=True)
class Scale:
    index: int
    value: object


@dataclass(frozen=True)
class Swap:
    i: int
    j: int


@dataclass(frozen=True)
class Transvect:
    """Left-multiplication by I + value*E[target, source]: row target += value * row source."""

    target: int
    source: int
    value: object


@dataclass(frozen=True)
class BlockLeft:
    """Left-multiplication by the identity with `block` pasted at rows/cols [offset, offset+q)."""

    block: Matrix
    offset: int


LogOp = Union[Scale, Swap, Transvect, BlockLeft]


class TransformLog:
    """Ordered elementary congruence operations; materializes to the transform A."""

    __slots__ = ("dim", "ops")

    def __init__(self, dim: int, ops: Optional[list[LogOp]] = None):
        self.dim = dim
        self.ops = ops if ops is not None else []

    def append(self, op: LogOp) -> None:
        self.ops.append(op)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[LogOp]:
        return iter(self.ops)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TransformLog)
            and self.dim == other.dim
            and self.ops == other.ops
        )

    def subrange(self, start: int, stop: int) -> "TransformLog":
        return TransformLog(self.dim, self.ops[start:stop])

    def materialize(self, ring: Ring, counters=None) -> Matrix:
        """Product of the elementary matrices in application order (first op innermost)."""
        acc = Matrix.identity(ring, self.dim)
        for op in self.ops:
            if isinstance(op, Scale):
                acc.rows[op.index] = [ring.mul(op.value, v) for v in acc.rows[op.index]]
            elif isinstance(op, Swap):
                r = acc.rows
                r[op.i], r[op.j] = r[op.j], r[op.i]
            elif isinstance(op, Transvect):
                row_axpy(ring, acc.rows[op.target], acc.rows[op.source], op.value, 0, self.dim)
            elif isinstance(op, BlockLeft):
                q = op.block.nrows
                span = Matrix(ring, acc.rows[op.offset : op.offset + q], validate=False)
                out = matmul(op.block, span, counters=counters)
                acc.rows[op.offset : op.offset + q] = out.rows
            else:
                raise TypeError(f"unknown log op {op!r}")
        return acc

    def slp_lines(self, ring: Ring) -> list[str]:
        """Line-oriented rendering, one elementary operation per line, 0-based indices."""
        lines = []
        for op in self.ops:
            if isinstance(op, Scale):
                lines.append(f"scale {op.index} {ring.format(op.value)}")
            elif isinstance(op, Swap):
                lines.append(f"swap {op.i} {op.j}")
            elif isinstance(op, Transvect):
                lines.append(f"transvect {op.target} {op.source} {ring.format(op.value)}")
            else:
                entries = " ".join(
                    ring.format(v) for row in op.block.rows for v in row
                )
                lines.append(f"blockleft {op.offset} {op.block.nrows} {entries}")
        return lines


def is_hermitian(matrix: Matrix, s: int) -> bool:
    """True iff matrix = s * sigma_transpose(matrix) entrywise."""
    ring = matrix.ring
    for i in range(matrix.nrows):
        for j in range(matrix.ncols):
            if matrix.rows[i][j] != ring.apply_sign(s, ring.sigma(matrix.rows[j][i])):
                return False
    return True


class FormValidationError(ValueError):
    def __init__(self, i: int, j: int):
        self.position = (i, j)
        super().__init__(f"symmetry law violated at entry ({i}, {j})")


class HermitianForm:
    """A form matrix B = s*B^{sigma t} under congruence mutation."""

    __slots__ = ("ring", "s", "dim", "m", "log", "counters")

    def __init__(
        self,
        ring: Ring,
        matrix: Matrix,
        s: int,
        validate: bool = True,
        log: Optional[TransformLog] = None,
        counters: Optional[OpCounters] = None,
    ):
        if s not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {s!r}")
        if matrix.nrows != matrix.ncols:
            raise ShapeError(f"form matrix must be square, got {matrix.shape}")
        if matrix.ring != ring:
            raise ValueError("matrix ring does not match form ring")
        self.ring = ring
        self.s = s
        self.dim = matrix.nrows
        self.m = matrix
        self.log = log if log is not None else TransformLog(self.dim)
        self.counters = counters if counters is not None else OpCounters()
        if validate:
            for i in range(self.dim):
                for j in range(self.dim):
                    mirrored = ring.apply_sign(s, ring.sigma(matrix.rows[j][i]))
                    if matrix.rows[i][j] != mirrored:
                        raise FormValidationError(i, j)

    @classmethod
    def from_rows(cls, ring: Ring, rows: list[list], s: int, validate: bool = True) -> "HermitianForm":
        return cls(ring, Matrix(ring, [row[:] for row in rows]), s, validate=validate)

    def copy(self) -> "HermitianForm":
        return HermitianForm(
            self.ring,
            self.m.copy(),
            self.s,
            validate=False,
            log=TransformLog(self.dim, list(self.log.ops)),
            counters=self.counters.copy(),
        )

    def evaluate(self, u: list, v: list):
        """b(u, v) = u * B * sigma(v)^t, exact."""
        if len(u) != self.dim or len(v) != self.dim:
            raise ShapeError(f"vectors must have length {self.dim}")
        ring = self.ring
        acc = ring.zero
        for c in range(self.dim):
            col = ring.zero
            for r in range(self.dim):
                if u[r] != ring.zero:
                    col = ring.add(col, ring.mul(u[r], self.m.rows[r][c]))
            if col != ring.zero:
                acc = ring.add(acc, ring.mul(col, ring.sigma(v[c])))
        return acc

    def _window(self, lo: int, hi: Optional[int]) -> tuple[int, int]:
        if hi is None:
            hi = self.dim
        if not (0 <= lo <= hi <= self.dim):
            raise ValueError(f"window [{lo}, {hi}) out of range for dim {self.dim}")
        return lo, hi

    def scale_row_column(self, i: int, lam, lo: int = 0, hi: Optional[int] = None) -> None:
        """Row i <- lam * row i and column i <- column i * sigma(lam)."""
        ring = self.ring
        if lam == ring.zero:
            raise ValueError("cannot scale a row-column by zero")
        lo, hi = self._window(lo, hi)
        self.log.append(Scale(i, lam))
        rows = self.m.rows
        rows[i][lo:hi] = [ring.mul(lam, v) for v in rows[i][lo:hi]]
        sl = ring.sigma(lam)
        for r in range(lo, hi):
            rows[r][i] = ring.mul(rows[r][i], sl)
        width = hi - lo
        self.counters.multiplications += 2 * width
        self.counters.sigma_applications += width

    def swap_row_columns(self, i: int, j: int, lo: int = 0, hi: Optional[int] = None) -> None:
        """Exchange row-column i with row-column j; no ring operations."""
        if i == j:
            return
        lo, hi = self._window(lo, hi)
        self.log.append(Swap(i, j))
        rows = self.m.rows
        rows[i][lo:hi], rows[j][lo:hi] = rows[j][lo:hi], rows[i][lo:hi]
        for r in range(lo, hi):
            rows[r][i], rows[r][j] = rows[r][j], rows[r][i]

    def transvect(self, target: int, source: int, lam, lo: int = 0, hi: Optional[int] = None) -> None:
        """Congruence by I + lam*E[target, source].

        Row target += lam * row source, then column target += column source *
        sigma(lam), in that order; the second step uses the updated entries,
        which is exactly the two-sided product.
        """
        if target == source:
            raise ValueError("transvection target must differ from source")
        ring = self.ring
        if lam == ring.zero:
            return
        lo, hi = self._window(lo, hi)
        self.log.append(Transvect(target, source, lam))
        rows = self.m.rows
        row_axpy(ring, rows[target], rows[source], lam, lo, hi)
        sl = ring.sigma(lam)
        for r in range(lo, hi):
            v = rows[r][source]
            if v != ring.zero:
                rows[r][target] = ring.add(rows[r][target], ring.mul(v, sl))
        width = hi - lo
        self.counters.multiplications += 2 * width
        self.counters.additions += 2 * width
        self.counters.sigma_applications += 1

    def _pivot_inverse(self, pivot):
        """Inverse of a nonzero pivot; +-1 is read off without an inversion."""
        ring = self.ring
        if pivot == ring.one or pivot == ring.neg(ring.one):
            return pivot
        self.counters.inversions += 1
        return ring.inv(pivot)

    def clear_row_column(self, i: int, j: int, lo: int = 0, hi: Optional[int] = None) -> None:
        """Zero out row-column j using the pivot entry at (i, j).

        For each k in the window other than i and j with B[k][j] nonzero, the
        transvection I + lam_k*E[k, i] with lam_k = -B[k][j]*B[i][j]^{-1} is
        applied.  When i = j the combined column half of those transvections
        lands entirely in row i and is an exact zeroing, so it is written as
        an assignment; the diagonal entry B[i][i] stays.  When i != j the full
        column pass runs (the pivot pair (i,j)/(j,i) stays, and if B[i][i] is
        nonzero the cleared entries spill into row-column i, which the caller
        is expected to clear next).
        """
        ring = self.ring
        rows = self.m.rows
        lo, hi = self._window(lo, hi)
        pivot = rows[i][j]
        if pivot == ring.zero:
            raise ValueError(f"pivot entry ({i}, {j}) is zero")
        pivinv = self._pivot_inverse(pivot)
        c = self.counters
        width = hi - lo
        if i == j:
            for k in range(lo, hi):
                if k == i:
                    continue
                c.equality_tests += 1
                f = rows[k][j]
                if f == ring.zero:
                    continue
                lam = ring.neg(ring.mul(f, pivinv))
                c.multiplications += 1
                self.log.append(Transvect(k, i, lam))
                row_axpy(ring, rows[k], rows[i], lam, lo, hi)
                c.multiplications += width
                c.additions += width
            for k in range(lo, hi):
                if k != i:
                    rows[i][k] = ring.zero
            return
        cleared = []
        for k in range(lo, hi):
            if k == i or k == j:
                continue
            c.equality_tests += 1
            f = rows[k][j]
            if f == ring.zero:
                continue
            lam = ring.neg(ring.mul(f, pivinv))
            c.multiplications += 1
            self.log.append(Transvect(k, i, lam))
            row_axpy(ring, rows[k], rows[i], lam, lo, hi)
            c.multiplications += width
            c.additions += width
            cleared.append((k, lam))
        for k, lam in cleared:
            sl = ring.sigma(lam)
            c.sigma_applications += 1
            for r in range(lo, hi):
                v = rows[r][i]
                if v != ring.zero:
                    rows[r][k] = ring.add(rows[r][k], ring.mul(v, sl))
            c.multiplications += width
            c.additions += width

    def block_congruence(
        self,
        lo: int,
        block: Matrix,
        active_lo: int,
        active_hi: int,
        cutoff: int = 0,
    ) -> None:
        """Congruence by the identity with `block` pasted at [lo, lo+q).

        Rows [lo, lo+q) are left-multiplied by the block over the active
        column range, then columns [lo, lo+q) are right-multiplied by its
        sigma-transpose over the active row range.
        """
        if block.nrows != block.ncols:
            raise ShapeError(f"block must be square, got {block.shape}")
        q = block.nrows
        if not (active_lo <= lo and lo + q <= active_hi <= self.dim):
            raise ValueError("block does not fit the active window")
        self.log.append(BlockLeft(block.copy(), lo))
        rows = self.m.rows
        span = Matrix(
            self.ring,
            [rows[r][active_lo:active_hi] for r in range(lo, lo + q)],
            validate=False,
        )
        out = matmul(block, span, cutoff, self.counters)
        for idx, r in enumerate(range(lo, lo + q)):
            rows[r][active_lo:active_hi] = out.rows[idx]
        colblock = Matrix(
            self.ring,
            [[rows[r][cc] for cc in range(lo, lo + q)] for r in range(active_lo, active_hi)],
            validate=False,
        )
        out = matmul(colblock, block.sigma_transpose(self.counters), cutoff, self.counters)
        for idx, r in enumerate(range(active_lo, active_hi)):
            rows[r][lo : lo + q] = out.rows[idx]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> Matrix:
        return Matrix(self.ring, [row[c0:c1] for row in self.m.rows[r0:r1]], validate=False)


@dataclass(frozen=True)
class Detection:
    s: int
    sigma_samples: tuple


def default_probes(ring: Ring) -> list:
    probes = [ring.from_int(2)]
    if isinstance(ring, QuadraticField):
        probes.append(ring.validate_scalar((0, 1)))
    elif isinstance(ring, RationalQuaternions):
        probes.extend(
            ring.validate_scalar(q) for q in [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
        )
    return probes


def detect_s_sigma(matrix: Matrix, probes: Optional[list] = None) -> Optional[Detection]:
    """Read off the sign and involution samples from the first nonzero entry.

    Scans basis pairs (e_i, e_j) row-major for the first with b(e_i, e_j)
    nonzero; returns None when the matrix is zero (any sign fits).  With
    beta = B[i][j], the induced involution sample is
    sigma'(alpha) = b(e_i, alpha e_j) * beta^{-1} = beta * sigma(alpha) * beta^{-1},
    and the sign is s = b(e_j, e_i)^{-1} * sigma'(beta).  Over commutative
    rings sigma' coincides with the ring involution; over quaternions it is
    its conjugate by beta, which the samples report faithfully.

    Raises:
        ValueError: if the computed sign is not +-1 (matrix is not a form).
    """
    ring = matrix.ring
    if probes is None:
        probes = default_probes(ring)
    first = None
    for i in range(matrix.nrows):
        for j in range(matrix.ncols):
            if matrix.rows[i][j] != ring.zero:
                first = (i, j)
                break
        if first is not None:
            break
    if first is None:
        return None
    i, j = first
    beta = matrix.rows[i][j]
    beta_inv = ring.inv(beta)

    def induced(alpha):
        return ring.mul(ring.mul(beta, ring.sigma(alpha)), beta_inv)

    mirror = matrix.rows[j][i]
    if mirror == ring.zero:
        raise ValueError(f"entry ({j}, {i}) is zero while ({i}, {j}) is not; not a form")
    s_value = ring.mul(ring.inv(mirror), induced(beta))
    if s_value == ring.one:
        s = 1
    elif s_value == ring.neg(ring.one):
        s = -1
    else:
        raise ValueError(f"detected sign {ring.format(s_value)} is not +-1; not a form")
    samples = tuple((alpha, induced(alpha)) for alpha in probes)
    return Detection(s, samples)


def check_declared_consistency(matrix: Matrix, s: int) -> None:
    """Fail loudly when the detected sign or involution contradicts the ring's.

    The involution check runs only over commutative rings: over quaternions
    the detectable map is a conjugate of the ring involution and legitimately
    differs from it pointwise.
    """
    ring = matrix.ring
    detection = detect_s_sigma(matrix)
    if detection is None:
        return
    ds = detection.s
    if ds != s and ring.characteristic != 2:
        raise ValueError(f"declared sign {s} but matrix entries give {ds}")
    if ring.is_commutative:
        for alpha, value in detection.sigma_samples:
            if value != ring.sigma(alpha):
                raise ValueError(
                    "declared involution disagrees with the matrix on probe "
                    f"{ring.format(alpha)}: {ring.format(value)} vs {ring.format(ring.sigma(alpha))}"
                )


def random_form(ring: Ring, s: int, dim: int, rng, rank: Optional[int] = None) -> HermitianForm:
    """Random B = s*B^{sigma t}: random strict upper triangle, mirrored lower
    triangle, sigma-fixed diagonal.  With `rank` given, a standard form of
    that rank is built first and then scrambled by random congruences.
    """
    if s not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if rank is None:
        rows = [[ring.zero] * dim for _ in range(dim)]
        for i in range(dim):
            rows[i][i] = ring.random_sigma_fixed(s, rng)
            for j in range(i + 1, dim):
                v = ring.random(rng)
                rows[i][j] = v
                rows[j][i] = ring.apply_sign(s, ring.sigma(v))
        return HermitianForm(ring, Matrix(ring, rows, validate=False), s, validate=False)
    if not (0 <= rank <= dim):
        raise ValueError(f"rank must be in [0, {dim}]")
    rows = [[ring.zero] * dim for _ in range(dim)]
    if s == -1 and ring.involution == "identity" and ring.characteristic != 2:
        if rank % 2 != 0:
            raise ValueError("alternating forms have even rank")
        for t in range(rank // 2):
            rows[2 * t][2 * t + 1] = ring.one
            rows[2 * t + 1][2 * t] = ring.neg(ring.one)
    else:
        if s == 1 or ring.characteristic == 2:
            unit = ring.one
        elif isinstance(ring, QuadraticField):
            unit = ring.validate_scalar((0, 1))
        elif isinstance(ring, RationalQuaternions):
            unit = ring.validate_scalar((0, 1, 0, 0))
        else:
            raise ValueError("no nonzero diagonal unit with s = -1 over this ring")
        for t in range(rank):
            rows[t][t] = unit
    form = HermitianForm(ring, Matrix(ring, rows, validate=False), s, validate=False)
    for _ in range(3 * dim):
        kind = rng.randrange(3)
        if kind == 0 and dim >= 2:
            a, b = rng.sample(range(dim), 2)
            form.swap_row_columns(a, b)
        elif kind == 1:
            lam = ring.random(rng)
            while lam == ring.zero:
                lam = ring.random(rng)
            form.scale_row_column(rng.randrange(dim), lam)
        elif dim >= 2:
            a, b = rng.sample(range(dim), 2)
            form.transvect(a, b, ring.random(rng))
    return HermitianForm(ring, form.m, s, validate=False)
