"""Independent checks of decompositions and their cost claims.

check_decomposition re-derives everything from the input matrix and the log:
the materialized transform must be invertible, must actually congruate the
input to the direct sum of the claimed blocks, the blocks must be standard,
and the number of zero blocks must match an independently computed rank.
Nothing here reuses intermediate state from the decomposition run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .form import OpCounters
from .gs import Decomposition, JBlock, ScalarBlock
from .matrix import Matrix, SingularMatrixError, invert, left_row_reduce, matmul
from .rings import PrimeField, Ring, _legendre


@dataclass
class CheckReport:
    transform_invertible: bool
    congruence_matches: bool
    blocks_standard: bool
    radical_matches: bool
    details: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.transform_invertible
            and self.congruence_matches
            and self.blocks_standard
            and self.radical_matches
        )

    def as_dict(self) -> dict[str, bool]:
        return {
            "transform_invertible": self.transform_invertible,
            "congruence_matches": self.congruence_matches,
            "blocks_standard": self.blocks_standard,
            "radical_matches": self.radical_matches,
        }


def check_decomposition(original: Matrix, s: int, dec: Decomposition) -> CheckReport:
    """Re-verify a decomposition against the untouched input matrix."""
    ring = original.ring
    d = original.nrows
    report = CheckReport(True, True, True, True)
    if d == 0:
        if dec.blocks or dec.radical_dim:
            report.blocks_standard = False
            report.details.append("0-dimensional form with nonempty blocks")
        return report
    transform = dec.log.materialize(ring)
    try:
        invert(transform)
    except SingularMatrixError:
        report.transform_invertible = False
        report.details.append("materialized transform is singular")
    sizes = sum(b.size for b in dec.blocks)
    if sizes != d:
        report.blocks_standard = False
        report.details.append(f"blocks cover {sizes} of {d} positions")
        report.congruence_matches = False
        return report
    product = matmul(matmul(transform, original), transform.sigma_transpose())
    if product != dec.direct_sum_matrix():
        report.congruence_matches = False
        report.details.append("transformed matrix is not the claimed direct sum")
    for idx, block in enumerate(dec.blocks):
        if isinstance(block, ScalarBlock):
            value = block.value
            if value != ring.apply_sign(s, ring.sigma(value)):
                report.blocks_standard = False
                report.details.append(f"block {idx} value violates the symmetry law")
        elif not isinstance(block, JBlock):
            report.blocks_standard = False
            report.details.append(f"block {idx} has unknown type {type(block).__name__}")
    zero_blocks = sum(
        1 for b in dec.blocks if isinstance(b, ScalarBlock) and b.value == ring.zero
    )
    _, rank = left_row_reduce(original)
    if not (dec.radical_dim == zero_blocks == d - rank):
        report.radical_matches = False
        report.details.append(
            f"radical_dim {dec.radical_dim}, zero blocks {zero_blocks}, "
            f"dim minus rank {d - rank} disagree"
        )
    return report


@dataclass(frozen=True)
class InvariantSummary:
    rank: int
    radical_dim: int
    j_blocks: int
    square_classes: Optional[tuple[int, int]]


def invariants_of(dec: Decomposition) -> InvariantSummary:
    """Congruence invariants readable from a decomposition.

    Over a prime field with the identity involution the square-class data is
    reported in discriminant form: (number of nonzero 1x1 blocks, parity of
    the count of non-residue values).  The parity, unlike the literal
    multiset of square classes, is the same for every decomposition of a
    given form, which is what makes the summary comparable across algorithms.
    """
    ring = dec.ring
    zero_blocks = sum(
        1 for b in dec.blocks if isinstance(b, ScalarBlock) and b.value == ring.zero
    )
    j_blocks = sum(1 for b in dec.blocks if isinstance(b, JBlock))
    square_classes = None
    if isinstance(ring, PrimeField) and ring.involution == "identity":
        nonzero = 0
        nonresidues = 0
        for b in dec.blocks:
            if isinstance(b, ScalarBlock) and b.value != ring.zero:
                nonzero += 1
                if ring.p != 2 and _legendre(b.value, ring.p) == -1:
                    nonresidues += 1
        square_classes = (nonzero, nonresidues % 2)
    return InvariantSummary(
        rank=dec.dim - zero_blocks,
        radical_dim=dec.radical_dim,
        j_blocks=j_blocks,
        square_classes=square_classes,
    )


_GL_DET_CHUNK = 1 << 20


def _det_mod(mats: np.ndarray, p: int, d: int) -> np.ndarray:
    if d == 1:
        return mats[:, 0, 0] % p
    if d == 2:
        return (mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]) % p
    a, b, c = mats[:, 0, 0], mats[:, 0, 1], mats[:, 0, 2]
    d0, e, f = mats[:, 1, 0], mats[:, 1, 1], mats[:, 1, 2]
    g, h, i = mats[:, 2, 0], mats[:, 2, 1], mats[:, 2, 2]
    return (a * (e * i - f * h) - b * (d0 * i - f * g) + c * (d0 * h - e * g)) % p


def brute_force_congruence(b1: Matrix, b2: Matrix, s: int) -> bool:
    """Exhaustive congruence test over small prime fields.

    Enumerates all invertible d x d matrices over GF(p) (d <= 3, p <= 7,
    identity involution) in chunks and checks A * b1 * A^t = b2.  A rank
    mismatch short-circuits to False.
    """
    ring = b1.ring
    if not isinstance(ring, PrimeField) or ring.involution != "identity":
        raise ValueError("brute force congruence runs over prime fields only")
    if ring.p > 7:
        raise ValueError("brute force congruence is limited to p <= 7")
    if b1.ring != b2.ring or b1.shape != b2.shape or b1.nrows != b1.ncols:
        raise ValueError("matrices must be square, same size, same ring")
    d = b1.nrows
    if d > 3:
        raise ValueError("brute force congruence is limited to d <= 3")
    if d == 0:
        return True
    if left_row_reduce(b1)[1] != left_row_reduce(b2)[1]:
        return False
    p = ring.p
    m1 = np.array(b1.rows, dtype=np.int64)
    m2 = np.array(b2.rows, dtype=np.int64)
    total = p ** (d * d)
    powers = p ** np.arange(d * d, dtype=np.int64)
    for start in range(0, total, _GL_DET_CHUNK):
        stop = min(start + _GL_DET_CHUNK, total)
        codes = np.arange(start, stop, dtype=np.int64)
        digits = (codes[:, None] // powers[None, :]) % p
        mats = digits.reshape(-1, d, d)
        mask = _det_mod(mats, p, d) != 0
        if not mask.any():
            continue
        cands = mats[mask]
        prod = (cands @ m1) % p
        prod = (prod @ cands.transpose(0, 2, 1)) % p
        if (prod == m2).all(axis=(1, 2)).any():
            return True
    return False


@dataclass
class CounterReport:
    ratios: dict
    flags: list
    bands: dict


_DEFAULT_BANDS = {
    "additions": (0.85, 1.25),
    "multiplications": (0.85, 1.25),
}


def counter_report(
    counters: OpCounters,
    d: int,
    radical_dim: int,
    bands: Optional[dict] = None,
) -> CounterReport:
    """Ratios of observed counts to the leading-term cost model.

    Additions and multiplications are compared to e^3/3 (e = rank),
    inversions to e, equality tests to d(d-1)/2, and involution applications
    to d(d-1)/2 - r(r-1)/2 (r = radical dimension).  Ratios whose denominator
    vanishes are reported as None.  Any ratio outside its band is flagged;
    by default only the addition and multiplication bands are set.
    """
    if bands is None:
        bands = dict(_DEFAULT_BANDS)
    e = d - radical_dim
    cube = e**3 / 3
    pairs = d * (d - 1) / 2
    sigma_den = pairs - radical_dim * (radical_dim - 1) / 2
    ratios = {
        "additions": counters.additions / cube if cube else None,
        "multiplications": counters.multiplications / cube if cube else None,
        "inversions": counters.inversions / e if e else None,
        "equality_tests": counters.equality_tests / pairs if pairs else None,
        "sigma_applications": counters.sigma_applications / sigma_den if sigma_den else None,
    }
    flags = []
    for name, (low, high) in bands.items():
        value = ratios.get(name)
        if value is not None and not (low <= value <= high):
            flags.append(f"{name} ratio {value:.4f} outside [{low}, {high}]")
    return CounterReport(ratios=ratios, flags=flags, bands=bands)
