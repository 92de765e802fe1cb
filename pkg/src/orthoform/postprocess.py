"""Post-passes on finished decompositions.

These operate on the block list and transformation log only: every rewrite
appends the congruence operations that realize it, so the defining identity
(materialized transform) * B_input * (its sigma-transpose) = direct sum
stays true after each pass.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from .form import BlockLeft, Scale, Swap
from .gs import Decomposition, JBlock, ScalarBlock
from .matrix import Matrix, matmul
from .rings import (
    PrimeField,
    QuadraticField,
    RationalField,
    RationalQuaternions,
    Ring,
    solve_norm_equation,
    sqrt_in_prime_field,
)


def normalize_scalar_block(ring: Ring, alpha) -> Optional[object]:
    """A unit gamma with gamma * alpha * sigma(gamma) = 1, or None.

    Availability by ring: GF(p) needs alpha to be a square; GF(p^2) with the
    Frobenius always succeeds (the norm is onto); the rationals need a
    positive square of a rational; quaternions need a real positive square of
    a rational (the implemented slice of the general norm equation).
    """
    alpha = ring.validate_scalar(alpha)
    if alpha == ring.zero:
        return None
    gamma = None
    if isinstance(ring, PrimeField):
        gamma = sqrt_in_prime_field(ring, ring.inv(alpha))
    elif isinstance(ring, QuadraticField):
        if ring.involution == "frobenius" and alpha == ring.sigma(alpha):
            gamma = solve_norm_equation(ring, ring.inv(alpha))
    elif isinstance(ring, RationalField):
        if alpha > 0:
            num, den = alpha.numerator, alpha.denominator
            rn, rd = math.isqrt(num), math.isqrt(den)
            if rn * rn == num and rd * rd == den:
                gamma = Fraction(rd, rn)
    elif isinstance(ring, RationalQuaternions):
        w, x, y, z = alpha
        if x == 0 and y == 0 and z == 0 and w > 0:
            num, den = w.numerator, w.denominator
            rn, rd = math.isqrt(num), math.isqrt(den)
            if rn * rn == num and rd * rd == den:
                gamma = (Fraction(rd, rn), Fraction(0), Fraction(0), Fraction(0))
    if gamma is None:
        return None
    gamma = ring.validate_scalar(gamma)
    if ring.mul(ring.mul(gamma, alpha), ring.sigma(gamma)) != ring.one:
        raise ArithmeticError("normalization witness failed its defining identity")
    return gamma


def pair_rescale(ring: Ring, gamma, delta) -> tuple[Matrix, object]:
    """The 2x2 transform [[gamma, delta], [sigma(delta), -sigma(gamma)]].

    Congruating diag(1, 1) by it gives diag(alpha, alpha) with
    alpha = gamma*sigma(gamma) + delta*sigma(delta); the identity is checked
    on every call.  Commutative rings only.

    Raises:
        ValueError: noncommutative ring, or a degenerate pair (alpha = 0).
    """
    if not ring.is_commutative:
        raise ValueError("pair rescaling is defined over commutative rings only")
    gamma = ring.validate_scalar(gamma)
    delta = ring.validate_scalar(delta)
    alpha = ring.add(
        ring.mul(gamma, ring.sigma(gamma)), ring.mul(delta, ring.sigma(delta))
    )
    if alpha == ring.zero:
        raise ValueError("degenerate pair: gamma*sigma(gamma) + delta*sigma(delta) = 0")
    a = Matrix(
        ring,
        [[gamma, delta], [ring.sigma(delta), ring.neg(ring.sigma(gamma))]],
        validate=False,
    )
    product = matmul(a, a.sigma_transpose())
    expected = Matrix(ring, [[alpha, ring.zero], [ring.zero, alpha]], validate=False)
    if product != expected:
        raise ArithmeticError("pair rescale transform failed its defining identity")
    return a, alpha


def char2_triple(ring: Ring, alpha) -> Matrix:
    """Over characteristic 2: the 3x3 transform taking J + [alpha] to
    diag(alpha, alpha, alpha); verified on every call.

    Raises:
        ValueError: characteristic is not 2 or alpha is 0.
    """
    if ring.characteristic != 2:
        raise ValueError("this transform lives in characteristic 2")
    alpha = ring.validate_scalar(alpha)
    if alpha == ring.zero:
        raise ValueError("alpha must be nonzero")
    one, zero = ring.one, ring.zero
    t = Matrix(ring, [[zero, alpha, one], [one, alpha, one], [one, zero, one]], validate=False)
    source = Matrix(ring, [[zero, one, zero], [one, zero, zero], [zero, zero, alpha]], validate=False)
    target = Matrix(
        ring,
        [[alpha, zero, zero], [zero, alpha, zero], [zero, zero, alpha]],
        validate=False,
    )
    if matmul(matmul(t, source), t.sigma_transpose()) != target:
        raise ArithmeticError("triple transform failed its defining identity")
    return t


def _block_starts(blocks: list) -> list[int]:
    starts = []
    pos = 0
    for b in blocks:
        starts.append(pos)
        pos += b.size
    return starts


def _swap_adjacent(dec: Decomposition, i: int) -> None:
    """Exchange blocks i and i+1, logging the row-column swaps that realize it."""
    blocks = dec.blocks
    p = _block_starts(blocks)[i]
    a, b = blocks[i].size, blocks[i + 1].size
    if (a, b) == (1, 1):
        swaps = [(p, p + 1)]
    elif (a, b) == (1, 2):
        swaps = [(p, p + 1), (p + 1, p + 2)]
    elif (a, b) == (2, 1):
        swaps = [(p + 1, p + 2), (p, p + 1)]
    else:
        swaps = [(p, p + 2), (p + 1, p + 3)]
    for x, y in swaps:
        dec.log.append(Swap(x, y))
    blocks[i], blocks[i + 1] = blocks[i + 1], blocks[i]


def _move_block(dec: Decomposition, src: int, dst: int) -> None:
    """Bubble the block at list index src to index dst (dst <= src)."""
    for i in range(src - 1, dst - 1, -1):
        _swap_adjacent(dec, i)


def maximize_j_blocks(dec: Decomposition) -> Decomposition:
    """Fuse every pair of 1x1 blocks with opposite nonzero values into a
    [[0,1],[1,0]] block.

    Applies over commutative rings with the identity involution, s = 1, and
    characteristic other than 2; in any other setting, and when no pair
    qualifies, the decomposition is returned unchanged.
    """
    ring = dec.ring
    if not (
        ring.is_commutative
        and ring.involution == "identity"
        and dec.s == 1
        and ring.characteristic != 2
    ):
        return dec
    while True:
        pair = None
        for i, bi in enumerate(dec.blocks):
            if not isinstance(bi, ScalarBlock) or bi.value == ring.zero:
                continue
            wanted = ring.neg(bi.value)
            for j in range(i + 1, len(dec.blocks)):
                bj = dec.blocks[j]
                if isinstance(bj, ScalarBlock) and bj.value == wanted:
                    pair = (i, j)
                    break
            if pair:
                break
        if pair is None:
            return dec
        i, j = pair
        _move_block(dec, j, i + 1)
        alpha = dec.blocks[i].value
        pos = _block_starts(dec.blocks)[i]
        half = ring.inv(ring.mul(ring.from_int(2), alpha))
        merge = Matrix(
            ring,
            [[ring.one, ring.one], [half, ring.neg(half)]],
            validate=False,
        )
        check = matmul(
            matmul(merge, Matrix(ring, [[alpha, ring.zero], [ring.zero, ring.neg(alpha)]], validate=False)),
            merge.sigma_transpose(),
        )
        if check != Matrix(ring, [[ring.zero, ring.one], [ring.one, ring.zero]], validate=False):
            raise ArithmeticError("pair merge transform failed its defining identity")
        dec.log.append(BlockLeft(merge, pos))
        dec.blocks[i : i + 2] = [JBlock()]


def _two_square_split(p: int, target: int) -> tuple[int, int]:
    """gamma, delta with gamma^2 + delta^2 = target mod p (p odd)."""
    squares = {(g * g) % p: g for g in range(p)}
    for g in range(p):
        rest = (target - g * g) % p
        if rest in squares:
            return g, squares[rest]
    raise ArithmeticError(f"{target} is not a sum of two squares mod {p}")


def sort_blocks_canonical(dec: Decomposition) -> Decomposition:
    """Canonicalize over a prime field with the identity involution, p odd.

    Nonzero 1x1 blocks are rescaled to 1 or to the least non-residue n; pairs
    of n-blocks are rewritten to pairs of 1-blocks (their direct sum is
    congruent to the identity); finally blocks are ordered
    [[0,1],[s,0]]-blocks, 1-blocks, the at-most-one n-block, zeros.

    Raises:
        ValueError: ring is not GF(p) with p odd and the identity involution.
    """
    ring = dec.ring
    if not isinstance(ring, PrimeField) or ring.p == 2 or ring.involution != "identity":
        raise ValueError("canonical sorting is defined over odd prime fields")
    p = ring.p
    n = ring.smallest_nonresidue()
    starts = _block_starts(dec.blocks)
    for i, block in enumerate(dec.blocks):
        if not isinstance(block, ScalarBlock) or block.value == ring.zero:
            continue
        alpha = block.value
        root = sqrt_in_prime_field(ring, ring.inv(alpha))
        if root is not None:
            gamma, value = root, ring.one
        else:
            gamma = sqrt_in_prime_field(ring, ring.mul(n, ring.inv(alpha)))
            value = n
        if gamma != ring.one:
            dec.log.append(Scale(starts[i], gamma))
        dec.blocks[i] = ScalarBlock(value)
    while True:
        heavy = [i for i, b in enumerate(dec.blocks) if isinstance(b, ScalarBlock) and b.value == n]
        if len(heavy) < 2:
            break
        i, j = heavy[0], heavy[1]
        _move_block(dec, j, i + 1)
        pos = _block_starts(dec.blocks)[i]
        g, d = _two_square_split(p, n)
        scale = ring.inv(n)
        q = Matrix(
            ring,
            [
                [ring.mul(scale, g), ring.mul(scale, d)],
                [ring.mul(scale, d), ring.mul(scale, ring.neg(g))],
            ],
            validate=False,
        )
        check = matmul(
            matmul(q, Matrix(ring, [[n, 0], [0, n]], validate=False)), q.sigma_transpose()
        )
        if check != Matrix.identity(ring, 2):
            raise ArithmeticError("non-residue pair rewrite failed its defining identity")
        dec.log.append(BlockLeft(q, pos))
        dec.blocks[i] = ScalarBlock(ring.one)
        dec.blocks[i + 1] = ScalarBlock(ring.one)

    def key(block) -> int:
        if isinstance(block, JBlock):
            return 0
        if block.value == ring.one:
            return 1
        if block.value == n:
            return 2
        if block.value == ring.zero:
            return 3
        raise AssertionError("unnormalized block survived normalization")

    changed = True
    while changed:
        changed = False
        for i in range(len(dec.blocks) - 1):
            if key(dec.blocks[i]) > key(dec.blocks[i + 1]):
                _swap_adjacent(dec, i)
                changed = True
    return dec
