"""Small shared utilities for the test modules."""

from __future__ import annotations

from orthoform import Matrix


def snapshot(matrix: Matrix) -> Matrix:
    """Deep copy of a matrix, safe to keep across an in-place decomposition."""
    return Matrix(matrix.ring, [row[:] for row in matrix.rows], validate=False)
