"""Dense linear algebra over GF(2) on numpy uint8 matrices."""

from __future__ import annotations

import numpy as np


def row_echelon(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduce a binary matrix to row echelon form by Gaussian elimination.

    Args:
        mat: 2D array with entries in {0, 1}.

    Returns:
        A pair (echelon, pivot_cols) where echelon is a new uint8 array in
        row echelon form and pivot_cols lists the pivot column of each
        nonzero row, in order.
    """
    work = np.array(mat, dtype=np.uint8, copy=True) % 2
    rows, cols = work.shape
    pivot_cols: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(work[r:, c])[0]
        if hits.size == 0:
            continue
        pivot = r + int(hits[0])
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
        below = np.nonzero(work[r + 1 :, c])[0]
        for k in below:
            work[r + 1 + k] ^= work[r]
        pivot_cols.append(c)
        r += 1
    return work, pivot_cols


def rank(mat: np.ndarray) -> int:
    """Rank of a binary matrix over GF(2)."""
    if mat.size == 0:
        return 0
    _, pivots = row_echelon(mat)
    return len(pivots)
