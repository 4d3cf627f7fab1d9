"""F_b linear algebra utilities (b prime)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np


def to_fb(matrix: np.ndarray, b: int) -> np.ndarray:
    return np.array(matrix, dtype=np.int64) % b


@dataclass(frozen=True)
class RowReduceResult:
    matrix: np.ndarray
    rank: int
    pivots: Tuple[int, ...]


def fb_row_reduce(matrix: np.ndarray, b: int) -> RowReduceResult:
    """Reduced row echelon form over F_b."""
    mat = to_fb(matrix, b)
    if mat.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    m, n = mat.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        candidates = np.flatnonzero(mat[row:, col])
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]
        mat[row] = mat[row] * pow(int(mat[row, col]), -1, b) % b
        column = mat[:, col].copy()
        column[row] = 0
        targets = np.flatnonzero(column)
        if targets.size:
            mat[targets] = (mat[targets] - np.outer(column[targets], mat[row])) % b
        pivots.append(col)
        row += 1
    return RowReduceResult(matrix=mat, rank=len(pivots), pivots=tuple(pivots))


def fb_rank(matrix: np.ndarray, b: int) -> int:
    if np.size(matrix) == 0:
        return 0
    return fb_row_reduce(matrix, b).rank


def fb_nullspace_basis(matrix: np.ndarray, b: int) -> np.ndarray:
    """Rows spanning {v : matrix @ v = 0} over F_b."""
    mat = to_fb(matrix, b)
    n = mat.shape[1]
    if mat.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    reduced = fb_row_reduce(mat, b)
    pivots = set(reduced.pivots)
    free_cols = [c for c in range(n) if c not in pivots]
    basis = []
    for free in free_cols:
        vec = np.zeros(n, dtype=np.int64)
        vec[free] = 1
        for row, col in enumerate(reduced.pivots):
            vec[col] = (-reduced.matrix[row, free]) % b
        basis.append(vec)
    if not basis:
        return np.zeros((0, n), dtype=np.int64)
    return np.vstack(basis)


def fb_row_basis(matrix: np.ndarray, b: int) -> np.ndarray:
    """Nonzero rows of the reduced echelon form: a basis of the row space."""
    mat = to_fb(matrix, b)
    if mat.shape[0] == 0:
        return mat
    reduced = fb_row_reduce(mat, b)
    return reduced.matrix[: reduced.rank]


def fb_coefficient_vectors(b: int, k: int) -> np.ndarray:
    """All vectors of F_b^k as rows, first coordinate most significant."""
    index = np.arange(b**k, dtype=np.int64)
    powers = b ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return (index[:, None] // powers[None, :]) % b


def fb_span(basis: np.ndarray, b: int) -> np.ndarray:
    """All b^k combinations of k basis rows, in lexicographic order of coefficient vectors."""
    basis = to_fb(basis, b)
    return fb_coefficient_vectors(b, basis.shape[0]) @ basis % b
