"""Exact sparse linear algebra over QQ_I on top of sympy's DomainMatrix.

Vectors are sparse ``{coordinate: coefficient}`` dicts and are laid out as the
*columns* of a matrix, so the pivot columns of the reduced row echelon form are
the greedy (first-come) maximal independent subset of the input vectors.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ, QQ_I, ZZ, ZZ_I, ilcm
from sympy.polys.matrices import DomainMatrix

from .polynomials import ComplexRational

logger = logging.getLogger(__name__)

SparseVector = Dict[int, ComplexRational]


def _is_real(columns: Sequence[SparseVector]) -> bool:
    return all(not c.y for column in columns for c in column.values())


def _integral_matrix(columns: Sequence[SparseVector], length: int) -> DomainMatrix:
    """Scale each column to Gaussian integers; column scaling keeps the pivots."""
    real = _is_real(columns)
    domain = ZZ if real else ZZ_I
    rows: Dict[int, Dict[int, object]] = {}
    for j, column in enumerate(columns):
        scale = 1
        for c in column.values():
            scale = ilcm(scale, int(c.x.denominator), int(c.y.denominator))
        for i, c in column.items():
            if not c:
                continue
            re, im = int((c.x * scale).numerator), int((c.y * scale).numerator)
            rows.setdefault(i, {})[j] = ZZ(re) if real else ZZ_I(re, im)
    return DomainMatrix(rows, (length, len(columns)), domain)


def _field_matrix(columns: Sequence[SparseVector], length: int) -> DomainMatrix:
    real = _is_real(columns)
    domain = QQ if real else QQ_I
    rows: Dict[int, Dict[int, object]] = {}
    for j, column in enumerate(columns):
        for i, c in column.items():
            if c:
                rows.setdefault(i, {})[j] = c.x if real else c
    return DomainMatrix(rows, (length, len(columns)), domain)


def independent_columns(columns: Sequence[SparseVector], length: int) -> List[int]:
    """Indices of the greedy maximal independent subset, by fraction-free elimination."""
    if not columns or length == 0:
        return []
    matrix = _integral_matrix(columns, length)
    _, _, pivots = matrix.rref_den(method="FF")
    return list(pivots)


def rank(columns: Sequence[SparseVector], length: int) -> int:
    return len(independent_columns(columns, length))


def solve(
    columns: Sequence[SparseVector], target: SparseVector, length: int
) -> Optional[List[ComplexRational]]:
    """One exact solution of ``sum_j c_j * columns[j] = target`` (free variables 0), or None."""
    ncols = len(columns)
    augmented = list(columns) + [target]
    matrix = _field_matrix(augmented, length)
    reduced, pivots = matrix.rref()
    if ncols in pivots:
        return None
    dense = reduced.to_list()
    solution = [QQ_I.zero] * ncols
    for r, p in enumerate(pivots):
        value = dense[r][ncols]
        solution[p] = value if matrix.domain == QQ_I else QQ_I(value, 0)
    return solution


def nullspace_vector(rows: Sequence[Sequence[ComplexRational]]) -> Optional[Tuple[ComplexRational, ...]]:
    """A nonzero kernel vector of a dense matrix, or None when the kernel is trivial."""
    if not rows:
        return None
    ncols = len(rows[0])
    matrix = DomainMatrix([list(row) for row in rows], (len(rows), ncols), QQ_I)
    kernel = matrix.nullspace()
    if kernel.shape[0] == 0:
        return None
    return tuple(kernel.to_list()[0])
