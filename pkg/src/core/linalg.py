"""
Exact linear algebra over the rationals.

Matrices live as numpy object arrays of ``fractions.Fraction``; the heavy lifting
(rank, rref, determinant, inverse) is delegated to sympy's ``DomainMatrix`` over QQ.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from src.exceptions import PreconditionException

Vector = Tuple[Fraction, ...]


def frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    return Fraction(value)


def to_array(rows: Iterable[Sequence], columns: int = None) -> np.ndarray:
    data = [[frac(x) for x in row] for row in rows]
    if not data:
        return np.empty((0, columns or 0), dtype=object)
    array = np.empty((len(data), len(data[0])), dtype=object)
    for i, row in enumerate(data):
        array[i, :] = row
    return array


def zeros(rows: int, columns: int) -> np.ndarray:
    array = np.empty((rows, columns), dtype=object)
    array.fill(Fraction(0))
    return array


def _domain(matrix: np.ndarray) -> DomainMatrix:
    rows, columns = matrix.shape
    entries = [[QQ(int(x.numerator), int(x.denominator)) for x in (frac(y) for y in row)] for row in matrix]
    return DomainMatrix(entries, (rows, columns), QQ)


def _from_domain(dm: DomainMatrix) -> np.ndarray:
    rows, columns = dm.shape
    return to_array(([frac(x) for x in row] for row in dm.to_list()), columns) if rows else zeros(0, columns)


def rank(matrix: np.ndarray) -> int:
    if matrix.size == 0:
        return 0
    return _domain(matrix).rank()


def rref(matrix: np.ndarray) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Reduced row echelon form (zero rows dropped) and pivot columns."""
    if matrix.size == 0:
        return zeros(0, matrix.shape[1]), ()
    reduced, pivots = _domain(matrix).rref()
    reduced_array = _from_domain(reduced)
    return reduced_array[: len(pivots)], tuple(pivots)


def nullspace(matrix: np.ndarray) -> List[Vector]:
    """
    Canonical null-space basis: one vector per free column, with a 1 at that column
    and zeros at the other free columns. Ordered by free column.
    """
    columns = matrix.shape[1]
    reduced, pivots = rref(matrix)
    free = [j for j in range(columns) if j not in pivots]
    basis = []
    for f in free:
        vector = [Fraction(0)] * columns
        vector[f] = Fraction(1)
        for row, p in enumerate(pivots):
            vector[p] = -reduced[row, f]
        basis.append(tuple(vector))
    return basis


def det(matrix: np.ndarray) -> Fraction:
    rows, columns = matrix.shape
    if rows != columns:
        raise PreconditionException(f"determinant of a {rows}x{columns} matrix", operation="det")
    if rows == 0:
        return Fraction(1)
    return frac(_domain(matrix).det())


def inverse(matrix: np.ndarray) -> np.ndarray:
    if det(matrix) == 0:
        raise PreconditionException("matrix is singular", operation="inverse")
    return _from_domain(_domain(matrix).inv())


def solve(matrix: np.ndarray, rhs: Sequence) -> Vector:
    """One solution of ``matrix @ x = rhs`` (free variables set to zero)."""
    rows, columns = matrix.shape
    augmented = np.hstack([matrix, to_array([[frac(b)] for b in rhs], 1)])
    reduced, pivots = rref(augmented)
    if columns in pivots:
        raise PreconditionException("linear system is inconsistent", operation="solve")
    solution = [Fraction(0)] * columns
    for row, p in enumerate(pivots):
        solution[p] = reduced[row, columns]
    return tuple(solution)


def dot(x: Sequence, y: Sequence) -> Fraction:
    return sum((frac(a) * frac(b) for a, b in zip(x, y)), Fraction(0))


def is_zero(vector: Sequence) -> bool:
    return all(frac(x) == 0 for x in vector)


def proportional(x: Sequence, y: Sequence) -> bool:
    """Both nonzero and spanning the same line."""
    if is_zero(x) or is_zero(y):
        return False
    return rank(to_array([x, y])) == 1


def format_rational(value: Fraction) -> str:
    value = frac(value)
    return f"{value.numerator}/{value.denominator}"
