"""Exact linear algebra over Q and Q(z6) on plain row lists."""
from fractions import Fraction
from typing import List, Sequence, Tuple

from .utils import PreconditionError

Matrix = List[List]


def _div(x, y):
    """Exact quotient; ints stay ints when divisible."""
    if isinstance(x, int) and isinstance(y, int):
        q, r = divmod(x, y)
        return q if r == 0 else Fraction(x, y)
    return x / y


def _copy(matrix: Sequence[Sequence]) -> Matrix:
    return [list(row) for row in matrix]


def _small_det(m: Sequence[Sequence]):
    q = len(m)
    if q == 0:
        return 1
    if q == 1:
        return m[0][0]
    if q == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if q == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
    total = 0
    for j in range(q):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _small_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def det(matrix: Sequence[Sequence]):
    """Determinant by cofactor expansion up to 4x4 and Bareiss elimination beyond."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise PreconditionError("determinant of a non-square matrix")
    if n <= 4:
        return _small_det(matrix)
    m = _copy(matrix)
    sign = 1
    prev = 1
    for k in range(n - 1):
        pivot = next((i for i in range(k, n) if m[i][k]), None)
        if pivot is None:
            return 0
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _div(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev)
            m[i][k] = 0
        prev = m[k][k]
    return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]


def top_square_det(columns: Sequence[Sequence]):
    """det of the top q x q block of the m x q matrix whose columns are given."""
    q = len(columns)
    return det([[columns[j][i] for j in range(q)] for i in range(q)])


def exact_rank(matrix: Sequence[Sequence]) -> int:
    """Rank via fraction-free elimination, pivoting on the first nonzero entry of the leftmost open column."""
    m = _copy(matrix)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    r = 0
    prev = 1
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = _div(m[r][c] * m[i][j] - m[i][c] * m[r][j], prev)
            m[i][c] = 0
        prev = m[r][c]
        r += 1
    return r


def row_echelon(matrix: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """
    Reduced row echelon form.
    Returns the nonzero rows (pivot entries equal to 1) and their pivot columns.
    """
    m = _copy(matrix)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        lead = m[r][c]
        m[r] = [_div(x, lead) for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve a square nonsingular system exactly."""
    n = len(matrix)
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = row_echelon(augmented)
    if pivots != list(range(n)):
        raise PreconditionError("singular system")
    return [row[n] for row in reduced]


def mat_vec(matrix: Sequence[Sequence], vector: Sequence) -> list:
    return [sum((a * x for a, x in zip(row, vector)), 0) for row in matrix]


def transpose(matrix: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*matrix)]
