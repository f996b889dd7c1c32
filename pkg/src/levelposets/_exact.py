"""Small dense exact linear solver over the rationals."""

from __future__ import annotations

from fractions import Fraction


class SingularSystemError(ArithmeticError):
    pass


def solve_square(rows: list[list[int]], rhs: list[int]) -> list[Fraction]:
    """Solve ``rows @ x = rhs`` exactly by Gauss-Jordan elimination.

    Raises SingularSystemError when the coefficient matrix is singular.
    """
    n = len(rows)
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularSystemError(f"no pivot in column {col}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        if pv != 1:
            aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]
