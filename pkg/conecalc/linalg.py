"""
Exact linear algebra helpers.

Thin wrappers around sympy matrices that accept and return
`fractions.Fraction`, so the rest of the package never touches sympy types.
"""

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple, Union

import sympy

Number = Union[int, Fraction]
Row = Sequence[Number]


def to_sympy(value: Number) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def from_sympy(value: sympy.Expr) -> Fraction:
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def matrix(rows: Sequence[Row], ncols: Optional[int] = None) -> sympy.Matrix:
    if not rows:
        return sympy.zeros(0, ncols or 0)
    return sympy.Matrix([[to_sympy(x) for x in row] for row in rows])


def rank(rows: Sequence[Row]) -> int:
    if not rows or not rows[0]:
        return 0
    return int(matrix(rows).rank())


def det(rows: Sequence[Row]) -> Fraction:
    return from_sympy(matrix(rows).det())


def inverse(rows: Sequence[Row]) -> List[List[Fraction]]:
    inv = matrix(rows).inv()
    return [[from_sympy(inv[i, j]) for j in range(inv.cols)] for i in range(inv.rows)]


def greedy_independent(rows: Sequence[Row], priority: Sequence[int]) -> List[int]:
    """Indices of a maximal independent subset, taken greedily in priority order."""
    chosen: List[int] = []
    current = 0
    for index in priority:
        trial = rank([rows[i] for i in chosen + [index]])
        if trial > current:
            chosen.append(index)
            current = trial
    return chosen


def solve_combination(basis: Sequence[Row], target: Row) -> List[Fraction]:
    """Coefficients c with sum(c_i * basis_i) == target.

    Raises:
        ValueError: If target is not in the span, or the basis is dependent
    """
    if not basis:
        if any(Fraction(x) != 0 for x in target):
            raise ValueError("Nonzero target with empty basis")
        return []
    system = matrix(basis).T
    rhs = sympy.Matrix([to_sympy(x) for x in target])
    solution, free = system.gauss_jordan_solve(rhs)
    if free.shape[0]:
        raise ValueError("Basis rows are linearly dependent")
    return [from_sympy(solution[i, 0]) for i in range(solution.rows)]


def dot(u: Row, v: Row) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


def primitive(vector: Row) -> Tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers, keeping its sign."""
    values = [Fraction(x) for x in vector]
    denominator = reduce(lcm, (v.denominator for v in values), 1)
    ints = [int(v * denominator) for v in values]
    divisor = reduce(gcd, (abs(x) for x in ints), 0)
    if divisor == 0:
        return tuple(ints)
    return tuple(x // divisor for x in ints)
