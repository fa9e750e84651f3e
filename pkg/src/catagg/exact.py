"""Exact integer / rational linear algebra used for rank decisions."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np


def _primitive(vec: list[int]) -> list[int]:
    g = 0
    for x in vec:
        if x:
            g = gcd(g, x)
            if g == 1:
                return vec
    if g > 1:
        return [x // g for x in vec]
    return vec


class EchelonBasis:
    """Incremental row-echelon basis over the integers (fraction-free).

    ``add`` reduces a candidate against the stored rows; it is stored and
    ``True`` returned iff it is linearly independent of them over Q.
    """

    def __init__(self):
        self.rows: list[tuple[int, list[int]]] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sequence[int]) -> list[int]:
        x = list(vec)
        for p, row in self.rows:
            xp = x[p]
            if xp:
                rp = row[p]
                x = _primitive([rp * xi - xp * ri for xi, ri in zip(x, row)])
        return x

    def add(self, vec: Sequence[int]) -> bool:
        x = self.reduce(vec)
        for p, xp in enumerate(x):
            if xp:
                self.rows.append((p, x))
                return True
        return False


def rank(matrix) -> int:
    """Exact rank of an integer/rational matrix (rows are vectors)."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def solve(gram, rhs) -> np.ndarray:
    """Solve ``gram @ X = rhs`` exactly for a nonsingular square ``gram``."""
    k = len(gram)
    cols = len(rhs[0]) if k else 0
    aug = [[Fraction(x) for x in gram[i]] + [Fraction(x) for x in rhs[i]] for i in range(k)]
    for c in range(k):
        piv = next((i for i in range(c, k) if aug[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular Gram matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(k):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    out = np.empty((k, cols), dtype=object)
    for i in range(k):
        out[i, :] = aug[i][k:]
    return out


def to_object(matrix) -> np.ndarray:
    arr = np.asarray(matrix, dtype=object)
    return arr


def fraction_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)
