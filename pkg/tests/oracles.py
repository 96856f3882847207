"""Independent reference implementations used only by the tests."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations


def dense_rank(rows: list[list]) -> int:
    """Plain Gaussian elimination over Fractions on a dense copy."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def distinct_permutations(blocks: list[int]) -> int:
    """Count arrangements of a multiset by listing them."""
    word = [i for i, b in enumerate(blocks) for _ in range(b)]
    return len(set(permutations(word)))
