"""Exact rank and determinant over Q(i) by fraction-free (Bareiss) elimination."""

from __future__ import annotations

from math import lcm
from typing import List, Sequence

from .polyring.gaussian import GaussianRational, ONE, ZERO


def _integral_rows(rows: Sequence[Sequence[GaussianRational]]) -> List[List[GaussianRational]]:
    # Row scaling by a nonzero constant changes neither rank nor the zero-ness of det.
    out = []
    for row in rows:
        den = 1
        for x in row:
            den = lcm(den, x.re.denominator, x.im.denominator)
        out.append([x * den for x in row] if den != 1 else list(row))
    return out


def rank(rows: Sequence[Sequence[GaussianRational]]) -> int:
    if not rows or not rows[0]:
        return 0
    a = _integral_rows(rows)
    m, n = len(a), len(a[0])
    prev = ONE
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, m):
            aic = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, n):
                row_i[j] = (piv * row_i[j] - aic * row_r[j]) / prev
            row_i[c] = ZERO
        prev = piv
        r += 1
    return r


def determinant(rows: Sequence[Sequence[GaussianRational]]) -> GaussianRational:
    n = len(rows)
    if n == 0:
        return ONE
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    a = [[GaussianRational.coerce(x) for x in r] for r in rows]
    sign = 1
    prev = ONE
    for c in range(n - 1):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        piv = a[c][c]
        for i in range(c + 1, n):
            aic = a[i][c]
            for j in range(c + 1, n):
                a[i][j] = (piv * a[i][j] - aic * a[c][j]) / prev
            a[i][c] = ZERO
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_determinant(rows, zero, one):
    """Determinant over any commutative ring by permutation expansion (small n only)."""
    import itertools

    n = len(rows)
    total = zero
    for perm in itertools.permutations(range(n)):
        term = one
        for i, j in enumerate(perm):
            term = term * rows[i][j]
            if not term:
                break
        if term:
            total = total + term if permutation_sign(perm) > 0 else total - term
    return total
