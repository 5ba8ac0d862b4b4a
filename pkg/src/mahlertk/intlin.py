"""Exact integer linear algebra: HNF, integer kernels, LLL, shortest vectors.

All lattices are row lattices of integer matrices.  Sizes here are small
(desk scale), so clarity beats asymptotics throughout.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

Vec = List[int]
Mat = List[List[int]]


def identity(n: int) -> Mat:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Mat:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    oi[j] += x * bt[j]
    return out


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> Vec:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vecmat(v: Sequence[int], a: Sequence[Sequence[int]]) -> Vec:
    m = len(a[0])
    out = [0] * m
    for x, row in zip(v, a):
        if x:
            for j in range(m):
                out[j] += x * row[j]
    return out


def matpow(a: Sequence[Sequence[int]], k: int) -> Mat:
    n = len(a)
    result = identity(n)
    base = [list(r) for r in a]
    while k:
        if k & 1:
            result = matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    return result


def bareiss_det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free elimination."""
    m = [list(map(int, row)) for row in a]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


# -- Hermite normal form -------------------------------------------------------


def hnf_rows(mat: Sequence[Sequence[int]]) -> Mat:
    """Row-style HNF of the row lattice (pivots positive, reduced above)."""
    m = [list(map(int, row)) for row in mat]
    if not m:
        return []
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        # find a pivot row with nonzero entry in column c at or below r
        piv = None
        for i in range(r, rows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        # clear below via extended Euclid
        for i in range(r + 1, rows):
            while m[i][c] != 0:
                q = m[r][c] // m[i][c]
                m[r] = [a - q * b for a, b in zip(m[r], m[i])]
                m[r], m[i] = m[i], m[r]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        # reduce entries above the pivot
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    nonzero = [row for row in m if any(row)]
    return nonzero


def left_kernel_basis(mat: Sequence[Sequence[int]]) -> Mat:
    """Basis of {x in Z^n : x @ mat = 0} (a saturated lattice)."""
    n = len(mat)
    if n == 0:
        return []
    m = len(mat[0]) if mat[0] else 0
    aug = [list(map(int, row)) + [1 if i == j else 0 for j in range(n)]
           for i, row in enumerate(mat)]
    h = hnf_rows(aug)
    out = [row[m:] for row in h if not any(row[:m])]
    return out


def lattice_eq(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return hnf_rows(a) == hnf_rows(b)


# -- F2 linear algebra -----------------------------------------------------------


def f2_nullspace(rows: Sequence[Sequence[int]], n: int) -> Mat:
    """Basis of the right kernel of a matrix over F2 (vectors of length n)."""
    m = [list(x % 2 for x in row) for row in rows]
    pivots = {}
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                m[i] = [(a + b) % 2 for a, b in zip(m[i], m[r])]
        pivots[c] = r
        r += 1
    basis = []
    free = [c for c in range(n) if c not in pivots]
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for c, ri in pivots.items():
            if m[ri][fc]:
                v[c] = 1
        basis.append(v)
    return basis


# -- LLL and shortest vectors -------------------------------------------------------


def _gram_schmidt(basis: Sequence[Sequence[int]]):
    n = len(basis)
    bstar: List[List[Fraction]] = []
    mu: List[List[Fraction]] = [[Fraction(0)] * n for _ in range(n)]
    norms: List[Fraction] = []
    for i in range(n):
        v = [Fraction(x) for x in basis[i]]
        for j in range(i):
            if norms[j] == 0:
                mu[i][j] = Fraction(0)
                continue
            mu[i][j] = Fraction(
                sum(Fraction(basis[i][k]) * bstar[j][k] for k in range(len(v))),
                1) / norms[j]
            v = [a - mu[i][j] * b for a, b in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(sum(x * x for x in v))
    return bstar, mu, norms


def lll_reduce(basis: Sequence[Sequence[int]], delta=Fraction(99, 100)) -> Mat:
    """Standard LLL on linearly independent integer rows."""
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n <= 1:
        return b
    delta = Fraction(delta)
    bstar, mu, norms = _gram_schmidt(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [a - q * c for a, c in zip(b[k], b[j])]
                bstar, mu, norms = _gram_schmidt(b)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bstar, mu, norms = _gram_schmidt(b)
            k = max(k - 1, 1)
    return b


def _norm2(v: Sequence[int]) -> int:
    return sum(x * x for x in v)


def shortest_vector(basis: Sequence[Sequence[int]]) -> Optional[Vec]:
    """Exact shortest nonzero vector of the row lattice (enumeration on LLL basis)."""
    rows = [list(map(int, r)) for r in basis if any(r)]
    if not rows:
        return None
    rows = hnf_rows(rows)
    red = lll_reduce(rows)
    _, mu, norms = _gram_schmidt(red)
    n = len(red)
    best = min(red, key=_norm2)
    best_n2 = Fraction(_norm2(best))

    x = [0] * n

    def enumerate_level(i: int, tail: Fraction):
        nonlocal best, best_n2
        if i < 0:
            if any(x):
                v = [0] * len(red[0])
                for c, row in zip(x, red):
                    for t in range(len(v)):
                        v[t] += c * row[t]
                n2 = Fraction(_norm2(v))
                if 0 < n2 < best_n2:
                    best, best_n2 = v, n2
            return
        if norms[i] == 0:
            x[i] = 0
            enumerate_level(i - 1, tail)
            return
        center = -sum(mu[j][i] * x[j] for j in range(i + 1, n))
        base = round(center)
        for offset_mag in range(0, 10 ** 6):
            progressed = False
            for cand in ({base} if offset_mag == 0
                         else {base - offset_mag, base + offset_mag}):
                y = Fraction(cand) - center
                contrib = norms[i] * y * y
                if contrib + tail <= best_n2:
                    x[i] = cand
                    enumerate_level(i - 1, tail + contrib)
                    progressed = True
            if offset_mag > 0 and not progressed:
                break

    enumerate_level(n - 1, Fraction(0))
    if best[0] < 0 or (best[0] == 0 and sum(best) < 0):
        best = [-v for v in best]
    return best
