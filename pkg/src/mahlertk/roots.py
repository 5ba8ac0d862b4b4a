"""Real root isolation and exact comparison of real algebraic numbers.

Univariate polynomials are handled as dense Fraction coefficient lists
(index = degree).  Isolation uses Sturm chains with bisection; intervals have
rational non-root endpoints and can be refined to any width.  Degenerate
intervals (lo == hi) mark exact rational roots.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import ArityMismatch
from .poly import MultiPolynomial

Interval = Tuple[Fraction, Fraction]


# -- dense univariate helpers ---------------------------------------------------


def dense_from_poly(p: MultiPolynomial) -> List[Fraction]:
    """Coefficient list of a univariate MultiPolynomial."""
    if len(p.variables) != 1:
        raise ArityMismatch("expected a univariate polynomial")
    d = p.total_degree()
    coeffs = [Fraction(0)] * (max(d, 0) + 1)
    for (k,), c in p.terms.items():
        coeffs[k] = c
    return trim(coeffs)


def trim(coeffs: Sequence[Fraction]) -> List[Fraction]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(coeffs: Sequence[Fraction]) -> int:
    return len(trim(coeffs)) - 1


def eval_at(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def derivative(coeffs: Sequence[Fraction]) -> List[Fraction]:
    return [c * k for k, c in enumerate(coeffs)][1:]


def _divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = trim(a)
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and trim(r):
        shift = len(r) - len(b)
        factor = r[-1] / b[-1]
        q[shift] = factor
        for i, c in enumerate(b):
            r[shift + i] -= factor * c
        r = trim(r)
        if not r:
            break
    return trim(q), trim(r)


def poly_rem(a, b):
    return _divmod(a, b)[1]


def uni_gcd(a, b) -> List[Fraction]:
    """Monic gcd over Q."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, poly_rem(a, b)
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def squarefree_part(coeffs) -> List[Fraction]:
    coeffs = trim(coeffs)
    if degree(coeffs) <= 0:
        return coeffs
    g = uni_gcd(coeffs, derivative(coeffs))
    if degree(g) <= 0:
        return coeffs
    return _divmod(coeffs, g)[0]


# -- Sturm chains ----------------------------------------------------------------


def sturm_chain(coeffs) -> List[List[Fraction]]:
    chain = [trim(coeffs), derivative(coeffs)]
    while trim(chain[-1]):
        rem = poly_rem(chain[-2], chain[-1])
        chain.append([-c for c in rem])
    chain.pop()
    return [c for c in chain if trim(c)]


def _variations(chain, x: Fraction) -> int:
    signs = []
    for c in chain:
        v = eval_at(c, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots_open(chain, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi]; endpoints must avoid roots of p."""
    return _variations(chain, lo) - _variations(chain, hi)


def root_bound(coeffs) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    coeffs = trim(coeffs)
    lead = abs(coeffs[-1])
    m = max((abs(c) for c in coeffs[:-1]), default=Fraction(0))
    return Fraction(1) + m / lead


# -- isolation ----------------------------------------------------------------------


def _isolate(chain, sqf, lo: Fraction, hi: Fraction, out: List[Interval]):
    n = count_roots_open(chain, lo, hi)
    if n == 0:
        return
    if n == 1:
        out.append((lo, hi))
        return
    mid = (lo + hi) / 2
    if eval_at(sqf, mid) == 0:
        # shrink (a, b) around the exact root mid until it contains no other root
        eps = (hi - lo) / 4
        while True:
            a, b = mid - eps, mid + eps
            if (eval_at(sqf, a) != 0 and eval_at(sqf, b) != 0
                    and count_roots_open(chain, a, b) == 1):
                break
            eps /= 2
        _isolate(chain, sqf, lo, a, out)
        out.append((mid, mid))
        _isolate(chain, sqf, b, hi, out)
        return
    _isolate(chain, sqf, lo, mid, out)
    _isolate(chain, sqf, mid, hi, out)


def isolate_real_roots_dense(coeffs) -> List[Interval]:
    sqf = squarefree_part(coeffs)
    if degree(sqf) <= 0:
        return []
    chain = sturm_chain(sqf)
    b = root_bound(sqf)
    lo, hi = -b, b
    # Cauchy bound is strict, so the endpoints avoid all roots.
    out: List[Interval] = []
    _isolate(chain, sqf, lo, hi, out)
    out.sort(key=lambda iv: iv[0])
    return out


def isolate_real_roots(p: MultiPolynomial) -> List[Interval]:
    """Disjoint rational isolating intervals, one per distinct real root."""
    coeffs = dense_from_poly(p)
    if not coeffs:
        raise ValueError("cannot isolate roots of the zero polynomial")
    return isolate_real_roots_dense(coeffs)


def refine_root(coeffs, interval: Interval, width: Fraction) -> Interval:
    """Shrink an isolating interval below the requested width by bisection."""
    sqf = squarefree_part(coeffs)
    chain = sturm_chain(sqf)
    lo, hi = interval
    while hi - lo > width:
        mid = (lo + hi) / 2
        if eval_at(sqf, mid) == 0:
            return (mid, mid)
        if count_roots_open(chain, lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return (lo, hi)


# -- real algebraic numbers -----------------------------------------------------------


class AlgebraicReal:
    """A real algebraic number as (squarefree poly, isolating interval)."""

    __slots__ = ("coeffs", "lo", "hi")

    def __init__(self, coeffs, interval: Interval):
        self.coeffs = squarefree_part(coeffs)
        self.lo, self.hi = interval

    @classmethod
    def rational(cls, value: Fraction) -> "AlgebraicReal":
        value = Fraction(value)
        return cls([-value, Fraction(1)], (value, value))

    @classmethod
    def largest_real_root(cls, coeffs) -> "AlgebraicReal | None":
        ivs = isolate_real_roots_dense(coeffs)
        if not ivs:
            return None
        return cls(coeffs, ivs[-1])

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def interval(self) -> Interval:
        return (self.lo, self.hi)

    def refine(self, width: Fraction) -> None:
        self.lo, self.hi = refine_root(self.coeffs, (self.lo, self.hi), width)

    def cmp_fraction(self, c: Fraction) -> int:
        c = Fraction(c)
        if self.is_exact():
            return (self.lo > c) - (self.lo < c)
        if eval_at(self.coeffs, c) == 0 and self.lo < c < self.hi:
            return 0
        while self.lo < c < self.hi:
            self.refine((self.hi - self.lo) / 4)
        if c <= self.lo:
            return 1
        return -1

    def cmp(self, other: "AlgebraicReal") -> int:
        if other.is_exact():
            return self.cmp_fraction(other.lo)
        if self.is_exact():
            return -other.cmp_fraction(self.lo)
        g = uni_gcd(self.coeffs, other.coeffs)
        if degree(g) >= 1:
            gchain = sturm_chain(g)
            mine = count_roots_open(gchain, self.lo, self.hi) == 1
            theirs = count_roots_open(gchain, other.lo, other.hi) == 1
            if mine and theirs:
                g_ivs = isolate_real_roots_dense(g)
                k1 = _locate(g, g_ivs, self)
                k2 = _locate(g, g_ivs, other)
                if k1 == k2:
                    return 0
        while not (self.hi < other.lo or other.hi < self.lo):
            self.refine((self.hi - self.lo) / 4)
            other.refine((other.hi - other.lo) / 4)
        return -1 if self.hi < other.lo else 1

    def __repr__(self):
        return f"AlgebraicReal({self.lo}..{self.hi})"


def _locate(g, g_intervals, x: AlgebraicReal) -> int:
    """Index of the isolating interval of g that contains x (a root of g)."""
    g_intervals = list(g_intervals)
    while True:
        for k, (lo, hi) in enumerate(g_intervals):
            if lo <= x.lo and x.hi <= hi:
                return k
        x.refine((x.hi - x.lo) / 4)
        g_intervals = [refine_root(g, iv, (iv[1] - iv[0]) / 2) if iv[0] != iv[1] else iv
                       for iv in g_intervals]
