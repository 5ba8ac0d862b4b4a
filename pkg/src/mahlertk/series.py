"""Truncated multivariate power series with rigorous tail bounds.

A TruncatedSeries stores all coefficients of total degree < order, plus an
optional constant C bounding the absolute value of *every* exact coefficient
of the full series.  Rigorous evaluation inside the open unit polydisc sums
the finite part in ball arithmetic and adds the tail enclosure

    |tail| <= C * sum_{d >= order} (d+1)^(n-1) * rho^d,       rho = max_i |z_i|,

evaluated as an exact rational upper bound via the ratio test remainder.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Sequence, Tuple

from .ball import RealBall, ball_sum
from .errors import (ArityMismatch, DivergenceRisk, InsufficientOrder,
                     MissingTailBound)
from .poly import MultiPolynomial, _grlex_key

Exponent = Tuple[int, ...]


class TruncatedSeries:
    __slots__ = ("variables", "order", "coefficients", "tail_bound_constant")

    def __init__(self, variables: Sequence[str], order: int,
                 coefficients: Dict[Exponent, Fraction],
                 tail_bound_constant=None):
        vs = tuple(variables)
        clean: Dict[Exponent, Fraction] = {}
        maxabs = Fraction(0)
        for exp, c in coefficients.items():
            c = Fraction(c)
            if c == 0:
                continue
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(vs):
                raise ArityMismatch(f"exponent {exp} vs variables {vs}")
            if sum(exp) >= order:
                raise ValueError(f"stored exponent {exp} at or beyond order {order}")
            clean[exp] = c
            maxabs = max(maxabs, abs(c))
        if tail_bound_constant is not None:
            tail_bound_constant = Fraction(tail_bound_constant)
            if tail_bound_constant < maxabs:
                raise ValueError("tail constant smaller than a stored coefficient")
        self.variables = vs
        self.order = int(order)
        self.coefficients = clean
        self.tail_bound_constant = tail_bound_constant

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, variables, order, tail_bound_constant=None):
        return cls(variables, order, {}, tail_bound_constant)

    @classmethod
    def from_poly(cls, p: MultiPolynomial, order: int, tail_bound_constant=None):
        terms = {e: c for e, c in p.terms.items() if sum(e) < order}
        if any(sum(e) >= order for e in p.terms):
            raise InsufficientOrder("polynomial degree at or beyond requested order")
        return cls(p.variables, order, terms, tail_bound_constant)

    @classmethod
    def univariate(cls, variable: str, coeffs: Sequence[Fraction],
                   tail_bound_constant=None):
        terms = {(k,): Fraction(c) for k, c in enumerate(coeffs) if Fraction(c) != 0}
        return cls((variable,), len(coeffs), terms, tail_bound_constant)

    # -- queries ------------------------------------------------------------------

    def coefficient(self, exp) -> Fraction:
        return self.coefficients.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coefficients

    def first_nonzero(self):
        """(exponent, coefficient) minimal under graded lex, or None."""
        if not self.coefficients:
            return None
        exp = min(self.coefficients, key=_grlex_key)
        return exp, self.coefficients[exp]

    def with_tail_constant(self, c) -> "TruncatedSeries":
        return TruncatedSeries(self.variables, self.order,
                               dict(self.coefficients), c)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise InsufficientOrder(f"stored order {self.order} < requested {order}")
        terms = {e: c for e, c in self.coefficients.items() if sum(e) < order}
        return TruncatedSeries(self.variables, order, terms, self.tail_bound_constant)

    # -- exact arithmetic (tail constants are dropped) ----------------------------

    def _check(self, other: "TruncatedSeries"):
        if self.variables != other.variables:
            raise ArityMismatch("series over different variables")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        order = min(self.order, other.order)
        out = {e: c for e, c in self.coefficients.items() if sum(e) < order}
        for e, c in other.coefficients.items():
            if sum(e) >= order:
                continue
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return TruncatedSeries(self.variables, order, out)

    def __neg__(self):
        return TruncatedSeries(self.variables, self.order,
                               {e: -c for e, c in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return TruncatedSeries(self.variables, self.order,
                                   {e: v * c for e, v in self.coefficients.items()})
        self._check(other)
        order = min(self.order, other.order)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.coefficients.items():
            if sum(e1) >= order:
                continue
            for e2, c2 in other.coefficients.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if sum(e) >= order:
                    continue
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return TruncatedSeries(self.variables, order, out)

    __rmul__ = __mul__

    def mul_poly(self, p: MultiPolynomial) -> "TruncatedSeries":
        return self * TruncatedSeries(
            self.variables, self.order + max(p.total_degree(), 0) + 1, p.terms)

    def compose_monomial(self, matrix) -> "TruncatedSeries":
        """Series of f(Tz) truncated at the same order; rows of T must be nonzero."""
        rows = [tuple(int(x) for x in r) for r in matrix]
        n = len(self.variables)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ArityMismatch("substitution matrix size mismatch")
        if any(sum(r) == 0 for r in rows):
            raise InsufficientOrder(
                "zero row in transform: composed series needs unbounded input order")
        out: Dict[Exponent, Fraction] = {}
        for e, c in self.coefficients.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    for j in range(n):
                        ne[j] += k * rows[i][j]
            if sum(ne) >= self.order:
                continue
            key = tuple(ne)
            s = out.get(key, Fraction(0)) + c
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return TruncatedSeries(self.variables, self.order, out)


def series_inverse(den: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series with nonzero constant term."""
    c0 = den.coefficient((0,) * len(den.variables))
    if c0 == 0:
        raise ZeroDivisionError("series inverse needs a nonzero constant term")
    # Newton-free iteration: inv <- inv*(2 - den*inv), doubling correct order.
    inv = TruncatedSeries(den.variables, den.order,
                          {(0,) * len(den.variables): 1 / c0})
    two = TruncatedSeries(den.variables, den.order,
                          {(0,) * len(den.variables): Fraction(2)})
    correct = 1
    while correct < den.order:
        inv = inv * (two - den * inv)
        correct *= 2
    return inv


def ratfun_series(rf, variables, order: int) -> TruncatedSeries:
    """Expand num/den around 0; den must be invertible at 0."""
    num = TruncatedSeries.from_poly(rf.num.extend(variables), order + rf.num.total_degree() + 1)
    den = TruncatedSeries.from_poly(rf.den.extend(variables), order + rf.den.total_degree() + 1)
    num = num.truncate(order)
    den = den.truncate(order)
    return num * series_inverse(den)


# -- rigorous evaluation ----------------------------------------------------------


def tail_bound(order: int, n_vars: int, rho: Fraction, constant: Fraction) -> Fraction:
    """Exact rational upper bound for C * sum_{d>=order} (d+1)^(n-1) rho^d."""
    if constant == 0 or rho == 0:
        return Fraction(0)
    if rho >= 1:
        raise DivergenceRisk("tail bound requires rho < 1")
    # a_d = (d+1)^(n-1) rho^d; the ratio a_{d+1}/a_d decreases to rho, so
    # sum_{d>=d0} a_d <= a_{d0} / (1 - ratio(d0)) once ratio(d0) < 1.
    def ratio(d):
        return rho * Fraction(d + 2, d + 1) ** (n_vars - 1)

    d0 = order
    while ratio(d0) >= 1:
        d0 += 1
    total = Fraction(0)
    for d in range(order, d0):
        total += Fraction(d + 1) ** (n_vars - 1) * rho ** d
    a_d0 = Fraction(d0 + 1) ** (n_vars - 1) * rho ** d0
    total += a_d0 / (1 - ratio(d0))
    return constant * total


def series_eval_ball(s: TruncatedSeries, point: Sequence[RealBall],
                     prec: int = None) -> RealBall:
    """Enclosure of the *full* series value at a point in the unit polydisc."""
    n = len(s.variables)
    if len(point) != n:
        raise ArityMismatch(f"expected {n} coordinates, got {len(point)}")
    if s.tail_bound_constant is None:
        raise MissingTailBound("series has no tail bound constant")
    p = prec or max((b.prec for b in point), default=128)
    rho = Fraction(0)
    for b in point:
        _, up = b.abs_bounds()
        if up >= 1:
            raise DivergenceRisk(f"coordinate bound {up} >= 1")
        rho = max(rho, up)
    terms = []
    for e, c in s.coefficients.items():
        t = RealBall.from_fraction(c, p)
        for b, k in zip(point, e):
            if k:
                t = t * b ** k
        terms.append(t)
    finite = ball_sum(terms, p)
    t = tail_bound(s.order, n, rho, s.tail_bound_constant)
    return finite + RealBall.from_fraction_interval(-t, t, p)
