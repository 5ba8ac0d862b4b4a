"""Midpoint-radius real balls with proven enclosure semantics.

Every operation returns a ball containing the exact image of its input
intervals.  Endpoint computations use MPFR directed rounding (via gmpy2), so
soundness rests only on MPFR's correct-rounding guarantee.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpfr, mpz

DEFAULT_PREC = 128


def _down(prec):
    return gmpy2.context(precision=prec, round=gmpy2.RoundDown)


def _up(prec):
    return gmpy2.context(precision=prec, round=gmpy2.RoundUp)


def _near(prec):
    return gmpy2.context(precision=prec, round=gmpy2.RoundToNearest)


def mpfr_to_fraction(x: mpfr) -> Fraction:
    num, den = x.as_integer_ratio()
    return Fraction(int(num), int(den))


class RealBall:
    """Closed interval [midpoint - radius, midpoint + radius]."""

    __slots__ = ("midpoint", "radius", "prec")

    def __init__(self, midpoint: mpfr, radius: mpfr, prec: int):
        if radius < 0:
            raise ValueError("negative radius")
        self.midpoint = midpoint
        self.radius = radius
        self.prec = prec

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_endpoints(cls, lo: mpfr, hi: mpfr, prec: int) -> "RealBall":
        if lo > hi:
            raise ValueError("lo > hi")
        mid = _near(prec).div(_near(prec).add(lo, hi), 2)
        up = _up(prec)
        rad = max(up.sub(hi, mid), up.sub(mid, lo), mpfr(0))
        return cls(mid, rad, prec)

    @classmethod
    def from_fraction(cls, value, prec: int = DEFAULT_PREC) -> "RealBall":
        f = Fraction(value)
        lo = _down(prec).div(mpz(f.numerator), mpz(f.denominator))
        hi = _up(prec).div(mpz(f.numerator), mpz(f.denominator))
        return cls.from_endpoints(lo, hi, prec)

    @classmethod
    def from_fraction_interval(cls, lo, hi, prec: int = DEFAULT_PREC) -> "RealBall":
        lo, hi = Fraction(lo), Fraction(hi)
        l = _down(prec).div(mpz(lo.numerator), mpz(lo.denominator))
        h = _up(prec).div(mpz(hi.numerator), mpz(hi.denominator))
        return cls.from_endpoints(l, h, prec)

    @classmethod
    def zero(cls, prec: int = DEFAULT_PREC) -> "RealBall":
        return cls(mpfr(0), mpfr(0), prec)

    @classmethod
    def exact_int(cls, n: int, prec: int = DEFAULT_PREC) -> "RealBall":
        return cls.from_fraction(Fraction(n), prec)

    # -- endpoints ----------------------------------------------------------

    def endpoints(self):
        p = self.prec
        lo = _down(p).sub(self.midpoint, self.radius)
        hi = _up(p).add(self.midpoint, self.radius)
        return lo, hi

    def lower_fraction(self) -> Fraction:
        return mpfr_to_fraction(self.endpoints()[0])

    def upper_fraction(self) -> Fraction:
        return mpfr_to_fraction(self.endpoints()[1])

    def mid_fraction(self) -> Fraction:
        return mpfr_to_fraction(self.midpoint)

    def rad_fraction(self) -> Fraction:
        return mpfr_to_fraction(self.radius)

    def width_fraction(self) -> Fraction:
        return self.upper_fraction() - self.lower_fraction()

    # -- predicates (exact, via dyadic endpoints) ------------------------------

    def contains_fraction(self, value) -> bool:
        v = Fraction(value)
        return self.lower_fraction() <= v <= self.upper_fraction()

    def contains_zero(self) -> bool:
        return self.contains_fraction(0)

    def is_positive(self) -> bool:
        return self.lower_fraction() > 0

    def is_negative(self) -> bool:
        return self.upper_fraction() < 0

    def overlaps(self, other: "RealBall") -> bool:
        return (self.lower_fraction() <= other.upper_fraction()
                and other.lower_fraction() <= self.upper_fraction())

    def contains_ball(self, other: "RealBall") -> bool:
        return (self.lower_fraction() <= other.lower_fraction()
                and other.upper_fraction() <= self.upper_fraction())

    def floor_unique(self):
        """floor of the enclosed value if the interval pins it down, else None."""
        import math
        lo = math.floor(self.lower_fraction())
        hi = math.floor(self.upper_fraction())
        return lo if lo == hi else None

    # -- arithmetic -----------------------------------------------------------

    def _prec_with(self, other) -> int:
        return max(self.prec, other.prec if isinstance(other, RealBall) else 0)

    @staticmethod
    def _coerce(value, prec) -> "RealBall":
        if isinstance(value, RealBall):
            return value
        return RealBall.from_fraction(Fraction(value), prec)

    def __neg__(self):
        return RealBall(-self.midpoint, self.radius, self.prec)

    def __add__(self, other):
        p = self._prec_with(other)
        o = self._coerce(other, p)
        alo, ahi = self.endpoints()
        blo, bhi = o.endpoints()
        return RealBall.from_endpoints(_down(p).add(alo, blo), _up(p).add(ahi, bhi), p)

    __radd__ = __add__

    def __sub__(self, other):
        p = self._prec_with(other)
        o = self._coerce(other, p)
        alo, ahi = self.endpoints()
        blo, bhi = o.endpoints()
        return RealBall.from_endpoints(_down(p).sub(alo, bhi), _up(p).sub(ahi, blo), p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p = self._prec_with(other)
        o = self._coerce(other, p)
        alo, ahi = self.endpoints()
        blo, bhi = o.endpoints()
        dn, up = _down(p), _up(p)
        lo = min(dn.mul(alo, blo), dn.mul(alo, bhi), dn.mul(ahi, blo), dn.mul(ahi, bhi))
        hi = max(up.mul(alo, blo), up.mul(alo, bhi), up.mul(ahi, blo), up.mul(ahi, bhi))
        return RealBall.from_endpoints(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._prec_with(other)
        o = self._coerce(other, p)
        if o.contains_zero():
            raise ZeroDivisionError("division by a ball containing zero")
        alo, ahi = self.endpoints()
        blo, bhi = o.endpoints()
        dn, up = _down(p), _up(p)
        lo = min(dn.div(alo, blo), dn.div(alo, bhi), dn.div(ahi, blo), dn.div(ahi, bhi))
        hi = max(up.div(alo, blo), up.div(alo, bhi), up.div(ahi, blo), up.div(ahi, bhi))
        return RealBall.from_endpoints(lo, hi, p)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative ball power; divide instead")
        result = RealBall.from_fraction(1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def abs_bounds(self):
        """(lower, upper) Fractions bounding |value| over the ball."""
        lo, hi = self.lower_fraction(), self.upper_fraction()
        if lo >= 0:
            return lo, hi
        if hi <= 0:
            return -hi, -lo
        return Fraction(0), max(-lo, hi)

    def ln(self) -> "RealBall":
        lo, hi = self.endpoints()
        if lo <= 0:
            raise ValueError("log of a ball touching (-inf, 0]")
        p = self.prec
        return RealBall.from_endpoints(_down(p).log(lo), _up(p).log(hi), p)

    # -- display ---------------------------------------------------------------

    def decimal(self, digits: int = 20) -> str:
        return format(self.midpoint, f".{digits}f")

    def __repr__(self):
        return f"RealBall({self.decimal(12)} +/- {float(self.radius):.3g})"


def ln_fraction(value, prec: int = DEFAULT_PREC) -> RealBall:
    """Rigorous enclosure of ln(value) for a positive rational."""
    f = Fraction(value)
    if f <= 0:
        raise ValueError("ln of nonpositive rational")
    dn, up = _down(prec), _up(prec)
    lo = dn.sub(dn.log(mpz(f.numerator)), up.log(mpz(f.denominator)))
    hi = up.sub(up.log(mpz(f.numerator)), dn.log(mpz(f.denominator)))
    return RealBall.from_endpoints(lo, hi, prec)


def ln_fraction_interval(lo, hi, prec: int = DEFAULT_PREC) -> RealBall:
    """Enclosure of ln over a positive rational interval [lo, hi]."""
    a = ln_fraction(lo, prec)
    b = ln_fraction(hi, prec)
    return RealBall.from_endpoints(a.endpoints()[0], b.endpoints()[1], prec)


def ball_sum(balls, prec=None) -> RealBall:
    if not balls:
        return RealBall.zero(prec or DEFAULT_PREC)
    p = prec or max(b.prec for b in balls)
    total = RealBall.zero(p)
    for b in balls:
        total = total + b
    return total
