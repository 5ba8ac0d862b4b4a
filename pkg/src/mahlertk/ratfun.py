"""Rational functions as canonical num/den pairs of MultiPolynomial."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import ArityMismatch, ParseError, PoleAtPoint
from .poly import (MultiPolynomial, parse_poly, poly_gcd, split_rational_text,
                   to_text)


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den integer-primitive, positive lead."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPolynomial, den: MultiPolynomial):
        if num.variables != den.variables:
            raise ArityMismatch("num/den over different variable tuples")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = MultiPolynomial.const(num.variables, 1)
        else:
            g = poly_gcd(num, den)
            if not (g.is_constant() and g.constant_value() == 1):
                num = num.divexact(g)
                den = den.divexact(g)
            c = den.rational_content()
            if den.leading()[1] < 0:
                c = -c
            if c != 1:
                num = num * (1 / c)
                den = den * (1 / c)
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_poly(cls, p: MultiPolynomial) -> "RationalFunction":
        return cls(p, MultiPolynomial.const(p.variables, 1))

    @classmethod
    def const(cls, variables: Sequence[str], value) -> "RationalFunction":
        return cls.from_poly(MultiPolynomial.const(variables, value))

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "RationalFunction":
        num_text, den_text = split_rational_text(text)
        num = parse_poly(num_text, variables)
        den = parse_poly(den_text, variables)
        if den.is_zero():
            raise ParseError("zero denominator")
        return cls(num, den)

    # -- queries ---------------------------------------------------------------

    @property
    def variables(self):
        return self.num.variables

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.const(self.variables, other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic --------------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPolynomial):
            return RationalFunction.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.const(self.variables, other)
        raise TypeError(f"cannot combine RationalFunction with {type(other)!r}")

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den,
                                self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def inv(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    # -- evaluation / substitution --------------------------------------------------

    def eval(self, point: Sequence[Fraction]) -> Fraction:
        """Exact value; raises PoleAtPoint when the denominator vanishes."""
        d = self.den.eval(point)
        if d == 0:
            raise PoleAtPoint(point)
        return self.num.eval(point) / d

    def compose_monomial(self, matrix) -> "RationalFunction":
        return RationalFunction(self.num.compose_monomial(matrix),
                                self.den.compose_monomial(matrix))

    def extend(self, variables: Sequence[str]) -> "RationalFunction":
        return RationalFunction(self.num.extend(variables), self.den.extend(variables))

    def rename(self, mapping) -> "RationalFunction":
        return RationalFunction(self.num.rename(mapping), self.den.rename(mapping))

    # -- text ----------------------------------------------------------------------

    def to_text(self) -> str:
        """Grammar-conformant 'num/den' with integer coefficients."""
        num, den = self.num, self.den
        c = num.rational_content()
        if c != 0 and c.denominator != 1:
            num = num * c.denominator
            den = den * c.denominator
        num_text = to_text(num, strict=True)
        if den.is_constant() and den.constant_value() == 1:
            return num_text
        den_text = to_text(den, strict=True)
        if "+" in num_text or "-" in num_text.lstrip("-") or "*" in num_text:
            num_text = f"({num_text})"
        return f"{num_text}/({den_text})"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"
