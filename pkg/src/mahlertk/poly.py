"""Exact sparse multivariate polynomials over the rationals.

A polynomial stores an ordered tuple of variable names and a map from
exponent tuples to nonzero Fraction coefficients.  All arithmetic is exact;
identity tests are therefore reliable.  The canonical term order used for
leading terms, gcd normalization and printing is graded lexicographic with
respect to the stored variable order.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

from .errors import ArityMismatch, ParseError

Exponent = Tuple[int, ...]


def _grlex_key(exp: Exponent):
    return (sum(exp), exp)


class MultiPolynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: Sequence[str], terms: Dict[Exponent, Fraction]):
        vs = tuple(variables)
        clean: Dict[Exponent, Fraction] = {}
        for exp, c in terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            exp = tuple(int(e) for e in exp)
            if len(exp) != len(vs) or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for variables {vs}")
            clean[exp] = c
        self.variables = vs
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultiPolynomial":
        return cls(variables, {})

    @classmethod
    def const(cls, variables: Sequence[str], value) -> "MultiPolynomial":
        v = Fraction(value)
        if v == 0:
            return cls.zero(variables)
        return cls(variables, {(0,) * len(tuple(variables)): v})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "MultiPolynomial":
        vs = tuple(variables)
        if name not in vs:
            raise ValueError(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in vs)
        return cls(vs, {exp: Fraction(1)})

    # -- basic queries -----------------------------------------------------

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        zero = (0,) * len(self.variables)
        return self._terms.get(zero, Fraction(0))

    def constant_coefficient(self) -> Fraction:
        return self._terms.get((0,) * len(self.variables), Fraction(0))

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, name: str) -> int:
        i = self.variables.index(name)
        if not self._terms:
            return -1
        return max(e[i] for e in self._terms)

    def leading(self) -> Tuple[Exponent, Fraction]:
        """Leading (exponent, coefficient) under graded lex."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self._terms, key=_grlex_key)
        return exp, self._terms[exp]

    def coefficient(self, exp: Exponent) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def iter_terms(self) -> Iterable[Tuple[Exponent, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True))

    def __eq__(self, other):
        if not isinstance(other, MultiPolynomial):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        return hash((self.variables, frozenset(self._terms.items())))

    def __bool__(self):
        return bool(self._terms)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "MultiPolynomial"):
        if self.variables != other.variables:
            raise ArityMismatch(
                f"variable mismatch: {self.variables} vs {other.variables}")

    def __neg__(self):
        return MultiPolynomial(self.variables, {e: -c for e, c in self._terms.items()})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPolynomial.const(self.variables, other)
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPolynomial(self.variables, out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPolynomial.const(self.variables, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return MultiPolynomial.zero(self.variables)
            return MultiPolynomial(self.variables,
                                   {e: v * c for e, v in self._terms.items()})
        self._check(other)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return MultiPolynomial(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = MultiPolynomial.const(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def derivative(self, name: str) -> "MultiPolynomial":
        i = self.variables.index(name)
        out: Dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
        return MultiPolynomial(self.variables, out)

    # -- evaluation and substitution ----------------------------------------

    def eval(self, point: Sequence[Fraction]) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != len(self.variables):
            raise ArityMismatch(
                f"expected {len(self.variables)} coordinates, got {len(point)}")
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def compose_monomial(self, matrix: Sequence[Sequence[int]]) -> "MultiPolynomial":
        """Substitute z_i -> prod_j z_j^{m[i][j]} (the action z -> Tz)."""
        n = len(self.variables)
        rows = [tuple(int(x) for x in r) for r in matrix]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ArityMismatch("substitution matrix size mismatch")
        out: Dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    for j in range(n):
                        ne[j] += k * rows[i][j]
            key = tuple(ne)
            s = out.get(key, Fraction(0)) + c
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return MultiPolynomial(self.variables, out)

    def extend(self, variables: Sequence[str]) -> "MultiPolynomial":
        """Re-embed into a larger variable tuple (must contain ours)."""
        vs = tuple(variables)
        pos = []
        for v in self.variables:
            if v not in vs:
                raise ValueError(f"target variables missing {v!r}")
            pos.append(vs.index(v))
        out: Dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            ne = [0] * len(vs)
            for p, k in zip(pos, e):
                ne[p] = k
            out[tuple(ne)] = c
        return MultiPolynomial(vs, out)

    def rename(self, mapping: Dict[str, str]) -> "MultiPolynomial":
        return MultiPolynomial(tuple(mapping.get(v, v) for v in self.variables),
                               dict(self._terms))

    # -- content and canonical form -----------------------------------------

    def rational_content(self) -> Fraction:
        """Positive rational c with self/c integer-primitive; 0 for the zero poly."""
        if not self._terms:
            return Fraction(0)
        num_gcd = 0
        den_lcm = 1
        for c in self._terms.values():
            num_gcd = math.gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        return Fraction(num_gcd, den_lcm)

    def primitive(self) -> "MultiPolynomial":
        c = self.rational_content()
        if c == 0:
            return self
        return self * (1 / c)

    def monic_normal(self) -> "MultiPolynomial":
        """Integer-primitive with positive graded-lex leading coefficient."""
        if not self._terms:
            return self
        p = self.primitive()
        if p.leading()[1] < 0:
            p = -p
        return p

    # -- division / gcd ------------------------------------------------------

    def divexact(self, divisor: "MultiPolynomial") -> "MultiPolynomial":
        """Exact division; raises ValueError if the division is not exact."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        rem = dict(self._terms)
        out: Dict[Exponent, Fraction] = {}
        dexp, dc = divisor.leading()
        while rem:
            lexp = max(rem, key=_grlex_key)
            lc = rem[lexp]
            q = tuple(a - b for a, b in zip(lexp, dexp))
            if any(x < 0 for x in q):
                raise ValueError("division not exact")
            qc = lc / dc
            out[q] = out.get(q, Fraction(0)) + qc
            for e, c in divisor._terms.items():
                key = tuple(a + b for a, b in zip(q, e))
                s = rem.get(key, Fraction(0)) - qc * c
                if s == 0:
                    rem.pop(key, None)
                else:
                    rem[key] = s
        return MultiPolynomial(self.variables, out)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"MultiPolynomial({to_text(self)!r})"


# -- multivariate gcd (primitive PRS) ----------------------------------------


def _active_var(p: MultiPolynomial, q: MultiPolynomial):
    for v in p.variables:
        if p.degree_in(v) > 0 or q.degree_in(v) > 0:
            return v
    return None


def _as_univariate(p: MultiPolynomial, var: str):
    """Coefficient list in `var` (index = degree), coefficients with var-degree 0."""
    i = p.variables.index(var)
    d = p.degree_in(var)
    coeffs = [dict() for _ in range(max(d, 0) + 1)]
    for e, c in p._terms.items():
        ne = list(e)
        k = ne[i]
        ne[i] = 0
        coeffs[k][tuple(ne)] = c
    return [MultiPolynomial(p.variables, t) for t in coeffs]


def _from_univariate(coeffs, var: str, variables):
    i = variables.index(var)
    terms: Dict[Exponent, Fraction] = {}
    for k, cp in enumerate(coeffs):
        for e, c in cp._terms.items():
            ne = list(e)
            ne[i] = k
            terms[tuple(ne)] = c
    return MultiPolynomial(variables, terms)


def _uni_deg(coeffs):
    for k in range(len(coeffs) - 1, -1, -1):
        if not coeffs[k].is_zero():
            return k
    return -1


def _uni_trim(coeffs):
    d = _uni_deg(coeffs)
    return coeffs[:d + 1]


def _uni_pseudo_rem(a, b, variables):
    """Pseudo-remainder of coefficient lists a by b (deg b >= 0)."""
    a = _uni_trim(list(a))
    b = _uni_trim(list(b))
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and _uni_deg(a) >= 0:
        da = len(a) - 1
        la = a[-1]
        shifted = [MultiPolynomial.zero(variables)] * (da - db) + b
        a = [lb * x for x in a]
        for k in range(len(shifted)):
            a[k] = a[k] - la * shifted[k]
        a = _uni_trim(a)
        if not a:
            break
    return a


def _coeff_gcd(polys, variables):
    g = MultiPolynomial.zero(variables)
    for p in polys:
        g = poly_gcd(g, p)
        if g.is_constant() and not g.is_zero():
            break
    return g


def poly_gcd(p: MultiPolynomial, q: MultiPolynomial) -> MultiPolynomial:
    """Canonical gcd (integer-primitive, positive leading coefficient)."""
    if p.variables != q.variables:
        raise ArityMismatch("gcd over different variable tuples")
    if p.is_zero():
        return q.monic_normal()
    if q.is_zero():
        return p.monic_normal()
    var = _active_var(p, q)
    if var is None:
        return MultiPolynomial.const(p.variables, 1)

    pu = _as_univariate(p, var)
    qu = _as_univariate(q, var)
    cp = _coeff_gcd(pu, p.variables)
    cq = _coeff_gcd(qu, p.variables)
    cont = poly_gcd(cp, cq)
    a = [x.divexact(cp) for x in pu]
    b = [x.divexact(cq) for x in qu]
    if len(a) - 1 < len(b) - 1:
        a, b = b, a
    while True:
        if _uni_deg(b) < 0:
            g = _from_univariate(a, var, p.variables)
            break
        r = _uni_pseudo_rem(a, b, p.variables)
        if _uni_deg(r) < 0:
            g = _from_univariate(b, var, p.variables)
            break
        cr = _coeff_gcd(r, p.variables)
        r = [x.divexact(cr) for x in r]
        a, b = b, r
    g = g.divexact(_coeff_gcd(_as_univariate(g, var), p.variables))
    return (g * cont).monic_normal()


# -- text grammar -------------------------------------------------------------
#
# expr   := ['-'] term (('+'|'-') term)*
# term   := factor ('*' factor)*
# factor := atom ['^' nonneg-integer]
# atom   := integer | identifier | '(' expr ')'
#
# '/' is only allowed at top level, separating numerator and denominator.

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*)|([-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character at {text[pos:]!r}")
        pos = m.end()
        if m.group(1):
            out.append(("int", int(m.group(1))))
        elif m.group(2):
            out.append(("name", m.group(2)))
        elif m.group(3):
            out.append(("op", "^"))
        else:
            out.append(("op", m.group(4)))
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, tokens, variables):
        self.tokens = tokens
        self.i = 0
        self.variables = tuple(variables)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, got {val!r}")

    def parse_expr(self) -> MultiPolynomial:
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            if val == "-":
                sign = -1
        p = self.parse_term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.parse_term()
                p = p + t if val == "+" else p - t
            else:
                return p

    def parse_term(self) -> MultiPolynomial:
        p = self.parse_factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.parse_factor()
            else:
                return p

    def parse_factor(self) -> MultiPolynomial:
        p = self.parse_atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer")
            p = p ** val
        return p

    def parse_atom(self) -> MultiPolynomial:
        kind, val = self.take()
        if kind == "int":
            return MultiPolynomial.const(self.variables, val)
        if kind == "name":
            if val not in self.variables:
                raise ParseError(f"unknown variable {val!r}")
            return MultiPolynomial.var(self.variables, val)
        if kind == "op" and val == "(":
            p = self.parse_expr()
            self.expect_op(")")
            return p
        if kind == "op" and val == "-":
            return -self.parse_atom()
        raise ParseError(f"unexpected token {val!r}")


def parse_poly(text: str, variables: Sequence[str]) -> MultiPolynomial:
    """Parse a polynomial in the toolkit grammar ('/' is rejected)."""
    tokens = _tokenize(text)
    if any(k == "op" and v == "/" for k, v in tokens):
        raise ParseError("'/' is only allowed between numerator and denominator")
    parser = _Parser(tokens, variables)
    p = parser.parse_expr()
    if parser.peek()[0] != "end":
        raise ParseError(f"trailing input near token {parser.peek()!r}")
    return p


def split_rational_text(text: str) -> Tuple[str, str]:
    """Split 'num/den' at the single top-level '/'; den defaults to '1'."""
    depth = 0
    slash = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            if slash is not None:
                raise ParseError("more than one top-level '/'")
            slash = i
    if slash is None:
        return text, "1"
    return text[:slash], text[slash + 1:]


def _monomial_text(variables, exp) -> str:
    parts = []
    for v, k in zip(variables, exp):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def to_text(p: MultiPolynomial, strict: bool = False) -> str:
    """Deterministic rendering, graded-lex descending.

    With strict=True the output stays inside the toolkit grammar, which has
    integer coefficients only; fractional coefficients then raise ParseError
    (clear denominators first, as the RationalFunction serializer does).
    """
    if p.is_zero():
        return "0"
    bodies = []
    for exp, c in p.iter_terms():
        mono = _monomial_text(p.variables, exp)
        if c.denominator != 1 and strict:
            raise ParseError("non-integer coefficient; clear denominators first")
        coeff = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        if not mono:
            bodies.append(coeff)
        elif c == 1:
            bodies.append(mono)
        elif c == -1:
            bodies.append(f"-{mono}")
        else:
            bodies.append(f"{coeff}*{mono}")
    out = bodies[0]
    for body in bodies[1:]:
        if body.startswith("-"):
            out += " - " + body[1:]
        else:
            out += " + " + body
    return out
