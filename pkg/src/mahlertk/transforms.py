"""Monomial transformation matrices and their spectral/orbit analysis.

A transform T acts on points by (T a)_i = prod_j a_j^{t_ij}.  Class-M
membership (nonsingular, no root-of-unity eigenvalues, positive Perron
eigenvector) is decided exactly: eigenvalue tests via cyclotomic gcds of the
characteristic polynomial, the Perron test via the Frobenius normal form
criterion with per-class spectral radii compared by exact root isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .ball import RealBall, ball_sum, ln_fraction
from .errors import ArityMismatch, DimensionMismatch, ResourceCap
from .intlin import bareiss_det, matmul, matpow
from .roots import AlgebraicReal, trim, uni_gcd


class MonomialTransform:
    """n x n nonnegative-integer matrix acting multiplicatively on points."""

    __slots__ = ("size", "rows")

    def __init__(self, rows: Sequence[Sequence[int]]):
        rs = tuple(tuple(int(x) for x in row) for row in rows)
        n = len(rs)
        if any(len(r) != n for r in rs):
            raise DimensionMismatch("transform matrix must be square")
        if any(x < 0 for r in rs for x in r):
            raise ValueError("transform entries must be nonnegative")
        self.size = n
        self.rows = rs

    @classmethod
    def scaling(cls, q: int, n: int = 1) -> "MonomialTransform":
        return cls([[q if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def direct_sum(cls, parts: Sequence["MonomialTransform"]) -> "MonomialTransform":
        n = sum(p.size for p in parts)
        rows = [[0] * n for _ in range(n)]
        off = 0
        for p in parts:
            for i in range(p.size):
                for j in range(p.size):
                    rows[off + i][off + j] = p.rows[i][j]
            off += p.size
        return cls(rows)

    def __eq__(self, other):
        return isinstance(other, MonomialTransform) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"MonomialTransform({[list(r) for r in self.rows]})"

    def is_identity(self) -> bool:
        return self.rows == tuple(tuple(1 if i == j else 0 for j in range(self.size))
                                  for i in range(self.size))

    def det(self) -> int:
        return bareiss_det(self.rows)

    def row_sums(self) -> List[int]:
        return [sum(r) for r in self.rows]

    def to_json(self) -> dict:
        return {"size": self.size, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "MonomialTransform":
        t = cls(data["rows"])
        if "size" in data and int(data["size"]) != t.size:
            raise DimensionMismatch("declared size does not match rows")
        return t


def apply_transform(t: MonomialTransform, alpha: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Exact image of a point with nonzero rational coordinates."""
    if len(alpha) != t.size:
        raise DimensionMismatch(f"point has {len(alpha)} coordinates, T is {t.size}")
    pt = [Fraction(a) for a in alpha]
    if any(a == 0 for a in pt):
        raise ValueError("point coordinates must be nonzero")
    out = []
    for row in t.rows:
        v = Fraction(1)
        for a, e in zip(pt, row):
            if e:
                v *= a ** e
        out.append(v)
    return tuple(out)


def transform_power(t: MonomialTransform, k: int) -> MonomialTransform:
    if k < 0:
        raise ValueError("negative transform power")
    return MonomialTransform(matpow(t.rows, k))


# -- characteristic polynomial and cyclotomics ---------------------------------


def charpoly(rows: Sequence[Sequence[int]]) -> List[Fraction]:
    """Coefficients of det(xI - T), index = degree (Faddeev-LeVerrier)."""
    n = len(rows)
    if n == 0:
        return [Fraction(1)]
    a = [[Fraction(x) for x in r] for r in rows]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        am = [[sum(a[i][l] * m[l][j] for l in range(n)) for j in range(n)]
              for i in range(n)]
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs[n - k] = c
        m = [[am[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


_cyclotomic_cache = {1: [Fraction(-1), Fraction(1)]}


def cyclotomic(d: int) -> List[Fraction]:
    """Coefficients of the d-th cyclotomic polynomial."""
    if d in _cyclotomic_cache:
        return _cyclotomic_cache[d]
    # x^d - 1 divided by the product of lower cyclotomics
    num = [Fraction(0)] * (d + 1)
    num[0], num[d] = Fraction(-1), Fraction(1)
    for e in range(1, d):
        if d % e == 0:
            num = _exact_div(num, cyclotomic(e))
    _cyclotomic_cache[d] = num
    return num


def _exact_div(a, b):
    from .roots import _divmod
    q, r = _divmod(a, b)
    if trim(r):
        raise ValueError("inexact polynomial division")
    return q


def euler_phi(d: int) -> int:
    result = d
    n = d
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


# -- strongly connected components (iterative Tarjan) ------------------------------


def strongly_connected_components(adj: Sequence[Sequence[int]]) -> List[List[int]]:
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: List[int] = []
    out: List[List[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(adj[v])):
                w = adj[v][i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


# -- class M ----------------------------------------------------------------------


@dataclass
class ClassMReport:
    nonsingular: bool
    root_of_unity_eigenvalues: List[int]
    has_positive_perron_eigenvector: bool
    spectral_radius: Tuple[Fraction, Fraction]
    verdict: bool
    reasons: List[str] = field(default_factory=list)

    @property
    def in_class_M(self) -> bool:
        return self.verdict

    def to_json(self) -> dict:
        return {
            "nonsingular": self.nonsingular,
            "root_of_unity_eigenvalues": self.root_of_unity_eigenvalues,
            "has_positive_perron_eigenvector": self.has_positive_perron_eigenvector,
            "spectral_radius": [str(self.spectral_radius[0]), str(self.spectral_radius[1])],
            "in_class_M": self.verdict,
            "reasons": self.reasons,
        }


def _class_radius(rows, nodes) -> AlgebraicReal:
    block = [[rows[i][j] for j in nodes] for i in nodes]
    cp = charpoly(block)
    r = AlgebraicReal.largest_real_root(cp)
    if r is None:
        # no real roots means the block is nilpotent-free odd case; radius 0
        return AlgebraicReal.rational(Fraction(0))
    if r.cmp_fraction(Fraction(0)) < 0:
        return AlgebraicReal.rational(Fraction(0))
    return r


def spectral_radius_algebraic(t: MonomialTransform) -> AlgebraicReal:
    """rho(T) as an exactly comparable algebraic real."""
    adj = [[j for j in range(t.size) if t.rows[i][j] > 0] for i in range(t.size)]
    comps = strongly_connected_components(adj)
    radii = [_class_radius(t.rows, sorted(c)) for c in comps]
    best = radii[0]
    for r in radii[1:]:
        if best.cmp(r) < 0:
            best = r
    return best


def check_class_M(t: MonomialTransform,
                  radius_width: Fraction = Fraction(1, 1024)) -> ClassMReport:
    n = t.size
    reasons: List[str] = []
    nonsingular = t.det() != 0
    if not nonsingular:
        reasons.append("condition (i): matrix is singular")

    cp = charpoly(t.rows)
    bad_d: List[int] = []
    for d in range(1, 2 * n * n + 1):
        if euler_phi(d) > n:
            continue
        g = uni_gcd(cp, cyclotomic(d))
        if len(trim(g)) - 1 >= 1:
            bad_d.append(d)
    if bad_d:
        reasons.append(f"condition (ii): root-of-unity eigenvalues of order {bad_d}")

    # Frobenius normal form criterion for a positive Perron eigenvector:
    # the classes attaining rho(T) must be exactly the final classes.
    adj = [[j for j in range(n) if t.rows[i][j] > 0] for i in range(n)]
    comps = [sorted(c) for c in strongly_connected_components(adj)]
    comp_of = {}
    for ci, c in enumerate(comps):
        for v in c:
            comp_of[v] = ci
    radii = [_class_radius(t.rows, c) for c in comps]
    rho = radii[0]
    for r in radii[1:]:
        if rho.cmp(r) < 0:
            rho = r
    basic = {ci for ci, r in enumerate(radii) if r.cmp(rho) == 0}
    final = set(range(len(comps)))
    for ci, c in enumerate(comps):
        for v in c:
            for w in adj[v]:
                if comp_of[w] != ci:
                    final.discard(ci)
                    break
    perron = basic == final
    if not perron:
        reasons.append("condition (iii): classes attaining rho(T) are not exactly "
                       "the final classes; no positive Perron eigenvector")

    rho.refine(Fraction(radius_width))
    report = ClassMReport(
        nonsingular=nonsingular,
        root_of_unity_eigenvalues=bad_d,
        has_positive_perron_eigenvector=perron,
        spectral_radius=rho.interval(),
        verdict=nonsingular and not bad_d and perron,
        reasons=reasons,
    )
    return report


# -- orbit norms via prime-exponent data --------------------------------------------


def _abs_log_sign(exponents: Sequence[int], primes: Sequence[int]) -> int:
    """Exact sign of sum_l e_l ln(p_l) (zero iff all e_l = 0)."""
    if all(e == 0 for e in exponents):
        return 0
    prec = 64
    while True:
        total = ball_sum([ln_fraction(p, prec) * RealBall.exact_int(e, prec)
                          for p, e in zip(primes, exponents) if e], prec)
        if total.is_positive():
            return 1
        if total.is_negative():
            return -1
        prec *= 2
        if prec > 1 << 20:
            raise ResourceCap("log-sign decision did not converge")


def _fraction_exponents(value: Fraction, primes: List[int]) -> List[int]:
    """Exponent vector of |value| over `primes`, extending the list as needed."""
    from .multrel import factor_abs
    out = [0] * len(primes)
    for p, e in factor_abs(abs(value)):
        if p in primes:
            out[primes.index(p)] = e
        else:
            primes.append(p)
            out.append(e)
    return out


class OrbitExponents:
    """Prime-exponent view of the orbit T^k(alpha): exact norm decisions
    without materializing doubly exponential rationals."""

    def __init__(self, t: MonomialTransform, alpha: Sequence[Fraction]):
        from .multrel import signed_factorize
        self.t = t
        self.alpha = tuple(Fraction(a) for a in alpha)
        if len(self.alpha) != t.size:
            raise DimensionMismatch("point/transform size mismatch")
        f = signed_factorize(self.alpha)
        self.primes = list(f.primes)
        self.base_exponents = [list(r) for r in f.exponents]  # n x P
        self.signs = list(f.signs)
        self._power_cache = {0: [[1 if i == j else 0 for j in range(t.size)]
                                 for i in range(t.size)]}

    def power(self, k: int):
        if k not in self._power_cache:
            ks = max(i for i in self._power_cache if i <= k)
            m = self._power_cache[ks]
            step = self.t.rows
            while ks < k:
                m = matmul(m, step)
                ks += 1
                self._power_cache[ks] = m
        return self._power_cache[k]

    def coordinate_exponents(self, k: int) -> List[List[int]]:
        """Row i = prime-exponent vector of |coordinate i of T^k(alpha)|."""
        return matmul(self.power(k), self.base_exponents)

    def coordinate_signs(self, k: int) -> List[int]:
        tk = self.power(k)
        out = []
        for row in tk:
            s = 1
            for e, sg in zip(row, self.signs):
                if sg < 0 and e % 2 == 1:
                    s = -s
            out.append(s)
        return out

    def norm_less_than(self, k: int, bound: Fraction) -> bool:
        """Exact decision of ||T^k alpha|| < bound (max norm), allowing equality
        handling: strict comparison."""
        return self._norm_cmp(k, bound) < 0

    def norm_at_most(self, k: int, bound: Fraction) -> bool:
        return self._norm_cmp(k, bound) <= 0

    def _norm_cmp(self, k: int, bound: Fraction) -> int:
        """max_i |coord_i| compared with bound: -1, 0, +1."""
        primes = list(self.primes)
        bexp = _fraction_exponents(Fraction(bound), primes)
        result = -1
        for row in self.coordinate_exponents(k):
            padded = list(row) + [0] * (len(primes) - len(row))
            diff = [a - b for a, b in zip(padded, bexp)]
            s = _abs_log_sign(diff, primes)
            if s > 0:
                return 1
            if s == 0:
                result = 0
        return result

    def norm_log10_approx(self, k: int) -> float:
        """Float approximation of log10 ||T^k alpha|| for diagnostics."""
        best = None
        for row in self.coordinate_exponents(k):
            total = sum(e * math.log10(p) for e, p in zip(row, self.primes))
            best = total if best is None else max(best, total)
        return best if best is not None else 0.0

    def materialize(self, k: int, bit_cap: int = 1 << 22) -> Tuple[Fraction, ...]:
        """Exact rational point T^k(alpha); refuses absurd sizes."""
        exps = self.coordinate_exponents(k)
        signs = self.coordinate_signs(k)
        cost = sum(abs(e) * p.bit_length() for row in exps
                   for e, p in zip(row, self.primes))
        if cost > bit_cap:
            raise ResourceCap(
                f"materializing T^{k}(alpha) needs ~{cost} bits (cap {bit_cap})")
        out = []
        for row, s in zip(exps, signs):
            v = Fraction(s)
            for p, e in zip(self.primes, row):
                if e >= 0:
                    v *= Fraction(p) ** e
                else:
                    v /= Fraction(p) ** (-e)
            out.append(v)
        return tuple(out)


# -- limit-zero certificates ----------------------------------------------------------


@dataclass
class LimitZeroCertificate:
    k0: int
    witness_norm: Fraction
    requires_class_M: bool = True

    def to_json(self) -> dict:
        return {"k0": self.k0, "witness_norm": str(self.witness_norm),
                "requires_class_M": self.requires_class_M}


@dataclass
class Inconclusive:
    reason: str
    trajectory: List[float] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"inconclusive": True, "reason": self.reason,
                "norm_log10_trajectory": self.trajectory}


def check_limit_zero(t: MonomialTransform, alpha: Sequence[Fraction],
                     k_max: int = 64):
    """Least k0 <= k_max with ||T^{k0} alpha|| < 1, exactly verified.

    Together with class-M membership the certificate implies T^k alpha -> 0.
    """
    orbit = OrbitExponents(t, alpha)
    trajectory = []
    for k in range(k_max + 1):
        if orbit.norm_less_than(k, Fraction(1)):
            point = orbit.materialize(k)
            norm = max(abs(c) for c in point)
            assert norm < 1
            return LimitZeroCertificate(k0=k, witness_norm=norm)
        trajectory.append(orbit.norm_log10_approx(k))
    return Inconclusive(
        reason=f"no iterate with max-norm < 1 found for k <= {k_max}",
        trajectory=trajectory)
