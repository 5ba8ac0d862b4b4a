"""Multiplicative-relation lattices of rational tuples and T-independence.

For nonzero rationals everything is exactly decidable through prime
factorization: a relation alpha^nu = 1 means the integer vector nu kills the
prime-exponent matrix and satisfies a sign-parity condition.  Orbit relations
(T^k alpha)^mu = 1 along an arithmetic progression reduce to integer kernels
of stacked exponent matrices; checking the first n+1 progression points
suffices because the associated subspace chains in Q^n and F_2^n stabilize
within n steps, so a verified certificate persists for every later point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import SingularTransform
from .intlin import (f2_nullspace, hnf_rows, identity, left_kernel_basis,
                     matmul, matpow, shortest_vector, vecmat)


# -- integer factorization -----------------------------------------------------


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(0xC0FFEE ^ n)
    while True:
        c = rng.randrange(1, n)
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = _gcd(abs(x - y), n)
        if d != n:
            return d


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def factor_int(n: int) -> dict:
    """Prime factorization of a positive integer as {prime: exponent}."""
    if n <= 0:
        raise ValueError("factor_int expects a positive integer")
    out: dict = {}
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        p = 2
        found = False
        while p * p <= m and p < 100000:
            if m % p == 0:
                stack.extend([p, m // p])
                found = True
                break
            p += 1 if p == 2 else 2
        if not found:
            d = _pollard_rho(m)
            stack.extend([d, m // d])
    return out


def factor_abs(value: Fraction) -> List[Tuple[int, int]]:
    """Sorted (prime, exponent) pairs of |value| for a nonzero rational."""
    v = abs(Fraction(value))
    if v == 0:
        raise ValueError("cannot factor zero")
    exps: dict = {}
    for p, e in factor_int(v.numerator).items():
        exps[p] = exps.get(p, 0) + e
    for p, e in factor_int(v.denominator).items():
        exps[p] = exps.get(p, 0) - e
    return sorted((p, e) for p, e in exps.items() if e != 0)


# -- signed factorization -------------------------------------------------------


@dataclass
class SignedFactorization:
    primes: List[int]
    exponents: List[List[int]]   # row i = exponent vector of |alpha_i|
    signs: List[int]             # +1 / -1

    def recompose(self) -> Tuple[Fraction, ...]:
        out = []
        for row, s in zip(self.exponents, self.signs):
            v = Fraction(s)
            for p, e in zip(self.primes, row):
                if e >= 0:
                    v *= Fraction(p) ** e
                else:
                    v /= Fraction(p) ** (-e)
            out.append(v)
        return tuple(out)

    def to_json(self) -> dict:
        return {"primes": self.primes, "exponents": self.exponents,
                "signs": self.signs}


def signed_factorize(alpha: Sequence[Fraction]) -> SignedFactorization:
    pts = [Fraction(a) for a in alpha]
    if any(a == 0 for a in pts):
        raise ValueError("coordinates must be nonzero")
    factored = [factor_abs(a) for a in pts]
    primes = sorted({p for f in factored for p, _ in f})
    index = {p: i for i, p in enumerate(primes)}
    rows = []
    for f in factored:
        row = [0] * len(primes)
        for p, e in f:
            row[index[p]] = e
        rows.append(row)
    signs = [1 if a > 0 else -1 for a in pts]
    return SignedFactorization(primes=primes, exponents=rows, signs=signs)


# -- exponent lattices ------------------------------------------------------------


@dataclass
class ExponentLattice:
    """Hermite-reduced basis of {nu in Z^r : alpha^nu = 1}."""
    basis: List[List[int]]

    def is_trivial(self) -> bool:
        return not self.basis

    def rank(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {"basis": self.basis}


def _parity_sublattice(kernel: List[List[int]], parities: List[int]) -> List[List[int]]:
    """Vectors c (in the kernel basis) with sum c_i * parities_i even, as mu-rows."""
    s = len(kernel)
    odd = [i for i, g in enumerate(parities) if g % 2 == 1]
    if not odd:
        return kernel
    i0 = odd[0]
    c_rows: List[List[int]] = []
    for i in range(s):
        if i == i0:
            continue
        e = [0] * s
        e[i] = 1
        if i in odd:
            e[i0] = 1
        c_rows.append(e)
    e = [0] * s
    e[i0] = 2
    c_rows.append(e)
    return matmul(c_rows, kernel)


def exponent_lattice(alpha: Sequence[Fraction]) -> ExponentLattice:
    """Lattice of all multiplicative relations alpha^nu = 1 (signs included)."""
    f = signed_factorize(alpha)
    r = len(f.signs)
    if not f.primes:
        kernel = identity(r)
    else:
        kernel = left_kernel_basis(f.exponents)
    if not kernel:
        return ExponentLattice(basis=[])
    sigma = [1 if s < 0 else 0 for s in f.signs]
    parities = [sum(k * sg for k, sg in zip(row, sigma)) % 2 for row in kernel]
    basis = _parity_sublattice(kernel, parities)
    return ExponentLattice(basis=hnf_rows(basis))


def verify_relation(alpha: Sequence[Fraction], nu: Sequence[int]) -> bool:
    """Exact check of alpha^nu = 1."""
    v = Fraction(1)
    for a, e in zip(alpha, nu):
        a = Fraction(a)
        if e >= 0:
            v *= a ** e
        else:
            v /= a ** (-e)
    return v == 1


def multiplicatively_independent(x: Sequence[Fraction]):
    """(True, None) or (False, shortest nonzero relation vector)."""
    lat = exponent_lattice(x)
    if lat.is_trivial():
        return True, None
    return False, shortest_vector(lat.basis)


# -- T-independence -----------------------------------------------------------------


@dataclass
class TIndependenceVerdict:
    status: str                       # "independent" | "dependent"
    searched_b_max: int
    proven: bool = False              # True when independence is unconditional
    witness_mu: Optional[List[int]] = None
    witness_a: Optional[int] = None
    witness_b: Optional[int] = None

    @property
    def independent(self) -> bool:
        return self.status == "independent"

    def to_json(self) -> dict:
        out = {"status": self.status, "searched_b_max": self.searched_b_max,
               "proven": self.proven}
        if self.witness_mu is not None:
            out["witness"] = {"mu": self.witness_mu, "a": self.witness_a,
                              "b": self.witness_b}
        return out


def _progression_lattice(t_rows, exponents, sigma, a: int, b: int, n: int):
    """Basis of {mu : mu T^{a+db} E = 0 and parity holds, d = 0..n}."""
    stacked = []
    parity_vectors = []
    for d in range(n + 1):
        tk = matpow(t_rows, a + d * b)
        block = matmul(tk, exponents) if exponents and exponents[0] else [[] for _ in range(n)]
        stacked.append(block)
        parity_vectors.append([sum(row[j] * sigma[j] for j in range(n)) % 2
                               for row in tk])
    if stacked and stacked[0] and stacked[0][0]:
        joined = [sum((stacked[d][i] for d in range(n + 1)), []) for i in range(n)]
        kernel = left_kernel_basis(joined)
    else:
        kernel = identity(n)
    if not kernel:
        return []
    if any(sigma):
        g_rows = [[sum(k * w for k, w in zip(kv, wd)) % 2 for kv in kernel]
                  for wd in parity_vectors]
        c_basis = f2_nullspace(g_rows, len(kernel))
        rows = [list(v) for v in c_basis]
        rows += [[2 if i == j else 0 for j in range(len(kernel))]
                 for i in range(len(kernel))]
        mu_rows = matmul(rows, kernel)
        return hnf_rows(mu_rows)
    return hnf_rows(kernel)


def verify_progression_relation(t, alpha, mu, a: int, b: int, d_max: int) -> bool:
    """Exact check of (T^{a+db} alpha)^mu = 1 for d = 0..d_max."""
    f = signed_factorize(alpha)
    sigma = [1 if s < 0 else 0 for s in f.signs]
    for d in range(d_max + 1):
        tk = matpow(t.rows, a + d * b)
        nu = vecmat(list(mu), tk)
        if f.primes:
            if any(x != 0 for x in vecmat(nu, f.exponents)):
                return False
        if sum(x * s for x, s in zip(nu, sigma)) % 2 != 0:
            return False
    return True


def check_T_independence(t, alpha: Sequence[Fraction],
                         b_max: int = 16) -> TIndependenceVerdict:
    """Search progressions a + d*b (b <= b_max) for orbit relations.

    Dependent verdicts carry an exactly verified certificate; an independent
    verdict is proven outright when the coordinates admit no multiplicative
    relation at all, and otherwise only covers moduli up to b_max.
    """
    if t.det() == 0:
        raise SingularTransform("T-independence requires a nonsingular transform")
    n = t.size
    lat = exponent_lattice(alpha)
    if lat.is_trivial():
        return TIndependenceVerdict(status="independent", searched_b_max=b_max,
                                    proven=True)
    f = signed_factorize(alpha)
    sigma = [1 if s < 0 else 0 for s in f.signs]
    for b in range(1, b_max + 1):
        for a in range(b):
            basis = _progression_lattice(list(map(list, t.rows)), f.exponents,
                                         sigma, a, b, n)
            if basis:
                mu = shortest_vector(basis)
                assert verify_progression_relation(t, alpha, mu, a, b, n)
                return TIndependenceVerdict(status="dependent",
                                            searched_b_max=b_max,
                                            witness_mu=list(mu),
                                            witness_a=a, witness_b=b)
    return TIndependenceVerdict(status="independent", searched_b_max=b_max,
                                proven=False)
