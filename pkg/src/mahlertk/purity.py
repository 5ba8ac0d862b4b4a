"""Multihomogeneous monomial indexing, relation matrices, iteration schedules,
and exact zero scans along scheduled orbits.

The relation matrix R(B) of a block-diagonal B expands the monomials
(B(X))^{mu_j} back in the monomial basis; it is multiplicative in B, and for
block inputs it factors as a Kronecker product of per-block matrices, which
is how it is assembled here.

Zero scans never materialize orbit values (their bit size is doubly
exponential in the iterate).  A polynomial value at an orbit point is a sum
of terms c * s * p1^e1 * ... with small rational c and huge integer exponent
vectors; terms with identical exponent vectors are combined exactly, nearby
vectors are merged into clusters with exact rational cluster sums, and
distinct clusters are separated by certified interval logarithms, so every
zero / nonzero verdict is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .ball import RealBall, ball_sum, ln_fraction, ln_fraction_interval
from .errors import (AmbiguousFloor, BlockMismatch, InsufficientPrecision,
                     ResourceCap)
from .intlin import matmul, matpow
from .multrel import signed_factorize
from .poly import MultiPolynomial
from .transforms import MonomialTransform, spectral_radius_algebraic

# -- monomial index ------------------------------------------------------------


def _compositions(total: int, parts: int) -> List[Tuple[int, ...]]:
    """All exponent tuples with the given sum, descending lex."""
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


@dataclass(frozen=True)
class MonomialIndex:
    block_sizes: Tuple[int, ...]
    degrees: Tuple[int, ...]
    tuples: Tuple[Tuple[Tuple[int, ...], ...], ...]   # tuples[j][i] = block-i part

    @property
    def t(self) -> int:
        return len(self.tuples)

    def flat(self, j: int) -> Tuple[int, ...]:
        return tuple(x for part in self.tuples[j] for x in part)

    def to_json(self) -> dict:
        return {"block_sizes": list(self.block_sizes),
                "degrees": list(self.degrees),
                "monomials": [list(self.flat(j)) for j in range(self.t)]}


def monomial_basis(block_sizes: Sequence[int], degrees: Sequence[int]) -> MonomialIndex:
    """Deterministic enumeration of all multihomogeneous monomials."""
    ms = tuple(int(m) for m in block_sizes)
    ds = tuple(int(d) for d in degrees)
    if len(ms) != len(ds):
        raise BlockMismatch("one degree per block required")
    if any(m < 1 for m in ms) or any(d < 0 for d in ds):
        raise ValueError("block sizes must be >= 1 and degrees >= 0")
    per_block = [_compositions(d, m) for m, d in zip(ms, ds)]
    tuples = tuple(tuple(combo) for combo in product(*per_block))
    expected = 1
    for m, d in zip(ms, ds):
        expected *= math.comb(m + d - 1, d)
    assert len(tuples) == expected
    return MonomialIndex(block_sizes=ms, degrees=ds, tuples=tuples)


# -- relation matrices -----------------------------------------------------------


@dataclass
class RelationMatrix:
    index: MonomialIndex
    entries: List[List[object]]

    @property
    def t(self) -> int:
        return self.index.t


def _ring_zero(sample):
    if isinstance(sample, int):
        return 0
    if isinstance(sample, Fraction):
        return Fraction(0)
    from .ratfun import RationalFunction
    if isinstance(sample, RationalFunction):
        return RationalFunction.const(sample.variables, 0)
    raise TypeError(f"unsupported entry ring {type(sample)!r}")


def _poly_mul(a: Dict[tuple, object], b: Dict[tuple, object], zero):
    out: Dict[tuple, object] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            cur = out.get(e)
            term = c1 * c2
            out[e] = term if cur is None else cur + term
    return out


def _block_relation_matrix(block, m: int, degree: int):
    """Relation matrix of one block for homogeneous degree `degree`."""
    comps = _compositions(degree, m)
    pos = {c: i for i, c in enumerate(comps)}
    sample = block[0][0]
    zero = _ring_zero(sample)
    # linear forms: row c of B gives sum_s B[c][s] X_s
    forms = []
    for c in range(m):
        form: Dict[tuple, object] = {}
        for s in range(m):
            e = tuple(1 if t == s else 0 for t in range(m))
            form[e] = block[c][s]
        forms.append(form)
    rows = []
    for mu in comps:
        poly: Dict[tuple, object] = {(0,) * m: sample * 0 + _one_like(sample)}
        for c, k in enumerate(mu):
            for _ in range(k):
                poly = _poly_mul(poly, forms[c], zero)
        row = [zero] * len(comps)
        for e, coeff in poly.items():
            row[pos[e]] = coeff
        rows.append(row)
    return rows


def _one_like(sample):
    if isinstance(sample, int):
        return 1
    if isinstance(sample, Fraction):
        return Fraction(1)
    from .ratfun import RationalFunction
    return RationalFunction.const(sample.variables, 1)


def _kronecker(a, b, zero):
    if not a:
        return b
    if not b:
        return a
    na, nb = len(a), len(b)
    out = [[zero] * (na * nb) for _ in range(na * nb)]
    for i in range(na):
        for j in range(na):
            for k in range(nb):
                for l in range(nb):
                    out[i * nb + k][j * nb + l] = a[i][j] * b[k][l]
    return out


def relation_matrix(blocks: Sequence[Sequence[Sequence[object]]],
                    index: MonomialIndex) -> RelationMatrix:
    """Exact expansion matrix: row j lists the coefficients of (B(X))^{mu_j}.

    Entries may be ints, Fractions, or RationalFunctions.  For several blocks
    the result is the Kronecker product of the per-block matrices, matching
    the index enumeration order.
    """
    if len(blocks) != len(index.block_sizes):
        raise BlockMismatch(f"{len(blocks)} blocks vs {len(index.block_sizes)} sizes")
    for b, m in zip(blocks, index.block_sizes):
        if len(b) != m or any(len(row) != m for row in b):
            raise BlockMismatch("block size does not match the index")
    sample = blocks[0][0][0]
    zero = _ring_zero(sample)
    result = []
    for b, m, d in zip(blocks, index.block_sizes, index.degrees):
        rm = _block_relation_matrix(b, m, d)
        result = _kronecker(result, rm, zero)
    if not result:
        result = [[_one_like(sample)]]
    return RelationMatrix(index=index, entries=result)


def split_blocks(matrix: Sequence[Sequence[object]],
                 block_sizes: Sequence[int]) -> List[List[List[object]]]:
    """Slice a block-diagonal matrix into its diagonal blocks."""
    n = len(matrix)
    if sum(block_sizes) != n:
        raise BlockMismatch("block sizes do not sum to the matrix size")
    out = []
    off = 0
    for m in block_sizes:
        out.append([[matrix[off + i][off + j] for j in range(m)] for i in range(m)])
        off += m
    return out


# -- iteration schedules -------------------------------------------------------------


@dataclass
class IterationSchedule:
    rhos: List[Tuple[Fraction, Fraction]]       # certified intervals for rho(T_i)
    theta: List[Tuple[Fraction, Fraction]]      # certified intervals for 1/log rho
    entries: List[Tuple[int, ...]]              # k_0 ... k_L
    deviation_bound: Fraction

    @property
    def length(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        return {"rhos": [[str(a), str(b)] for a, b in self.rhos],
                "theta": [[str(a), str(b)] for a, b in self.theta],
                "deviation_bound": str(self.deviation_bound),
                "entries": [list(k) for k in self.entries]}


def _theta_balls(radii: List[AlgebraicReal], prec: int) -> List[RealBall]:
    out = []
    for rho in radii:
        lo, hi = rho.interval()
        if lo <= 1:
            raise ValueError("schedule needs rho(T_i) > 1")
        out.append(RealBall.from_fraction(1, prec) / ln_fraction_interval(lo, hi, prec))
    return out


def _certified_floor(value: RealBall, refine=None, max_rounds: int = 40) -> int:
    for _ in range(max_rounds):
        f = value.floor_unique()
        if f is not None:
            return f
        if refine is None:
            break
        value = refine()
    raise AmbiguousFloor("interval refinement cannot separate the floor")


def build_schedule(rhos_source: Sequence, length: int,
                   v_basis: Optional[Sequence[Sequence[int]]] = None,
                   prec: int = 192) -> IterationSchedule:
    """Iteration tuples k_l staying within bounded distance of l*Theta.

    Default (no v_basis): componentwise floors k_l = floor(l / log rho_i),
    monotone since Theta > 0, with deviation below 1.  With a v_basis the
    floors are taken in the supplied integer basis and a constant-block
    repetition restores monotonicity.
    """
    transforms = [t if isinstance(t, MonomialTransform)
                  else MonomialTransform.scaling(int(t)) for t in rhos_source]
    radii = []
    for t in transforms:
        r = spectral_radius_algebraic(t)
        r.refine(Fraction(1, 2 ** 120))
        if r.cmp_fraction(1) <= 0:
            raise ValueError("schedule needs rho(T_i) > 1 (class-M transforms)")
        radii.append(r)
    thetas = _theta_balls(radii, prec)
    r = len(transforms)

    entries: List[Tuple[int, ...]] = []
    if v_basis is None:
        for l in range(length + 1):
            k = []
            for i in range(r):
                attempts = 0
                while True:
                    f = (thetas[i] * RealBall.exact_int(l, prec)).floor_unique()
                    if f is not None:
                        break
                    attempts += 1
                    if attempts > 40:
                        raise AmbiguousFloor(
                            f"cannot separate floor({l} / log rho_{i})")
                    radii[i].refine((radii[i].hi - radii[i].lo) / 16)
                    prec *= 2
                    thetas = _theta_balls(radii, prec)
                k.append(f)
            entries.append(tuple(k))
        deviation = Fraction(1)
    else:
        basis = [list(map(int, row)) for row in v_basis]
        s = len(basis)
        if any(len(row) != r for row in basis):
            raise BlockMismatch("v_basis vectors must have one entry per transform")
        gram = matmul(basis, [list(col) for col in zip(*basis)])
        gram_inv = _invert_fraction_matrix(gram)
        e_const = sum(max(abs(x) for x in row) for row in basis)
        theta_min = min(th.lower_fraction() for th in thetas)
        if theta_min <= 0:
            raise InsufficientPrecision("Theta lower bound not positive")
        b_rep = math.ceil(Fraction(2 * e_const) / theta_min)
        raw = []
        for l in range(length + b_rep + 1):
            lt = [thetas[i] * RealBall.exact_int(l, prec) for i in range(r)]
            rhs = [ball_sum([RealBall.exact_int(basis[i][j], prec) * lt[j]
                             for j in range(r)], prec) for i in range(s)]
            lam = [ball_sum([RealBall.from_fraction(gram_inv[i][j], prec) * rhs[j]
                             for j in range(s)], prec) for i in range(s)]
            floors = [_certified_floor(x, lambda x=x: x) for x in lam]
            a_l = [sum(floors[i] * basis[i][j] for i in range(s)) for j in range(r)]
            raw.append(tuple(a_l))
        l0 = next((l for l, a in enumerate(raw) if all(x > 0 for x in a)), None)
        if l0 is None:
            raise AmbiguousFloor("no positive schedule entry found; basis unsuitable")
        for l in range(length + 1):
            if l < l0:
                entries.append((0,) * r)
            else:
                block = l0 + ((l - l0) // b_rep) * b_rep
                entries.append(raw[block])
        deviation = Fraction(0)
        for l, k in enumerate(entries):
            for i in range(r):
                diff = RealBall.exact_int(k[i], prec) - thetas[i] * RealBall.exact_int(l, prec)
                _, up = diff.abs_bounds()
                deviation = max(deviation, up)

    for a, b in zip(entries, entries[1:]):
        if any(x > y for x, y in zip(a, b)):
            raise AssertionError("schedule is not monotone")
    schedule = IterationSchedule(
        rhos=[rho.interval() for rho in radii],
        theta=[(th.lower_fraction(), th.upper_fraction()) for th in thetas],
        entries=entries,
        deviation_bound=deviation)
    return schedule


def _invert_fraction_matrix(m: Sequence[Sequence[int]]) -> List[List[Fraction]]:
    n = len(m)
    work = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0)
                                          for j in range(n)]
            for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if work[r][c] != 0), None)
        if piv is None:
            raise BlockMismatch("v_basis vectors are linearly dependent")
        work[c], work[piv] = work[piv], work[c]
        inv = 1 / work[c][c]
        work[c] = [x * inv for x in work[c]]
        for r2 in range(n):
            if r2 != c and work[r2][c] != 0:
                f = work[r2][c]
                work[r2] = [x - f * y for x, y in zip(work[r2], work[c])]
    return [row[n:] for row in work]


def verify_schedule(schedule: IterationSchedule, prec: int = 192) -> bool:
    """Re-verify the deviation bound and monotonicity with interval arithmetic."""
    thetas = [ln_fraction_interval(lo, hi, prec) for lo, hi in schedule.rhos]
    thetas = [RealBall.from_fraction(1, prec) / th for th in thetas]
    for a, b in zip(schedule.entries, schedule.entries[1:]):
        if any(x > y for x, y in zip(a, b)):
            return False
    for l, k in enumerate(schedule.entries):
        for i, ki in enumerate(k):
            diff = RealBall.exact_int(ki, prec) - thetas[i] * RealBall.exact_int(l, prec)
            _, up = diff.abs_bounds()
            if up > schedule.deviation_bound:
                return False
    return True


# -- log-relation probe ----------------------------------------------------------------


@dataclass
class LogRelationCandidate:
    coefficients: List[int]
    residual: Tuple[Fraction, Fraction]

    def to_json(self) -> dict:
        return {"coefficients": self.coefficients,
                "residual_interval": [str(self.residual[0]), str(self.residual[1])],
                "note": "numerical candidate; residual interval straddles zero "
                        "but the relation is not asserted as exact"}


def log_relation_probe(rhos: Sequence, precision_bits: int = 256,
                       height_bound: int = 10 ** 6) -> Optional[LogRelationCandidate]:
    """Lattice-reduction search for integer relations among 1/log(rho_i).

    Candidates are reported with a certified residual interval and never
    asserted as exact relations.
    """
    import mpmath as mp

    intervals: List[Tuple[Fraction, Fraction]] = []
    for rho in rhos:
        if isinstance(rho, tuple):
            lo, hi = Fraction(rho[0]), Fraction(rho[1])
        else:
            lo = hi = Fraction(rho)
        if lo <= 1:
            raise ValueError("log-relation probe needs rho > 1")
        if hi - lo > lo / 2 ** precision_bits:
            raise InsufficientPrecision(
                "rho enclosure wider than the requested relative precision")
        intervals.append((lo, hi))
    prec = precision_bits + 64
    values = [RealBall.from_fraction(1, prec) / ln_fraction_interval(lo, hi, prec)
              for lo, hi in intervals]
    with mp.workprec(prec):
        mids = []
        for v in values:
            mant, exp = v.midpoint.as_mantissa_exp()
            mids.append(mp.ldexp(int(mant), int(exp)))
        tol = mp.ldexp(1, -precision_bits // 2)
        nu = mp.pslq(mids, tol=tol, maxcoeff=int(height_bound), maxsteps=100000)
    if nu is None:
        return None
    residual = ball_sum([RealBall.exact_int(c, prec) * v
                         for c, v in zip(nu, values)], prec)
    lo, hi = residual.lower_fraction(), residual.upper_fraction()
    if not (lo <= 0 <= hi):
        return None
    return LogRelationCandidate(coefficients=[int(c) for c in nu],
                                residual=(lo, hi))


# -- zero-orbit scans ---------------------------------------------------------------------


@dataclass
class ZeroScanReport:
    length: int
    zero_indices: List[int]
    zero_density: Fraction
    gap_bound: Optional[int]
    longest_chain: Optional[int]

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "zero_count": len(self.zero_indices),
            "zero_indices": self.zero_indices,
            "zero_density": str(self.zero_density),
            "window_gap_bound": self.gap_bound,
            "longest_chain_at_bound": self.longest_chain,
            "note": "gap statistics are window-relative heuristics; no finite "
                    "scan decides piecewise syndeticity",
        }


class _OrbitTermEvaluator:
    """Exact zero test of a polynomial at scheduled orbit points."""

    def __init__(self, g: MultiPolynomial, t_list: Sequence[MonomialTransform],
                 alpha: Sequence[Fraction], merge_cap: int = 1 << 16):
        self.g = g
        self.t_list = list(t_list)
        sizes = [t.size for t in self.t_list]
        if sum(sizes) != len(alpha) or len(alpha) != len(g.variables):
            raise BlockMismatch("dimensions of g, transforms, and alpha disagree")
        self.alpha = [Fraction(a) for a in alpha]
        f = signed_factorize(self.alpha)
        self.primes = f.primes
        self.signs = f.signs
        self.exp_blocks = []
        off = 0
        for t in self.t_list:
            self.exp_blocks.append([f.exponents[off + i] for i in range(t.size)])
            off += t.size
        self.sizes = sizes
        self.merge_cap = merge_cap
        self._pow_cache: List[Dict[int, List[List[int]]]] = [dict() for _ in self.t_list]

    def _tpow(self, j: int, k: int) -> List[List[int]]:
        cache = self._pow_cache[j]
        if k not in cache:
            cache[k] = matpow(self.t_list[j].rows, k)
        return cache[k]

    def _point_exponents(self, ks: Sequence[int]):
        """Exponent rows and signs for every coordinate of T_k(alpha)."""
        rows: List[List[int]] = []
        signs: List[int] = []
        off = 0
        for j, t in enumerate(self.t_list):
            tk = self._tpow(j, ks[j])
            block = matmul(tk, self.exp_blocks[j])
            rows.extend(block)
            for trow in tk:
                s = 1
                for e, sg in zip(trow, self.signs[off:off + t.size]):
                    if sg < 0 and e % 2 == 1:
                        s = -s
                signs.append(s)
            off += t.size
        return rows, signs

    def is_zero(self, ks: Sequence[int]) -> bool:
        rows, signs = self._point_exponents(ks)
        groups: Dict[Tuple[int, ...], Fraction] = {}
        for exp, coeff in self.g.terms.items():
            vec = [0] * len(self.primes)
            sgn = 1
            for v, k in enumerate(exp):
                if k:
                    for p in range(len(self.primes)):
                        vec[p] += k * rows[v][p]
                    if signs[v] < 0 and k % 2 == 1:
                        sgn = -sgn
            key = tuple(vec)
            groups[key] = groups.get(key, Fraction(0)) + sgn * coeff
        groups = {e: c for e, c in groups.items() if c != 0}
        if not groups:
            return True
        clusters = self._cluster(list(groups.items()))
        sums = []
        for members in clusters:
            ref = [min(m[0][p] for m in members) for p in range(len(self.primes))]
            total = Fraction(0)
            for vec, coeff in members:
                scale = Fraction(1)
                for p, (e, r) in enumerate(zip(vec, ref)):
                    d = e - r
                    if d:
                        scale *= Fraction(self.primes[p]) ** d
                total += coeff * scale
            if total != 0:
                sums.append((ref, total))
        if not sums:
            return True
        if len(sums) == 1:
            return False
        # distinct clusters: certify that the largest magnitude dominates
        return not self._dominates(sums)

    def _cluster(self, items):
        n = len(items)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(n):
            for j in range(i + 1, n):
                if max(abs(a - b) for a, b in zip(items[i][0], items[j][0])) <= 128:
                    parent[find(i)] = find(j)
        out: Dict[int, list] = {}
        for i in range(n):
            out.setdefault(find(i), []).append(items[i])
        return list(out.values())

    def _dominates(self, sums) -> bool:
        """True when one cluster provably outweighs the sum of the others
        (then the total is nonzero).  Falls back to merging close clusters."""
        prec = 128
        work = list(sums)
        for _ in range(60):
            logs = []
            for ref, total in work:
                lb = ball_sum([ln_fraction(p, prec) * RealBall.exact_int(e, prec)
                               for p, e in zip(self.primes, ref) if e], prec)
                lb = lb + ln_fraction(abs(total), prec)
                logs.append(lb)
            order = sorted(range(len(work)),
                           key=lambda i: logs[i].upper_fraction(), reverse=True)
            top, rest = order[0], order[1:]
            margin = ln_fraction(len(work), prec)
            ok = all(logs[top].lower_fraction()
                     > (logs[i] + margin).upper_fraction() for i in rest)
            if ok:
                return True
            second = rest[0]
            gap = max(abs(a - b) for a, b in
                      zip(work[top][0], work[second][0]))
            if gap * max(self.primes).bit_length() > self.merge_cap:
                prec *= 2
                if prec > 1 << 16:
                    raise ResourceCap("zero test could not separate clusters")
                continue
            merged = self._merge(work[top], work[second])
            work = [w for i, w in enumerate(work) if i not in (top, second)]
            if merged is not None:
                work.append(merged)
            if not work:
                return False
            if len(work) == 1:
                return work[0][1] != 0
        raise ResourceCap("zero test did not converge")

    def _merge(self, a, b):
        ref = [min(x, y) for x, y in zip(a[0], b[0])]
        total = Fraction(0)
        for vec, coeff in (a, b):
            scale = Fraction(1)
            for p, (e, r) in enumerate(zip(vec, ref)):
                d = e - r
                if d:
                    scale *= Fraction(self.primes[p]) ** d
            total += coeff * scale
        if total == 0:
            return None
        return (ref, total)


def zero_orbit_scan(g: MultiPolynomial, t_list: Sequence[MonomialTransform],
                    alpha: Sequence[Fraction], schedule, length: int
                    ) -> ZeroScanReport:
    """Exact scan of g(T_1^{k_{l,1}} alpha_1, ..., T_r^{k_{l,r}} alpha_r)."""
    if g.is_zero():
        raise ValueError("scan polynomial must be nonzero")
    if isinstance(schedule, IterationSchedule):
        entries = schedule.entries
    else:
        entries = [tuple(int(x) for x in k) for k in schedule]
    if len(entries) < length + 1:
        raise ValueError("schedule shorter than the requested scan length")
    ev = _OrbitTermEvaluator(g, t_list, alpha)
    zeros = [l for l in range(length + 1) if ev.is_zero(entries[l])]
    density = Fraction(len(zeros), length + 1)
    if len(zeros) >= 2:
        gaps = [b - a for a, b in zip(zeros, zeros[1:])]
        gap_bound = max(gaps)
        longest = len(zeros)
    elif len(zeros) == 1:
        gap_bound, longest = 1, 1
    else:
        gap_bound, longest = None, None
    return ZeroScanReport(length=length + 1, zero_indices=zeros,
                          zero_density=density, gap_bound=gap_bound,
                          longest_chain=longest)
