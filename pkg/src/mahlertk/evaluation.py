"""Regularity certificates, admissibility reports, rigorous evaluation.

Regularity (the matrix A being well-defined and invertible along the whole
forward orbit) is certified in two parts: exact evaluation at finitely many
orbit points, then a polydisc argument around the origin.  If every relevant
polynomial p (entry denominators and the determinant numerator) satisfies

    |p(0)| > sum_{lambda != 0} |p_lambda| r^{|lambda|}

then p has no zero on the closed polydisc of radius r, and once the orbit
enters that polydisc it never leaves (row sums of T are >= 1), so finitely
many exact checks plus the tail inequality cover all k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .ball import RealBall, ln_fraction
from .errors import (DimensionMismatch, MissingTailBound, NotRegular,
                     PoleAtPoint, PrecisionUnreachable, ResourceCap)
from .multrel import TIndependenceVerdict, check_T_independence
from .poly import MultiPolynomial
from .series import TruncatedSeries, series_eval_ball, tail_bound
from .systems import MahlerSystem, mat_eval
from .transforms import (ClassMReport, Inconclusive, LimitZeroCertificate,
                         MonomialTransform, OrbitExponents, check_class_M,
                         check_limit_zero)


# -- regularity -----------------------------------------------------------------


@dataclass
class PolydiscBound:
    polynomial: str
    value_at_zero: Fraction
    tail_sum: Fraction            # sum_{lambda != 0} |p_lambda| r^{|lambda|}

    def holds(self) -> bool:
        return abs(self.value_at_zero) > self.tail_sum

    def to_json(self) -> dict:
        return {"polynomial": self.polynomial,
                "abs_value_at_zero": str(abs(self.value_at_zero)),
                "tail_sum": str(self.tail_sum)}


@dataclass
class RegularityCertificate:
    checked_exactly_up_to: int
    tail_radius: Fraction
    tail_argument: List[PolydiscBound]
    polydisc_entry_k: int = 0

    def to_json(self) -> dict:
        return {"kind": "certificate",
                "checked_exactly_up_to": self.checked_exactly_up_to,
                "tail_radius": str(self.tail_radius),
                "polydisc_entry_k": self.polydisc_entry_k,
                "tail_argument": [b.to_json() for b in self.tail_argument]}


@dataclass
class CounterexampleAt:
    k: int
    reason: str

    def to_json(self) -> dict:
        return {"kind": "counterexample", "k": self.k, "reason": self.reason}


@dataclass
class RegularityInconclusive:
    checked_exactly_up_to: int
    reason: str

    def to_json(self) -> dict:
        return {"kind": "inconclusive",
                "checked_exactly_up_to": self.checked_exactly_up_to,
                "reason": self.reason}


def _strip_monomial_content(p: MultiPolynomial) -> MultiPolynomial:
    """Divide out the largest common monomial factor.

    Orbit points have nonzero coordinates, so a monomial factor never
    vanishes along the orbit; only the stripped part constrains regularity.
    """
    exps = list(p.terms.keys())
    mins = [min(e[i] for e in exps) for i in range(len(p.variables))]
    if not any(mins):
        return p
    return MultiPolynomial(p.variables,
                           {tuple(a - b for a, b in zip(e, mins)): c
                            for e, c in p.terms.items()})


def _tail_polynomials(system: MahlerSystem) -> List[MultiPolynomial]:
    polys = []
    for row in system.A:
        for entry in row:
            if not entry.den.is_constant():
                polys.append(_strip_monomial_content(entry.den))
    det = system.det()
    if not det.num.is_constant():
        polys.append(_strip_monomial_content(det.num))
    return [p for p in polys if not p.is_constant()]


def _polydisc_bounds(polys: Sequence[MultiPolynomial], r: Fraction):
    out = []
    ok = True
    for p in polys:
        c0 = p.constant_coefficient()
        tail = Fraction(0)
        for e, c in p.terms.items():
            if sum(e) > 0:
                tail += abs(c) * r ** sum(e)
        b = PolydiscBound(polynomial=str(p), value_at_zero=c0, tail_sum=tail)
        ok = ok and b.holds()
        out.append(b)
    return ok, out


def _exact_orbit_check(system: MahlerSystem, orbit: OrbitExponents, k: int):
    """None when A is well-defined and invertible at T^k(alpha), else a reason."""
    point = orbit.materialize(k)
    for row in system.A:
        for entry in row:
            if entry.den.eval(point) == 0:
                return f"entry denominator {entry.den} vanishes at T^{k}(alpha)"
    det = system.det()
    if det.num.eval(point) == 0:
        return f"det numerator vanishes at T^{k}(alpha)"
    return None


def check_regular(system: MahlerSystem, alpha: Sequence[Fraction],
                  k_exact: int = 8, k_search_cap: int = 72):
    """Certificate, counterexample, or an honest Inconclusive."""
    alpha = tuple(Fraction(a) for a in alpha)
    if len(alpha) != len(system.vars):
        raise DimensionMismatch("point dimension != system variables")
    orbit = OrbitExponents(system.T, alpha)
    for k in range(k_exact + 1):
        reason = _exact_orbit_check(system, orbit, k)
        if reason is not None:
            return CounterexampleAt(k=k, reason=reason)

    polys = _tail_polynomials(system)
    if any(p.constant_coefficient() == 0 for p in polys):
        return RegularityInconclusive(
            checked_exactly_up_to=k_exact,
            reason="a denominator or the determinant numerator vanishes at 0; "
                   "only the finite orbit prefix could be checked")
    if any(s == 0 for s in system.T.row_sums()):
        return RegularityInconclusive(
            checked_exactly_up_to=k_exact,
            reason="transform has a zero row; the orbit cannot stay in a "
                   "polydisc around 0")

    r = Fraction(1, 2)
    bounds = None
    for _ in range(80):
        ok, bounds = _polydisc_bounds(polys, r)
        if ok:
            break
        r /= 2
    else:
        return RegularityInconclusive(
            checked_exactly_up_to=k_exact,
            reason="coefficient-sum lower bound failed down to radius 2^-81")

    k_star = None
    for k in range(k_search_cap + 1):
        if orbit.norm_at_most(k, r):
            k_star = k
            break
    if k_star is None:
        return RegularityInconclusive(
            checked_exactly_up_to=k_exact,
            reason=f"orbit did not enter the certified polydisc (radius {r}) "
                   f"within {k_search_cap} iterations")
    for k in range(k_exact + 1, k_star + 1):
        reason = _exact_orbit_check(system, orbit, k)
        if reason is not None:
            return CounterexampleAt(k=k, reason=reason)
    return RegularityCertificate(checked_exactly_up_to=max(k_exact, k_star),
                                 tail_radius=r, tail_argument=bounds,
                                 polydisc_entry_k=k_star)


# -- admissibility ---------------------------------------------------------------


@dataclass
class AdmissibilityReport:
    class_m: ClassMReport
    limit_zero: object                       # LimitZeroCertificate | Inconclusive
    t_independence: Optional[TIndependenceVerdict]
    verdict: str                             # admissible | not_admissible |
                                             # admissible_up_to_bound | inconclusive
    reasons: List[str] = field(default_factory=list)
    rho_interval: Optional[tuple] = None
    decay_constant_lower: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "class_m": self.class_m.to_json(),
            "limit_zero": self.limit_zero.to_json() if self.limit_zero else None,
            "t_independence": (self.t_independence.to_json()
                               if self.t_independence else None),
            "verdict": self.verdict,
            "reasons": self.reasons,
        }
        if self.rho_interval:
            out["rho_interval"] = [str(x) for x in self.rho_interval]
        if self.decay_constant_lower:
            out["decay_constant_lower"] = self.decay_constant_lower
        return out


def _decay_constant(orbit: OrbitExponents, cert: LimitZeroCertificate,
                    rho_hi: Fraction) -> Optional[str]:
    """Certified lower bound for c in log|alpha_i^(k)| <= -c rho^k."""
    try:
        point = orbit.materialize(cert.k0)
    except ResourceCap:
        return None
    prec = 96
    best: Optional[RealBall] = None
    for coord in point:
        b = -ln_fraction(abs(coord), prec)
        if best is None or b.lower_fraction() < best.lower_fraction():
            best = b
    scale = RealBall.from_fraction(rho_hi ** cert.k0, prec)
    c = best / scale
    lo = c.lower_fraction()
    if lo <= 0:
        return None
    return f"{float(lo):.6g}"


def check_admissible_pair(t: MonomialTransform, alpha: Sequence[Fraction],
                          radius_width: Fraction = Fraction(1, 1024),
                          k_max: int = 64, b_max: int = 16) -> AdmissibilityReport:
    """Combine the class-M, orbit-limit, and T-independence checks."""
    alpha = tuple(Fraction(a) for a in alpha)
    class_m = check_class_M(t, radius_width)
    limit = check_limit_zero(t, alpha, k_max)
    t_indep = None
    reasons = list(class_m.reasons)
    if t.det() != 0:
        t_indep = check_T_independence(t, alpha, b_max)
        if not t_indep.independent:
            reasons.append(
                f"point is T-dependent: mu={t_indep.witness_mu} along "
                f"k = {t_indep.witness_a} + d*{t_indep.witness_b}")
    else:
        reasons.append("T singular: T-independence check skipped")
    if isinstance(limit, Inconclusive):
        reasons.append(limit.reason)

    if not class_m.verdict or (t_indep is not None and not t_indep.independent):
        verdict = "not_admissible"
    elif isinstance(limit, Inconclusive):
        verdict = "inconclusive"
    elif t_indep.proven:
        verdict = "admissible"
    else:
        verdict = "admissible_up_to_bound"

    decay = None
    if verdict in ("admissible", "admissible_up_to_bound"):
        orbit = OrbitExponents(t, alpha)
        decay = _decay_constant(orbit, limit, class_m.spectral_radius[1])
    return AdmissibilityReport(class_m=class_m, limit_zero=limit,
                               t_independence=t_indep, verdict=verdict,
                               reasons=reasons,
                               rho_interval=class_m.spectral_radius,
                               decay_constant_lower=decay)


# -- rigorous evaluation ------------------------------------------------------------


def _iterated_matrix_at(system: MahlerSystem, orbit: OrbitExponents, k: int):
    """A_k(alpha) = A(alpha) A(T alpha) ... A(T^{k-1} alpha), exact."""
    m = system.m
    result = [[Fraction(1) if i == j else Fraction(0) for j in range(m)]
              for i in range(m)]
    for t in range(k):
        point = orbit.materialize(t)
        step = mat_eval(system.A, point)
        result = [[sum(result[i][l] * step[l][j] for l in range(m))
                   for j in range(m)] for i in range(m)]
    return result


def evaluate_at_depth(system: MahlerSystem, alpha: Sequence[Fraction], k: int,
                      precision_bits: int = 256,
                      series: Optional[Sequence[TruncatedSeries]] = None
                      ) -> List[RealBall]:
    """Enclosures of the component values via f(alpha) = A_k(alpha) f(T^k alpha)."""
    if series is None:
        series = system.series_vector()
    orbit = OrbitExponents(system.T, alpha)
    prec = precision_bits + 64
    point = orbit.materialize(k)
    point_balls = [RealBall.from_fraction(c, prec) for c in point]
    tail_values = [series_eval_ball(s, point_balls, prec) for s in series]
    matrix = _iterated_matrix_at(system, orbit, k)
    out = []
    for i in range(system.m):
        acc = RealBall.zero(prec)
        for j in range(system.m):
            if matrix[i][j] == 0:
                continue
            acc = acc + RealBall.from_fraction(matrix[i][j], prec) * tail_values[j]
        out.append(acc)
    return out


def evaluate_values(system: MahlerSystem, alpha: Sequence[Fraction],
                    series: Optional[Sequence[TruncatedSeries]] = None,
                    precision_bits: int = 256,
                    regularity=None, k_cap: int = 32) -> List[RealBall]:
    """Balls provably containing the exact component values at alpha.

    The iteration depth k is chosen so that series tail plus rounding error
    stays below 2^-precision_bits; beyond k_cap PrecisionUnreachable is raised.
    """
    alpha = tuple(Fraction(a) for a in alpha)
    if series is None:
        series = system.series_vector()
    if any(s.tail_bound_constant is None for s in series):
        raise MissingTailBound("every component series needs a tail constant")
    if regularity is None:
        regularity = check_regular(system, alpha)
    if not isinstance(regularity, RegularityCertificate):
        raise NotRegular(f"no regularity certificate: {regularity}")

    target = Fraction(1, 2 ** precision_bits)
    orbit = OrbitExponents(system.T, alpha)
    last_error = None
    for k in range(k_cap + 1):
        if not orbit.norm_less_than(k, Fraction(1)):
            continue
        try:
            point = orbit.materialize(k)
            rho = max(abs(c) for c in point)
            worst_tail = max(
                tail_bound(s.order, len(system.vars), rho, s.tail_bound_constant)
                for s in series)
            if worst_tail > target / 4:
                continue
            values = evaluate_at_depth(system, alpha, k, precision_bits, series)
        except (ResourceCap, PoleAtPoint) as exc:
            last_error = exc
            continue
        if all(v.rad_fraction() <= target for v in values):
            return values
    raise PrecisionUnreachable(
        f"no depth k <= {k_cap} reached radius 2^-{precision_bits}"
        + (f" (last error: {last_error})" if last_error else ""))
