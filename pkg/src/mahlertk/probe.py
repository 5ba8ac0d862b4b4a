"""Empirical algebraic-independence probing of rigorously evaluated values.

Integer-relation detection (PSLQ over the monomial vector) produces
*candidates*, which are then re-screened against enclosures at doubled
precision; surviving candidates are reported with their residual interval.
A NoRelationFound outcome records the exact search parameters and is always
labeled "consistent with" independence, never as a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iter_product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath as mp

from .ball import RealBall, ball_sum
from .errors import InsufficientPrecision
from .evaluation import (AdmissibilityReport, RegularityCertificate,
                         check_admissible_pair, check_regular, evaluate_values)
from .multrel import check_T_independence, multiplicatively_independent
from .poly import MultiPolynomial
from .systems import MahlerSystem
from .transforms import MonomialTransform, spectral_radius_algebraic


def _monomials(n_values: int, degree_bound: int) -> List[Tuple[int, ...]]:
    """All exponent tuples of total degree <= bound, graded-lex descending."""
    ranges = [range(degree_bound + 1)] * n_values
    out = [e for e in iter_product(*ranges) if sum(e) <= degree_bound]
    out.sort(key=lambda e: (sum(e), e))
    return out


def _ball_to_mpf(ball: RealBall) -> mp.mpf:
    mant, exp = ball.midpoint.as_mantissa_exp()
    return mp.ldexp(int(mant), int(exp))


@dataclass
class CandidateRelation:
    polynomial: MultiPolynomial
    coefficients: List[int]
    monomials: List[Tuple[int, ...]]
    residual: Tuple[Fraction, Fraction]

    def to_json(self) -> dict:
        return {"polynomial": str(self.polynomial),
                "coefficients": self.coefficients,
                "monomials": [list(m) for m in self.monomials],
                "residual_interval": [str(self.residual[0]), str(self.residual[1])],
                "note": "numerical candidate relation; residual straddles zero "
                        "at doubled precision"}


def _relation_residual(coeffs: Sequence[int], monomials, values: Sequence[RealBall],
                       prec: int) -> RealBall:
    terms = []
    for c, e in zip(coeffs, monomials):
        if c == 0:
            continue
        t = RealBall.exact_int(c, prec)
        for v, k in zip(values, e):
            if k:
                t = t * v ** k
        terms.append(t)
    return ball_sum(terms, prec)


def integer_relation(values: Sequence[RealBall], degree_bound: int = 3,
                     height_bound: int = 10 ** 15,
                     refine: Optional[Callable[[int], List[RealBall]]] = None,
                     var_names: Optional[Sequence[str]] = None
                     ) -> Optional[CandidateRelation]:
    """PSLQ search for an integer polynomial relation among enclosed values.

    The precision budget requires ball radii below
    2^-(#monomials * (log2 H + 64)); candidates must keep a residual interval
    straddling zero at doubled precision (recomputed through `refine` when
    supplied) with width < 2^-(p/2).
    """
    values = list(values)
    if not values:
        raise ValueError("no values supplied")
    monomials = _monomials(len(values), degree_bound)
    budget = len(monomials) * (int(math.log2(height_bound)) + 64)
    worst = max(v.rad_fraction() for v in values)
    if worst > 0:
        p_eff = -worst.numerator.bit_length() + worst.denominator.bit_length()
    else:
        p_eff = max(v.prec for v in values)
    if p_eff < budget:
        raise InsufficientPrecision(
            f"need ball radii below 2^-{budget}, have about 2^-{p_eff}")
    prec = max(v.prec for v in values)
    monomial_balls = []
    for e in monomials:
        t = RealBall.from_fraction(1, prec)
        for v, k in zip(values, e):
            if k:
                t = t * v ** k
        monomial_balls.append(t)
    with mp.workprec(prec + 64):
        mids = [_ball_to_mpf(b) for b in monomial_balls]
        tol = mp.ldexp(1, -(p_eff // 2))
        coeffs = mp.pslq(mids, tol=tol, maxcoeff=int(height_bound),
                         maxsteps=100000)
    if coeffs is None:
        return None
    if max(abs(c) for c in coeffs) > height_bound:
        return None
    check_values = refine(2 * prec) if refine is not None else values
    check_prec = max(v.prec for v in check_values)
    residual = _relation_residual(coeffs, monomials, check_values, check_prec)
    lo, hi = residual.lower_fraction(), residual.upper_fraction()
    if not (lo <= 0 <= hi):
        return None
    if hi - lo >= Fraction(1, 2 ** (p_eff // 2)):
        return None
    names = list(var_names) if var_names else [f"x{i+1}" for i in range(len(values))]
    coeffs = [int(c) for c in coeffs]
    poly = MultiPolynomial(names, {e: Fraction(c)
                                   for e, c in zip(monomials, coeffs) if c})
    if poly.leading()[1] < 0:
        poly = -poly
        coeffs = [-c for c in coeffs]
    return CandidateRelation(polynomial=poly, coefficients=coeffs,
                             monomials=monomials, residual=(lo, hi))


# -- rational-value flagging ------------------------------------------------------


def rational_candidates(ball: RealBall, max_denominator: int = 10 ** 6
                        ) -> Optional[Fraction]:
    """A small-height rational inside the ball, if one exists."""
    mid = ball.mid_fraction()
    cand = Fraction(mid).limit_denominator(max_denominator)
    if ball.contains_fraction(cand):
        return cand
    return None


# -- full independence reports ------------------------------------------------------


@dataclass
class ValueRecord:
    label: str
    system_index: int
    component: str
    decimal: str
    lower: str
    upper: str
    possibly_rational: Optional[str] = None

    def to_json(self) -> dict:
        out = {"label": self.label, "system": self.system_index,
               "component": self.component, "decimal": self.decimal,
               "enclosure": [self.lower, self.upper]}
        if self.possibly_rational is not None:
            out["possibly_in_base_field"] = {
                "candidate": self.possibly_rational,
                "status": "undecided (deciding membership in the base field "
                          "is outside this toolkit)"}
        return out


@dataclass
class IndependenceReport:
    hypotheses: Dict[str, object]
    values: List[ValueRecord]
    probe_result: dict
    conclusion: str
    parameters: dict

    def to_json(self) -> dict:
        return {"hypotheses": self.hypotheses,
                "values": [v.to_json() for v in self.values],
                "probe_result": self.probe_result,
                "conclusion": self.conclusion,
                "parameters": self.parameters}


def _radius_hypothesis(systems: Sequence[MahlerSystem]) -> dict:
    """Pairwise multiplicative independence of spectral radii, decided exactly
    for integer radii and left undecided otherwise."""
    radii = []
    for s in systems:
        rho = spectral_radius_algebraic(s.T)
        rho.refine(Fraction(1, 2 ** 64))
        lo, hi = rho.interval()
        exact_int = None
        if lo == hi and lo.denominator == 1:
            exact_int = int(lo)
        else:
            mid = (lo + hi) / 2
            near = Fraction(mid).limit_denominator(1)
            if rho.cmp_fraction(near) == 0:
                exact_int = int(near)
        radii.append((exact_int, (str(lo), str(hi))))
    out = {"radii": [r[1] for r in radii]}
    ints = [r[0] for r in radii]
    if any(i is None for i in ints):
        out["pairwise_multiplicatively_independent"] = "undecided (non-integer radius)"
        return out
    verdicts = []
    for i in range(len(ints)):
        for j in range(i + 1, len(ints)):
            if ints[i] < 2 or ints[j] < 2:
                ok = False
            else:
                ok, _ = multiplicatively_independent([Fraction(ints[i]),
                                                      Fraction(ints[j])])
            verdicts.append(ok)
    out["pairwise_multiplicatively_independent"] = all(verdicts) if verdicts else True
    return out


def independence_report(bundle: Sequence[Tuple[MahlerSystem, Sequence[Fraction]]],
                        degree_bound: int = 3, precision_bits: int = 512,
                        height_bound: int = 10 ** 15, b_max: int = 16,
                        probe_components: Optional[Sequence[str]] = None
                        ) -> IndependenceReport:
    """Hypothesis checks + rigorous evaluation + integer-relation probe.

    The conclusion never claims a proof of independence; it reports whether
    the probe outcome is consistent with the admissibility/regularity
    hypotheses that were verified.
    """
    systems = [s for s, _ in bundle]
    points = [tuple(Fraction(a) for a in alpha) for _, alpha in bundle]

    hyp: Dict[str, object] = {}
    per_system = []
    all_regular = True
    all_admissible = True
    for i, (s, alpha) in enumerate(zip(systems, points)):
        reg = check_regular(s, alpha)
        adm = check_admissible_pair(s.T, alpha, b_max=b_max)
        regular_ok = isinstance(reg, RegularityCertificate)
        admissible_ok = adm.verdict in ("admissible", "admissible_up_to_bound")
        all_regular &= regular_ok
        all_admissible &= admissible_ok
        per_system.append({"system": i, "regular": reg.to_json(),
                           "admissibility": adm.to_json()})
    hyp["per_system"] = per_system

    t_sum = MonomialTransform.direct_sum([s.T for s in systems])
    alpha_concat = tuple(a for alpha in points for a in alpha)
    if t_sum.det() != 0:
        tind = check_T_independence(t_sum, alpha_concat, b_max=b_max)
        hyp["direct_sum_T_independence"] = tind.to_json()
    else:
        tind = None
        hyp["direct_sum_T_independence"] = "skipped (singular direct sum)"
    mult_ok, witness = multiplicatively_independent(alpha_concat)
    hyp["point_coordinates_multiplicatively_independent"] = mult_ok
    if not mult_ok:
        hyp["point_coordinate_relation"] = list(witness)
    hyp["spectral_radii"] = _radius_hypothesis(systems)
    hypotheses_hold = (all_regular and all_admissible
                       and (tind is None or tind.independent))

    def probed_names(s: MahlerSystem) -> List[str]:
        out = []
        for name in s.component_names:
            if probe_components is not None:
                if name in probe_components:
                    out.append(name)
                continue
            ser = s.series[name] if s.series else None
            # constant components (the homogenization 1, dead states) carry
            # no independence information and would plant trivial relations
            if ser is not None and all(sum(e) == 0 for e in ser.coefficients):
                continue
            out.append(name)
        return out

    def evaluate_all(bits: int) -> List[RealBall]:
        collected = []
        for s, alpha in zip(systems, points):
            vals = evaluate_values(s, alpha, precision_bits=bits)
            keep = probed_names(s)
            collected.extend(v for name, v in zip(s.component_names, vals)
                             if name in keep)
        return collected

    value_records: List[ValueRecord] = []
    base_values: List[RealBall] = []
    for i, (s, alpha) in enumerate(zip(systems, points)):
        vals = evaluate_values(s, alpha, precision_bits=precision_bits)
        keep = probed_names(s)
        for name, v in zip(s.component_names, vals):
            if name not in keep:
                continue
            base_values.append(v)
            rc = rational_candidates(v)
            value_records.append(ValueRecord(
                label=f"{name}@{i}", system_index=i, component=name,
                decimal=v.decimal(40), lower=str(v.lower_fraction()),
                upper=str(v.upper_fraction()),
                possibly_rational=str(rc) if rc is not None else None))

    candidate = integer_relation(
        base_values, degree_bound, height_bound,
        refine=lambda bits: evaluate_all(bits),
        var_names=[f"x{i+1}" for i in range(len(base_values))])

    params = {"degree_bound": degree_bound, "height_bound": height_bound,
              "precision_bits": precision_bits, "b_max": b_max}
    if candidate is None:
        probe = {"kind": "NoRelationFound", **params}
        if hypotheses_hold:
            conclusion = ("no integer relation found at the tested degree, "
                          "height, and precision; consistent with the "
                          "algebraic independence predicted under the "
                          "verified hypotheses (not a proof)")
        else:
            conclusion = ("no integer relation found at the tested "
                          "parameters; note that the hypothesis checks did "
                          "not all pass")
    else:
        probe = {"kind": "CandidateRelation", **candidate.to_json()}
        conclusion = ("candidate relation detected; consistent with a true "
                      "algebraic relation among the values (numerical "
                      "evidence only)")
    return IndependenceReport(hypotheses=hyp, values=value_records,
                              probe_result=probe, conclusion=conclusion,
                              parameters=params)
