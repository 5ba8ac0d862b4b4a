"""Finite automata with output: q-automatic sequences and their Mahler systems.

Digits are read least-significant first; n = 0 reads the empty word.  With
that convention the state generating functions f_s(z) = sum_n a_s(n) z^n obey

    f_s(z) = sum_{r<q} z^r f_{delta(s,r)}(z^q) + c_s,
    c_s    = output(s) - output(delta(s, 0)),

because splitting n = q*m + r matches "read digit r, continue from
delta(s, r)" for every n >= 1, and the constant c_s repairs the n = 0 term.
Homogenizing with the constant function 1 gives a polynomial Mahler system.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InsufficientOrder, ParseError
from .poly import MultiPolynomial
from .ratfun import RationalFunction
from .series import TruncatedSeries, ratfun_series
from .systems import MahlerSystem, verify_functional_identity
from .transforms import MonomialTransform


@dataclass(frozen=True)
class DFAO:
    """Deterministic finite automaton with output, LSD-first digit order."""
    q: int
    states: int
    initial: int
    transitions: Tuple[Tuple[int, ...], ...]   # transitions[state][digit]
    output: Tuple[Fraction, ...]
    digit_order: str = "lsd"

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("base q must be >= 2")
        if self.digit_order != "lsd":
            raise ValueError("only least-significant-digit-first automata")
        if len(self.transitions) != self.states or len(self.output) != self.states:
            raise ParseError("transition/output tables must cover every state")
        for row in self.transitions:
            if len(row) != self.q or any(not 0 <= s < self.states for s in row):
                raise ParseError("transitions must be total and in range")
        if not 0 <= self.initial < self.states:
            raise ParseError("initial state out of range")

    @classmethod
    def from_json(cls, data: dict) -> "DFAO":
        return cls(
            q=int(data["q"]),
            states=int(data["states"]),
            initial=int(data["initial"]),
            transitions=tuple(tuple(int(x) for x in row)
                              for row in data["transitions"]),
            output=tuple(Fraction(str(v)) for v in data["output"]),
            digit_order=data.get("digit_order", "lsd"),
        )

    def to_json(self) -> dict:
        return {"q": self.q, "states": self.states, "initial": self.initial,
                "transitions": [list(r) for r in self.transitions],
                "output": [str(v) for v in self.output],
                "digit_order": self.digit_order}

    def run(self, n: int, start: Optional[int] = None) -> int:
        state = self.initial if start is None else start
        while n:
            state = self.transitions[state][n % self.q]
            n //= self.q
        return state

    def term(self, n: int, start: Optional[int] = None) -> Fraction:
        return self.output[self.run(n, start)]


def sequence_terms(d: DFAO, count: int, start: Optional[int] = None) -> List[Fraction]:
    """a(0), ..., a(count-1) read off the automaton."""
    return [d.term(n, start) for n in range(count)]


# -- minimization ------------------------------------------------------------------


def minimize(d: DFAO) -> Tuple[DFAO, List[int]]:
    """Moore refinement; returns (minimized automaton, class index per state)."""
    classes: Dict[Fraction, int] = {}
    assign = [0] * d.states
    for s in range(d.states):
        key = d.output[s]
        if key not in classes:
            classes[key] = len(classes)
        assign[s] = classes[key]
    while True:
        signatures = {}
        new_assign = [0] * d.states
        for s in range(d.states):
            sig = (assign[s],) + tuple(assign[d.transitions[s][r]]
                                       for r in range(d.q))
            if sig not in signatures:
                signatures[sig] = len(signatures)
            new_assign[s] = signatures[sig]
        if new_assign == assign:
            break
        assign = new_assign
    n_classes = max(assign) + 1
    rep = [None] * n_classes
    for s in range(d.states):
        if rep[assign[s]] is None:
            rep[assign[s]] = s
    transitions = tuple(tuple(assign[d.transitions[rep[c]][r]] for r in range(d.q))
                        for c in range(n_classes))
    output = tuple(d.output[rep[c]] for c in range(n_classes))
    mini = DFAO(q=d.q, states=n_classes, initial=assign[d.initial],
                transitions=transitions, output=output)
    return mini, assign


def _reachable(d: DFAO) -> List[int]:
    seen = [d.initial]
    todo = [d.initial]
    while todo:
        s = todo.pop()
        for r in range(d.q):
            t = d.transitions[s][r]
            if t not in seen:
                seen.append(t)
                todo.append(t)
    return sorted(seen)


# -- kernel systems -----------------------------------------------------------------


@dataclass
class KernelSystem:
    system: MahlerSystem
    state_map: Dict[str, List[int]]     # component name -> original DFAO states
    corrections: Dict[str, Fraction]    # component name -> c_s

    def to_json(self) -> dict:
        return {"system": self.system.to_json(),
                "state_map": self.state_map,
                "corrections": {k: str(v) for k, v in self.corrections.items()}}


def kernel_system(d: DFAO, order: int = 512, variable: str = "z",
                  verify_order: int = 256) -> KernelSystem:
    """Homogenized polynomial Mahler system of the q-kernel of the automaton.

    Components are the constant 1 followed by the generating functions of the
    minimized reachable states; the functional identity is re-verified
    against the automaton's own series before returning.
    """
    mini, assign = minimize(d)
    reachable = _reachable(mini)
    index = {c: i for i, c in enumerate(reachable)}
    names = ["one"] + [("f" if c == mini.initial else f"k{index[c]}")
                       for c in reachable]
    variables = (variable,)
    m = len(reachable)
    zero = RationalFunction.const(variables, 0)
    one = RationalFunction.const(variables, 1)
    rows: List[List[RationalFunction]] = [[one] + [zero] * m]
    for c in reachable:
        const = mini.output[c] - mini.output[mini.transitions[c][0]]
        row = [RationalFunction.const(variables, const)] + [zero] * m
        for r in range(mini.q):
            target = mini.transitions[c][r]
            mono = MultiPolynomial(variables, {(r,): Fraction(1)})
            row[1 + index[target]] = row[1 + index[target]] + RationalFunction.from_poly(mono)
        rows.append(row)

    tail_c = max(Fraction(1), max(abs(v) for v in mini.output))
    series: Dict[str, TruncatedSeries] = {
        "one": TruncatedSeries.univariate(variable,
                                          [Fraction(1)] + [Fraction(0)] * (order - 1),
                                          tail_c)}
    for c in reachable:
        coeffs = sequence_terms(mini, order, start=c)
        series[names[1 + index[c]]] = TruncatedSeries.univariate(
            variable, coeffs, tail_c)

    system = MahlerSystem(variables, MonomialTransform.scaling(d.q), rows,
                          names, series=series)
    report = verify_functional_identity(system, order=min(verify_order, order))
    if not report.vanishes:
        raise AssertionError(
            f"kernel system identity failed at {report.exponent}: "
            f"{report.coefficient}")
    state_map = {"one": []}
    back = {c: [s for s in range(d.states) if assign[s] == c] for c in reachable}
    for c in reachable:
        state_map[names[1 + index[c]]] = back[c]
    corrections = {"one": Fraction(0)}
    for c in reachable:
        corrections[names[1 + index[c]]] = (
            mini.output[c] - mini.output[mini.transitions[c][0]])
    return KernelSystem(system=system, state_map=state_map,
                        corrections=corrections)


def unroll_series(system: MahlerSystem, order: int,
                  constants: Optional[Sequence[Fraction]] = None
                  ) -> List[TruncatedSeries]:
    """Solve f(z) = A(z) f(Tz) for the truncated component series.

    The iteration g <- A(z) g(Tz) pins down q times more coefficients per
    round, starting from the constant terms (taken from `constants` or the
    stored series).
    """
    if constants is None:
        stored = system.series_vector()
        constants = [s.coefficient((0,) * len(system.vars)) for s in stored]
    n = len(system.vars)
    vec = [TruncatedSeries(system.vars, order, {(0,) * n: Fraction(c)})
           for c in constants]
    min_growth = min(sum(row) for row in system.T.rows)
    if min_growth < 2:
        raise InsufficientOrder("unrolling needs every row sum of T >= 2")
    rounds = 1
    span = 1
    while span < order:
        span *= min_growth
        rounds += 1
    entry_series = [[None if system.A[i][j].is_zero()
                     else ratfun_series(system.A[i][j], system.vars, order)
                     for j in range(system.m)] for i in range(system.m)]
    for _ in range(rounds):
        composed = [g.compose_monomial(system.T.rows) for g in vec]
        new_vec = []
        for i in range(system.m):
            acc = TruncatedSeries.zero(system.vars, order)
            for j in range(system.m):
                if entry_series[i][j] is None:
                    continue
                acc = acc + entry_series[i][j] * composed[j]
            new_vec.append(acc)
        vec = new_vec
    return vec


# -- scalar equation search ------------------------------------------------------------


def _nullspace_fraction(rows: List[List[Fraction]], ncols: int) -> List[List[Fraction]]:
    m = [row[:] for row in rows]
    pivots = {}
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots[c] = r
        r += 1
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for c, ri in pivots.items():
            v[c] = -m[ri][free]
        basis.append(v)
    return basis


def scalar_equation_search(series: TruncatedSeries, q: int, m_max: int,
                           d_max: int, match_order: int):
    """Best-effort search for p_0 f(z) + ... + p_m f(z^{q^m}) = 0.

    Candidates are read from the exact nullspace of the truncated linear
    system matching all orders < match_order, then re-verified against
    2*match_order coefficients.  Returns a ScalarMahlerEquation or None; None
    is a search outcome, not a nonexistence proof, and a returned equation is
    *a* Mahler equation for the truncation, not certified minimal.
    """
    from .systems import ScalarMahlerEquation

    if len(series.variables) != 1:
        raise InsufficientOrder("scalar search expects a univariate series")
    if series.order < 2 * match_order:
        raise InsufficientOrder(
            f"series order {series.order} < 2 * match order {match_order}")
    var = series.variables[0]
    a = [series.coefficient((t,)) for t in range(series.order)]

    def coeff_f_qi(i: int, t: int) -> Fraction:
        step = q ** i
        return a[t // step] if t % step == 0 else Fraction(0)

    for m in range(1, m_max + 1):
        if match_order <= (m + 1) * (d_max + 1) + 8:
            raise InsufficientOrder(
                "match order leaves no safety margin over the unknown count")
        for d in range(d_max + 1):
            cols = [(i, j) for i in range(m + 1) for j in range(d + 1)]
            rows = []
            for t in range(match_order):
                rows.append([coeff_f_qi(i, t - j) if t >= j else Fraction(0)
                             for (i, j) in cols])
            basis = _nullspace_fraction(rows, len(cols))
            for vec in basis:
                polys = []
                for i in range(m + 1):
                    terms = {(j,): vec[cols.index((i, j))] for j in range(d + 1)}
                    polys.append(MultiPolynomial((var,), terms))
                if all(p.is_zero() for p in polys):
                    continue
                candidate = _canonical_scalar(polys)
                if _verify_scalar(candidate, a, q, 2 * match_order):
                    return ScalarMahlerEquation(q=q, coefficients=candidate)
    return None


def _canonical_scalar(polys: List[MultiPolynomial]) -> List[MultiPolynomial]:
    """Integer-primitive scaling with positive leading nonzero polynomial."""
    content = Fraction(0)
    for p in polys:
        c = p.rational_content()
        if c != 0:
            content = c if content == 0 else Fraction(
                math.gcd(content.numerator * c.denominator,
                         c.numerator * content.denominator),
                content.denominator * c.denominator)
    if content == 0:
        return polys
    scaled = [p * (1 / content) for p in polys]
    for p in scaled:
        if not p.is_zero():
            if p.leading()[1] < 0:
                scaled = [-x for x in scaled]
            break
    return scaled


def _verify_scalar(polys: List[MultiPolynomial], a: List[Fraction], q: int,
                   order: int) -> bool:
    order = min(order, len(a))
    for t in range(order):
        total = Fraction(0)
        for i, p in enumerate(polys):
            step = q ** i
            for (j,), c in p.terms.items():
                if t >= j and (t - j) % step == 0:
                    total += c * a[(t - j) // step]
        if total != 0:
            return False
    return True


# -- built-in corpus ---------------------------------------------------------------------


def load_builtin_dfao(name: str) -> DFAO:
    """Load one of the shipped automata (thue_morse, powers_of_two, baum_sweet,
    period_doubling, constant_one)."""
    path = resources.files("mahlertk.data").joinpath(f"{name}.json")
    return DFAO.from_json(json.loads(path.read_text()))


def load_builtin_system(name: str) -> MahlerSystem:
    from .systems import load_system
    path = resources.files("mahlertk.data").joinpath(f"{name}.json")
    return load_system(json.loads(path.read_text()))
