"""Mahler systems: representation, iteration, direct sums, conversions.

The canonical internal form is the forward one,

    f(z) = A(z) f(Tz),

which iterates naturally during evaluation.  Backward inputs f(Tz) = A(z)f(z)
are converted on load by symbolic inversion of A.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .errors import (ArityMismatch, DimensionMismatch, InsufficientOrder,
                     ParseError, SingularMatrix, ZeroLeadingCoefficient)
from .poly import MultiPolynomial, parse_poly, poly_gcd
from .ratfun import RationalFunction
from .series import TruncatedSeries
from .transforms import MonomialTransform, transform_power

Matrix = List[List[RationalFunction]]


# -- rational-function matrix helpers -----------------------------------------


def mat_identity(variables, m: int) -> Matrix:
    one = RationalFunction.const(variables, 1)
    zero = RationalFunction.const(variables, 0)
    return [[one if i == j else zero for j in range(m)] for i in range(m)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    m = len(a)
    k = len(b)
    n = len(b[0])
    out = []
    for i in range(m):
        row = []
        for j in range(n):
            acc = None
            for t in range(k):
                term = a[i][t] * b[t][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def mat_compose_monomial(a: Matrix, rows) -> Matrix:
    return [[entry.compose_monomial(rows) for entry in r] for r in a]


def mat_det(a: Matrix) -> RationalFunction:
    """Exact determinant by fraction-field Gaussian elimination."""
    m = len(a)
    if m == 0:
        raise SingularMatrix("empty matrix")
    work = [row[:] for row in a]
    det = RationalFunction.const(a[0][0].variables, 1)
    sign = 1
    for c in range(m):
        piv = None
        for r in range(c, m):
            if not work[r][c].is_zero():
                piv = r
                break
        if piv is None:
            return RationalFunction.const(a[0][0].variables, 0)
        if piv != c:
            work[c], work[piv] = work[piv], work[c]
            sign = -sign
        det = det * work[c][c]
        inv = work[c][c].inv()
        for r in range(c + 1, m):
            if work[r][c].is_zero():
                continue
            factor = work[r][c] * inv
            for j in range(c, m):
                work[r][j] = work[r][j] - factor * work[c][j]
    return det * sign


def mat_inverse(a: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan; raises SingularMatrix when det = 0."""
    m = len(a)
    variables = a[0][0].variables
    work = [row[:] + ident_row for row, ident_row in
            zip([r[:] for r in a], mat_identity(variables, m))]
    for c in range(m):
        piv = None
        for r in range(c, m):
            if not work[r][c].is_zero():
                piv = r
                break
        if piv is None:
            raise SingularMatrix("matrix is singular over the function field")
        work[c], work[piv] = work[piv], work[c]
        inv = work[c][c].inv()
        work[c] = [x * inv for x in work[c]]
        for r in range(m):
            if r == c or work[r][c].is_zero():
                continue
            factor = work[r][c]
            work[r] = [x - factor * y for x, y in zip(work[r], work[c])]
    return [row[m:] for row in work]


def mat_eval(a: Matrix, point: Sequence[Fraction]):
    """Exact rational matrix value; raises PoleAtPoint on vanishing denominators."""
    return [[entry.eval(point) for entry in row] for row in a]


# -- domain types ----------------------------------------------------------------


class MahlerSystem:
    """Canonical forward-form system f(z) = A(z) f(Tz)."""

    def __init__(self, variables: Sequence[str], transform: MonomialTransform,
                 matrix: Matrix, component_names: Optional[Sequence[str]] = None,
                 series: Optional[Dict[str, TruncatedSeries]] = None,
                 check_det: bool = True):
        self.vars = tuple(variables)
        if transform.size != len(self.vars):
            raise DimensionMismatch("transform size != number of variables")
        m = len(matrix)
        if any(len(row) != m for row in matrix):
            raise DimensionMismatch("system matrix must be square")
        for row in matrix:
            for entry in row:
                if entry.variables != self.vars:
                    raise ArityMismatch("matrix entry over wrong variables")
        self.T = transform
        self.A = [row[:] for row in matrix]
        self.m = m
        if component_names is None:
            component_names = [f"f{i+1}" for i in range(m)]
        if len(component_names) != m:
            raise DimensionMismatch("need one component name per row")
        self.component_names = tuple(component_names)
        self.series = dict(series) if series else None
        if check_det:
            det = mat_det(self.A)
            if det.is_zero():
                raise SingularMatrix("det A is identically zero")
            self._det = det
        else:
            self._det = None

    @property
    def form(self) -> str:
        return "forward"

    def det(self) -> RationalFunction:
        if self._det is None:
            self._det = mat_det(self.A)
        return self._det

    def series_vector(self) -> List[TruncatedSeries]:
        if not self.series:
            raise ValueError("system carries no component series")
        missing = [n for n in self.component_names if n not in self.series]
        if missing:
            raise ValueError(f"missing series for components {missing}")
        return [self.series[n] for n in self.component_names]

    def with_series(self, series: Dict[str, TruncatedSeries]) -> "MahlerSystem":
        return MahlerSystem(self.vars, self.T, self.A, self.component_names,
                            series=series, check_det=False)

    def to_json(self) -> dict:
        out = {
            "vars": list(self.vars),
            "transform": self.T.to_json(),
            "form": "forward",
            "matrix": [[entry.to_text() for entry in row] for row in self.A],
            "components": list(self.component_names),
        }
        if self.series:
            ser = {}
            for name, s in self.series.items():
                ser[name] = {
                    "order": s.order,
                    "coefficients": [[list(e), str(c)]
                                     for e, c in sorted(s.coefficients.items())],
                }
                if s.tail_bound_constant is not None:
                    ser[name]["tail_constant"] = str(s.tail_bound_constant)
            out["series"] = ser
        return out

    def __repr__(self):
        return (f"MahlerSystem(vars={self.vars}, m={self.m}, "
                f"components={self.component_names})")


@dataclass
class ScalarMahlerEquation:
    """p_0(z) f(z) + p_1(z) f(z^q) + ... + p_m(z) f(z^{q^m}) + p_inhom = 0."""
    q: int
    coefficients: List[MultiPolynomial]          # p_0 ... p_m, univariate
    inhomogeneous: Optional[MultiPolynomial] = None

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be >= 2")
        if all(p.is_zero() for p in self.coefficients):
            raise ValueError("all scalar-equation coefficients are zero")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def variable(self) -> str:
        return self.coefficients[0].variables[0]

    def to_json(self) -> dict:
        out = {"q": self.q,
               "coefficients": [RationalFunction.from_poly(p).to_text()
                                for p in self.coefficients]}
        if self.inhomogeneous is not None:
            out["inhomogeneous"] = RationalFunction.from_poly(self.inhomogeneous).to_text()
        return out


# -- loading --------------------------------------------------------------------


def _parse_series_entry(data: dict, variables) -> TruncatedSeries:
    coeffs = data.get("coefficients")
    if coeffs is None:
        raise ParseError("series entry lacks 'coefficients'")
    tail = data.get("tail_constant")
    tail = Fraction(tail) if tail is not None else None
    if not coeffs:
        order = data.get("order")
        if order is None:
            raise ParseError("empty series needs an explicit 'order'")
        return TruncatedSeries(variables, int(order), {}, tail)
    if isinstance(coeffs[0], (list, tuple)) and len(coeffs[0]) == 2 \
            and isinstance(coeffs[0][0], (list, tuple)):
        order = data.get("order")
        if order is None:
            raise ParseError("multivariate series needs an explicit 'order'")
        terms = {tuple(int(x) for x in e): Fraction(str(c)) for e, c in coeffs}
        return TruncatedSeries(variables, int(order), terms, tail)
    if len(variables) != 1:
        raise ParseError("dense coefficient lists are univariate only")
    values = [Fraction(str(c)) for c in coeffs]
    order = int(data.get("order", len(values)))
    if order != len(values):
        raise ParseError("dense series order must equal the coefficient count")
    return TruncatedSeries.univariate(variables[0], values, tail)


def load_system(description: dict) -> MahlerSystem:
    """Build a canonical forward-form system from its JSON description."""
    try:
        variables = tuple(str(v) for v in description["vars"])
        transform = MonomialTransform.from_json(description["transform"])
        raw = description["matrix"]
        form = description.get("form", "forward")
    except KeyError as exc:
        raise ParseError(f"missing field {exc}") from exc
    if form not in ("forward", "backward"):
        raise ParseError(f"unknown form {form!r}")
    matrix = [[RationalFunction.parse(str(cell), variables) for cell in row]
              for row in raw]
    m = len(matrix)
    if any(len(row) != m for row in matrix):
        raise DimensionMismatch("matrix must be square")
    if form == "backward":
        matrix = mat_inverse(matrix)
    names = description.get("components") or [f"f{i+1}" for i in range(m)]
    series = None
    if "series" in description:
        series = {name: _parse_series_entry(entry, variables)
                  for name, entry in description["series"].items()}
    return MahlerSystem(variables, transform, matrix, names, series=series)


# -- iteration, direct sums -------------------------------------------------------


def iterate_system(system: MahlerSystem, k: int) -> Matrix:
    """A_k(z) = A(z) A(Tz) ... A(T^{k-1} z), exactly; A_0 = I."""
    if k < 0:
        raise ValueError("negative iteration count")
    result = mat_identity(system.vars, system.m)
    power = MonomialTransform.scaling(1, system.T.size)  # identity
    for _ in range(k):
        result = mat_mul(result, mat_compose_monomial(system.A, power.rows))
        power = MonomialTransform(
            [[sum(power.rows[i][t] * system.T.rows[t][j]
                  for t in range(system.T.size))
              for j in range(system.T.size)] for i in range(system.T.size)])
    return result


def _unique_names(groups: List[List[str]]) -> List[List[str]]:
    seen = {}
    out = []
    for group in groups:
        new = []
        for name in group:
            if name not in seen:
                seen[name] = 1
                new.append(name)
            else:
                seen[name] += 1
                candidate = f"{name}_{seen[name]}"
                while candidate in seen:
                    seen[name] += 1
                    candidate = f"{name}_{seen[name]}"
                seen[candidate] = 1
                new.append(candidate)
        out.append(new)
    return out


def direct_sum(systems: Sequence[MahlerSystem]) -> MahlerSystem:
    """Block-diagonal sum; colliding variable/component names get suffixes."""
    if not systems:
        raise ValueError("direct_sum of no systems")
    if len(systems) == 1:
        return systems[0]
    var_groups = _unique_names([list(s.vars) for s in systems])
    all_vars = tuple(v for g in var_groups for v in g)
    comp_groups = _unique_names([list(s.component_names) for s in systems])
    all_names = [c for g in comp_groups for c in g]
    total_m = sum(s.m for s in systems)
    zero = RationalFunction.const(all_vars, 0)
    big = [[zero for _ in range(total_m)] for _ in range(total_m)]
    series: Dict[str, TruncatedSeries] = {}
    have_all_series = all(s.series for s in systems)
    off = 0
    for s, vg, cg in zip(systems, var_groups, comp_groups):
        rename = dict(zip(s.vars, vg))
        for i in range(s.m):
            for j in range(s.m):
                big[off + i][off + j] = s.A[i][j].rename(rename).extend(all_vars)
        if have_all_series:
            for old, new in zip(s.component_names, cg):
                ser = s.series[old]
                renamed = TruncatedSeries(
                    tuple(rename.get(v, v) for v in ser.variables),
                    ser.order, dict(ser.coefficients), ser.tail_bound_constant)
                ext_terms = {}
                for e, c in renamed.coefficients.items():
                    ne = [0] * len(all_vars)
                    for v, k in zip(renamed.variables, e):
                        ne[all_vars.index(v)] = k
                    ext_terms[tuple(ne)] = c
                series[new] = TruncatedSeries(all_vars, renamed.order, ext_terms,
                                              renamed.tail_bound_constant)
        off += s.m
    t_sum = MonomialTransform.direct_sum([s.T for s in systems])
    return MahlerSystem(all_vars, t_sum, big, all_names,
                        series=series if have_all_series else None,
                        check_det=False)


# -- homogenization and scalar <-> system conversion --------------------------------


def homogenize_matrix(system: MahlerSystem, column: Sequence[RationalFunction],
                      constant_name: str = "one") -> MahlerSystem:
    """Attach an inhomogeneous column b: new first component is the constant 1.

    Input semantics: f(z) = A(z) f(Tz) + b(z); output is the homogeneous
    system for (1, f).
    """
    if len(column) != system.m:
        raise DimensionMismatch("inhomogeneous column length mismatch")
    one = RationalFunction.const(system.vars, 1)
    zero = RationalFunction.const(system.vars, 0)
    big = [[one] + [zero] * system.m]
    for i in range(system.m):
        big.append([column[i]] + list(system.A[i]))
    names = [constant_name] + list(system.component_names)
    series = None
    if system.series:
        const_series = TruncatedSeries(
            system.vars, max(s.order for s in system.series.values()),
            {(0,) * len(system.vars): Fraction(1)}, Fraction(1))
        series = {constant_name: const_series, **system.series}
    return MahlerSystem(system.vars, system.T, big, names, series=series,
                        check_det=False)


def homogenize(obj, column: Optional[Sequence[RationalFunction]] = None,
               variable: str = "z") -> MahlerSystem:
    """Homogenize an inhomogeneous scalar equation or a system with a column.

    Already-homogeneous inputs are returned unchanged.
    """
    if isinstance(obj, MahlerSystem):
        if column is None:
            return obj
        return homogenize_matrix(obj, column)
    if isinstance(obj, ScalarMahlerEquation):
        if obj.inhomogeneous is None:
            return scalar_to_system(obj)
        return scalar_to_system(obj)
    raise TypeError(f"cannot homogenize {type(obj)!r}")


def scalar_to_system(eq: ScalarMahlerEquation) -> MahlerSystem:
    """Companion forward system with first component f.

    Components are (f(z), f(z^q), ..., f(z^{q^{m-1}})); an inhomogeneous term
    adds the constant component 1 in front.
    """
    p0 = eq.coefficients[0]
    if p0.is_zero():
        raise ZeroLeadingCoefficient("companion form needs p_0 != 0")
    var = eq.variable
    variables = (var,)
    m = eq.order
    if m == 0:
        raise ValueError("order-0 equation has a rational solution; "
                         "no companion system to build")
    p0rf = RationalFunction.from_poly(p0)
    first_row = [(-RationalFunction.from_poly(p)) / p0rf
                 for p in eq.coefficients[1:]]
    zero = RationalFunction.const(variables, 0)
    one = RationalFunction.const(variables, 1)
    rows = [first_row]
    for i in range(1, m):
        rows.append([one if j == i - 1 else zero for j in range(m)])
    names = ["f"] + [f"f_q{i}" if i > 1 else "f_q" for i in range(1, m)]
    t = MonomialTransform.scaling(eq.q)
    core = MahlerSystem(variables, t, rows, names, check_det=False)
    if eq.inhomogeneous is None:
        return core
    column = [(-RationalFunction.from_poly(eq.inhomogeneous)) / p0rf] + [zero] * (m - 1)
    return homogenize_matrix(core, column)


def shifted_system(system: MahlerSystem, l: int) -> MahlerSystem:
    """The iterated system f(z) = A_l(z) f(T^l z) (manual regularity shift)."""
    if l < 1:
        raise ValueError("shift must be >= 1")
    return MahlerSystem(system.vars, transform_power(system.T, l),
                        iterate_system(system, l), system.component_names,
                        series=system.series, check_det=False)


# -- functional identity verification ------------------------------------------------


@dataclass
class ResidualReport:
    vanishes: bool
    order_checked: int
    component: Optional[str] = None
    exponent: Optional[tuple] = None
    coefficient: Optional[Fraction] = None

    def to_json(self) -> dict:
        out = {"vanishes": self.vanishes, "order_checked": self.order_checked}
        if not self.vanishes:
            out.update({"component": self.component,
                        "exponent": list(self.exponent),
                        "coefficient": str(self.coefficient)})
        return out


def verify_functional_identity(system: MahlerSystem,
                               series: Optional[Sequence[TruncatedSeries]] = None,
                               order: int = 64) -> ResidualReport:
    """Expand f(z) - A(z) f(Tz) and report the first nonzero coefficient.

    Each row is cleared of denominators before expanding, so entries with
    poles at the origin (companion systems) are handled too; clearing by a
    nonzero polynomial does not change whether the residual vanishes.
    """
    if series is None:
        series = system.series_vector()
    if len(series) != system.m:
        raise DimensionMismatch("one series per component required")
    if any(sum(row) == 0 for row in system.T.rows):
        raise InsufficientOrder("transform has a zero row sum")
    for s in series:
        if s.order < order:
            raise InsufficientOrder(
                f"series order {s.order} < verification order {order}")
    aligned = []
    for s in series:
        if s.variables != system.vars:
            raise ArityMismatch("series variables differ from system variables")
        aligned.append(s.truncate(order))
    composed = [s.compose_monomial(system.T.rows) for s in aligned]
    worst = None
    for i in range(system.m):
        clear = MultiPolynomial.const(system.vars, 1)
        for entry in system.A[i]:
            if not entry.den.is_constant():
                g = poly_gcd(clear, entry.den)
                clear = clear * entry.den.divexact(g)
        residual = aligned[i].mul_poly(clear)
        for j in range(system.m):
            entry = system.A[i][j]
            if entry.is_zero():
                continue
            row_poly = (entry * RationalFunction.from_poly(clear))
            assert row_poly.is_polynomial()
            scaled = row_poly.num * (1 / row_poly.den.constant_value())
            residual = residual - composed[j].mul_poly(scaled)
        fn = residual.first_nonzero()
        if fn is not None:
            exp, coeff = fn
            key = (sum(exp), exp)
            if worst is None or key < worst[0]:
                worst = (key, system.component_names[i], exp, coeff)
    if worst is None:
        return ResidualReport(vanishes=True, order_checked=order)
    _, name, exp, coeff = worst
    return ResidualReport(vanishes=False, order_checked=order,
                          component=name, exponent=exp, coefficient=coeff)
