from fractions import Fraction as F

import pytest

from mahlertk.errors import (DimensionMismatch, SingularMatrix,
                             ZeroLeadingCoefficient)
from mahlertk.poly import parse_poly
from mahlertk.ratfun import RationalFunction
from mahlertk.series import TruncatedSeries
from mahlertk.systems import (MahlerSystem, ScalarMahlerEquation, direct_sum,
                              homogenize, iterate_system, load_system,
                              mat_compose_monomial, mat_mul, scalar_to_system,
                              shifted_system, verify_functional_identity)
from mahlertk.transforms import MonomialTransform


def two_variable_example():
    return load_system({
        "vars": ["z1", "z2"],
        "transform": {"size": 2, "rows": [[2, 0], [0, 2]]},
        "form": "backward",
        "matrix": [["1", "0", "0"], ["-z1", "1", "0"], ["-z2", "0", "1"]],
        "components": ["one", "f1", "f2"],
    })


def thue_morse_system():
    return load_system({
        "vars": ["z"],
        "transform": {"size": 1, "rows": [[2]]},
        "form": "forward",
        "matrix": [["1", "0"], ["z/(1 - z^2)", "1 - z"]],
        "components": ["one", "f"],
    })


def tm_sequence(n):
    return bin(n).count("1") % 2


def tm_series(order=128):
    one = TruncatedSeries.univariate("z", [F(1)] + [F(0)] * (order - 1), 1)
    f = TruncatedSeries.univariate("z", [F(tm_sequence(n)) for n in range(order)], 1)
    return [one, f]


class TestLoad:
    def test_backward_conversion_matches_symbolic_inverse(self):
        s = two_variable_example()
        expect = [["1", "0", "0"], ["z1", "1", "0"], ["z2", "0", "1"]]
        got = [[e.to_text() for e in row] for row in s.A]
        assert got == expect
        assert s.det() == RationalFunction.const(s.vars, 1)

    def test_identity_system_valid(self):
        s = load_system({"vars": ["z"], "transform": {"size": 1, "rows": [[2]]},
                         "form": "forward", "matrix": [["1"]]})
        assert s.m == 1

    def test_singular_matrix_rejected(self):
        with pytest.raises(SingularMatrix):
            load_system({"vars": ["z"], "transform": {"size": 1, "rows": [[2]]},
                         "form": "forward", "matrix": [["z", "z"], ["z", "z"]]})

    def test_json_roundtrip(self):
        s = thue_morse_system()
        again = load_system(s.to_json())
        assert [[e.to_text() for e in r] for r in again.A] == \
            [[e.to_text() for e in r] for r in s.A]


class TestIterate:
    def test_k0_identity(self):
        s = thue_morse_system()
        a0 = iterate_system(s, 0)
        assert a0[0][0] == RationalFunction.const(s.vars, 1)
        assert a0[0][1].is_zero() and a0[1][0].is_zero()

    def test_k1_is_a(self):
        s = thue_morse_system()
        a1 = iterate_system(s, 1)
        assert all(a1[i][j] == s.A[i][j] for i in range(2) for j in range(2))

    def test_thue_morse_k2(self):
        s = thue_morse_system()
        a2 = iterate_system(s, 2)
        expect10 = (RationalFunction.parse("z/(1 - z^2)", ["z"])
                    + RationalFunction.parse("(1 - z) * z^2/(1 - z^4)", ["z"]))
        expect11 = RationalFunction.parse("(1 - z) * (1 - z^2)", ["z"])
        assert a2[1][0] == expect10
        assert a2[1][1] == expect11

    def test_cocycle_law(self):
        """A_{k1+k2}(z) = A_{k1}(z) A_{k2}(T^{k1} z) symbolically."""
        for system in (thue_morse_system(), two_variable_example()):
            for k1 in range(0, 4):
                for k2 in range(0, 4):
                    if k1 + k2 > 5:
                        continue
                    left = iterate_system(system, k1 + k2)
                    tk1 = MonomialTransform(
                        [list(r) for r in system.T.rows]) if k1 == 1 else None
                    from mahlertk.transforms import transform_power
                    power = transform_power(system.T, k1)
                    right = mat_mul(iterate_system(system, k1),
                                    mat_compose_monomial(
                                        iterate_system(system, k2), power.rows))
                    assert all(left[i][j] == right[i][j]
                               for i in range(system.m)
                               for j in range(system.m))


class TestDirectSum:
    def test_two_scalar_copies(self):
        base = load_system({"vars": ["z"], "transform": {"size": 1, "rows": [[2]]},
                            "form": "forward", "matrix": [["1 + z"]],
                            "components": ["f"]})
        s = direct_sum([base, base])
        assert s.vars == ("z", "z_2")
        assert s.T.rows == ((2, 0), (0, 2))
        assert s.m == 2
        assert s.A[0][1].is_zero() and s.A[1][0].is_zero()
        assert s.component_names == ("f", "f_2")

    def test_mixed_radices(self):
        a = thue_morse_system()
        b = load_system({"vars": ["w"], "transform": {"size": 1, "rows": [[3]]},
                         "form": "forward", "matrix": [["1 + w"]],
                         "components": ["g"]})
        s = direct_sum([a, b])
        assert s.T.rows == ((2, 0), (0, 3))
        assert s.vars == ("z", "w")
        assert s.component_names == ("one", "f", "g")

    def test_single_system_unchanged(self):
        s = thue_morse_system()
        assert direct_sum([s]) is s


class TestHomogenize:
    def test_thue_morse_scalar(self):
        # (1 - z^2) f(z) - (1-z)(1-z^2) f(z^2) - z = 0
        eq = ScalarMahlerEquation(
            q=2,
            coefficients=[parse_poly("1 - z^2", ["z"]),
                          parse_poly("-(1 - z) * (1 - z^2)", ["z"])],
            inhomogeneous=parse_poly("-z", ["z"]))
        s = homogenize(eq)
        assert s.component_names == ("one", "f")
        assert s.A[1][0] == RationalFunction.parse("z/(1 - z^2)", ["z"])
        assert s.A[1][1] == RationalFunction.parse("1 - z", ["z"])
        assert s.A[0][0] == RationalFunction.const(("z",), 1)
        assert s.A[0][1].is_zero()

    def test_powers_of_two_scalar(self):
        # f(z) = f(z^2) + z
        eq = ScalarMahlerEquation(
            q=2,
            coefficients=[parse_poly("1", ["z"]), parse_poly("-1", ["z"])],
            inhomogeneous=parse_poly("-z", ["z"]))
        s = homogenize(eq)
        got = [[e.to_text() for e in row] for row in s.A]
        assert got == [["1", "0"], ["z", "1"]]

    def test_already_homogeneous_unchanged(self):
        s = thue_morse_system()
        assert homogenize(s) is s


class TestScalarToSystem:
    def test_companion_for_powers_of_two(self):
        eq = ScalarMahlerEquation(
            q=2, coefficients=[parse_poly("z", ["z"]),
                               parse_poly("-z - 1", ["z"]),
                               parse_poly("1", ["z"])])
        s = scalar_to_system(eq)
        got = [[e.to_text() for e in row] for row in s.A]
        assert got == [["(z + 1)/(z)", "-1/(z)"], ["1", "0"]]
        assert s.component_names[0] == "f"

    def test_constants_system(self):
        eq = ScalarMahlerEquation(
            q=3, coefficients=[parse_poly("1", ["z"]), parse_poly("-1", ["z"])])
        s = scalar_to_system(eq)
        assert [[e.to_text() for e in row] for row in s.A] == [["1"]]

    def test_zero_leading_coefficient(self):
        eq = ScalarMahlerEquation(
            q=2, coefficients=[parse_poly("0", ["z"]), parse_poly("1", ["z"])])
        with pytest.raises(ZeroLeadingCoefficient):
            scalar_to_system(eq)

    def test_companion_satisfied_by_power_series(self):
        """Substitution check: the companion system holds for f = sum z^(2^n)."""
        eq = ScalarMahlerEquation(
            q=2, coefficients=[parse_poly("z", ["z"]),
                               parse_poly("-z - 1", ["z"]),
                               parse_poly("1", ["z"])])
        s = scalar_to_system(eq)
        order = 64

        def a(n):
            return 1 if n >= 1 and (n & (n - 1)) == 0 else 0

        f = TruncatedSeries.univariate("z", [F(a(n)) for n in range(order)], 1)
        fq = TruncatedSeries.univariate(
            "z", [F(a(n // 2)) if n % 2 == 0 else F(0) for n in range(order)], 1)
        report = verify_functional_identity(s, [f, fq], order=24)
        assert report.vanishes


class TestVerifyIdentity:
    def test_thue_morse_vanishes(self):
        report = verify_functional_identity(thue_morse_system(), tm_series(),
                                            order=64)
        assert report.vanishes and report.order_checked == 64

    def test_corrupted_entry_reports_low_degree(self):
        bad = load_system({
            "vars": ["z"], "transform": {"size": 1, "rows": [[2]]},
            "form": "forward",
            "matrix": [["1", "0"], ["z/(1 - z^2)", "1 + z"]],
            "components": ["one", "f"]})
        report = verify_functional_identity(bad, tm_series(), order=64)
        assert not report.vanishes
        assert sum(report.exponent) <= 4

    def test_constant_system(self):
        s = load_system({"vars": ["z"], "transform": {"size": 1, "rows": [[2]]},
                         "form": "forward", "matrix": [["1"]],
                         "components": ["c"]})
        ser = TruncatedSeries.univariate("z", [F(5)] + [F(0)] * 63, 5)
        report = verify_functional_identity(s, [ser], order=32)
        assert report.vanishes


class TestShift:
    def test_shifted_system_matches_iterate(self):
        s = thue_morse_system()
        sh = shifted_system(s, 2)
        a2 = iterate_system(s, 2)
        assert all(sh.A[i][j] == a2[i][j] for i in range(2) for j in range(2))
        assert sh.T.rows == ((4,),)
