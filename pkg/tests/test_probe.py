import json
from fractions import Fraction as F

import gmpy2
import pytest

from mahlertk.ball import RealBall
from mahlertk.errors import InsufficientPrecision
from mahlertk.probe import (independence_report, integer_relation,
                            rational_candidates)
from mahlertk.systems import load_system


def sqrt2_ball(prec=1100):
    ctx = gmpy2.context(precision=prec)
    return RealBall(ctx.sqrt(2), gmpy2.mpfr(2) ** (-(prec - 40)), prec)


def two_variable_bundle(point="1/2,1/3", order=48):
    exps = [2 ** n for n in range(10) if 2 ** n < order]
    desc = {
        "vars": ["z1", "z2"],
        "transform": {"size": 2, "rows": [[2, 0], [0, 2]]},
        "form": "backward",
        "matrix": [["1", "0", "0"], ["-z1", "1", "0"], ["-z2", "0", "1"]],
        "components": ["one", "f1", "f2"],
        "series": {
            "one": {"order": order, "coefficients": [[[0, 0], "1"]],
                    "tail_constant": "1"},
            "f1": {"order": order,
                   "coefficients": [[[e, 0], "1"] for e in exps],
                   "tail_constant": "1"},
            "f2": {"order": order,
                   "coefficients": [[[0, e], "1"] for e in exps],
                   "tail_constant": "1"},
        },
    }
    system = load_system(desc)
    alpha = tuple(F(x) for x in point.split(","))
    return [(system, alpha)]


class TestIntegerRelation:
    def test_sqrt2_minimal_polynomial(self):
        c = integer_relation([sqrt2_ball()], degree_bound=2,
                             height_bound=10 ** 6)
        assert c is not None
        assert str(c.polynomial) == "x1^2 - 2"

    def test_planted_affine_relation(self):
        prec = 1100
        v = sqrt2_ball(prec) * RealBall.from_fraction(F(3, 7), prec)
        w = RealBall.from_fraction(1, prec) - v
        c = integer_relation([v, w], degree_bound=1, height_bound=10 ** 6)
        assert c is not None
        assert str(c.polynomial) == "x1 + x2 - 1"

    def test_insufficient_precision_rejected(self):
        v = RealBall.from_fraction(F(1, 3), 64)
        with pytest.raises(InsufficientPrecision):
            integer_relation([v], degree_bound=3, height_bound=10 ** 15)

    def test_deterministic(self):
        a = integer_relation([sqrt2_ball()], 2, 10 ** 6)
        b = integer_relation([sqrt2_ball()], 2, 10 ** 6)
        assert a.coefficients == b.coefficients


class TestRationalFlag:
    def test_detects_small_rational(self):
        v = RealBall.from_fraction(F(22, 7), 256)
        assert rational_candidates(v) == F(22, 7)

    def test_rejects_when_outside(self):
        v = sqrt2_ball()
        assert rational_candidates(v) is None


class TestIndependenceReport:
    def test_paper_example_no_relation(self):
        rep = independence_report(two_variable_bundle(), degree_bound=2,
                                  precision_bits=900)
        assert rep.probe_result["kind"] == "NoRelationFound"
        assert "consistent with" in rep.conclusion
        assert rep.hypotheses["direct_sum_T_independence"]["status"] == \
            "independent"
        per = rep.hypotheses["per_system"][0]
        assert per["regular"]["kind"] == "certificate"
        assert per["admissibility"]["verdict"] == "admissible"
        labels = [v.label for v in rep.values]
        assert labels == ["f1@0", "f2@0"]
        assert rep.values[0].decimal.startswith("0.81642150902189")
        assert rep.values[1].decimal.startswith("0.45694256247763")

    def test_t_dependent_point_still_probes(self):
        rep = independence_report(two_variable_bundle("1/2,1/2"),
                                  degree_bound=1, precision_bits=900)
        assert rep.hypotheses["direct_sum_T_independence"]["status"] == \
            "dependent"
        assert rep.probe_result["kind"] == "CandidateRelation"
        assert rep.probe_result["polynomial"] == "x1 - x2"

    def test_no_false_certainty_in_serialization(self):
        rep = independence_report(two_variable_bundle(), degree_bound=1,
                                  precision_bits=700)
        text = json.dumps(rep.to_json()).lower()
        assert "consistent with" in text
        for forbidden in ("proved independent", "proven independent",
                          "independence proved", "is algebraically independent"):
            assert forbidden not in text

    def test_determinism(self):
        a = independence_report(two_variable_bundle(), degree_bound=1,
                                precision_bits=700)
        b = independence_report(two_variable_bundle(), degree_bound=1,
                                precision_bits=700)
        assert json.dumps(a.to_json(), sort_keys=True) == \
            json.dumps(b.to_json(), sort_keys=True)
