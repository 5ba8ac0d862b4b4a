"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
"""

import contextlib
import json
import random
import time
from fractions import Fraction as F

import gmpy2
import pytest

from mahlertk.automata import kernel_system, load_builtin_dfao, sequence_terms, unroll_series
from mahlertk.ball import RealBall
from mahlertk.cli import main as cli_main
from mahlertk.evaluation import (CounterexampleAt, RegularityCertificate,
                                 check_admissible_pair, check_regular,
                                 evaluate_values)
from mahlertk.intlin import matmul
from mahlertk.multrel import check_T_independence, verify_progression_relation
from mahlertk.poly import parse_poly
from mahlertk.probe import independence_report, integer_relation
from mahlertk.purity import (build_schedule, monomial_basis, relation_matrix,
                             verify_schedule, zero_orbit_scan)
from mahlertk.systems import (iterate_system, load_system,
                              mat_compose_monomial, mat_mul)
from mahlertk.transforms import MonomialTransform, transform_power


@contextlib.contextmanager
def criterion(number, description):
    try:
        yield
    except BaseException:
        print(f"[ACCEPTANCE {number:2d}] FAIL - {description}")
        raise
    print(f"[ACCEPTANCE {number:2d}] PASS - {description}")


def two_variable_example(order=None):
    desc = {
        "vars": ["z1", "z2"],
        "transform": {"size": 2, "rows": [[2, 0], [0, 2]]},
        "form": "backward",
        "matrix": [["1", "0", "0"], ["-z1", "1", "0"], ["-z2", "0", "1"]],
        "components": ["one", "f1", "f2"],
    }
    if order:
        exps = [2 ** n for n in range(12) if 2 ** n < order]
        desc["series"] = {
            "one": {"order": order, "coefficients": [[[0, 0], "1"]],
                    "tail_constant": "1"},
            "f1": {"order": order,
                   "coefficients": [[[e, 0], "1"] for e in exps],
                   "tail_constant": "1"},
            "f2": {"order": order,
                   "coefficients": [[[0, e], "1"] for e in exps],
                   "tail_constant": "1"},
        }
    return load_system(desc)


def thue_morse_system():
    return load_system({
        "vars": ["z"], "transform": {"size": 1, "rows": [[2]]},
        "form": "forward",
        "matrix": [["1", "0"], ["z/(1 - z^2)", "1 - z"]],
        "components": ["one", "f"]})


def pow2(n):
    return 1 if n >= 1 and (n & (n - 1)) == 0 else 0


def pow2_system(order=240):
    return load_system({
        "vars": ["z"], "transform": {"size": 1, "rows": [[2]]},
        "form": "forward", "matrix": [["1", "0"], ["z", "1"]],
        "components": ["one", "f"],
        "series": {
            "one": {"coefficients": ["1"] + ["0"] * (order - 1),
                    "tail_constant": "1"},
            "f": {"coefficients": [str(pow2(n)) for n in range(order)],
                  "tail_constant": "1"},
        }})


def test_criterion_1_relation_matrix_homomorphism():
    """R(B1 B2) = R(B1) R(B2) on 200 random block-diagonal matrices, < 10 s."""
    with criterion(1, "relation-matrix homomorphism on 200 random samples"):
        rng = random.Random(0xA11CE)
        start = time.monotonic()
        checked = 0
        covered_max_block = False
        while checked < 200:
            r = rng.randint(1, 3)
            ms = [rng.randint(1, 3) for _ in range(r)]
            ds = [rng.randint(0, 3) for _ in range(r)]
            idx = monomial_basis(ms, ds)
            if idx.t > 64:
                continue
            if ms.count(3) and ds[ms.index(3)] == 3:
                covered_max_block = True
            b1 = [[[rng.randint(-3, 3) for _ in range(m)] for _ in range(m)]
                  for m in ms]
            b2 = [[[rng.randint(-3, 3) for _ in range(m)] for _ in range(m)]
                  for m in ms]
            prod = [matmul(x, y) for x, y in zip(b1, b2)]
            left = relation_matrix(prod, idx).entries
            right = matmul(relation_matrix(b1, idx).entries,
                           relation_matrix(b2, idx).entries)
            assert left == right, f"failure at sample {checked}"
            checked += 1
        elapsed = time.monotonic() - start
        assert covered_max_block, "sampler never hit a 3x3 block of degree 3"
        assert elapsed < 10.0, f"took {elapsed:.1f}s"


def test_criterion_2_cocycle():
    """A_{k1+k2}(z) = A_{k1}(z) A_{k2}(T^{k1} z) for TM and the 2-variable
    example, exact rational-function equality for all k1 + k2 <= 5."""
    with criterion(2, "iterated-matrix cocycle law, k1 + k2 <= 5"):
        for system in (thue_morse_system(), two_variable_example()):
            cache = {k: iterate_system(system, k) for k in range(6)}
            for k1 in range(6):
                for k2 in range(6 - k1):
                    power = transform_power(system.T, k1)
                    right = mat_mul(cache[k1],
                                    mat_compose_monomial(cache[k2], power.rows))
                    left = cache[k1 + k2]
                    for i in range(system.m):
                        for j in range(system.m):
                            assert left[i][j] == right[i][j]


def test_criterion_3_dfao_soundness():
    """Kernel-system series equals the automaton's first 512 terms exactly."""
    with criterion(3, "DFAO kernel systems reproduce 512 sequence terms"):
        for name in ("thue_morse", "powers_of_two", "baum_sweet",
                     "period_doubling"):
            dfao = load_builtin_dfao(name)
            ks = kernel_system(dfao, order=512)
            unrolled = unroll_series(ks.system, 512)
            f_idx = ks.system.component_names.index("f")
            expected = sequence_terms(dfao, 512)
            for n in range(512):
                assert unrolled[f_idx].coefficient((n,)) == expected[n], \
                    f"{name} mismatch at term {n}"


def test_criterion_4_evaluation_vs_oracle():
    """f(1/2), f(1/3) balls at 512 bits: radius <= 1e-100, depth <= 12,
    containing the 80-term direct-summation oracle."""
    with criterion(4, "rigorous evaluation matches the direct-summation oracle"):
        system = pow2_system()
        for point, rounded10 in [
                (F(1, 2), "0.8164215090"),
                (F(1, 3), "0.4569425625")]:
            vals = evaluate_values(system, (point,), precision_bits=512,
                                   k_cap=12)
            ball = vals[system.component_names.index("f")]
            partial = sum(F(pow2(n)) * point ** n for n in range(80))
            tail = point ** 80 / (1 - point)
            assert ball.rad_fraction() <= F(1, 10 ** 100)
            # the oracle interval [partial, partial + tail] must overlap the ball
            assert ball.lower_fraction() <= partial + tail
            assert ball.upper_fraction() >= partial
            assert ball.decimal(10) == rounded10


def test_criterion_5_admissibility_corpus(tmp_path, capsys):
    """Corpus verdicts match the paper's example claims; certificates
    re-verify under the CLI --verify replay."""
    with criterion(5, "admissibility corpus verdicts and --verify replay"):
        rep = check_admissible_pair(MonomialTransform([[2, 0], [0, 2]]),
                                    (F(1, 2), F(1, 3)))
        assert rep.verdict == "admissible"
        rep = check_admissible_pair(MonomialTransform([[2, 0], [0, 2]]),
                                    (F(1, 2), F(1, 2)))
        assert rep.verdict == "not_admissible"
        assert rep.t_independence.witness_mu == [1, -1]
        assert verify_progression_relation(
            MonomialTransform([[2, 0], [0, 2]]), (F(1, 2), F(1, 2)),
            [1, -1], rep.t_independence.witness_a,
            rep.t_independence.witness_b, 50)
        rep = check_admissible_pair(MonomialTransform([[2, 0], [0, 3]]),
                                    (F(1, 2), F(1, 3)))
        assert rep.verdict == "not_admissible"
        assert not rep.class_m.has_positive_perron_eigenvector
        assert rep.class_m.nonsingular
        assert not rep.class_m.root_of_unity_eigenvalues

        from mahlertk.transforms import check_class_M
        assert check_class_M(MonomialTransform([[1, 1], [1, 0]])).verdict
        perm = check_class_M(MonomialTransform([[0, 1], [1, 0]]))
        assert not perm.verdict and perm.root_of_unity_eigenvalues == [1, 2]

        # --verify replay through the CLI on the full corpus
        corpus = [
            ([[2, 0], [0, 2]], "1/2,1/3", 0),
            ([[2, 0], [0, 2]], "1/2,1/2", 1),
            ([[2, 0], [0, 3]], "1/2,1/3", 1),
            ([[1, 1], [1, 0]], "2/3,2/3", 2),
            ([[0, 1], [1, 0]], "1/2,1/3", 1),
        ]
        for i, (rows, point, expected_code) in enumerate(corpus):
            path = tmp_path / f"t{i}.json"
            path.write_text(json.dumps({"size": 2, "rows": rows}))
            code = cli_main(["check-admissible", "--transform", str(path),
                             "--point", point, "--verify"])
            out = capsys.readouterr().out
            report = json.loads(out)
            assert code == expected_code, (rows, point)
            assert report.get("verified") is True


def test_criterion_6_regularity():
    """Trivial-tail certificate for the 2-variable example; constructed pole
    found at k = 2."""
    with criterion(6, "regularity certificate and pole counterexample"):
        cert = check_regular(two_variable_example(), (F(1, 2), F(1, 3)))
        assert isinstance(cert, RegularityCertificate)
        assert cert.tail_argument == []        # det == 1: trivial tail
        pole = load_system({
            "vars": ["z"], "transform": {"size": 1, "rows": [[2]]},
            "form": "forward", "matrix": [["16/(16*z - 1)"]],
            "components": ["f"]})
        result = check_regular(pole, (F(1, 2),))
        assert isinstance(result, CounterexampleAt) and result.k == 2


def test_criterion_7_schedule():
    """rho = (2,3), L = 10^4: interval-verified deviation <= 1 and
    monotonicity for every l, in under 5 seconds."""
    with criterion(7, "iteration schedule bounds at L = 10^4 in < 5 s"):
        start = time.monotonic()
        schedule = build_schedule([2, 3], 10 ** 4)
        assert schedule.deviation_bound <= 1
        assert verify_schedule(schedule)
        elapsed = time.monotonic() - start
        for a, b in zip(schedule.entries, schedule.entries[1:]):
            assert all(x <= y for x, y in zip(a, b))
        assert elapsed < 5.0, f"took {elapsed:.1f}s"


def test_criterion_8_zero_orbit_scan():
    """g = z1 - z2 along k_l = (l, l): no zeros at (1/2, 1/3); all 10^3
    scanned points zero at (1/2, 1/2)."""
    with criterion(8, "zero-orbit scan densities 0 and 1"):
        g = parse_poly("z1 - z2", ["z1", "z2"])
        ts = [MonomialTransform([[2]]), MonomialTransform([[2]])]
        entries = [(l, l) for l in range(1000)]
        rep = zero_orbit_scan(g, ts, (F(1, 2), F(1, 3)), entries, 999)
        assert rep.zero_indices == []
        rep = zero_orbit_scan(g, ts, (F(1, 2), F(1, 2)), entries, 999)
        assert len(rep.zero_indices) == 1000
        assert rep.zero_density == 1


def test_criterion_9_independence_probe():
    """Planted relations recovered; (f(1/2), f(1/3)) at 1000 digits, D = 3,
    H = 1e15 -> NoRelationFound, labeled 'consistent with', deterministic."""
    with criterion(9, "independence probe: planted recovery and 1000-digit run"):
        prec = 1100
        ctx = gmpy2.context(precision=prec)
        sqrt2 = RealBall(ctx.sqrt(2), gmpy2.mpfr(2) ** (-(prec - 40)), prec)
        c = integer_relation([sqrt2], degree_bound=2, height_bound=10 ** 6)
        assert c is not None and str(c.polynomial) == "x1^2 - 2"

        v = sqrt2 * RealBall.from_fraction(F(2, 5), prec)
        w = RealBall.from_fraction(1, prec) - v
        c = integer_relation([v, w], degree_bound=1, height_bound=10 ** 6)
        assert c is not None and str(c.polynomial) == "x1 + x2 - 1"

        bundle = [(two_variable_example(order=260), (F(1, 2), F(1, 3)))]
        digits_1000 = 3340                      # > 1000 decimal digits in bits
        rep1 = independence_report(bundle, degree_bound=3,
                                   precision_bits=digits_1000,
                                   height_bound=10 ** 15)
        assert rep1.probe_result["kind"] == "NoRelationFound"
        assert "consistent with" in rep1.conclusion
        rep2 = independence_report(bundle, degree_bound=3,
                                   precision_bits=digits_1000,
                                   height_bound=10 ** 15)
        assert json.dumps(rep1.to_json(), sort_keys=True) == \
            json.dumps(rep2.to_json(), sort_keys=True)


def test_criterion_10_t_independence_stabilization():
    """Every Dependent verdict's certificate persists exactly to d = 50."""
    with criterion(10, "dependence certificates persist to d = 50"):
        corpus = [
            (MonomialTransform([[2, 0], [0, 2]]), (F(1, 2), F(1, 2))),
            (MonomialTransform([[2, 0], [0, 2]]), (F(1, 2), F(1, 8))),
            (MonomialTransform([[2, 0], [0, 2]]), (F(-1, 2), F(1, 2))),
            (MonomialTransform([[3, 0], [0, 3]]), (F(2, 3), F(4, 9))),
            (MonomialTransform([[2, 1], [0, 3]]), (F(1, 2), F(1, 2))),
            (MonomialTransform([[1, 1], [1, 0]]), (F(1, 2), F(1, 2))),
        ]
        found_dependent = 0
        for t, alpha in corpus:
            verdict = check_T_independence(t, alpha)
            if verdict.independent:
                continue
            found_dependent += 1
            assert verify_progression_relation(
                t, alpha, verdict.witness_mu, verdict.witness_a,
                verdict.witness_b, 50), (t.rows, alpha)
        assert found_dependent >= 4
