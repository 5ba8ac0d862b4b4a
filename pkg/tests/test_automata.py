import random
from fractions import Fraction as F

import pytest

from mahlertk.automata import (DFAO, kernel_system, load_builtin_dfao,
                               minimize, scalar_equation_search,
                               sequence_terms, unroll_series)
from mahlertk.errors import InsufficientOrder
from mahlertk.series import TruncatedSeries
from mahlertk.systems import verify_functional_identity


# independent oracles for the built-in sequences
def thue_morse_oracle(n):
    return F(bin(n).count("1") % 2)


def powers_of_two_oracle(n):
    return F(1) if n >= 1 and (n & (n - 1)) == 0 else F(0)


def baum_sweet_oracle(n):
    if n == 0:
        return F(1)
    bits = bin(n)[2:]
    for block in bits.split("1"):
        if len(block) % 2 == 1:
            return F(0)
    return F(1)


def period_doubling_oracle(n):
    # parity of the number of trailing ones = parity of nu_2(n + 1)
    count = 0
    while n & 1:
        count += 1
        n >>= 1
    return F(count % 2)


ORACLES = {
    "thue_morse": thue_morse_oracle,
    "powers_of_two": powers_of_two_oracle,
    "baum_sweet": baum_sweet_oracle,
    "period_doubling": period_doubling_oracle,
    "constant_one": lambda n: F(1),
}


class TestSequences:
    @pytest.mark.parametrize("name", sorted(ORACLES))
    def test_against_oracle(self, name):
        dfao = load_builtin_dfao(name)
        oracle = ORACLES[name]
        assert sequence_terms(dfao, 300) == [oracle(n) for n in range(300)]

    def test_empty_word_convention(self):
        dfao = load_builtin_dfao("thue_morse")
        assert dfao.term(0) == dfao.output[dfao.initial]


class TestMinimize:
    def test_redundant_states_merge(self):
        # two states with identical behavior collapse
        dfao = DFAO(q=2, states=3, initial=0,
                    transitions=((1, 2), (1, 2), (1, 2)),
                    output=(F(0), F(1), F(1)))
        mini, assign = minimize(dfao)
        assert mini.states == 2
        assert assign[1] == assign[2]

    def test_minimal_stays(self):
        dfao = load_builtin_dfao("baum_sweet")
        mini, _ = minimize(dfao)
        assert mini.states == 3


class TestKernelSystem:
    @pytest.mark.parametrize("name", sorted(ORACLES))
    def test_unrolled_series_matches_sequence(self, name):
        """Kernel-system soundness to 512 terms, coefficient by coefficient."""
        dfao = load_builtin_dfao(name)
        ks = kernel_system(dfao, order=512)
        unrolled = unroll_series(ks.system, 512)
        f_index = ks.system.component_names.index("f")
        oracle_terms = sequence_terms(dfao, 512)
        for n in range(512):
            assert unrolled[f_index].coefficient((n,)) == oracle_terms[n]

    def test_kernel_size_bounded_by_minimized_states(self):
        for name in ORACLES:
            dfao = load_builtin_dfao(name)
            mini, _ = minimize(dfao)
            ks = kernel_system(dfao, order=64)
            assert ks.system.m <= mini.states + 1   # +1 for the constant

    def test_identity_verified_at_construction(self):
        ks = kernel_system(load_builtin_dfao("thue_morse"), order=512)
        report = verify_functional_identity(ks.system, order=256)
        assert report.vanishes

    def test_constant_dfao_geometric_relation(self):
        ks = kernel_system(load_builtin_dfao("constant_one"), order=64)
        # single kernel state: f(z) = (1 + z) f(z^2), f = 1/(1 - z)
        texts = [[e.to_text() for e in row] for row in ks.system.A]
        assert texts == [["1", "0"], ["0", "z + 1"]]

    def test_powers_of_two_structure(self):
        ks = kernel_system(load_builtin_dfao("powers_of_two"), order=64)
        names = ks.system.component_names
        f = names.index("f")
        # row for f reads f(z) = f(z^2) + z * (second kernel component)(z^2)
        row = [e.to_text() for e in ks.system.A[f]]
        assert row[f] == "1" and "z" in row

    def test_corrections_appear_when_needed(self):
        # output(initial) != output(delta(initial, 0)) forces a constant term
        dfao = DFAO(q=2, states=2, initial=0,
                    transitions=((1, 0), (1, 1)), output=(F(3), F(5)))
        ks = kernel_system(dfao, order=128)
        assert any(c != 0 for c in ks.corrections.values())

    @pytest.mark.parametrize("name", sorted(ORACLES))
    def test_builtin_systems_regular_at_origin(self, name):
        """A(0) is invertible for all built-in kernel systems, so the
        regularity tail certificate applies at rational points."""
        from mahlertk.evaluation import RegularityCertificate, check_regular
        ks = kernel_system(load_builtin_dfao(name), order=64)
        system = ks.system
        zero = (F(0),) * len(system.vars)
        det0 = system.det().num.eval(zero)
        assert det0 != 0
        cert = check_regular(system, (F(1, 3),))
        assert isinstance(cert, RegularityCertificate)


class TestScalarSearch:
    def test_powers_of_two_equation(self):
        ks = kernel_system(load_builtin_dfao("powers_of_two"), order=256)
        eq = scalar_equation_search(ks.system.series["f"], q=2, m_max=2,
                                    d_max=1, match_order=64)
        assert eq is not None
        assert [str(p) for p in eq.coefficients] == ["z", "-z - 1", "1"]

    def test_geometric_series(self):
        geo = TruncatedSeries.univariate("z", [F(1)] * 200, 1)
        eq = scalar_equation_search(geo, q=2, m_max=1, d_max=1, match_order=64)
        assert eq is not None
        assert [str(p) for p in eq.coefficients] == ["1", "-z - 1"]

    def test_generic_series_none(self):
        rng = random.Random(4242)
        coeffs = [F(rng.randint(1, 10 ** 6)) for _ in range(200)]
        s = TruncatedSeries.univariate("z", coeffs, 10 ** 6)
        assert scalar_equation_search(s, 2, 2, 1, 64) is None

    def test_candidates_verified_to_double_order(self):
        """Any returned equation must also match coefficients up to 2N."""
        ks = kernel_system(load_builtin_dfao("thue_morse"), order=512)
        eq = scalar_equation_search(ks.system.series["f"], q=2, m_max=2,
                                    d_max=4, match_order=96)
        assert eq is not None
        assert [str(p) for p in eq.coefficients] == ["z", "-z - 1", "-z^4 + 1"]
        # independent re-check on a longer prefix
        a = [ks.system.series["f"].coefficient((n,)) for n in range(400)]
        for t in range(400):
            total = F(0)
            for i, p in enumerate(eq.coefficients):
                step = 2 ** i
                for (j,), c in p.terms.items():
                    if t >= j and (t - j) % step == 0 and (t - j) // step < len(a):
                        total += c * a[(t - j) // step]
            if t < 300:
                assert total == 0

    def test_insufficient_order(self):
        s = TruncatedSeries.univariate("z", [F(1)] * 32, 1)
        with pytest.raises(InsufficientOrder):
            scalar_equation_search(s, 2, 2, 1, 64)
