import random
from fractions import Fraction as F

import pytest

from mahlertk.ball import RealBall, ball_sum, ln_fraction, ln_fraction_interval


class TestEnclosureSoundness:
    def test_random_ops_contain_exact_results(self):
        """1000 random rational inputs: ball ops enclose the Fraction oracle."""
        rng = random.Random(991)
        for _ in range(1000):
            a = F(rng.randint(-999, 999), rng.randint(1, 999))
            b = F(rng.randint(-999, 999), rng.randint(1, 999))
            prec = rng.choice([24, 53, 128])
            ba = RealBall.from_fraction(a, prec)
            bb = RealBall.from_fraction(b, prec)
            assert (ba + bb).contains_fraction(a + b)
            assert (ba - bb).contains_fraction(a - b)
            assert (ba * bb).contains_fraction(a * b)
            if b != 0 and not bb.contains_zero():
                assert (ba / bb).contains_fraction(a / b)
            k = rng.randint(0, 5)
            assert (ba ** k).contains_fraction(a ** k)

    def test_low_precision_still_sound(self):
        a = F(1, 3)
        ba = RealBall.from_fraction(a, 8)
        assert ba.contains_fraction(a)
        sq = ba * ba
        assert sq.contains_fraction(a * a)


class TestLog:
    def test_ln_fraction_encloses(self):
        # ln 2 = 0.693147180559945...
        b = ln_fraction(F(2), 128)
        assert b.contains_fraction(F(693147180559945, 10 ** 15)) or (
            b.lower_fraction() < F(6932, 10000) and
            b.upper_fraction() > F(6931, 10000))
        assert b.lower_fraction() < F(693148, 10 ** 6)
        assert b.upper_fraction() > F(693147, 10 ** 6)

    def test_ln_interval_enclosure(self):
        b = ln_fraction_interval(F(2), F(3), 64)
        assert b.lower_fraction() < F(7, 10)
        assert b.upper_fraction() > F(10, 10)

    def test_ln_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            ln_fraction(F(-1), 64)


class TestPredicates:
    def test_floor_unique(self):
        assert RealBall.from_fraction(F(7, 2), 64).floor_unique() == 3
        wide = RealBall.from_fraction_interval(F(29, 10), F(31, 10), 64)
        assert wide.floor_unique() is None

    def test_abs_bounds(self):
        b = RealBall.from_fraction_interval(F(-2), F(3), 64)
        lo, hi = b.abs_bounds()
        assert lo == 0 and hi >= 3

    def test_sum(self):
        total = ball_sum([RealBall.from_fraction(F(1, k), 96)
                          for k in range(1, 6)])
        exact = sum(F(1, k) for k in range(1, 6))
        assert total.contains_fraction(exact)
