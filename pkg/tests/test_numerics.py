import math
import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import SQUAREFREE, random_turn
from geodesic_index.numerics import (
    BracketError,
    CertifiedDecimal,
    Quadratic,
    Rational,
    ceil_of,
    compare,
    floor_of,
    frac_of,
    from_literal,
    is_integer,
    quadratic,
    scaled_ceil,
    scaled_floor,
    scaled_varphi,
    sign_of,
    sqrt_of,
    to_literal,
    varphi_of,
)

R = lambda p, q=1: Rational(Fraction(p, q))  # noqa: E731


def decimal_image(x, digits=100):
    """An independent certified-decimal copy of an exact value."""
    with mpmath.workdps(digits + 20):
        mid = mpmath.mpf(x.p) + x.q * mpmath.sqrt(x.d)
        mid /= x.r
        text = mpmath.nstr(mid, digits + 15, strip_zeros=False)
    return CertifiedDecimal.from_literal(text, digits, irrational=True)


quadratics = st.builds(
    quadratic,
    st.integers(-10**6, 10**6),
    st.integers(-1000, 1000).filter(bool),
    st.sampled_from(SQUAREFREE),
    st.integers(1, 10**4),
)
rationals = st.fractions(max_denominator=10**6).map(Rational)
exact_reals = st.one_of(quadratics, rationals)


class TestExamples:
    def test_floor(self):
        assert floor_of(sqrt_of(2)) == 1
        assert floor_of(R(7, 2)) == 3
        assert floor_of(10 * quadratic(1, 1, 5, 2)) == 16

    def test_ceil(self):
        assert ceil_of(R(3)) == 3
        assert ceil_of(sqrt_of(2)) == 2
        assert ceil_of(-sqrt_of(2)) == -1

    def test_varphi(self):
        assert varphi_of(R(5)) == 0
        assert varphi_of(sqrt_of(3)) == 1
        assert varphi_of(R(0)) == 0

    def test_frac(self):
        assert frac_of(R(7, 2)) == R(1, 2)
        assert frac_of(sqrt_of(2)) == quadratic(-1, 1, 2)
        x = frac_of(2 * sqrt_of(2))
        assert isinstance(x, Quadratic)
        assert x == quadratic(-2, 2, 2)
        assert float(x) == pytest.approx(0.8284271247)

    def test_compare(self):
        assert compare(sqrt_of(2), R(3, 2)) == -1
        assert compare(R(1, 3), R(1, 3)) == 0
        assert compare(quadratic(-1, 1, 2), 1 - quadratic(0, 1, 2, 2)) == 1

    def test_mixed_radicands_compare(self):
        assert compare(sqrt_of(2), sqrt_of(3)) == -1
        assert compare(sqrt_of(3) - sqrt_of(2), R(1, 3)) == -1
        assert compare(sqrt_of(3) - sqrt_of(2), R(3, 10)) == 1


class TestCanonicalForm:
    def test_squarefree_normalisation(self):
        assert quadratic(0, 1, 8) == quadratic(0, 2, 2)
        assert quadratic(2, 2, 2, 4) == quadratic(1, 1, 2, 2)

    def test_collapses_to_rational(self):
        assert quadratic(1, 3, 9, 2) == R(5)
        assert quadratic(3, 0, 5, 6) == R(1, 2)

    def test_negative_denominator(self):
        x = quadratic(1, 1, 2, -3)
        assert x.r > 0 and x == quadratic(-1, -1, 2, 3)

    def test_rejects_noncanonical_direct_construction(self):
        with pytest.raises(ValueError):
            Quadratic(2, 2, 2, 4)
        with pytest.raises(ValueError):
            Quadratic(0, 1, 4, 1)

    def test_irrationality_flags(self):
        assert sqrt_of(2).is_rational is False
        assert R(1, 3).is_rational is True
        assert CertifiedDecimal.from_literal("0.5", 20).is_rational is None


class TestCertifiedDecimals:
    def test_undecidable_floor(self):
        x = CertifiedDecimal.from_literal("2.0", 30)
        with pytest.raises(BracketError) as info:
            floor_of(x, max_digits=128)
        assert info.value.kind == BracketError.UNDECIDABLE_FLOOR

    def test_near_integer_floor(self):
        # endpoints must not be rounded to double precision before flooring
        assert floor_of(CertifiedDecimal.from_literal("1.99999999999999999999", 30)) == 1
        assert floor_of(CertifiedDecimal.from_literal("3.00000000000000000001", 30)) == 3
        _, radius = CertifiedDecimal.from_literal("2.0", 30).enclosure()
        assert 0 < radius < 1e-29

    def test_precision_exhausted_compare(self):
        x = CertifiedDecimal.from_literal("0.5", 30)
        with pytest.raises(BracketError) as info:
            compare(x, R(1, 2), max_digits=128)
        assert info.value.kind == BracketError.PRECISION_EXHAUSTED

    def test_function_source(self):
        pi7 = CertifiedDecimal.from_function("pi/7", lambda: mpmath.iv.pi / 7, irrational=True)
        assert floor_of(100 * pi7) == 44
        assert scaled_floor(pi7, 1000) == math.floor(1000 * math.pi / 7)

    def test_escalation_monotone(self):
        x = decimal_image(quadratic(0, 1, 2))
        decided = [floor_of(x * 10**k, start_digits=s) for k in range(5) for s in (64, 128, 256)]
        assert decided == [math.isqrt(2 * 10 ** (2 * k)) for k in range(5) for _ in range(3)]


class TestLiterals:
    @pytest.mark.parametrize("x", [R(3, 7), quadratic(1, -2, 5, 9)])
    def test_round_trip_exact(self, x):
        assert from_literal(to_literal(x)) == x

    def test_round_trip_decimal(self):
        x = from_literal({"kind": "decimal", "value": "0.70710678118654752440", "digits": 20, "irrational": True})
        assert from_literal(to_literal(x)) == x
        assert x.is_rational is False

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            from_literal({"kind": "surd"})


class TestProperties:
    @given(exact_reals)
    def test_floor_brackets(self, a):
        k = floor_of(a)
        assert compare(R(k), a) <= 0 < compare(R(k + 1), a)

    @given(exact_reals)
    def test_ceil_and_varphi(self, a):
        assert ceil_of(a) - floor_of(a) == varphi_of(a)
        assert varphi_of(a) == (0 if is_integer(a) else 1)

    @given(exact_reals)
    def test_fractional_part(self, a):
        f = frac_of(a)
        assert compare(f, 0) >= 0 and compare(f, 1) < 0
        assert f + floor_of(a) == a
        assert type(f) is type(a) or isinstance(f, Rational)

    @given(exact_reals, st.integers(1, 10**4))
    def test_scaled_brackets(self, a, m):
        assert scaled_floor(a, m) == floor_of(m * a)
        assert scaled_ceil(a, m) == ceil_of(m * a)
        assert scaled_varphi(a, m) == varphi_of(m * a)

    @given(exact_reals, exact_reals)
    def test_compare_antisymmetric(self, a, b):
        assert compare(a, b) == -compare(b, a)
        assert compare(a, b) == sign_of(a - b)

    @given(quadratics)
    def test_matches_sympy(self, x):
        expr = (sympy.Integer(x.p) + x.q * sympy.sqrt(x.d)) / x.r
        assert floor_of(x) == int(sympy.floor(expr))


def test_floor_agrees_with_decimal_images():
    rng = random.Random(20261015)
    mismatches = []
    for _ in range(10_000):
        d = rng.choice(SQUAREFREE)
        x = quadratic(rng.randint(-10**6, 10**6), rng.choice((1, -1)) * rng.randint(1, 10**3), d, rng.randint(1, 10**4))
        if floor_of(x) != floor_of(decimal_image(x)):
            mismatches.append(x)
    assert mismatches == []


def test_random_turns_are_irrational_and_in_range():
    rng = random.Random(1)
    for _ in range(200):
        t = random_turn(rng)
        assert t.is_rational is False and 0 < float(t) < 1
