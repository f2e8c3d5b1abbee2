"""Exact polynomial ring: arithmetic laws, calculus, substitution, JSON."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilapsym.exactpoly import (
    Monomial,
    Polynomial,
    VarSpace,
    ambient_space,
    base_space,
    format_rational,
    parse_rational,
    rat,
)

SPACE = base_space(3)
AMB = ambient_space(3)


def poly_from(entries):
    return Polynomial(
        SPACE, {Monomial(tuple(pairs)): rat(c) for pairs, c in entries}
    )


rationals = st.fractions(
    min_value=-10, max_value=10, max_denominator=12
)


@st.composite
def polynomials(draw, space=SPACE, max_terms=4, max_exp=3):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        pairs = []
        for v in space.variables:
            e = draw(st.integers(0, max_exp))
            if e:
                pairs.append((v, e))
        terms[Monomial(tuple(pairs))] = draw(rationals)
    return Polynomial(space, terms)


class TestVarSpace:
    def test_base_variables(self):
        assert SPACE.variables == (1, 2, 3)
        assert SPACE.var_name(2) == "x2"

    def test_ambient_variables(self):
        assert AMB.variables == (0, 1, 2, 3, 4)
        assert AMB.inf == 4
        assert AMB.var_name(0) == "x0"
        assert AMB.var_name(4) == "xinf"

    def test_small_dimension_rejected(self):
        with pytest.raises(ValueError):
            base_space(2)


class TestMonomial:
    def test_zero_exponents_dropped(self):
        assert Monomial(((1, 0), (2, 1))) == Monomial(((2, 1),))

    def test_only_cone_variable_may_be_fractional(self):
        Monomial(((0, Fraction(1, 2)),))
        Monomial(((0, -2),))
        with pytest.raises(ValueError):
            Monomial(((1, Fraction(1, 2)),))
        with pytest.raises(ValueError):
            Monomial(((2, -1),))

    def test_graded_lex_order(self):
        lo = Monomial(((1, 1),))
        hi = Monomial(((1, 2),))
        assert lo < hi
        assert Monomial(((1, 1), (2, 1))) > Monomial(((2, 2),))

    def test_product_adds_exponents(self):
        m = Monomial(((1, 1),)) * Monomial(((1, 2), (2, 1)))
        assert m.exponent(1) == 3
        assert m.exponent(2) == 1


class TestRingLaws:
    @given(polynomials(), polynomials(), polynomials())
    @settings(max_examples=60, deadline=None)
    def test_add_mul_laws(self, p, q, r):
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r

    @given(polynomials())
    @settings(max_examples=40, deadline=None)
    def test_additive_inverse(self, p):
        assert (p - p).is_zero
        assert p + Polynomial.zero(SPACE) == p
        assert p * Polynomial.one(SPACE) == p

    @given(polynomials(), polynomials())
    @settings(max_examples=40, deadline=None)
    def test_leibniz_rule(self, p, q):
        for v in SPACE.variables:
            lhs = (p * q).partial(v)
            rhs = p.partial(v) * q + p * q.partial(v)
            assert lhs == rhs

    @given(polynomials())
    @settings(max_examples=40, deadline=None)
    def test_euler_identity_on_components(self, p):
        for d in range(8):
            comp = p.homogeneous_component(d)
            euler = Polynomial.zero(SPACE)
            for v in SPACE.variables:
                euler = euler + Polynomial.variable(SPACE, v) * comp.partial(v)
            assert euler == comp * d


class TestSubstitution:
    def test_substitution_is_evaluation_homomorphism(self):
        p = poly_from([([(1, 2)], 1), ([(2, 1)], -3)])
        q = poly_from([([(1, 1), (2, 1)], 2)])
        binding = {1: poly_from([([(2, 1)], 1)]), 2: poly_from([([], 5)])}
        assert (p * q).substitute(binding) == p.substitute(binding) * q.substitute(
            binding
        )
        assert (p + q).substitute(binding) == p.substitute(binding) + q.substitute(
            binding
        )

    def test_cone_variable_binding(self):
        # substituting the section value of the infinity coordinate kills r
        space = AMB
        x0 = Polynomial.variable(space, 0)
        xinf = Polynomial.variable(space, 4)
        xx = Polynomial.zero(space)
        for a in (1, 2, 3):
            xa = Polynomial.variable(space, a)
            xx = xx + xa * xa
        r = x0 * xinf * 2 + xx
        binding = {4: xx * Polynomial.variable(space, 0, -1) * Fraction(-1, 2)}
        assert r.substitute(binding).is_zero

    def test_fractional_power_products(self):
        space = AMB
        half = Polynomial.variable(space, 0, Fraction(1, 2))
        assert half * half == Polynomial.variable(space, 0)
        inv = Polynomial.variable(space, 0, -1)
        assert half * half * inv == Polynomial.one(space)

    def test_fractional_exponent_requires_unit_binding(self):
        space = AMB
        p = Polynomial.variable(space, 0, Fraction(1, 2))
        with pytest.raises(ValueError):
            p.substitute({0: Polynomial.variable(space, 1)})


class TestSerialization:
    @given(polynomials())
    @settings(max_examples=30, deadline=None)
    def test_json_round_trip(self, p):
        assert Polynomial.from_json_obj(SPACE, p.to_json_obj()) == p

    def test_rational_formats(self):
        assert parse_rational("3/4") == Fraction(3, 4)
        assert parse_rational("-2") == Fraction(-2)
        assert format_rational(Fraction(-5, 3)) == "-5/3"

    def test_text_rendering(self):
        p = poly_from([([(1, 2)], Fraction(1, 2)), ([], -1)])
        assert p.text() == "1/2*x1^2 - 1"
