"""Weyl-algebra operators: composition, factorization, reconstruction."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilapsym.exactpoly import Monomial, Polynomial, base_space
from bilapsym.weylop import (
    DiffOp,
    NotDivisibleError,
    apply,
    bilaplacian,
    commutator,
    compose,
    euler_op,
    is_symmetry,
    laplacian,
    operator_from_action,
    right_factor,
    right_factor_through_bilaplacian,
    right_factor_through_laplacian,
    symbol_division,
)

N = 3
SPACE = base_space(N)


def var(v):
    return Polynomial.variable(SPACE, v)


def random_poly(rng, degree=2):
    terms = {}
    for _ in range(4):
        pairs = tuple(
            (v, rng.randint(0, degree)) for v in SPACE.variables if rng.random() < 0.7
        )
        terms[Monomial(tuple((v, e) for v, e in pairs if e))] = Fraction(
            rng.randint(-4, 4)
        )
    return Polynomial(SPACE, terms)


def random_op(rng, order=2):
    terms = {}
    alphas = [(), (1,), (2,), (3,), (1, 1), (1, 2), (2, 3), (3, 3)]
    for alpha in alphas:
        if len(alpha) <= order and rng.random() < 0.5:
            terms[alpha] = random_poly(rng)
    return DiffOp(SPACE, terms)


class TestApplyCompose:
    def test_partial_acts(self):
        d1 = DiffOp.partial_op(SPACE, 1)
        p = var(1) * var(1) * var(2)
        assert apply(d1, p) == var(1) * var(2) * 2

    def test_laplacian_on_square(self):
        xx = var(1) * var(1) + var(2) * var(2) + var(3) * var(3)
        assert apply(laplacian(N), xx) == Polynomial.constant(SPACE, 2 * N)

    @given(st.integers(0, 2**30))
    @settings(max_examples=30, deadline=None)
    def test_compose_matches_sequential_application(self, seed):
        rng = random.Random(seed)
        a, b = random_op(rng), random_op(rng)
        p = random_poly(rng)
        assert apply(compose(a, b), p) == apply(a, apply(b, p))

    @given(st.integers(0, 2**30))
    @settings(max_examples=20, deadline=None)
    def test_compose_is_associative(self, seed):
        rng = random.Random(seed)
        a, b, c = random_op(rng, 1), random_op(rng, 1), random_op(rng, 1)
        assert compose(compose(a, b), c) == compose(a, compose(b, c))

    def test_canonical_commutation(self):
        d1 = DiffOp.partial_op(SPACE, 1)
        x1 = DiffOp.multiplication(var(1))
        assert commutator(d1, x1) == DiffOp.identity(SPACE)

    def test_euler_commutator_grades(self):
        e = euler_op(SPACE)
        assert commutator(e, laplacian(N)) == laplacian(N) * Fraction(-2)

    def test_product_with_operator_raises(self):
        with pytest.raises(TypeError):
            laplacian(N) * laplacian(N)


class TestFactorization:
    def test_bilaplacian_is_laplacian_squared(self):
        assert bilaplacian(N) == compose(laplacian(N), laplacian(N))

    @given(st.integers(0, 2**30))
    @settings(max_examples=20, deadline=None)
    def test_right_factor_round_trip(self, seed):
        rng = random.Random(seed)
        delta = random_op(rng, order=1)
        d = compose(delta, bilaplacian(N))
        recovered = right_factor_through_bilaplacian(d)
        assert recovered == delta
        assert compose(recovered, bilaplacian(N)) == d

    @given(st.integers(0, 2**30))
    @settings(max_examples=20, deadline=None)
    def test_symbol_division_identity(self, seed):
        rng = random.Random(seed)
        d = random_op(rng, order=2)
        q, rem = symbol_division(d, laplacian(N))
        assert compose(q, laplacian(N)) + rem == d

    def test_not_divisible(self):
        d = DiffOp.partial_op(SPACE, 1)
        with pytest.raises(NotDivisibleError):
            right_factor_through_laplacian(d)

    def test_right_factor_requires_constant_coefficients(self):
        r = DiffOp(SPACE, {(1,): var(1)})
        with pytest.raises(ValueError):
            right_factor(laplacian(N), r)

    def test_is_symmetry_accepts_identity_and_rejects_coordinate(self):
        assert is_symmetry(DiffOp.identity(SPACE)) == DiffOp.identity(SPACE)
        assert is_symmetry(DiffOp.multiplication(var(1))) is None


class TestOperatorFromAction:
    @given(st.integers(0, 2**30))
    @settings(max_examples=15, deadline=None)
    def test_reconstructs_polynomial_operators(self, seed):
        rng = random.Random(seed)
        op = random_op(rng, order=2)
        rebuilt = operator_from_action(SPACE, lambda p: apply(op, p), order=2)
        assert rebuilt == op

    def test_rejects_non_operator_action(self):
        # squaring is not linear, hence not realized by any operator
        with pytest.raises(ValueError):
            operator_from_action(SPACE, lambda p: p * p, order=2)


class TestSerialization:
    def test_json_round_trip(self):
        rng = random.Random(17)
        op = random_op(rng)
        assert DiffOp.from_json_obj(op.to_json_obj()) == op

    def test_text_contains_derivatives(self):
        assert "d1" in DiffOp.partial_op(SPACE, 1).text()
