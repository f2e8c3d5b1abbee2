"""Cone geometry: the flat ambient space, its section, realization of
constant tensors as fields, and exact operator induction."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from bilapsym.ambient import (
    AmbientMetric,
    HomogeneousFunction,
    PhiPsi,
    ambient_bilaplacian,
    ambient_laplacian,
    ambient_op_V,
    ambient_op_W,
    ambient_op_gg,
    extend_polynomial,
    induce,
    lie_to_ckv,
    preserves_cone_ideal,
    r_polynomial,
    realize_ckt,
    realize_gckt,
    section_substitution,
    verify_cone_identities,
    verify_phipsi_identities,
)
from bilapsym.exactpoly import Monomial, Polynomial, ambient_space, base_space
from bilapsym.symalg import (
    bilaplacian_weight,
    canonical_DV,
    canonical_DW,
    dilation_element,
    laplacian_weight,
    pair_tensor,
    rotation_element,
    so_basis,
    special_conformal_element,
    translation_element,
)
from bilapsym.tensorcalc import bullet_extract
from bilapsym.weylop import DiffOp, apply, bilaplacian, compose, laplacian


class TestMetricAndCone:
    def test_metric_pairing(self):
        g = AmbientMetric(3)
        assert g.pairing(0, 4) == 1
        assert g.pairing(4, 0) == 1
        assert g.pairing(1, 1) == 1
        assert g.pairing(0, 0) == 0
        assert g.pairing(0, 1) == 0
        assert g.lower(0) == 4 and g.lower(4) == 0 and g.lower(2) == 2

    def test_r_polynomial_is_quadratic(self):
        r = r_polynomial(3)
        assert r.homogeneous_degree() == 2
        space = ambient_space(3)
        m = Monomial([(0, 1), (space.inf, 1)])
        assert r.terms[m] == 2

    def test_laplacian_hits_r(self):
        for n in (3, 4):
            out = apply(ambient_laplacian(n), r_polynomial(n))
            assert out == Polynomial.constant(ambient_space(n), 2 * n + 4)

    def test_bilaplacian_is_square(self):
        lap = ambient_laplacian(3)
        assert ambient_bilaplacian(3) == compose(lap, lap)

    def test_phipsi_identities(self):
        for n in (3, 4):
            assert all(verify_phipsi_identities(n).values())

    def test_cone_identities(self):
        for n in (3, 4):
            assert all(verify_cone_identities(n).values())


class TestExtension:
    def test_extend_section_round_trip(self):
        rng = random.Random(7)
        space = base_space(3)
        for _ in range(10):
            terms = {}
            for _ in range(4):
                m = Monomial(
                    [(a, rng.randint(0, 2)) for a in (1, 2, 3)]
                )
                terms[m] = terms.get(m, Fraction(0)) + Fraction(
                    rng.randint(-5, 5)
                )
            f = Polynomial(space, terms)
            w = Fraction(rng.randint(-3, 3), rng.choice([1, 2]))
            h = HomogeneousFunction.extend(f, w)
            assert h.section() == f

    def test_extension_is_homogeneous(self):
        space = base_space(3)
        f = Polynomial.variable(space, 1) * Polynomial.variable(space, 2)
        big = extend_polynomial(f, Fraction(1, 2))
        assert big.homogeneous_degree() == Fraction(1, 2)

    def test_section_kills_cone(self):
        r = r_polynomial(3)
        x1 = Polynomial.variable(ambient_space(3), 1)
        assert section_substitution(r * x1).is_zero


class TestRealization:
    def test_dilation_field(self):
        f = lie_to_ckv(dilation_element(3))
        space = base_space(3)
        for a in (1, 2, 3):
            assert f.get((a,)) == Polynomial.variable(space, a)

    def test_translation_field(self):
        f = lie_to_ckv(translation_element(3, 1))
        space = base_space(3)
        assert f.get((1,)) == Polynomial.one(space)
        assert f.get((2,)).is_zero and f.get((3,)).is_zero

    def test_rotation_field(self):
        f = lie_to_ckv(rotation_element(3, 1, 2))
        space = base_space(3)
        x1 = Polynomial.variable(space, 1)
        x2 = Polynomial.variable(space, 2)
        assert f.get((2,)) == x1
        assert f.get((1,)) == x2 * Fraction(-1)
        assert f.get((3,)).is_zero

    def test_special_conformal_field(self):
        f = lie_to_ckv(special_conformal_element(3, 1))
        space = base_space(3)
        x = [None] + [Polynomial.variable(space, a) for a in (1, 2, 3)]
        xx = x[1] * x[1] + x[2] * x[2] + x[3] * x[3]
        assert f.get((1,)) == x[1] * x[1] - xx * Fraction(1, 2)
        assert f.get((2,)) == x[1] * x[2]
        assert f.get((3,)) == x[1] * x[3]

    def test_realize_two_pair_symmetric_product(self):
        u = dilation_element(3)
        v = translation_element(3, 1)
        uv = realize_ckt(pair_tensor(u, v))
        fu, fv = lie_to_ckv(u), lie_to_ckv(v)
        for key in ((1, 1), (1, 2), (2, 3)):
            a, b = key
            expected = (
                fu.get((a,)) * fv.get((b,))
                + fu.get((b,)) * fv.get((a,))
            ) * Fraction(1, 2)
            assert uv.get(key) == expected

    def test_realize_gckt_scalar(self):
        u = dilation_element(3)
        f = realize_gckt(bullet_extract(pair_tensor(u, u)))
        space = base_space(3)
        xx = Polynomial.zero(space)
        for a in (1, 2, 3):
            xx = xx + Polynomial.variable(space, a) ** 2
        assert f.get(()) == xx * Fraction(1, 3)


class TestAmbientOperators:
    def test_dilation_operator_form(self):
        op = ambient_op_V(dilation_element(3))
        space = ambient_space(3)
        x0 = Polynomial.variable(space, 0)
        xinf = Polynomial.variable(space, space.inf)
        expected = DiffOp.partial_op(space, space.inf) * xinf - (
            DiffOp.partial_op(space, 0) * x0
        )
        assert op == expected

    def test_operator_is_first_order(self):
        for u in so_basis(3):
            assert ambient_op_V(u).order == 1

    def test_two_pair_operator_composes(self):
        u = dilation_element(3)
        v = special_conformal_element(3, 2)
        assert ambient_op_gg(pair_tensor(u, v)) == compose(
            ambient_op_V(u), ambient_op_V(v)
        )

    def test_commutes_with_cone_and_laplacian(self):
        r_mult = DiffOp.multiplication(r_polynomial(3))
        lap = ambient_laplacian(3)
        for u in (dilation_element(3), rotation_element(3, 2, 3)):
            op = ambient_op_V(u)
            assert compose(op, r_mult) == compose(r_mult, op)
            assert compose(op, lap) == compose(lap, op)


class TestInduction:
    def test_laplacian_induces_base_laplacian(self):
        for n in (3, 4):
            w = laplacian_weight(n)
            assert induce(ambient_laplacian(n), w) == laplacian(n)

    def test_bilaplacian_induces_base_bilaplacian(self):
        for n in (3, 4):
            w = bilaplacian_weight(n)
            assert induce(ambient_bilaplacian(n), w) == bilaplacian(n)

    def test_laplacian_cone_preservation_is_weight_locked(self):
        lap = ambient_laplacian(3)
        assert preserves_cone_ideal(lap, laplacian_weight(3))
        assert not preserves_cone_ideal(lap, Fraction(0))

    def test_one_pair_operators_induce_first_order_form(self):
        w0 = bilaplacian_weight(3)
        for u in so_basis(3):
            induced = induce(ambient_op_V(u), w0)
            assert induced == canonical_DV(lie_to_ckv(u), w0)

    def test_trailing_pair_operator_induces_second_order_form(self):
        n = 3
        w0 = bilaplacian_weight(n)
        u = dilation_element(n)
        w = bullet_extract(pair_tensor(u, u))
        op = ambient_op_W(w)
        assert induce(op, w0) == canonical_DW(realize_gckt(w), w0)

    def test_trailing_pair_operator_rejects_other_weights(self):
        u = dilation_element(3)
        w = bullet_extract(pair_tensor(u, u))
        with pytest.raises(ValueError):
            induce(ambient_op_W(w), Fraction(1))

    def test_induce_rejects_mixed_homogeneity(self):
        space = ambient_space(3)
        bad = ambient_laplacian(3) + DiffOp.multiplication(
            Polynomial.variable(space, 0)
        )
        with pytest.raises(ValueError):
            induce(bad, Fraction(1, 2))

    def test_induce_rejects_zero_operator(self):
        with pytest.raises(ValueError):
            induce(DiffOp.zero(ambient_space(3)), Fraction(1, 2))
