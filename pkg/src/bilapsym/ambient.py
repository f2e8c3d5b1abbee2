"""The ambient construction: cone, section, realization, and induction.

R^n embeds into the light cone of a flat (n+2)-dimensional space with two
extra null directions x0 and xinf; the metric pairs x0 with xinf and is the
identity on x1..xn, so raising and lowering indices is the involution
0 <-> n+1.  The cone is the zero set of  r = 2 x0 xinf + sum_a (x^a)^2,
and the section x0 = 1, xinf = -(x.x)/2 identifies weight-w homogeneous
functions on the cone with functions on R^n.

Constant skew ambient tensors realize as polynomial vector/tensor fields on
the section through the lowered position vector and the tangent projectors
(``realize_ckt``/``realize_gckt``); conversely, homogeneous ambient
operators that preserve the ideal of the cone descend to exact operators on
weight-w functions (``induce``).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .exactpoly import (
    Monomial,
    Polynomial,
    Rational,
    VarSpace,
    ambient_space,
    base_space,
    rat,
    to_base,
)
from .tensorcalc import (
    MultiIndex,
    PairSkewTensor,
    SymTensorField,
    ambient_indices,
    ambient_lower,
    base_indices,
)
from .weylop import DiffOp, apply, compose, euler_op, operator_from_action

# ---------------------------------------------------------------------------
# metric, cone, section


class AmbientMetric:
    """The flat ambient metric with two null directions adjoined."""

    __slots__ = ("n", "space")

    def __init__(self, n: int) -> None:
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "space", ambient_space(n))

    def __setattr__(self, name, value):
        raise AttributeError("AmbientMetric is immutable")

    def lower(self, a: int) -> int:
        """Index lowering (equals raising): the involution 0 <-> n+1."""
        return ambient_lower(self.n, a)

    def pairing(self, a: int, b: int) -> int:
        """Component g_ab (equals the inverse metric's g^ab)."""
        return 1 if a == self.lower(b) else 0

    def __repr__(self) -> str:
        return f"AmbientMetric(n={self.n})"


def r_polynomial(n: int) -> Polynomial:
    """The defining polynomial of the cone: 2 x0 xinf + sum (x^a)^2."""
    space = ambient_space(n)
    terms = {Monomial([(0, 1), (space.inf, 1)]): Fraction(2)}
    for a in range(1, n + 1):
        terms[Monomial([(a, 2)])] = Fraction(1)
    return Polynomial(space, terms)


def ambient_laplacian(n: int) -> DiffOp:
    """The ambient flat Laplacian  2 d0 dinf + sum_a d_a^2."""
    space = ambient_space(n)
    terms: dict = {(0, space.inf): Polynomial.constant(space, 2)}
    for a in range(1, n + 1):
        terms[(a, a)] = Polynomial.one(space)
    return DiffOp(space, terms)


def ambient_bilaplacian(n: int) -> DiffOp:
    lap = ambient_laplacian(n)
    return compose(lap, lap)


def base_square(n: int, space: VarSpace | None = None) -> Polynomial:
    """sum_a (x^a)^2 in the given space (default: base)."""
    space = space or base_space(n)
    terms = {Monomial([(a, 2)]): Fraction(1) for a in range(1, n + 1)}
    return Polynomial(space, terms)


def section_substitution(p: Polynomial) -> Polynomial:
    """Restrict an ambient polynomial to the section x0=1, xinf=-(x.x)/2."""
    space = p.space
    if space.kind != "ambient":
        raise ValueError("expected an ambient polynomial")
    n = space.n
    binding = base_square(n, space) * Fraction(-1, 2)
    restricted = p.substitute({0: 1, space.inf: binding})
    return to_base(restricted)


def extend_polynomial(f: Polynomial, weight: Rational) -> Polynomial:
    """The canonical weight-w homogeneous extension (x0)^w f(x/x0)."""
    if f.space.kind != "base":
        raise ValueError("expected a base-space polynomial")
    w = rat(weight)
    space = ambient_space(f.space.n)
    terms: dict[Monomial, Fraction] = {}
    for m, c in f.terms.items():
        d = rat(m.degree)
        pairs = tuple(m.exps) + ((0, w - d),)
        terms[Monomial(pairs)] = c
    return Polynomial(space, terms)


@dataclass(frozen=True)
class HomogeneousFunction:
    """An ambient polynomial of a single homogeneity degree."""

    poly: Polynomial
    weight: Fraction

    def __post_init__(self) -> None:
        if self.poly.space.kind != "ambient":
            raise ValueError("expected an ambient polynomial")
        w = self.poly.homogeneous_degree()
        if w is None:
            raise ValueError("polynomial is not homogeneous")
        if not self.poly.is_zero and w != rat(self.weight):
            raise ValueError(f"declared weight {self.weight} but degree {w}")
        object.__setattr__(self, "weight", rat(self.weight))

    @classmethod
    def extend(cls, f: Polynomial, weight: Rational) -> "HomogeneousFunction":
        return cls(extend_polynomial(f, weight), rat(weight))

    def section(self) -> Polynomial:
        return section_substitution(self.poly)


# ---------------------------------------------------------------------------
# the section embedding coefficients


class PhiPsi:
    """Lowered position vector and tangent projector along the section.

    ``phi(B)`` is the lowered position vector of the section point
    (1, x, -(x.x)/2); ``psi(b, Q)`` projects ambient directions onto the
    section's tangent frame.  Both are exact base-space polynomials.
    """

    __slots__ = ("n", "_phi")

    def __init__(self, n: int) -> None:
        space = base_space(n)
        phi: dict[int, Polynomial] = {
            0: base_square(n) * Fraction(-1, 2),
            n + 1: Polynomial.one(space),
        }
        for b in range(1, n + 1):
            phi[b] = Polynomial.variable(space, b)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_phi", phi)

    def __setattr__(self, name, value):
        raise AttributeError("PhiPsi is immutable")

    def phi(self, b: int) -> Polynomial:
        if not 0 <= b <= self.n + 1:
            raise ValueError(f"ambient index {b} out of range")
        return self._phi[b]

    def psi(self, b: int, q: int) -> Polynomial:
        space = base_space(self.n)
        if not 1 <= b <= self.n:
            raise ValueError(f"base index {b} out of range")
        if q == 0:
            return -Polynomial.variable(space, b)
        if q == self.n + 1:
            return Polynomial.zero(space)
        return Polynomial.one(space) if q == b else Polynomial.zero(space)

    def psi_options(self, q: int) -> list[tuple[int, Polynomial]]:
        """Nonzero psi(., q) entries as (base index, factor) pairs."""
        space = base_space(self.n)
        if q == 0:
            return [
                (b, -Polynomial.variable(space, b)) for b in range(1, self.n + 1)
            ]
        if q == self.n + 1:
            return []
        return [(q, Polynomial.one(space))]


def verify_phipsi_identities(n: int) -> dict[str, bool]:
    """The three contraction identities of the section coefficients."""
    pp = PhiPsi(n)
    space = base_space(n)
    lower = lambda a: ambient_lower(n, a)  # noqa: E731
    results = {}
    null = Polynomial.zero(space)
    for b in ambient_indices(n):
        null = null + pp.phi(b) * pp.phi(lower(b))
    results["position_null"] = null.is_zero
    ok = True
    for c in base_indices(n):
        total = Polynomial.zero(space)
        for b in ambient_indices(n):
            total = total + pp.phi(b) * pp.psi(c, lower(b))
        ok = ok and total.is_zero
    results["position_tangent_orthogonal"] = ok
    ok = True
    for b in base_indices(n):
        for c in base_indices(n):
            total = Polynomial.zero(space)
            for q in ambient_indices(n):
                total = total + pp.psi(b, q) * pp.psi(c, lower(q))
            expected = Polynomial.one(space) if b == c else Polynomial.zero(space)
            ok = ok and total == expected
    results["tangent_metric"] = ok
    return results


# ---------------------------------------------------------------------------
# realization of constant ambient tensors as fields on the section


def realize_ckt(x: PairSkewTensor) -> SymTensorField:
    """Realize a k-pair tensor as a symmetric k-tensor field on the section.

    Each pair contributes the lowered position vector on its first slot and
    the tangent projector on its second; the result is symmetrized.
    """
    if x.tail_valency != 0:
        raise ValueError("realize_ckt expects no trailing pair")
    n, k = x.n, x.pair_count
    pp = PhiPsi(n)
    space = base_space(n)
    raw: dict[MultiIndex, Polynomial] = {}
    flips = list(itertools.product((0, 1), repeat=k))
    for ckey, val in x.components.items():
        for flip in flips:
            sign = 1
            full = list(ckey)
            for i, f in enumerate(flip):
                if f:
                    full[2 * i], full[2 * i + 1] = full[2 * i + 1], full[2 * i]
                    sign = -sign
            prefix = Polynomial.constant(space, sign * val)
            for i in range(k):
                prefix = prefix * pp.phi(full[2 * i])
            option_lists = [pp.psi_options(full[2 * i + 1]) for i in range(k)]
            for choice in itertools.product(*option_lists):
                btuple = tuple(b for b, _ in choice)
                term = prefix
                for _, factor in choice:
                    term = term * factor
                if btuple in raw:
                    raw[btuple] = raw[btuple] + term
                else:
                    raw[btuple] = term
    from .tensorcalc import symmetrize

    return symmetrize(n, k, raw)


def lie_to_ckv(v: PairSkewTensor) -> SymTensorField:
    """Realize a one-pair tensor as a degree-<=2 vector field."""
    if v.pair_count != 1 or v.tail_valency != 0:
        raise ValueError("expected a one-pair tensor")
    return realize_ckt(v)


def realize_gckt(w: PairSkewTensor) -> SymTensorField:
    """Realize a trailing-pair tensor as a scalar field on the section."""
    if w.pair_count != 0 or w.tail_valency != 2:
        raise ValueError("expected a trailing-pair tensor")
    n = w.n
    pp = PhiPsi(n)
    space = base_space(n)
    total = Polynomial.zero(space)
    for d in ambient_indices(n):
        for e in ambient_indices(n):
            val = w.get((d, e))
            if val != 0:
                total = total + pp.phi(d) * pp.phi(e) * val
    return SymTensorField(n, 0, {(): total})


# ---------------------------------------------------------------------------
# ambient operators of constant tensors


def ambient_op_V(x: PairSkewTensor) -> DiffOp:
    """Normal-ordered ambient operator of a k-pair tensor.

    Each pair contributes one lowered coordinate (on its first slot) and one
    derivative (on its second).  For totally trace-free tensors this is also
    the composition of the corresponding first-order operators.
    """
    if x.tail_valency != 0:
        raise ValueError("ambient_op_V expects no trailing pair")
    n, k = x.n, x.pair_count
    space = ambient_space(n)
    if k == 0:
        raise ValueError("need at least one pair")
    terms: dict = {}
    flips = list(itertools.product((0, 1), repeat=k))
    for ckey, val in x.components.items():
        for flip in flips:
            sign = 1
            full = list(ckey)
            for i, f in enumerate(flip):
                if f:
                    full[2 * i], full[2 * i + 1] = full[2 * i + 1], full[2 * i]
                    sign = -sign
            mono = Monomial(
                [(ambient_lower(n, full[2 * i]), 1) for i in range(k)]
            )
            alpha = tuple(sorted(full[2 * i + 1] for i in range(k)))
            coeff = Polynomial(space, {mono: sign * val})
            terms[alpha] = terms[alpha] + coeff if alpha in terms else coeff
    return DiffOp(space, terms)


def ambient_op_gg(x: PairSkewTensor) -> DiffOp:
    """Exact second-order ambient operator of a two-pair tensor.

    The normal-ordered two-derivative term plus the first-order correction
    carrying the internal trace, so that on decomposables this equals the
    composition of the two first-order operators.
    """
    if x.pair_count != 2 or x.tail_valency != 0:
        raise ValueError("expected a two-pair tensor")
    n = x.n
    space = ambient_space(n)
    op = ambient_op_V(x)
    terms = dict(op.terms)
    for b in ambient_indices(n):
        for r in ambient_indices(n):
            total = Fraction(0)
            for q in ambient_indices(n):
                total += x.get((b, q, ambient_lower(n, q), r))
            if total == 0:
                continue
            mono = Monomial([(ambient_lower(n, b), 1)])
            coeff = Polynomial(space, {mono: total})
            alpha = (r,)
            terms[alpha] = terms[alpha] + coeff if alpha in terms else coeff
    return DiffOp(space, terms)


def ambient_op_W(w: PairSkewTensor) -> DiffOp:
    """Ambient operator of a trailing-pair tensor.

    The trailing symmetric pair contributes
    x_D x_E (ambient Laplacian) - 2 x_D d_E; any leading pairs contribute
    coordinates and derivatives as in ambient_op_V.  This preserves the cone
    ideal exactly on functions of the distinguished homogeneity, where it
    induces the same base operator as the embedded two-pair tensor.
    """
    if w.tail_valency != 2:
        raise ValueError("ambient_op_W expects a trailing pair")
    n, k = w.n, w.pair_count
    space = ambient_space(n)
    lap = ambient_laplacian(n)
    terms: dict = {}

    def add_term(alpha: tuple, coeff: Polynomial) -> None:
        alpha = tuple(sorted(alpha))
        if alpha in terms:
            merged = terms[alpha] + coeff
            if merged.is_zero:
                del terms[alpha]
            else:
                terms[alpha] = merged
        elif not coeff.is_zero:
            terms[alpha] = coeff

    flips = list(itertools.product((0, 1), repeat=k))
    for ckey, val in w.components.items():
        d0, e0 = ckey[2 * k], ckey[2 * k + 1]
        tail_orders = [(d0, e0)] if d0 == e0 else [(d0, e0), (e0, d0)]
        for flip in flips:
            sign = 1
            full = list(ckey)
            for i, f in enumerate(flip):
                if f:
                    full[2 * i], full[2 * i + 1] = full[2 * i + 1], full[2 * i]
                    sign = -sign
            prefix_mono = Monomial(
                [(ambient_lower(n, full[2 * i]), 1) for i in range(k)]
            )
            prefix_alpha = tuple(full[2 * i + 1] for i in range(k))
            for d, e in tail_orders:
                cval = sign * val
                xd = prefix_mono * Monomial([(ambient_lower(n, d), 1)])
                xde = xd * Monomial([(ambient_lower(n, e), 1)])
                for lalpha, lcoeff in lap.terms.items():
                    add_term(
                        prefix_alpha + lalpha,
                        Polynomial(space, {xde: cval * lcoeff.constant_value()}),
                    )
                add_term(prefix_alpha + (e,), Polynomial(space, {xd: -2 * cval}))
    return DiffOp(space, terms)


# ---------------------------------------------------------------------------
# inducing ambient operators onto weight-w functions


def _operator_grade(op: DiffOp) -> Fraction:
    """Common homogeneity shift deg(coeff) - |alpha|, or raise."""
    grade = None
    for alpha, coeff in op.terms.items():
        d = coeff.homogeneous_degree()
        if d is None:
            raise ValueError("operator has an inhomogeneous coefficient")
        shift = rat(d) - len(alpha)
        if grade is None:
            grade = shift
        elif grade != shift:
            raise ValueError("operator mixes homogeneity shifts")
    if grade is None:
        raise ValueError("cannot grade the zero operator")
    return grade


def _random_homogeneous(
    n: int, weight: Fraction, rng: random.Random, inf_max: int = 2, base_max: int = 3
) -> Polynomial:
    """A seeded random ambient polynomial of homogeneity ``weight``."""
    space = ambient_space(n)
    terms: dict[Monomial, Fraction] = {}
    for _ in range(6):
        e_inf = rng.randint(0, inf_max)
        exps = [rng.randint(0, base_max) for _ in range(n)]
        while sum(exps) + e_inf > base_max + inf_max:
            exps[rng.randrange(n)] = 0
        d = sum(exps) + e_inf
        pairs = [(a + 1, e) for a, e in enumerate(exps) if e]
        if e_inf:
            pairs.append((space.inf, e_inf))
        pairs.append((0, rat(weight) - d))
        coeff = Fraction(rng.randint(-9, 9))
        if coeff == 0:
            coeff = Fraction(1)
        m = Monomial(pairs)
        terms[m] = terms.get(m, Fraction(0)) + coeff
    return Polynomial(space, terms)


def preserves_cone_ideal(
    op: DiffOp, weight: Rational, samples: int = 4, seed: int = 0
) -> bool:
    """Sampled exact check that op maps r*(weight-2) into the ideal of r.

    For each seeded homogeneous h of weight ``weight - 2`` the image
    op(r h) is tested for divisibility by r via the substitution
    xinf -> -(x.x)/(2 x0), which kills exactly the multiples of r.
    """
    n = op.space.n
    if op.space.kind != "ambient":
        raise ValueError("expected an ambient operator")
    w = rat(weight)
    rpoly = r_polynomial(n)
    space = op.space
    cone_binding = (
        base_square(n, space)
        * Polynomial.variable(space, 0, -1)
        * Fraction(-1, 2)
    )
    rng = random.Random(seed)
    for _ in range(samples):
        h = _random_homogeneous(n, w - 2, rng)
        image = apply(op, rpoly * h)
        if not image.substitute({space.inf: cone_binding}).is_zero:
            return False
    return True


def induce(
    op: DiffOp,
    weight: Rational,
    order: int | None = None,
    samples: int = 4,
    seed: int = 0,
) -> DiffOp:
    """The exact operator induced on weight-w functions of the section.

    The ambient operator must have a single homogeneity shift and preserve
    the ideal of the cone at this weight (checked on seeded homogeneous
    samples; a failure raises ValueError).  The induced action is read off
    through the canonical extension and the section substitution, and the
    operator is reconstructed exactly from its action on monomials with a
    two-degree consistency margin.
    """
    _operator_grade(op)
    w = rat(weight)
    if not preserves_cone_ideal(op, w, samples=samples, seed=seed):
        raise ValueError(
            "operator does not preserve the cone ideal at this weight"
        )
    n = op.space.n
    bspace = base_space(n)

    def action(f: Polynomial) -> Polynomial:
        big = extend_polynomial(f, w)
        return section_substitution(apply(op, big))

    k = op.order if order is None else order
    return operator_from_action(bspace, action, k)


# ---------------------------------------------------------------------------
# structural operator identities on the cone


def verify_cone_identities(n: int) -> dict[str, bool]:
    """Exact operator identities linking the Laplacian, cone, and grading."""
    lap = ambient_laplacian(n)
    bilap = ambient_bilaplacian(n)
    space = ambient_space(n)
    mult_r = DiffOp.multiplication(r_polynomial(n))
    euler = euler_op(space)
    ident = DiffOp.identity(space)
    lhs = compose(lap, mult_r) - compose(mult_r, lap)
    rhs = ident * Fraction(2 * n + 4) + euler * Fraction(4)
    results = {"laplacian_cone_commutator": lhs == rhs}
    lhs2 = compose(bilap, mult_r) - compose(mult_r, bilap)
    rhs2 = compose(rhs, lap) + compose(lap, rhs)
    results["bilaplacian_cone_commutator"] = lhs2 == rhs2
    return results
