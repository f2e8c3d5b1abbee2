"""Linear differential operators with exact polynomial coefficients.

A ``DiffOp`` is a normal-ordered sum  sum_alpha  c_alpha(x) d^alpha  where
each derivative multi-index alpha is a nondecreasing tuple of variable
indices and each coefficient is an exact ``Polynomial``.  Composition uses
the Leibniz expansion, so operator identities are decided exactly.

Right factorization through a constant-coefficient operator reduces to
multivariate polynomial division of the full symbol: composing with a
constant-coefficient right factor produces no derivative corrections, so
``d = delta o r`` holds iff the symbol of ``d`` is divisible by the symbol
of ``r``.  A single divisor is a Groebner basis of its principal ideal, so
the division remainder decides membership exactly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Mapping

from .exactpoly import Polynomial, Rational, VarSpace, base_space, rat

Alpha = tuple[int, ...]


class NotDivisibleError(ValueError):
    """Raised when an operator admits no exact right factorization."""


# ---------------------------------------------------------------------------
# derivative multi-index helpers


def _normalize_alpha(alpha: Alpha) -> Alpha:
    return tuple(sorted(alpha))


def _alpha_counts(alpha: Alpha) -> dict[int, int]:
    counts: dict[int, int] = {}
    for v in alpha:
        counts[v] = counts.get(v, 0) + 1
    return counts


def _counts_to_alpha(counts: Mapping[int, int]) -> Alpha:
    out: list[int] = []
    for v in sorted(counts):
        out.extend([v] * counts[v])
    return tuple(out)


def _alpha_factorial(alpha: Alpha) -> int:
    result = 1
    for c in _alpha_counts(alpha).values():
        result *= factorial(c)
    return result


def _sub_counts(counts: Mapping[int, int]):
    """All gamma <= alpha, as count dicts, with their binomial weights."""
    items = sorted(counts.items())
    ranges = [range(c + 1) for _, c in items]
    for choice in itertools.product(*ranges):
        weight = 1
        gamma: dict[int, int] = {}
        for (v, c), g in zip(items, choice):
            weight *= comb(c, g)
            if g:
                gamma[v] = g
        yield gamma, weight


def _differentiate(p: Polynomial, gamma: Mapping[int, int]) -> Polynomial:
    for v, times in gamma.items():
        for _ in range(times):
            if p.is_zero:
                return p
            p = p.partial(v)
    return p


def _alpha_key(alpha: Alpha, variables: tuple[int, ...]) -> tuple:
    counts = _alpha_counts(alpha)
    return (len(alpha), tuple(counts.get(v, 0) for v in variables))


# ---------------------------------------------------------------------------
# the operator class


class DiffOp:
    """Normal-ordered differential operator with polynomial coefficients."""

    __slots__ = ("space", "terms")

    def __init__(
        self, space: VarSpace, terms: Mapping[Alpha, Polynomial | Rational] | None = None
    ) -> None:
        clean: dict[Alpha, Polynomial] = {}
        if terms:
            for alpha, coeff in terms.items():
                alpha = _normalize_alpha(tuple(alpha))
                for v in alpha:
                    if not space.contains(v):
                        raise ValueError(f"derivative variable {v} not in space")
                if not isinstance(coeff, Polynomial):
                    coeff = Polynomial.constant(space, coeff)
                if coeff.space != space:
                    raise ValueError("coefficient in wrong variable space")
                if coeff.is_zero:
                    continue
                if alpha in clean:
                    merged = clean[alpha] + coeff
                    if merged.is_zero:
                        del clean[alpha]
                    else:
                        clean[alpha] = merged
                else:
                    clean[alpha] = coeff
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, space: VarSpace) -> "DiffOp":
        return cls(space)

    @classmethod
    def identity(cls, space: VarSpace) -> "DiffOp":
        return cls(space, {(): Polynomial.one(space)})

    @classmethod
    def partial_op(cls, space: VarSpace, var: int) -> "DiffOp":
        return cls(space, {(var,): Polynomial.one(space)})

    @classmethod
    def multiplication(cls, poly: Polynomial) -> "DiffOp":
        return cls(poly.space, {(): poly})

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def order(self) -> int:
        return max((len(a) for a in self.terms), default=-1)

    def coefficient(self, alpha: Alpha) -> Polynomial:
        val = self.terms.get(_normalize_alpha(tuple(alpha)))
        return Polynomial.zero(self.space) if val is None else val

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiffOp)
            and self.space == other.space
            and self.terms == other.terms
        )

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "DiffOp") -> "DiffOp":
        self._check_like(other)
        out = dict(self.terms)
        for alpha, coeff in other.terms.items():
            out[alpha] = out[alpha] + coeff if alpha in out else coeff
        return DiffOp(self.space, out)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (other * Fraction(-1))

    def __neg__(self) -> "DiffOp":
        return self * Fraction(-1)

    def __mul__(self, scalar) -> "DiffOp":
        if isinstance(scalar, DiffOp):
            raise TypeError("use compose() for operator products")
        if isinstance(scalar, Polynomial):
            return DiffOp(
                self.space, {a: c * scalar for a, c in self.terms.items()}
            )
        s = rat(scalar)
        return DiffOp(self.space, {a: c * s for a, c in self.terms.items()})

    __rmul__ = __mul__

    def _check_like(self, other: "DiffOp") -> None:
        if not isinstance(other, DiffOp):
            raise TypeError("expected a DiffOp")
        if self.space != other.space:
            raise ValueError("operator space mismatch")

    def __repr__(self) -> str:
        return f"<DiffOp space={self.space.kind} n={self.space.n} terms={len(self.terms)}>"

    def text(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for alpha in sorted(self.terms, key=lambda a: (len(a), a)):
            coeff = self.terms[alpha]
            dpart = "".join(f"d{self.space.var_name(v)[1:]}" for v in alpha)
            cpart = coeff.text()
            if alpha:
                parts.append(f"({cpart})*{dpart}" if "+" in cpart or " " in cpart else f"{cpart}*{dpart}")
            else:
                parts.append(cpart)
        return " + ".join(parts)

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "space": self.space.kind,
            "n": self.space.n,
            "terms": {
                ",".join(map(str, alpha)): coeff.to_json_obj()
                for alpha, coeff in sorted(self.terms.items())
            },
        }

    @classmethod
    def from_json_obj(cls, data: dict) -> "DiffOp":
        space = VarSpace(data["space"], data["n"])
        terms = {}
        for key, val in data["terms"].items():
            alpha = tuple(int(i) for i in key.split(",")) if key else ()
            terms[alpha] = Polynomial.from_json_obj(space, val)
        return cls(space, terms)


# ---------------------------------------------------------------------------
# action, composition


def apply(op: DiffOp, p: Polynomial) -> Polynomial:
    """Apply the operator to a polynomial, exactly."""
    if p.space != op.space:
        raise ValueError("polynomial in wrong variable space")
    result = Polynomial.zero(op.space)
    for alpha, coeff in op.terms.items():
        dp = _differentiate(p, _alpha_counts(alpha))
        if not dp.is_zero:
            result = result + coeff * dp
    return result


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """The operator product a o b, normal-ordered via the Leibniz rule."""
    a._check_like(b)
    out: dict[Alpha, Polynomial] = {}
    for alpha, ca in a.terms.items():
        counts_a = _alpha_counts(alpha)
        for beta, cb in b.terms.items():
            for gamma, weight in _sub_counts(counts_a):
                dcb = _differentiate(cb, gamma)
                if dcb.is_zero:
                    continue
                coeff = ca * dcb * weight
                rest = dict(counts_a)
                for v, g in gamma.items():
                    rest[v] -= g
                new_counts = {v: c for v, c in rest.items() if c}
                for v in beta:
                    new_counts[v] = new_counts.get(v, 0) + 1
                key = _counts_to_alpha(new_counts)
                if key in out:
                    merged = out[key] + coeff
                    if merged.is_zero:
                        del out[key]
                    else:
                        out[key] = merged
                else:
                    out[key] = coeff
    return DiffOp(a.space, out)


def compose_all(*ops: DiffOp) -> DiffOp:
    result = ops[0]
    for op in ops[1:]:
        result = compose(result, op)
    return result


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return compose(a, b) - compose(b, a)


# ---------------------------------------------------------------------------
# canonical constant-coefficient operators


def laplacian(n: int) -> DiffOp:
    """The flat Laplacian sum_a d_a^2 on R^n."""
    space = base_space(n)
    return DiffOp(space, {(a, a): Polynomial.one(space) for a in range(1, n + 1)})


def bilaplacian(n: int) -> DiffOp:
    """The squared Laplacian on R^n."""
    lap = laplacian(n)
    return compose(lap, lap)


def euler_op(space: VarSpace) -> DiffOp:
    """The degree-counting operator sum_v x_v d_v."""
    return DiffOp(
        space,
        {(v,): Polynomial.variable(space, v) for v in space.variables},
    )


# ---------------------------------------------------------------------------
# right factorization through constant-coefficient operators


def _require_constant_coefficients(r: DiffOp) -> dict[Alpha, Fraction]:
    symbol: dict[Alpha, Fraction] = {}
    for alpha, coeff in r.terms.items():
        if not coeff.is_constant:
            raise ValueError("right factor must have constant coefficients")
        symbol[alpha] = coeff.constant_value()
    if not symbol:
        raise ValueError("right factor must be nonzero")
    return symbol


def symbol_division(d: DiffOp, r: DiffOp) -> tuple[DiffOp, DiffOp]:
    """Divide the full symbol of d by a constant-coefficient operator r.

    Returns (quotient, remainder) with d = quotient o r + remainder, where
    no remainder term is divisible by the leading term of r.  A single
    divisor is a Groebner basis of the ideal it generates, so the remainder
    is unique and depends linearly on d.
    """
    divisor = _require_constant_coefficients(r)
    variables = d.space.variables
    lead = max(divisor, key=lambda a: _alpha_key(a, variables))
    lead_counts = _alpha_counts(lead)
    lead_coeff = divisor[lead]

    work = dict(d.terms)
    quotient: dict[Alpha, Polynomial] = {}
    remainder: dict[Alpha, Polynomial] = {}
    while work:
        alpha = max(work, key=lambda a: _alpha_key(a, variables))
        counts = _alpha_counts(alpha)
        if all(counts.get(v, 0) >= c for v, c in lead_counts.items()):
            coeff = work.pop(alpha) * (1 / lead_coeff)
            shift = dict(counts)
            for v, c in lead_counts.items():
                shift[v] -= c
            shift = {v: c for v, c in shift.items() if c}
            shift_alpha = _counts_to_alpha(shift)
            quotient[shift_alpha] = (
                quotient[shift_alpha] + coeff if shift_alpha in quotient else coeff
            )
            for beta, k in divisor.items():
                if beta == lead:
                    continue
                combined = dict(shift)
                for v in beta:
                    combined[v] = combined.get(v, 0) + 1
                key = _counts_to_alpha(combined)
                cur = work.get(key)
                nv = -(coeff * k) if cur is None else cur - coeff * k
                if nv.is_zero:
                    work.pop(key, None)
                else:
                    work[key] = nv
        else:
            remainder[alpha] = work.pop(alpha)
    return DiffOp(d.space, quotient), DiffOp(d.space, remainder)


def right_factor(d: DiffOp, r: DiffOp) -> DiffOp:
    """Solve d = delta o r for a constant-coefficient right factor r.

    Because r has constant coefficients, composition on the right is exact
    multiplication of full symbols; divisibility is decided by multivariate
    division with remainder.  Raises NotDivisibleError when no exact factor
    exists.  The returned factor is verified by recomposition.
    """
    delta, remainder = symbol_division(d, r)
    if not remainder.is_zero:
        raise NotDivisibleError(
            f"no exact right factor: {len(remainder.terms)} symbol terms remain"
        )
    if compose(delta, r) != d:
        raise AssertionError("internal error: factor failed recomposition check")
    return delta


def right_factor_through_bilaplacian(d: DiffOp) -> DiffOp:
    """Exact delta with d = delta o (squared Laplacian)."""
    return right_factor(d, bilaplacian(d.space.n))


def right_factor_through_laplacian(d: DiffOp) -> DiffOp:
    """Exact delta with d = delta o (Laplacian)."""
    return right_factor(d, laplacian(d.space.n))


def is_symmetry(d: DiffOp) -> DiffOp | None:
    """Certificate delta with (squared Laplacian) o d = delta o (squared
    Laplacian), or None when d is not a higher symmetry."""
    bilap = bilaplacian(d.space.n)
    try:
        return right_factor(compose(bilap, d), bilap)
    except NotDivisibleError:
        return None


# ---------------------------------------------------------------------------
# reconstruction from an action


def operator_from_action(
    space: VarSpace,
    action: Callable[[Polynomial], Polynomial],
    order: int,
    check_margin: int = 2,
) -> DiffOp:
    """Recover the unique order-<=``order`` operator with the given action.

    Coefficients are read off triangularly from the action on monomials of
    degree <= order; the result is then cross-checked against the action on
    all monomials of the next ``check_margin`` degrees.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    variables = space.variables
    coeffs: dict[Alpha, Polynomial] = {}
    for deg in range(order + 1):
        for alpha in itertools.combinations_with_replacement(variables, deg):
            mono = Polynomial.constant(space, 1)
            for v in alpha:
                mono = mono * Polynomial.variable(space, v)
            value = action(mono)
            for gamma, cg in coeffs.items():
                dmono = _differentiate(mono, _alpha_counts(gamma))
                if not dmono.is_zero:
                    value = value - cg * dmono
            fact = _alpha_factorial(alpha)
            coeff = value * Fraction(1, fact)
            if not coeff.is_zero:
                coeffs[alpha] = coeff
    op = DiffOp(space, coeffs)
    for deg in range(order + 1, order + 1 + check_margin):
        for alpha in itertools.combinations_with_replacement(variables, deg):
            mono = Polynomial.constant(space, 1)
            for v in alpha:
                mono = mono * Polynomial.variable(space, v)
            if apply(op, mono) != action(mono):
                raise ValueError(
                    "action is not realized by an operator of the stated order"
                )
    return op
