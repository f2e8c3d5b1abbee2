"""Exact solvers for the two overdetermined symbol equations.

A trace-free symmetric s-tensor V solves the rank-s equation when the
trace-free part of its symmetrized gradient vanishes; a valency-t tensor W
solves the order-three variant when the trace-free part of its triply
symmetrized gradient vanishes.  Both equations are linear with constant
coefficients and homogeneous in polynomial degree, so the solution space
splits into independent blocks by (degree, per-variable parity); each block
is a small exact nullspace computation.  Degrees above the stated bound are
probed for emptiness, which is reported as stabilization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exactpoly import Monomial, Polynomial, base_space
from .linsolve import nullspace
from .tensorcalc import (
    MultiIndex,
    SymTensorField,
    base_indices,
    metric_tensor,
    metric_trace,
    nondecreasing_tuples,
    sym_outer,
    tracefree_part,
)

# ---------------------------------------------------------------------------
# differential maps on symmetric tensor fields


def sym_gradient(v: SymTensorField) -> SymTensorField:
    """Symmetrized gradient: average of d_{i_p} V[rest] over positions."""
    n, s = v.n, v.valency
    comps = {}
    share = Fraction(1, s + 1)
    for key in nondecreasing_tuples(base_indices(n), s + 1):
        total = None
        for p in range(s + 1):
            rest = key[:p] + key[p + 1 :]
            dv = v.get(rest).partial(key[p])
            if dv.is_zero:
                continue
            total = dv if total is None else total + dv
        if total is not None and not total.is_zero:
            comps[key] = total * share
    return SymTensorField(n, s + 1, comps)


def divergence(v: SymTensorField) -> SymTensorField:
    """Contraction of the gradient with the tensor's first slot."""
    n, s = v.n, v.valency
    if s < 1:
        raise ValueError("divergence needs valency >= 1")
    comps = {}
    for key in nondecreasing_tuples(base_indices(n), s - 1):
        total = None
        for a in base_indices(n):
            dv = v.get(key + (a,)).partial(a)
            if dv.is_zero:
                continue
            total = dv if total is None else total + dv
        if total is not None and not total.is_zero:
            comps[key] = total
    return SymTensorField(n, s - 1, comps)


def component_laplacian(v: SymTensorField) -> SymTensorField:
    """Componentwise flat Laplacian."""

    def lap(p: Polynomial) -> Polynomial:
        out = Polynomial.zero(p.space)
        for a in base_indices(v.n):
            out = out + p.partial(a).partial(a)
        return out

    return v.map_components(lap)


def ckt_residual(v: SymTensorField) -> SymTensorField:
    """Trace-free part of the symmetrized gradient (rank-s equation)."""
    return tracefree_part(sym_gradient(v))


def gckt_residual(w: SymTensorField) -> SymTensorField:
    """Trace-free part of the triply symmetrized gradient."""
    g3 = sym_gradient(sym_gradient(sym_gradient(w)))
    return tracefree_part(g3)


# ---------------------------------------------------------------------------
# degree/parity-blocked exact solving


def _exponent_tuples(n: int, degree: int):
    """All exponent vectors of total degree ``degree`` over n variables."""
    if n == 1:
        yield (degree,)
        return
    for first in range(degree + 1):
        for rest in _exponent_tuples(n - 1, degree - first):
            yield (first,) + rest


def _index_parity(n: int, key: MultiIndex) -> tuple[int, ...]:
    counts = [0] * n
    for v in key:
        counts[v - 1] ^= 1
    return tuple(counts)


def _monomial_from_exps(n: int, exps: tuple[int, ...]) -> Monomial:
    return Monomial(tuple((v + 1, e) for v, e in enumerate(exps) if e))


def _block_unknowns(n: int, valency: int, degree: int, parity: tuple[int, ...]):
    """Unknown coordinates (J, exps) in one (degree, parity) block."""
    out = []
    for key in nondecreasing_tuples(base_indices(n), valency):
        kp = _index_parity(n, key)
        for exps in _exponent_tuples(n, degree):
            if tuple((e + c) % 2 for e, c in zip(exps, kp)) == parity:
                out.append((key, exps))
    return out


def _tensor_rows(t: SymTensorField, tag: str, col: dict) -> None:
    for key, poly in t.components.items():
        for mono, coeff in poly.terms.items():
            rk = (tag, key, mono)
            col[rk] = col.get(rk, Fraction(0)) + coeff


def _solve_blocks(
    n: int,
    valency: int,
    degree: int,
    residual_fn,
    enforce_tracefree: bool,
) -> list[SymTensorField]:
    """Exact nullspace of one polynomial degree, all parity classes."""
    solutions: list[SymTensorField] = []
    space = base_space(n)
    for parity in itertools.product((0, 1), repeat=n):
        unknowns = _block_unknowns(n, valency, degree, parity)
        if not unknowns:
            continue
        columns = []
        for key, exps in unknowns:
            mono = _monomial_from_exps(n, exps)
            unit = SymTensorField(
                n, valency, {key: Polynomial(space, {mono: Fraction(1)})}
            )
            col: dict = {}
            _tensor_rows(residual_fn(unit), "r", col)
            if enforce_tracefree and valency >= 2:
                _tensor_rows(metric_trace(unit), "t", col)
            columns.append(col)
        for vec in nullspace(columns):
            comps: dict[MultiIndex, dict] = {}
            for pos, coeff in vec.items():
                key, exps = unknowns[pos]
                mono = _monomial_from_exps(n, exps)
                comps.setdefault(key, {})[mono] = coeff
            fields = {
                key: Polynomial(space, terms) for key, terms in comps.items()
            }
            solutions.append(SymTensorField(n, valency, fields))
    return solutions


@dataclass(frozen=True)
class SolutionBasis:
    """Exact basis of a polynomial solution space, graded by degree."""

    n: int
    valency: int
    degree_bound: int
    elements: tuple[SymTensorField, ...]
    degrees: tuple[int, ...]
    stabilized: bool

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def dimension_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out


CKTBasis = SolutionBasis
GCKTBasis = SolutionBasis


def _solve_graded(
    n: int, valency: int, degree_bound: int, residual_fn, enforce_tracefree: bool
) -> SolutionBasis:
    if degree_bound < 0:
        raise ValueError("degree_bound must be >= 0")
    elements: list[SymTensorField] = []
    degrees: list[int] = []
    for d in range(degree_bound + 1):
        sols = _solve_blocks(n, valency, d, residual_fn, enforce_tracefree)
        elements.extend(sols)
        degrees.extend([d] * len(sols))
    stabilized = all(
        not _solve_blocks(n, valency, d, residual_fn, enforce_tracefree)
        for d in (degree_bound + 1, degree_bound + 2)
    )
    return SolutionBasis(
        n=n,
        valency=valency,
        degree_bound=degree_bound,
        elements=tuple(elements),
        degrees=tuple(degrees),
        stabilized=stabilized,
    )


def solve_ckt(n: int, s: int, degree_bound: int) -> SolutionBasis:
    """Exact basis of trace-free symmetric s-tensors killed by ckt_residual.

    Solutions of polynomial degree <= degree_bound, degree by degree; the
    next two degrees are checked to be empty (``stabilized``).
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    return _solve_graded(n, s, degree_bound, ckt_residual, enforce_tracefree=True)


def solve_gckt(n: int, t: int, degree_bound: int) -> SolutionBasis:
    """Exact basis of valency-t tensors killed by gckt_residual."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return _solve_graded(n, t, degree_bound, gckt_residual, enforce_tracefree=t >= 2)


def second_order_symmetry_dimension(n: int) -> int:
    """Closed-form dimension of the second-order symmetry space."""
    num = (n + 1) * (n + 2) * (n * n + 5 * n + 12)
    if num % 12:
        raise ArithmeticError("dimension formula did not produce an integer")
    return num // 12


# ---------------------------------------------------------------------------
# structural consequences of the rank-s equation


@dataclass(frozen=True)
class HilfReport:
    """Verified consequences of the rank-s equation for one solution."""

    phi: SymTensorField
    defining_identity: bool
    laplacian_identity: bool
    hessian_tracefree: bool

    @property
    def all_hold(self) -> bool:
        return self.defining_identity and self.laplacian_identity and self.hessian_tracefree


def verify_lemma_hilf(v: SymTensorField) -> HilfReport:
    """Check the gradient, Laplacian, and Hessian consequences for a solution.

    The input must solve the rank-s equation (trace-free, vanishing
    residual); the companion tensor phi is a fixed multiple of the
    divergence, and three identities are verified exactly:

    * the symmetrized gradient equals the metric symmetrized with phi,
    * the componentwise Laplacian is the stated combination of the
      divergence of phi and the symmetrized gradient of phi,
    * the trace-free part of the symmetrized Hessian of phi vanishes.
    """
    n, s = v.n, v.valency
    if s < 1:
        raise ValueError("valency must be >= 1")
    if not v.is_tracefree():
        raise ValueError("input must be trace-free")
    if not ckt_residual(v).is_zero:
        raise ValueError("input does not solve the rank-s equation")
    g = metric_tensor(n)
    phi = divergence(v) * Fraction(s, n + 2 * s - 2)
    defining = sym_gradient(v) == sym_outer(g, phi)
    lap_v = component_laplacian(v)
    rhs = sym_gradient(phi) * Fraction(-(n + 2 * s - 4))
    if s >= 2:
        rhs = rhs + sym_outer(g, divergence(phi)) * Fraction(s - 1)
    laplacian_ok = lap_v == rhs
    hessian_ok = tracefree_part(sym_gradient(sym_gradient(phi))).is_zero
    return HilfReport(
        phi=phi,
        defining_identity=defining,
        laplacian_identity=laplacian_ok,
        hessian_tracefree=hessian_ok,
    )
