"""Symmetric tensor fields, trace calculus, and paired-skew ambient tensors.

Base-space tensors (``SymTensorField``) carry polynomial components indexed
by nondecreasing multi-indices over 1..n; the flat metric is the identity.
Constant ambient tensors use indices 0..n+1, where the ambient metric pairs
0 with n+1 (the null directions) and is the identity on 1..n — so raising
and lowering is the index involution 0 <-> n+1.  Trace-free projections are
computed by solving a small exact linear system, one implementation for both
metrics.  ``PairSkewTensor`` stores constant ambient tensors that are skew
in each of k index pairs (optionally with a trailing symmetric pair), one
canonical representative per sign orbit.  ``decompose_gg`` splits a two-pair
tensor into its six invariant summands.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Mapping

from .exactpoly import (
    Polynomial,
    Rational,
    base_space,
    format_rational,
    parse_rational,
    rat,
)
from .linsolve import invert

MultiIndex = tuple[int, ...]


# ---------------------------------------------------------------------------
# index utilities

def base_indices(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def ambient_indices(n: int) -> tuple[int, ...]:
    return tuple(range(0, n + 2))


def ambient_lower(n: int, a: int) -> int:
    """The ambient metric as an index involution: 0 <-> n+1, identity else."""
    if a == 0:
        return n + 1
    if a == n + 1:
        return 0
    return a


def nondecreasing_tuples(indices: Iterable[int], length: int) -> list[MultiIndex]:
    return list(itertools.combinations_with_replacement(tuple(indices), length))


# ---------------------------------------------------------------------------
# generic symmetric-component helpers (values: Polynomial or Fraction)

def _comp_get(comps: Mapping[MultiIndex, object], key: MultiIndex):
    return comps.get(tuple(sorted(key)))


def _comp_add(acc, val):
    return val if acc is None else acc + val


def _symmetrize_components(
    raw: Mapping[MultiIndex, object], valency: int
) -> dict[MultiIndex, object]:
    """Project arbitrary-slot components onto full symmetry (average)."""
    out: dict[MultiIndex, object] = {}
    buckets: dict[MultiIndex, list] = {}
    for key, val in raw.items():
        if len(key) != valency:
            raise ValueError(f"index {key} has wrong length for valency {valency}")
        buckets.setdefault(tuple(sorted(key)), []).append((key, val))
    for skey, entries in buckets.items():
        counts: dict[int, int] = {}
        for v in skey:
            counts[v] = counts.get(v, 0) + 1
        orderings = factorial(valency)
        for c in counts.values():
            orderings //= factorial(c)
        total = None
        for _, val in entries:
            total = _comp_add(total, val)
        if total is not None:
            out[skey] = total * Fraction(1, orderings) if orderings != 1 else total
    return {k: v for k, v in out.items() if not _is_zero_value(v)}


def _is_zero_value(v) -> bool:
    if isinstance(v, Polynomial):
        return v.is_zero
    return v == 0


def _sym_outer_components(
    a: Mapping[MultiIndex, object],
    p: int,
    b: Mapping[MultiIndex, object],
    q: int,
    indices: tuple[int, ...],
) -> dict[MultiIndex, object]:
    """Components of the symmetrized product of two symmetric tensors."""
    if p == 0 or q == 0:
        scalar_comp, tensor_comp, v = (a, b, q) if p == 0 else (b, a, p)
        s = scalar_comp.get(())
        if s is None:
            return {}
        return {
            key: val * s for key, val in tensor_comp.items() if not _is_zero_value(val * s)
        }
    prefactor = Fraction(factorial(p) * factorial(q), factorial(p + q))
    out: dict[MultiIndex, object] = {}
    positions = tuple(range(p + q))
    for key in nondecreasing_tuples(indices, p + q):
        total = None
        for first in itertools.combinations(positions, p):
            fs = frozenset(first)
            s_key = tuple(sorted(key[i] for i in first))
            t_key = tuple(sorted(key[i] for i in positions if i not in fs))
            av = a.get(s_key)
            if av is None or _is_zero_value(av):
                continue
            bv = b.get(t_key)
            if bv is None or _is_zero_value(bv):
                continue
            total = _comp_add(total, av * bv)
        if total is not None:
            val = total * prefactor
            if not _is_zero_value(val):
                out[key] = val
    return out


def _trace_components(
    comps: Mapping[MultiIndex, object],
    valency: int,
    indices: tuple[int, ...],
    lower: Callable[[int], int],
) -> dict[MultiIndex, object]:
    """Metric trace over the first two slots (all slots are equivalent)."""
    if valency < 2:
        raise ValueError("trace needs valency >= 2")
    out: dict[MultiIndex, object] = {}
    for key in nondecreasing_tuples(indices, valency - 2):
        total = None
        for aidx in indices:
            val = _comp_get(comps, key + (aidx, lower(aidx)))
            if val is None or _is_zero_value(val):
                continue
            total = _comp_add(total, val)
        if total is not None and not _is_zero_value(total):
            out[key] = total
    return out


def _metric_components(n: int, kind: str) -> dict[MultiIndex, Fraction]:
    """Inverse-metric components: identity (base) or 0<->n+1 pairing (ambient)."""
    if kind == "base":
        return {(a, a): Fraction(1) for a in base_indices(n)}
    comps = {(a, a): Fraction(1) for a in base_indices(n)}
    comps[(0, n + 1)] = Fraction(1)
    return comps


@lru_cache(maxsize=None)
def _tracefree_solver(n: int, kind: str, valency: int):
    """Inverse of A -> trace(g (.) A) on symmetric (valency-2)-tensors."""
    indices = base_indices(n) if kind == "base" else ambient_indices(n)
    lower = (lambda a: a) if kind == "base" else (lambda a: ambient_lower(n, a))
    g = _metric_components(n, kind)
    basis = nondecreasing_tuples(indices, valency - 2)
    pos = {key: i for i, key in enumerate(basis)}
    cols = []
    for key in basis:
        unit = {key: Fraction(1)}
        image = _trace_components(
            _sym_outer_components(g, 2, unit, valency - 2, indices), valency, indices, lower
        )
        cols.append(image)
    matrix = [
        [Fraction(cols[j].get(basis[i], 0)) for j in range(len(basis))]
        for i in range(len(basis))
    ]
    return basis, pos, tuple(tuple(row) for row in invert(matrix))


def _tracefree_components(
    comps: Mapping[MultiIndex, object],
    valency: int,
    n: int,
    kind: str,
) -> dict[MultiIndex, object]:
    if valency < 2:
        return {k: v for k, v in comps.items() if not _is_zero_value(v)}
    indices = base_indices(n) if kind == "base" else ambient_indices(n)
    lower = (lambda a: a) if kind == "base" else (lambda a: ambient_lower(n, a))
    tr = _trace_components(comps, valency, indices, lower)
    if not tr:
        return {k: v for k, v in comps.items() if not _is_zero_value(v)}
    basis, pos, inv = _tracefree_solver(n, kind, valency)
    correction: dict[MultiIndex, object] = {}
    for j, key_j in enumerate(basis):
        total = None
        for key_k, val in tr.items():
            coef = inv[j][pos[key_k]]
            if coef == 0:
                continue
            total = _comp_add(total, val * coef)
        if total is not None and not _is_zero_value(total):
            correction[key_j] = total
    g = _metric_components(n, kind)
    g_corr = _sym_outer_components(g, 2, correction, valency - 2, indices)
    out = dict(comps)
    for key, val in g_corr.items():
        cur = out.get(key)
        out[key] = -val if cur is None else cur - val
    return {k: v for k, v in out.items() if not _is_zero_value(v)}


# ---------------------------------------------------------------------------
# base-space symmetric tensor fields (polynomial components)


class SymTensorField:
    """Symmetric tensor of valency s on R^n with polynomial components."""

    __slots__ = ("n", "valency", "components")

    def __init__(
        self,
        n: int,
        valency: int,
        components: Mapping[MultiIndex, Polynomial] | None = None,
        tracefree: bool = False,
    ) -> None:
        if valency < 0:
            raise ValueError("valency must be >= 0")
        space = base_space(n)
        clean: dict[MultiIndex, Polynomial] = {}
        if components:
            for key, val in components.items():
                key = tuple(key)
                if len(key) != valency or any(not 1 <= i <= n for i in key):
                    raise ValueError(f"bad multi-index {key} for valency {valency}, n={n}")
                if tuple(sorted(key)) != key:
                    raise ValueError(f"multi-index {key} is not nondecreasing")
                if not isinstance(val, Polynomial):
                    val = Polynomial.constant(space, val)
                if val.space != space:
                    raise ValueError("component in wrong variable space")
                if not val.is_zero:
                    clean[key] = val
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "valency", valency)
        object.__setattr__(self, "components", clean)
        if tracefree and valency >= 2 and not self.is_tracefree():
            raise ValueError("tensor marked trace-free has a nonzero metric trace")

    def __setattr__(self, name, value):
        raise AttributeError("SymTensorField is immutable")

    @property
    def space(self):
        return base_space(self.n)

    def get(self, key: MultiIndex) -> Polynomial:
        val = self.components.get(tuple(sorted(key)))
        return Polynomial.zero(self.space) if val is None else val

    @property
    def is_zero(self) -> bool:
        return not self.components

    def keys(self) -> list[MultiIndex]:
        return nondecreasing_tuples(base_indices(self.n), self.valency)

    def map_components(self, fn: Callable[[Polynomial], Polynomial]) -> "SymTensorField":
        return SymTensorField(
            self.n, self.valency, {k: fn(v) for k, v in self.components.items()}
        )

    def __add__(self, other: "SymTensorField") -> "SymTensorField":
        self._check_like(other)
        out = dict(self.components)
        for k, v in other.components.items():
            out[k] = out[k] + v if k in out else v
        return SymTensorField(self.n, self.valency, out)

    def __sub__(self, other: "SymTensorField") -> "SymTensorField":
        return self + (other * Fraction(-1))

    def __mul__(self, scalar) -> "SymTensorField":
        return SymTensorField(
            self.n, self.valency, {k: v * scalar for k, v in self.components.items()}
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymTensorField)
            and self.n == other.n
            and self.valency == other.valency
            and self.components == other.components
        )

    __hash__ = None  # type: ignore[assignment]

    def _check_like(self, other: "SymTensorField") -> None:
        if not isinstance(other, SymTensorField):
            raise TypeError("expected a SymTensorField")
        if self.n != other.n or self.valency != other.valency:
            raise ValueError("tensor shape mismatch")

    def is_tracefree(self) -> bool:
        if self.valency < 2:
            return True
        tr = _trace_components(
            self.components, self.valency, base_indices(self.n), lambda a: a
        )
        return not tr

    def __repr__(self) -> str:
        return f"<SymTensorField n={self.n} valency={self.valency} nnz={len(self.components)}>"

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "valency": self.valency,
            "components": {
                ",".join(map(str, k)): v.to_json_obj()
                for k, v in sorted(self.components.items())
            },
        }

    @classmethod
    def from_json_obj(cls, data: dict) -> "SymTensorField":
        n = data["n"]
        space = base_space(n)
        comps = {
            tuple(int(i) for i in key.split(",")) if key else (): Polynomial.from_json_obj(
                space, val
            )
            for key, val in data["components"].items()
        }
        return cls(n, data["valency"], comps)


def metric_tensor(n: int) -> SymTensorField:
    """The flat metric delta_ab as a symmetric 2-tensor field."""
    space = base_space(n)
    return SymTensorField(
        n, 2, {(a, a): Polynomial.one(space) for a in base_indices(n)}
    )


def symmetrize(
    n: int, valency: int, raw: Mapping[MultiIndex, Polynomial | Rational]
) -> SymTensorField:
    """Average a tensor with explicit (ordered) slots over all slot orders."""
    space = base_space(n)
    coerced = {
        tuple(key): (v if isinstance(v, Polynomial) else Polynomial.constant(space, v))
        for key, v in raw.items()
    }
    comps = _symmetrize_components(coerced, valency)
    return SymTensorField(n, valency, comps)


def metric_trace(t: SymTensorField, slot_a: int = 0, slot_b: int = 1) -> SymTensorField:
    """Exact contraction of two slots with the flat metric."""
    if t.valency < 2:
        raise ValueError("trace needs valency >= 2")
    if not (0 <= slot_a < t.valency and 0 <= slot_b < t.valency and slot_a != slot_b):
        raise ValueError("invalid slots")
    comps = _trace_components(t.components, t.valency, base_indices(t.n), lambda a: a)
    return SymTensorField(t.n, t.valency - 2, comps)


def tracefree_part(t: SymTensorField) -> SymTensorField:
    """The metric-trace-free part of a symmetric tensor field."""
    comps = _tracefree_components(t.components, t.valency, t.n, "base")
    return SymTensorField(t.n, t.valency, comps)


def sym_outer(a: SymTensorField, b: SymTensorField) -> SymTensorField:
    """Symmetrized outer product of two symmetric tensor fields."""
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    comps = _sym_outer_components(
        a.components, a.valency, b.components, b.valency, base_indices(a.n)
    )
    return SymTensorField(a.n, a.valency + b.valency, comps)


def split_symbol(t: SymTensorField):
    """Split T = V + g(.)W + g(.)g(.)X with V, W trace-free.

    Returns (V, W, X); W is None for valency < 2 and X is None for
    valency < 4.  Reconstruction is exact: T = V + sym(g, W) + sym(g, g, X).
    """
    v = tracefree_part(t)
    if t.valency < 2:
        return v, None, None
    g = metric_tensor(t.n)
    trace_t = metric_trace(t)
    a = _solve_g_multiple(trace_t)
    w = tracefree_part(a)
    if t.valency < 4:
        return v, w, None
    trace_a = metric_trace(a)
    x = _solve_g_multiple(trace_a)
    return v, w, x


def _solve_g_multiple(trace: SymTensorField) -> SymTensorField:
    """Solve trace(g (.) A) = given trace for symmetric A (one g layer)."""
    n = trace.n
    valency = trace.valency + 2
    basis, pos, inv = _tracefree_solver(n, "base", valency)
    comps: dict[MultiIndex, Polynomial] = {}
    for j, key_j in enumerate(basis):
        total = None
        for key_k, val in trace.components.items():
            coef = inv[j][pos[key_k]]
            if coef == 0:
                continue
            total = _comp_add(total, val * coef)
        if total is not None and not _is_zero_value(total):
            comps[key_j] = total
    return SymTensorField(n, trace.valency, comps)


# ---------------------------------------------------------------------------
# constant ambient symmetric tensors


class SymAmbientTensor:
    """Constant symmetric tensor on the ambient space (indices 0..n+1)."""

    __slots__ = ("n", "valency", "components")

    def __init__(
        self, n: int, valency: int, components: Mapping[MultiIndex, Rational] | None = None
    ) -> None:
        clean: dict[MultiIndex, Fraction] = {}
        if components:
            for key, val in components.items():
                key = tuple(key)
                if len(key) != valency or any(not 0 <= i <= n + 1 for i in key):
                    raise ValueError(f"bad ambient multi-index {key}")
                if tuple(sorted(key)) != key:
                    raise ValueError(f"multi-index {key} is not nondecreasing")
                val = rat(val)
                if val != 0:
                    clean[key] = val
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "valency", valency)
        object.__setattr__(self, "components", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SymAmbientTensor is immutable")

    def get(self, key: MultiIndex) -> Fraction:
        return self.components.get(tuple(sorted(key)), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other: "SymAmbientTensor") -> "SymAmbientTensor":
        if self.n != other.n or self.valency != other.valency:
            raise ValueError("shape mismatch")
        out = dict(self.components)
        for k, v in other.components.items():
            out[k] = out.get(k, Fraction(0)) + v
        return SymAmbientTensor(self.n, self.valency, out)

    def __sub__(self, other: "SymAmbientTensor") -> "SymAmbientTensor":
        return self + (other * Fraction(-1))

    def __mul__(self, scalar) -> "SymAmbientTensor":
        return SymAmbientTensor(
            self.n, self.valency, {k: v * rat(scalar) for k, v in self.components.items()}
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymAmbientTensor)
            and (self.n, self.valency) == (other.n, other.valency)
            and self.components == other.components
        )

    __hash__ = None  # type: ignore[assignment]

    def trace(self) -> "SymAmbientTensor":
        comps = _trace_components(
            self.components,
            self.valency,
            ambient_indices(self.n),
            lambda a: ambient_lower(self.n, a),
        )
        return SymAmbientTensor(self.n, self.valency - 2, comps)

    def is_tracefree(self) -> bool:
        return self.valency < 2 or self.trace().is_zero

    def tracefree_part(self) -> "SymAmbientTensor":
        comps = _tracefree_components(self.components, self.valency, self.n, "ambient")
        return SymAmbientTensor(self.n, self.valency, comps)

    def sym_outer(self, other: "SymAmbientTensor") -> "SymAmbientTensor":
        comps = _sym_outer_components(
            self.components,
            self.valency,
            other.components,
            other.valency,
            ambient_indices(self.n),
        )
        return SymAmbientTensor(self.n, self.valency + other.valency, comps)

    def __repr__(self) -> str:
        return f"<SymAmbientTensor n={self.n} valency={self.valency} nnz={len(self.components)}>"


def ambient_metric_sym(n: int) -> SymAmbientTensor:
    """The inverse ambient metric as a symmetric 2-tensor."""
    return SymAmbientTensor(n, 2, _metric_components(n, "ambient"))


# ---------------------------------------------------------------------------
# paired-skew constant ambient tensors


class PairSkewTensor:
    """Constant ambient tensor, skew within each of k index pairs.

    With ``tail_valency`` 2 a trailing symmetric index pair is appended.
    Storage keeps one representative per orbit of the structural group
    (pair-internal transpositions and the trailing swap) with sign
    bookkeeping; a pair with equal indices is identically zero.
    """

    __slots__ = ("n", "pair_count", "tail_valency", "components")

    def __init__(
        self,
        n: int,
        pair_count: int,
        tail_valency: int = 0,
        components: Mapping[MultiIndex, Rational] | None = None,
    ) -> None:
        if tail_valency not in (0, 2):
            raise ValueError("tail_valency must be 0 or 2")
        if pair_count < 0:
            raise ValueError("pair_count must be >= 0")
        clean: dict[MultiIndex, Fraction] = {}
        if components:
            for key, val in components.items():
                key = tuple(key)
                if key != self._canonical_or_fail(n, pair_count, tail_valency, key):
                    raise ValueError(f"non-canonical key {key}")
                val = rat(val)
                if val != 0:
                    clean[key] = val
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "pair_count", pair_count)
        object.__setattr__(self, "tail_valency", tail_valency)
        object.__setattr__(self, "components", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PairSkewTensor is immutable")

    @staticmethod
    def _canonical_or_fail(n: int, k: int, t: int, key: MultiIndex) -> MultiIndex:
        if len(key) != 2 * k + t:
            raise ValueError(f"key {key} has wrong length")
        if any(not 0 <= i <= n + 1 for i in key):
            raise ValueError(f"key {key} out of ambient index range")
        for i in range(k):
            if not key[2 * i] < key[2 * i + 1]:
                raise ValueError(f"key {key} not canonical in pair {i}")
        if t == 2 and key[-2] > key[-1]:
            raise ValueError(f"key {key} not canonical in trailing pair")
        return key

    def canonicalize(self, key: MultiIndex) -> tuple[MultiIndex, int] | None:
        """Canonical representative and sign, or None if a pair repeats."""
        k = self.pair_count
        sign = 1
        parts: list[int] = []
        for i in range(k):
            a, b = key[2 * i], key[2 * i + 1]
            if a == b:
                return None
            if a > b:
                a, b = b, a
                sign = -sign
            parts.append(a)
            parts.append(b)
        if self.tail_valency:
            tail = sorted(key[2 * k :])
            parts.extend(tail)
        return tuple(parts), sign

    def get(self, key: MultiIndex) -> Fraction:
        canon = self.canonicalize(tuple(key))
        if canon is None:
            return Fraction(0)
        ckey, sign = canon
        val = self.components.get(ckey)
        return Fraction(0) if val is None else sign * val

    def canonical_keys(self) -> list[MultiIndex]:
        idx = ambient_indices(self.n)
        pair_choices = list(itertools.combinations(idx, 2))
        tails = (
            nondecreasing_tuples(idx, self.tail_valency)
            if self.tail_valency
            else [()]
        )
        keys = []
        for pairs in itertools.product(pair_choices, repeat=self.pair_count):
            flat = tuple(i for pair in pairs for i in pair)
            for tail in tails:
                keys.append(flat + tail)
        return keys

    @classmethod
    def from_function(
        cls,
        n: int,
        pair_count: int,
        tail_valency: int,
        fn: Callable[[MultiIndex], Rational],
    ) -> "PairSkewTensor":
        """Project raw components onto the paired-skew symmetry type."""
        proto = cls(n, pair_count, tail_valency)
        comps: dict[MultiIndex, Fraction] = {}
        flips = list(itertools.product((0, 1), repeat=pair_count))
        tail_group = (0, 1) if tail_valency == 2 else (0,)
        norm = Fraction(1, (2 ** pair_count) * len(tail_group))
        for key in proto.canonical_keys():
            total = Fraction(0)
            for flip in flips:
                sign = 1
                arranged = list(key)
                for i, f in enumerate(flip):
                    if f:
                        arranged[2 * i], arranged[2 * i + 1] = (
                            arranged[2 * i + 1],
                            arranged[2 * i],
                        )
                        sign = -sign
                for tf in tail_group:
                    tkey = list(arranged)
                    if tf:
                        tkey[-2], tkey[-1] = tkey[-1], tkey[-2]
                    total += sign * rat(fn(tuple(tkey)))
            val = total * norm
            if val != 0:
                comps[key] = val
        return cls(n, pair_count, tail_valency, comps)

    def _check_like(self, other: "PairSkewTensor") -> None:
        if (
            not isinstance(other, PairSkewTensor)
            or self.n != other.n
            or self.pair_count != other.pair_count
            or self.tail_valency != other.tail_valency
        ):
            raise ValueError("pair-skew tensor shape mismatch")

    def __add__(self, other: "PairSkewTensor") -> "PairSkewTensor":
        self._check_like(other)
        out = dict(self.components)
        for k, v in other.components.items():
            out[k] = out.get(k, Fraction(0)) + v
        return PairSkewTensor(self.n, self.pair_count, self.tail_valency, out)

    def __sub__(self, other: "PairSkewTensor") -> "PairSkewTensor":
        return self + (other * Fraction(-1))

    def __mul__(self, scalar) -> "PairSkewTensor":
        return PairSkewTensor(
            self.n,
            self.pair_count,
            self.tail_valency,
            {k: v * rat(scalar) for k, v in self.components.items()},
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PairSkewTensor)
            and (self.n, self.pair_count, self.tail_valency)
            == (other.n, other.pair_count, other.tail_valency)
            and self.components == other.components
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def is_zero(self) -> bool:
        return not self.components

    def __repr__(self) -> str:
        return (
            f"<PairSkewTensor n={self.n} pairs={self.pair_count}"
            f" tail={self.tail_valency} nnz={len(self.components)}>"
        )

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "pair_count": self.pair_count,
            "tail_valency": self.tail_valency,
            "components": {
                ",".join(map(str, k)): format_rational(v)
                for k, v in sorted(self.components.items())
            },
        }

    @classmethod
    def from_json_obj(cls, data: dict) -> "PairSkewTensor":
        comps = {
            tuple(int(i) for i in key.split(",")): parse_rational(val)
            for key, val in data["components"].items()
        }
        return cls(data["n"], data["pair_count"], data["tail_valency"], comps)


def pairskew_canonicalize(
    n: int,
    pair_count: int,
    tail_valency: int,
    raw: Mapping[MultiIndex, Rational] | Callable[[MultiIndex], Rational],
) -> PairSkewTensor:
    """Project raw components onto the paired-skew (+ trailing-sym) type."""
    if callable(raw):
        fn = raw
    else:
        table = {tuple(k): rat(v) for k, v in raw.items()}
        fn = lambda key: table.get(key, Fraction(0))  # noqa: E731
    return PairSkewTensor.from_function(n, pair_count, tail_valency, fn)


def contract_positions(
    x: PairSkewTensor, contractions: list[tuple[int, int]]
) -> dict[MultiIndex, Fraction]:
    """Contract index-position pairs with the ambient metric.

    Returns a dense map over the remaining (ordered) index positions.
    """
    total_len = 2 * x.pair_count + x.tail_valency
    used = {p for pair in contractions for p in pair}
    if len(used) != 2 * len(contractions):
        raise ValueError("overlapping contraction positions")
    free = [p for p in range(total_len) if p not in used]
    idx = ambient_indices(x.n)
    out: dict[MultiIndex, Fraction] = {}
    for free_vals in itertools.product(idx, repeat=len(free)):
        total = Fraction(0)
        for sums in itertools.product(idx, repeat=len(contractions)):
            key = [0] * total_len
            for p, v in zip(free, free_vals):
                key[p] = v
            for (pi, pj), a in zip(contractions, sums):
                key[pi] = a
                key[pj] = ambient_lower(x.n, a)
            total += x.get(tuple(key))
        if total != 0:
            out[free_vals] = total
    return out


def pair_swap(x: PairSkewTensor) -> PairSkewTensor:
    """Exchange the two pairs of a two-pair tensor."""
    if x.pair_count != 2 or x.tail_valency != 0:
        raise ValueError("pair_swap needs exactly two pairs")
    return PairSkewTensor.from_function(
        x.n, 2, 0, lambda key: x.get((key[2], key[3], key[0], key[1]))
    )


def fully_skew_part(x: PairSkewTensor) -> PairSkewTensor:
    """Total antisymmetrization of a two-pair tensor over all four slots."""
    if x.pair_count != 2 or x.tail_valency != 0:
        raise ValueError("fully_skew_part needs exactly two pairs")
    perms = [
        (p, _perm_sign(p)) for p in itertools.permutations(range(4))
    ]

    def alt(key: MultiIndex) -> Fraction:
        total = Fraction(0)
        for p, sign in perms:
            total += sign * x.get(tuple(key[i] for i in p))
        return total / 24

    return PairSkewTensor.from_function(x.n, 2, 0, alt)


def _perm_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# the six summands of a two-pair tensor


def scalar_embed(value: Rational, n: int) -> PairSkewTensor:
    """Embed a scalar as the invariant-pairing summand (trace-normalized)."""
    value = rat(value)
    norm = Fraction(1, n * (n + 1) * (n + 2))

    def fn(key: MultiIndex) -> Fraction:
        b, q, c, r = key
        term1 = 1 if q == ambient_lower(n, c) else 0
        term1 *= 1 if b == ambient_lower(n, r) else 0
        term2 = 1 if b == ambient_lower(n, c) else 0
        term2 *= 1 if q == ambient_lower(n, r) else 0
        return value * norm * (term1 - term2)

    return PairSkewTensor.from_function(n, 2, 0, fn)


def scalar_extract(x: PairSkewTensor) -> Fraction:
    """Double trace, normalized so scalar_extract(scalar_embed(v)) = v."""
    n = x.n
    total = Fraction(0)
    for b in ambient_indices(n):
        for q in ambient_indices(n):
            total += x.get((b, q, ambient_lower(n, b), ambient_lower(n, q)))
    return -n * total


def adjoint_embed(v: PairSkewTensor) -> PairSkewTensor:
    """Embed a one-pair tensor as the adjoint summand (bracket-normalized)."""
    if v.pair_count != 1 or v.tail_valency != 0:
        raise ValueError("adjoint_embed expects a one-pair tensor")
    n = v.n
    half_inv_n = Fraction(1, 2 * n)

    def g(a: int, b: int) -> int:
        return 1 if a == ambient_lower(n, b) else 0

    def fn(key: MultiIndex) -> Fraction:
        b, q, c, r = key
        return half_inv_n * (
            v.get((b, r)) * g(q, c)
            - v.get((q, r)) * g(b, c)
            - v.get((b, c)) * g(q, r)
            + v.get((q, c)) * g(b, r)
        )

    return PairSkewTensor.from_function(n, 2, 0, fn)


def adjoint_extract(x: PairSkewTensor) -> PairSkewTensor:
    """Bracket-type contraction; inverts adjoint_embed, kills other summands."""
    n = x.n

    def fn(key: MultiIndex) -> Fraction:
        b, r = key
        total = Fraction(0)
        for q in ambient_indices(n):
            sq = ambient_lower(n, q)
            total += x.get((b, q, sq, r)) - x.get((r, q, sq, b))
        return total

    return PairSkewTensor.from_function(n, 1, 0, fn)


def bullet_embed(w: PairSkewTensor) -> PairSkewTensor:
    """Embed a symmetric trace-free 2-tensor as the two-row-symmetric summand."""
    if w.pair_count != 0 or w.tail_valency != 2:
        raise ValueError("bullet_embed expects a trailing-pair tensor")
    n = w.n

    def g(a: int, b: int) -> int:
        return 1 if a == ambient_lower(n, b) else 0

    def fn(key: MultiIndex) -> Fraction:
        b, q, c, r = key
        return (
            w.get((b, c)) * g(q, r)
            - w.get((q, c)) * g(b, r)
            - w.get((b, r)) * g(q, c)
            + w.get((q, r)) * g(b, c)
        )

    return PairSkewTensor.from_function(n, 2, 0, fn)


def bullet_extract(x: PairSkewTensor) -> PairSkewTensor:
    """Second-slot trace, symmetrized and trace-freed; inverts bullet_embed."""
    n = x.n
    raw: dict[MultiIndex, Fraction] = {}
    for b in ambient_indices(n):
        for c in ambient_indices(n):
            total = Fraction(0)
            for q in ambient_indices(n):
                total += x.get((b, q, c, ambient_lower(n, q)))
            if total != 0:
                raw[(b, c)] = total
    sym: dict[MultiIndex, Fraction] = {}
    for key in nondecreasing_tuples(ambient_indices(n), 2):
        b, c = key
        val = (raw.get((b, c), Fraction(0)) + raw.get((c, b), Fraction(0))) / 2
        if val != 0:
            sym[key] = val
    tensor = SymAmbientTensor(n, 2, sym).tracefree_part() * Fraction(1, n)
    return PairSkewTensor(n, 0, 2, dict(tensor.components))


@dataclass(frozen=True)
class GGDecomposition:
    """The six invariant components of a two-pair ambient tensor."""

    cartan: PairSkewTensor
    bullet_W: PairSkewTensor  # pair_count 0, trailing symmetric pair
    scalar: Fraction
    hook: PairSkewTensor
    adjoint: PairSkewTensor  # pair_count 1
    fully_skew: PairSkewTensor

    def embedded(self) -> dict[str, PairSkewTensor]:
        n = self.cartan.n
        return {
            "cartan": self.cartan,
            "bullet": bullet_embed(self.bullet_W),
            "scalar": scalar_embed(self.scalar, n),
            "hook": self.hook,
            "adjoint": adjoint_embed(self.adjoint),
            "fully_skew": self.fully_skew,
        }

    def recombined(self) -> PairSkewTensor:
        parts = list(self.embedded().values())
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        return total


def decompose_gg(x: PairSkewTensor) -> GGDecomposition:
    """Split a two-pair tensor into its six invariant summands.

    Five parts come from explicit embeddings/extractions; the top summand is
    the exact remainder.  The embedded parts recombine to the input exactly.
    """
    if x.pair_count != 2 or x.tail_valency != 0:
        raise ValueError("decompose_gg expects a two-pair tensor")
    n = x.n
    scalar = scalar_extract(x)
    scalar_part = scalar_embed(scalar, n)
    adjoint = adjoint_extract(x)
    adjoint_part = adjoint_embed(adjoint)
    bullet_w = bullet_extract(x)
    bullet_part = bullet_embed(bullet_w)
    skew_part = fully_skew_part(x)
    antisym = (x - pair_swap(x)) * Fraction(1, 2)
    hook_part = antisym - adjoint_part
    cartan_part = x - scalar_part - adjoint_part - bullet_part - skew_part - hook_part
    return GGDecomposition(
        cartan=cartan_part,
        bullet_W=bullet_w,
        scalar=scalar,
        hook=hook_part,
        adjoint=adjoint,
        fully_skew=skew_part,
    )


def is_totally_tracefree(x: PairSkewTensor) -> bool:
    """All six single contractions of a two-pair tensor vanish."""
    for pi in range(4):
        for pj in range(pi + 1, 4):
            if contract_positions(x, [(pi, pj)]):
                return False
    return True


def satisfies_cyclic_identity(x: PairSkewTensor) -> bool:
    """X^{BQCR} + X^{BCRQ} + X^{BRQC} = 0 for all index values."""
    idx = ambient_indices(x.n)
    for key in itertools.product(idx, repeat=4):
        b, q, c, r = key
        if x.get((b, q, c, r)) + x.get((b, c, r, q)) + x.get((b, r, q, c)) != 0:
            return False
    return True


def is_pair_symmetric(x: PairSkewTensor) -> bool:
    return (x - pair_swap(x)).is_zero


def is_totally_skew(x: PairSkewTensor) -> bool:
    idx = ambient_indices(x.n)
    for key in itertools.product(idx, repeat=4):
        b, q, c, r = key
        if x.get((b, q, c, r)) != -x.get((b, q, r, c)):
            return False
        if x.get((b, q, c, r)) != -x.get((c, q, b, r)):
            return False
    return True


# ---------------------------------------------------------------------------
# the quartic counterexample tensor


def counterexample_tensor(z: SymAmbientTensor) -> PairSkewTensor:
    """Skew a symmetric trace-free 4-tensor against the squared metric.

    Builds the four-pair tensor X whose pair-skewing carries Z on the first
    slots of each pair and the symmetrized double metric on the second slots.
    Its first-pair double trace and trailing-pair trace vanish, while the
    mixed double trace reproduces a nonzero multiple of Z.
    """
    if z.valency != 4:
        raise ValueError("expected a valency-4 ambient tensor")
    if not z.is_tracefree():
        raise ValueError("tensor must be trace-free")
    n = z.n
    gg = ambient_metric_sym(n).sym_outer(ambient_metric_sym(n))

    def fn(key: MultiIndex) -> Fraction:
        zval = z.get((key[0], key[2], key[4], key[6]))
        if zval == 0:
            return Fraction(0)
        gval = gg.get((key[1], key[3], key[5], key[7]))
        return zval * gval

    return PairSkewTensor.from_function(n, 4, 0, fn)


def counterexample_first_trace(x: PairSkewTensor) -> dict[MultiIndex, Fraction]:
    """Double trace of the first pair against the second pair."""
    return contract_positions(x, [(0, 2), (1, 3)])


def counterexample_tail_trace(x: PairSkewTensor) -> dict[MultiIndex, Fraction]:
    """Double trace of the third pair against the fourth pair."""
    return contract_positions(x, [(4, 6), (5, 7)])


def counterexample_mixed_trace(x: PairSkewTensor) -> dict[MultiIndex, Fraction]:
    """The mixed double trace (second slots of pairs 1-2 and 3-4)."""
    return contract_positions(x, [(1, 3), (5, 7)])
