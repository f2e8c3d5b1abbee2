"""Exact sparse linear algebra over the rationals."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilapsym.linsolve import invert, nullspace, rank


def test_rank_of_identity_columns():
    cols = [{0: Fraction(1)}, {1: Fraction(1)}, {2: Fraction(1)}]
    assert rank(cols) == 3
    assert nullspace(cols) == []


def test_dependent_columns_have_nullspace():
    cols = [
        {0: Fraction(1), 1: Fraction(2)},
        {0: Fraction(2), 1: Fraction(4)},
    ]
    assert rank(cols) == 1
    vecs = nullspace(cols)
    assert len(vecs) == 1
    v = vecs[0]
    # the relation 2*c0 - c1 = 0, RREF-normalized on the free column
    combo = {}
    for col, coeff in v.items():
        for row, val in cols[col].items():
            combo[row] = combo.get(row, Fraction(0)) + coeff * val
    assert all(x == 0 for x in combo.values())


def test_zero_column_is_free():
    cols = [{0: Fraction(1)}, {}]
    vecs = nullspace(cols)
    assert vecs == [{1: Fraction(1)}]


@given(st.integers(0, 2**30))
@settings(max_examples=25, deadline=None)
def test_nullspace_vectors_annihilate(seed):
    rng = random.Random(seed)
    nrows, ncols = rng.randint(1, 6), rng.randint(1, 8)
    cols = []
    for _ in range(ncols):
        col = {
            r: Fraction(rng.randint(-4, 4))
            for r in range(nrows)
            if rng.random() < 0.6
        }
        cols.append({r: v for r, v in col.items() if v})
    vecs = nullspace(cols, ncols)
    assert rank(cols, ncols) + len(vecs) == ncols
    for vec in vecs:
        combo: dict[int, Fraction] = {}
        for col, coeff in vec.items():
            for row, val in cols[col].items():
                combo[row] = combo.get(row, Fraction(0)) + coeff * val
        assert all(v == 0 for v in combo.values())


@given(st.integers(0, 2**30))
@settings(max_examples=25, deadline=None)
def test_invert_round_trip(seed):
    rng = random.Random(seed)
    size = rng.randint(1, 5)
    while True:
        mat = [
            [Fraction(rng.randint(-5, 5)) for _ in range(size)]
            for _ in range(size)
        ]
        cols = [
            {r: mat[r][c] for r in range(size) if mat[r][c]} for c in range(size)
        ]
        if rank(cols, size) == size:
            break
    inv = invert(mat)
    for i in range(size):
        for j in range(size):
            entry = sum(mat[i][k] * inv[k][j] for k in range(size))
            assert entry == (1 if i == j else 0)


def test_invert_rejects_singular():
    mat = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    with pytest.raises(ValueError):
        invert(mat)
