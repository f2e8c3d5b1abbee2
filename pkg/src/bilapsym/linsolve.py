"""Exact sparse linear algebra over the rationals.

Implements fraction-free Gauss-Jordan elimination on sparse integer rows
(cross-multiplication plus gcd reduction), exposing exact nullspace bases,
ranks, and small dense inverses.  Nullspace bases are normalized
reduced-row-echelon style: each basis vector carries coefficient 1 at its
free column and zeros at all other free columns, so output is deterministic
for a fixed column order.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Hashable, Mapping, Sequence


def _to_integer_rows(
    columns: Sequence[Mapping[Hashable, Fraction]],
) -> list[dict[int, int]]:
    """Transpose column dicts into integer-scaled sparse rows.

    Row keys are assigned in first-seen order while scanning columns in
    index order, which makes the elimination deterministic.
    """
    row_ids: dict[Hashable, int] = {}
    rows: list[dict[int, Fraction]] = []
    for ci, col in enumerate(columns):
        for key, val in col.items():
            if val == 0:
                continue
            rid = row_ids.get(key)
            if rid is None:
                rid = len(rows)
                row_ids[key] = rid
                rows.append({})
            rows[rid][ci] = val
    out: list[dict[int, int]] = []
    for row in rows:
        denom = 1
        for val in row.values():
            denom = denom * val.denominator // gcd(denom, val.denominator)
        ints = {c: int(v * denom) for c, v in row.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        if g > 1:
            ints = {c: v // g for c, v in ints.items()}
        out.append(ints)
    return out


def _reduce_row(row: dict[int, int]) -> None:
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if g > 1:
        for c in row:
            row[c] //= g


class _Eliminator:
    """Gauss-Jordan elimination state over sparse integer rows."""

    def __init__(self, columns: Sequence[Mapping[Hashable, Fraction]], ncols: int) -> None:
        self.ncols = ncols
        self.rows = _to_integer_rows(columns)
        self.col_rows: dict[int, set[int]] = {}
        for rid, row in enumerate(self.rows):
            for c in row:
                self.col_rows.setdefault(c, set()).add(rid)
        self.pivot_row_of_col: dict[int, int] = {}
        self.pivot_col_of_row: dict[int, int] = {}
        self.free_cols: list[int] = []
        self._run()

    def _rewrite_row(self, sid: int, pid: int, c: int) -> None:
        """Replace row sid by rows[sid]*pivot - rows[pid]*rows[sid][c]."""
        sr = self.rows[sid]
        pr = self.rows[pid]
        pv = pr[c]
        sv = sr[c]
        new: dict[int, int] = {}
        for k, val in sr.items():
            if k != c:
                new[k] = val * pv
        for k, val in pr.items():
            if k == c:
                continue
            nv = new.get(k, 0) - val * sv
            if nv == 0:
                new.pop(k, None)
            else:
                new[k] = nv
        _reduce_row(new)
        old_cols = set(sr)
        new_cols = set(new)
        for k in old_cols - new_cols:
            self.col_rows.get(k, set()).discard(sid)
        for k in new_cols - old_cols:
            self.col_rows.setdefault(k, set()).add(sid)
        self.rows[sid] = new

    def _run(self) -> None:
        for c in range(self.ncols):
            holders = self.col_rows.get(c)
            if not holders:
                self.free_cols.append(c)
                continue
            candidates = [rid for rid in holders if rid not in self.pivot_col_of_row]
            if not candidates:
                self.free_cols.append(c)
                continue
            pid = min(candidates, key=lambda rid: (len(self.rows[rid]), rid))
            for sid in sorted(holders - {pid}):
                self._rewrite_row(sid, pid, c)
            self.pivot_row_of_col[c] = pid
            self.pivot_col_of_row[pid] = c

    @property
    def rank(self) -> int:
        return len(self.pivot_row_of_col)

    def nullspace_basis(self) -> list[dict[int, Fraction]]:
        basis: list[dict[int, Fraction]] = []
        for f in self.free_cols:
            vec: dict[int, Fraction] = {f: Fraction(1)}
            holders = self.col_rows.get(f, ())
            for rid in holders:
                c = self.pivot_col_of_row.get(rid)
                if c is None:
                    continue
                row = self.rows[rid]
                vec[c] = Fraction(-row[f], row[c])
            basis.append(vec)
        return basis


def nullspace(
    columns: Sequence[Mapping[Hashable, Fraction]], ncols: int | None = None
) -> list[dict[int, Fraction]]:
    """Exact rational nullspace of the linear map with the given columns.

    Each column is a sparse map from an arbitrary hashable row key to a
    Fraction.  Returns one basis vector per free column, as a sparse map
    column-index -> Fraction with coefficient 1 at the free column.
    """
    if ncols is None:
        ncols = len(columns)
    return _Eliminator(columns, ncols).nullspace_basis()


def rank(columns: Sequence[Mapping[Hashable, Fraction]], ncols: int | None = None) -> int:
    """Exact rank of the linear map with the given columns."""
    if ncols is None:
        ncols = len(columns)
    return _Eliminator(columns, ncols).rank


def invert(matrix: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]]:
    """Exact inverse of a small dense square matrix (Gauss-Jordan)."""
    m = len(matrix)
    aug = [
        [Fraction(matrix[i][j]) for j in range(m)]
        + [Fraction(1 if j == i else 0) for j in range(m)]
        for i in range(m)
    ]
    for col in range(m):
        pivot = next((r for r in range(col, m) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[m:] for row in aug]
