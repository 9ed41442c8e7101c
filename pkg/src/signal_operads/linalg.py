"""Exact linear algebra over the rationals and truncated integer power series."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, List, Sequence

Row = Dict[Hashable, Fraction]


def rref(rows: Sequence[Dict[Hashable, int]], order: Sequence[Hashable]) -> List[Row]:
    """Reduced row echelon form of sparse rows; columns ranked by ``order``."""
    rank = {c: n for n, c in enumerate(order)}
    pivots: List[Row] = []
    pivot_cols: List[Hashable] = []
    for raw in rows:
        row = {c: Fraction(v) for c, v in raw.items() if v}
        for col, prow in zip(pivot_cols, pivots):
            f = row.get(col)
            if f:
                for c, v in prow.items():
                    nv = row.get(c, 0) - f * v
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
        if not row:
            continue
        col = min(row, key=rank.__getitem__)
        lead = row[col]
        row = {c: v / lead for c, v in row.items()}
        for n, prow in enumerate(pivots):
            f = prow.get(col)
            if f:
                for c, v in row.items():
                    nv = prow.get(c, 0) - f * v
                    if nv:
                        prow[c] = nv
                    else:
                        prow.pop(c, None)
        pivots.append(row)
        pivot_cols.append(col)
    paired = sorted(zip(pivot_cols, pivots), key=lambda cp: rank[cp[0]])
    return [r for _, r in paired]


def rank_of(rows: Sequence[Dict[Hashable, int]], order: Sequence[Hashable]) -> int:
    return len(rref(rows, order))


def same_span(a: Sequence[Dict[Hashable, int]], b: Sequence[Dict[Hashable, int]], order: Sequence[Hashable]) -> bool:
    return rref(a, order) == rref(b, order)


def nullspace(rows: Sequence[Dict[Hashable, int]], order: Sequence[Hashable]) -> List[Row]:
    """Basis of {x : row . x = 0 for every row}, one vector per free column."""
    reduced = rref(rows, order)
    rank = {c: n for n, c in enumerate(order)}
    pivot_of = {}
    for row in reduced:
        col = min(row, key=rank.__getitem__)
        pivot_of[col] = row
    basis = []
    for free in order:
        if free in pivot_of:
            continue
        vec: Row = {free: Fraction(1)}
        for col, row in pivot_of.items():
            v = row.get(free)
            if v:
                vec[col] = -v
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# truncated power series, as coefficient lists indexed by exponent


def series_mul(a: Sequence[int], b: Sequence[int], n: int) -> List[int]:
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def series_compose(f: Sequence[int], g: Sequence[int], n: int) -> List[int]:
    """f(g(t)) mod t^(n+1); g must have no constant term."""
    if g and g[0]:
        raise ValueError("inner series must vanish at 0")
    out = [0] * (n + 1)
    power = [1] + [0] * n
    for c in f[: n + 1]:
        if c:
            out = [x + c * y for x, y in zip(out, power)]
        power = series_mul(power, g, n)
    return out


def series_negate_argument(f: Sequence[int]) -> List[int]:
    """f(-t)."""
    return [c if e % 2 == 0 else -c for e, c in enumerate(f)]


def series_inverse(f: Sequence[int], n: int) -> List[int]:
    """1/f mod t^(n+1) for f with constant term +-1."""
    if f[0] not in (1, -1):
        raise ValueError("series needs a unit constant term")
    out = [0] * (n + 1)
    out[0] = f[0]
    for m in range(1, n + 1):
        s = sum(f[i] * out[m - i] for i in range(1, min(m, len(f) - 1) + 1))
        out[m] = -s * f[0]
    return out
