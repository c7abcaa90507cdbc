"""Sparse Gaussian elimination over an exact field."""

from __future__ import annotations

from typing import Sequence

from .fields import QQ


def rref(rows: Sequence[Sequence], ncols: int, field=QQ) -> tuple[list[dict[int, object]], list[int]]:
    """Reduced row echelon form, leftmost pivot first, smallest row index on ties.

    Rows may be dense sequences or ``{col: value}`` dicts.  Returns the
    nonzero reduced rows (as dicts) and their pivot columns.
    """
    work = []
    for r in rows:
        items = r.items() if isinstance(r, dict) else enumerate(r)
        d = {j: field(v) for j, v in items if v}
        d = {j: v for j, v in d.items() if v}
        work.append(d)
    pivots: list[int] = []
    reduced: list[dict[int, object]] = []
    remaining = work
    for col in range(ncols):
        idx = next((i for i, r in enumerate(remaining) if col in r), None)
        if idx is None:
            continue
        prow = remaining.pop(idx)
        inv = 1 / prow[col]
        prow = {j: v * inv for j, v in prow.items()}
        nxt = []
        for r in remaining:
            c = r.get(col)
            if c:
                r = dict(r)
                for j, v in prow.items():
                    w = r.get(j, 0) - c * v
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
            if r:
                nxt.append(r)
        remaining = nxt
        for k, r in enumerate(reduced):
            c = r.get(col)
            if c:
                r = dict(r)
                for j, v in prow.items():
                    w = r.get(j, 0) - c * v
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
                reduced[k] = r
        reduced.append(prow)
        pivots.append(col)
    return reduced, pivots


def nullspace(rows: Sequence[Sequence], ncols: int, field=QQ) -> list[dict[int, object]]:
    """Basis of ``{x : rows . x == 0}``, one vector per free column (that entry is 1)."""
    reduced, pivots = rref(rows, ncols, field)
    pset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pset:
            continue
        vec = {f: field(1)}
        for r, p in zip(reduced, pivots):
            c = r.get(f)
            if c:
                vec[p] = -c
        basis.append(vec)
    return basis


def rank(rows: Sequence[Sequence], ncols: int, field=QQ) -> int:
    return len(rref(rows, ncols, field)[1])
