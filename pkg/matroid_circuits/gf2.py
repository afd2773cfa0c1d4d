"""GF(2) linear algebra on int bitsets.

A vector is an ``int``; bit ``i`` is coordinate ``i``. Binary matroids are
handled column-wise: one int per ground element.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def _echelon(vectors: Iterable[int]) -> dict[int, int]:
    """Leading bit -> basis vector; leading bits are pairwise distinct."""
    basis: dict[int, int] = {}
    for v in vectors:
        v = reduce(v, basis)
        if v:
            basis[v.bit_length() - 1] = v
    return basis


def reduce(v: int, basis: dict[int, int]) -> int:
    while v:
        lead = v.bit_length() - 1
        b = basis.get(lead)
        if b is None:
            return v
        v ^= b
    return 0


def rank(vectors: Iterable[int]) -> int:
    return len(_echelon(vectors))


def is_independent(vectors: Sequence[int]) -> bool:
    return rank(vectors) == len(vectors)


def in_span(v: int, vectors: Iterable[int]) -> bool:
    return reduce(v, _echelon(vectors)) == 0


def span(vectors: Iterable[int]) -> set[int]:
    """Every vector in the span. Exponential in the rank; desk scale only."""
    out = {0}
    for b in _echelon(vectors).values():
        out |= {x ^ b for x in out}
    return out


def greedy_basis(columns: Sequence[int]) -> list[int]:
    """Indices of the first maximal independent subsequence."""
    chosen: list[int] = []
    basis: dict[int, int] = {}
    for idx, v in enumerate(columns):
        r = reduce(v, basis)
        if r:
            basis[r.bit_length() - 1] = r
            chosen.append(idx)
    return chosen


def coordinates(columns: Sequence[int], basis_idx: Sequence[int]) -> list[int]:
    """
    Express every column in the basis ``columns[basis_idx]``.

    Returns one bitmask per column; bit ``t`` set means basis vector ``t`` is in
    the combination. Columns outside the span raise ValueError.
    """
    # echelon form that remembers which basis vectors were combined
    tagged: dict[int, tuple[int, int]] = {}
    for t, idx in enumerate(basis_idx):
        v, tag = columns[idx], 1 << t
        while v:
            lead = v.bit_length() - 1
            if lead not in tagged:
                tagged[lead] = (v, tag)
                break
            bv, btag = tagged[lead]
            v, tag = v ^ bv, tag ^ btag
        else:
            raise ValueError("basis columns are dependent")

    out = []
    for v in columns:
        tag = 0
        while v:
            lead = v.bit_length() - 1
            if lead not in tagged:
                raise ValueError("column outside the span of the basis")
            bv, btag = tagged[lead]
            v, tag = v ^ bv, tag ^ btag
        out.append(tag)
    return out


def standard_form(columns: Sequence[int]) -> tuple[list[int], list[int]]:
    """
    Full-row-rank reduction (I | C) up to column order.

    Returns ``(basis_idx, new_columns)`` where the basis is chosen greedily in
    column order and row ``t`` of the new matrix belongs to ``basis_idx[t]``.
    """
    basis_idx = greedy_basis(columns)
    return basis_idx, coordinates(columns, basis_idx)


def dual_columns(columns: Sequence[int]) -> list[int]:
    """Columns of (Cᵀ I) for the matroid represented by ``columns``."""
    basis_idx, coords = standard_form(columns)
    in_basis = {idx: t for t, idx in enumerate(basis_idx)}
    others = [j for j in range(len(columns)) if j not in in_basis]

    out = []
    for j in range(len(columns)):
        if j in in_basis:
            t = in_basis[j]
            out.append(sum(1 << s for s, k in enumerate(others) if (coords[k] >> t) & 1))
        else:
            out.append(1 << others.index(j))
    return out


def rows_to_columns(rows: Sequence[Sequence[int]]) -> list[int]:
    if not rows:
        return []
    n = len(rows[0])
    return [sum(1 << i for i, row in enumerate(rows) if row[j] % 2) for j in range(n)]


def columns_to_rows(columns: Sequence[int], r: int) -> list[list[int]]:
    return [[(c >> i) & 1 for c in columns] for i in range(r)]


__all__ = [
    "reduce",
    "rank",
    "is_independent",
    "in_span",
    "span",
    "greedy_basis",
    "coordinates",
    "standard_form",
    "dual_columns",
    "rows_to_columns",
    "columns_to_rows",
]
