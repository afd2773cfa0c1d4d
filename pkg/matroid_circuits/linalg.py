"""Exact linear algebra over {0,±1} matrices: determinants, total
unimodularity, Camion signing, weighted Gram matrices and the generalized
star-mesh transformation."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Hashable, Sequence

import networkx as nx

from . import guard
from .errors import LinalgError, MatrixTooLarge, NotRegular, ZeroRow
from .matroid import node_key

logger = logging.getLogger(__name__)

Rational = Fraction


# ============================================================
# MATRICES
# ============================================================
@dataclass(frozen=True)
class IntMatrix:
    rows: tuple
    row_labels: tuple = ()
    col_labels: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        widths = {len(row) for row in rows}
        if len(widths) > 1:
            raise LinalgError("ragged matrix")
        if self.col_labels and rows and len(self.col_labels) != len(rows[0]):
            raise LinalgError("column labels do not match the width")
        if self.row_labels and len(self.row_labels) != len(rows):
            raise LinalgError("row labels do not match the height")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def support(self, i: int) -> list[int]:
        return [j for j, v in enumerate(self.rows[i]) if v]


@dataclass(frozen=True)
class SignedMatrix(IntMatrix):
    def __post_init__(self):
        super().__post_init__()
        for row in self.rows:
            for v in row:
                if v not in (-1, 0, 1):
                    raise LinalgError(f"entry {v} outside {{-1, 0, 1}}")


@dataclass(frozen=True)
class WeightedGram:
    L: tuple
    A: IntMatrix
    z: tuple


@dataclass(frozen=True)
class StarMesh:
    """Result of eliminating one row; column keys are j (N0) or (j, k) (pairs of N1)."""

    matrix: IntMatrix
    columns: tuple
    support: tuple
    row: int
    n0: tuple = field(default=())

    def weights(self, z: Sequence[Rational]) -> tuple[Rational, list[Rational]]:
        """(y, diagonal of X') for column weights z of the original matrix."""
        y = sum((Fraction(z[j]) for j in self.support), Fraction(0))
        out = []
        for key in self.columns:
            if isinstance(key, tuple):
                j, k = key
                out.append(Fraction(z[j]) * Fraction(z[k]) / y)
            else:
                out.append(Fraction(z[key]))
        return y, out


# ============================================================
# DETERMINANTS
# ============================================================
def _bareiss(M: list[list], div: Callable):
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n):
                row_i[j] = div(row_i[j] * pivot - row_i[k] * row_k[j], prev)
        prev = pivot
    return sign * M[n - 1][n - 1]


def det_exact(Msq: Sequence[Sequence]) -> Rational:
    """Fraction-free (Bareiss) determinant over exact rationals."""
    M = [[Fraction(v) for v in row] for row in Msq]
    if any(len(row) != len(M) for row in M):
        raise LinalgError("determinant of a non-square matrix")
    return Fraction(_bareiss(M, lambda a, b: a / b))


def int_det(Msq: Sequence[Sequence[int]]) -> int:
    M = [list(row) for row in Msq]
    return _bareiss(M, lambda a, b: a // b)


# ============================================================
# TOTAL UNIMODULARITY
# ============================================================
def is_tu(A: IntMatrix, max_tu: int | None = None) -> bool:
    r, n = A.shape
    limit = guard(max_tu, "max_tu")
    if min(r, n) > limit:
        raise MatrixTooLarge(f"min(r, n) = {min(r, n)} exceeds the exhaustive TU guard ({limit})")
    rows = A.rows
    if any(v not in (-1, 0, 1) for row in rows for v in row):
        return False
    for k in range(2, min(r, n) + 1):
        for ri in combinations(range(r), k):
            sub_rows = [rows[i] for i in ri]
            for cj in combinations(range(n), k):
                d = int_det([[row[j] for j in cj] for row in sub_rows])
                if d not in (-1, 0, 1):
                    return False
    return True


def sampled_tu(A: IntMatrix, samples: int = 2000, seed: int = 0) -> bool:
    """Random square minors; a necessary check only, used past the TU guard."""
    rng = random.Random(seed)
    r, n = A.shape
    rows = A.rows
    for _ in range(samples):
        k = rng.randint(1, min(r, n))
        ri = rng.sample(range(r), k)
        cj = rng.sample(range(n), k)
        if int_det([[rows[i][j] for j in cj] for i in ri]) not in (-1, 0, 1):
            return False
    return True


def camion_sign(B, max_tu: int | None = None) -> SignedMatrix:
    """
    Sign a binary matrix so that it becomes TU (if its matroid is regular).

    A spanning forest of the bipartite support graph gets +1. Every other
    nonzero closes a cycle with a shortest path through already signed entries;
    it gets the sign making that cycle sum to 0 mod 4. Edges are taken in order
    of shortest closing path so every closing cycle is chordless in the whole
    support graph.
    """
    rows = [[int(v) % 2 for v in row] for row in getattr(B, "rows", B)]
    r = len(rows)
    n = len(rows[0]) if rows else 0

    G = nx.Graph()
    G.add_nodes_from(("r", i) for i in range(r))
    G.add_nodes_from(("c", j) for j in range(n))
    nonzero = [(i, j) for i in range(r) for j in range(n) if rows[i][j]]
    G.add_edges_from((("r", i), ("c", j)) for i, j in nonzero)

    S = nx.Graph()
    S.add_nodes_from(G)
    sign: dict[tuple[int, int], int] = {}
    for comp in nx.connected_components(G):
        root = min(comp, key=lambda v: (v[0] != "r", v[1]))
        for u, v in nx.bfs_edges(G, root):
            i, j = (u[1], v[1]) if u[0] == "r" else (v[1], u[1])
            sign[(i, j)] = 1
            S.add_edge(u, v)

    pending = [e for e in nonzero if e not in sign]
    while pending:
        best = None
        for i, j in pending:
            path = nx.shortest_path(S, ("r", i), ("c", j))
            if best is None or len(path) < len(best[1]):
                best = ((i, j), path)
        (i, j), path = best
        total = 0
        for u, v in zip(path, path[1:]):
            a, b = (u[1], v[1]) if u[0] == "r" else (v[1], u[1])
            total += sign[(a, b)]
        sign[(i, j)] = 1 if (total + 1) % 4 == 0 else -1
        S.add_edge(("r", i), ("c", j))
        pending.remove((i, j))

    signed = SignedMatrix(
        tuple(tuple(sign.get((i, j), 0) for j in range(n)) for i in range(r)),
        getattr(B, "row_labels", ()),
        getattr(B, "col_labels", ()),
    )

    limit = guard(max_tu, "max_tu")
    if min(r, n) <= limit:
        ok = is_tu(signed, max_tu=limit)
    else:
        logger.warning("camion_sign: %dx%d beyond the TU guard, sampling minors", r, n)
        ok = sampled_tu(signed)
    if not ok:
        raise NotRegular("no signing is totally unimodular; the matroid is not regular")
    return signed


# ============================================================
# GRAM MATRICES AND STAR-MESH
# ============================================================
def weighted_gram(A: IntMatrix, z: Sequence) -> WeightedGram:
    r, n = A.shape
    if len(z) != n:
        raise LinalgError(f"{len(z)} weights for {n} columns")
    z = tuple(Fraction(v) for v in z)
    rows = A.rows
    L = tuple(
        tuple(sum((rows[i][j] * z[j] * rows[k][j] for j in range(n)), Fraction(0)) for k in range(r))
        for i in range(r)
    )
    return WeightedGram(L, A, z)


def star_mesh(A: IntMatrix, r: int = -1) -> StarMesh:
    """
    Eliminate row r. N1 = supp(A_r), N0 = the rest; columns of A' are N0 in
    order, then pairs (j, k) of N1 with j < k in lexicographic order, and

        A'[i, (j, k)] = A[i, j] - A[r, j] * A[r, k] * A[i, k].
    """
    nrows, n = A.shape
    if not -nrows <= r < nrows:
        raise LinalgError(f"row {r} out of range")
    r %= nrows
    top = A.rows[r]
    n1 = tuple(j for j in range(n) if top[j])
    if not n1:
        raise ZeroRow(f"row {r} is zero")
    n0 = tuple(j for j in range(n) if not top[j])
    pairs = tuple(combinations(n1, 2))

    out_rows = []
    for i, row in enumerate(A.rows):
        if i == r:
            continue
        new = [row[j] for j in n0]
        new += [row[j] - top[j] * top[k] * row[k] for j, k in pairs]
        out_rows.append(new)

    labels = A.col_labels
    col_labels = ()
    if labels:
        col_labels = tuple(labels[j] for j in n0) + tuple(f"{labels[j]}~{labels[k]}" for j, k in pairs)
    row_labels = tuple(lab for i, lab in enumerate(A.row_labels) if i != r) if A.row_labels else ()
    matrix = IntMatrix(tuple(out_rows), row_labels, col_labels)
    return StarMesh(matrix, n0 + pairs, n1, r, n0)


def merge_parallel_columns(A: IntMatrix, z: Sequence) -> tuple[IntMatrix, list[Rational]]:
    """
    Merge columns equal up to sign into the first of them, summing weights.
    Zero columns are dropped; they do not change A X Aᵀ.
    """
    r, n = A.shape
    keep: list[int] = []
    weight: dict[int, Rational] = {}
    seen: dict[tuple, int] = {}
    for j in range(n):
        col = A.column(j)
        if not any(col):
            continue
        lead = next(v for v in col if v)
        canon = tuple(v * lead for v in col)
        if canon in seen:
            weight[seen[canon]] += Fraction(z[j])
            continue
        seen[canon] = j
        weight[j] = Fraction(z[j])
        keep.append(j)
    labels = tuple(A.col_labels[j] for j in keep) if A.col_labels else ()
    rows = tuple(tuple(row[j] for j in keep) for row in A.rows)
    return IntMatrix(rows, A.row_labels, labels), [weight[j] for j in keep]


def incidence_matrix(G: nx.MultiGraph, drop: Hashable | None = None) -> SignedMatrix:
    """
    Oriented incidence matrix (edge u-v with u < v: +1 at u, -1 at v) with
    the row of ``drop`` (default: the smallest vertex) removed. Loops are zero
    columns.
    """
    verts = sorted(G.nodes, key=node_key)
    drop = verts[0] if drop is None else drop
    keep = [v for v in verts if v != drop]
    at = {v: i for i, v in enumerate(keep)}
    edges = list(G.edges(keys=True))
    rows = [[0] * len(edges) for _ in keep]
    for j, (u, v, _) in enumerate(edges):
        if u == v:
            continue
        lo, hi = (u, v) if node_key(u) <= node_key(v) else (v, u)
        if lo in at:
            rows[at[lo]][j] = 1
        if hi in at:
            rows[at[hi]][j] = -1
    return SignedMatrix(tuple(map(tuple, rows)), tuple(keep), tuple(k for _, _, k in edges))


__all__ = [
    "Rational",
    "IntMatrix",
    "SignedMatrix",
    "WeightedGram",
    "StarMesh",
    "det_exact",
    "int_det",
    "is_tu",
    "sampled_tu",
    "camion_sign",
    "weighted_gram",
    "star_mesh",
    "merge_parallel_columns",
    "incidence_matrix",
]
