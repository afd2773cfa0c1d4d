"""
Desk-scale recognition: graph witnesses, isomorphism against the fixed leaves
and the exhaustive decomposition of small binary matroids into trees.
"""

from __future__ import annotations

import logging
from itertools import combinations, count, permutations

import networkx as nx

from . import guard
from .errors import BadInterface, GroundTooLarge, NotBinary, NotDecomposable
from .matroid import (
    Matroid,
    as_binary,
    dual,
    enumerate_bases,
    find_separation,
    fundamental_rep,
    is_loop,
    relabel,
    restrict,
    same_bases,
)
from .sums import delta_split, delta_sum, triangle_ok, two_split
from .tree import (
    F7_LABELS,
    R10_LABELS,
    CographicLeaf,
    DeltaSum,
    DualNode,
    F7Leaf,
    GraphicLeaf,
    OneSum,
    R10Leaf,
    Tree,
    TwoSum,
    f7_matroid,
    r10_matroid,
    recompose,
)

logger = logging.getLogger(__name__)


def _fundamental_sets(M: Matroid, B: list) -> dict:
    """Non-basis element -> indices (into B) of its fundamental circuit."""
    rep = fundamental_rep(M, B, verify=False)
    cols = rep.columns
    out = {}
    for j, e in enumerate(M.ground):
        if e not in B:
            out[e] = frozenset(t for t in range(len(B)) if (cols[j] >> t) & 1)
    return out


# ============================================================
# GRAPHICNESS
# ============================================================
def find_graph_witness(M: Matroid) -> tuple | None:
    """
    Edge list (label, u, v) of a graph whose cycle matroid is M, or None.

    Search: a basis B becomes a spanning tree; every tree shape on r+1
    vertices is tried, with B assigned to its edges so that each fundamental
    circuit lands on a path. Candidates are confirmed by comparing bases.
    """
    B = M.ordered(M.labels(M.basis_masks()[0]))
    r = len(B)
    fund = _fundamental_sets(M, B)

    if r == 0:
        return tuple((e, 1, 1) for e in M.ground)

    touching = [[e for e, S in fund.items() if t in S] for t in range(r)]
    for shape in nx.nonisomorphic_trees(r + 1):
        tree_edges = [(u + 1, v + 1) for u, v in shape.edges()]
        found = _assign(M, B, fund, touching, tree_edges)
        if found is not None:
            logger.debug("graph witness for %s on %d vertices", M.name, r + 1)
            return found
    return None


def _assign(M, B, fund, touching, tree_edges):
    r = len(B)
    chosen: list = [None] * r
    used = [False] * len(tree_edges)
    deg = {e: {} for e in fund}

    def place(t: int, edge, step: int) -> bool:
        ok = True
        for e in touching[t]:
            d = deg[e]
            for v in edge:
                d[v] = d.get(v, 0) + step
                if d[v] > 2:
                    ok = False
        return ok

    def build():
        edges = [(b, *chosen[t]) for t, b in enumerate(B)]
        for e, S in fund.items():
            if not S:
                edges.append((e, 1, 1))
                continue
            d = deg[e]
            if len([v for v, k in d.items() if k]) != len(S) + 1:
                return None
            ends = [v for v, k in d.items() if k == 1]
            edges.append((e, *ends))
        order = {e: i for i, e in enumerate(M.ground)}
        edges.sort(key=lambda x: order[x[0]])
        G = Matroid.from_graph(tuple(edges))
        return tuple(edges) if same_bases(G, M) else None

    def search(t: int):
        if t == r:
            return build()
        for k, edge in enumerate(tree_edges):
            if used[k]:
                continue
            used[k] = True
            chosen[t] = edge
            if place(t, edge, 1):
                got = search(t + 1)
                if got is not None:
                    return got
            place(t, edge, -1)
            used[k] = False
        chosen[t] = None
        return None

    return search(0)


# ============================================================
# ISOMORPHISM AGAINST FIXED LEAVES
# ============================================================
def find_isomorphism(M: Matroid, N: Matroid) -> dict | None:
    """
    Label map M -> N carrying bases to bases, for binary M and N.

    A basis of M is matched against every basis of N under every bijection;
    the fundamental circuits then have to correspond one to one.
    """
    if M.n != N.n or M.rank != N.rank:
        return None
    if len(enumerate_bases(M)) != len(enumerate_bases(N)):
        return None
    B = M.ordered(M.labels(M.basis_masks()[0]))
    fund_m = _fundamental_sets(M, B)

    for bm in N.basis_masks():
        B2 = N.ordered(N.labels(bm))
        fund_n = _fundamental_sets(N, B2)
        by_set: dict = {}
        for e, S in fund_n.items():
            by_set.setdefault(S, []).append(e)
        for perm in permutations(range(len(B2))):
            mapping = {B[t]: B2[perm[t]] for t in range(len(B))}
            pool = {S: list(es) for S, es in by_set.items()}
            for e, S in fund_m.items():
                image = frozenset(perm[t] for t in S)
                bucket = pool.get(image)
                if not bucket:
                    break
                mapping[e] = bucket.pop()
            else:
                if same_bases(relabel(M, mapping), N):
                    return mapping
    return None


# ============================================================
# AUTO DECOMPOSITION
# ============================================================
class _Names:
    def __init__(self, taken):
        self.taken = set(taken)
        self.counter = count(1)

    def fresh(self, prefix: str) -> str:
        while True:
            name = f"{prefix}{next(self.counter)}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def _match_leaf(M: Matroid) -> Tree | None:
    edges = find_graph_witness(M)
    if edges is not None:
        return GraphicLeaf(edges)
    edges = find_graph_witness(dual(M))
    if edges is not None:
        return CographicLeaf(edges)
    if M.n == 10:
        iso = find_isomorphism(r10_matroid(), M)
        if iso is not None:
            return R10Leaf(tuple(iso[l] for l in R10_LABELS))
    if M.n == 7:
        iso = find_isomorphism(f7_matroid(), M)
        if iso is not None:
            return F7Leaf(tuple(iso[l] for l in F7_LABELS))
    return None


def _delta_search(M: Matroid, names: _Names) -> Tree | None:
    full = M.full_mask
    for size in range(4, M.n - 3):
        for combo in combinations(range(M.n), size):
            x = sum(1 << i for i in combo)
            if M.rank_mask(x) + M.rank_mask(full & ~x) - M.rank != 2:
                continue
            X = M.labels(x)
            D = tuple(f"__d{i}" for i in range(3))
            try:
                P1, P2 = delta_split(M, X, D)
            except BadInterface:
                continue
            for rest, glued in ((P1, P2), (P2, P1)):
                if not (triangle_ok(rest, D) and triangle_ok(glued, D)):
                    continue
                if find_separation(glued, 2) is not None:
                    continue
                edges = find_graph_witness(glued)
                if edges is None:
                    continue
                if not same_bases(delta_sum(rest, glued, D), M):
                    continue
                tri = tuple(names.fresh("d") for _ in range(3))
                ren = dict(zip(D, tri))
                logger.debug("Δ-split of %s at %s", M.name, sorted(X))
                graphic = GraphicLeaf(tuple((ren.get(l, l), u, v) for l, u, v in edges))
                return DeltaSum(_decompose(relabel(rest, ren), names), graphic, tri)
    return None


def _decompose(M: Matroid, names: _Names) -> Tree:
    sep = find_separation(M, 1)
    if sep is not None:
        X, Y = sep
        return OneSum(_decompose(restrict(M, X), names), _decompose(restrict(M, Y), names))

    sep = find_separation(M, 2)
    if sep is not None:
        g = names.fresh("g")
        M1, M2 = two_split(M, sep[0], g)
        return TwoSum(_decompose(M1, names), _decompose(M2, names), g)

    leaf = _match_leaf(M)
    if leaf is not None:
        return leaf

    found = _delta_search(M, names)
    if found is not None:
        return found
    found = _delta_search(dual(M), names)
    if found is not None:
        return DualNode(found)
    raise NotDecomposable(f"no 1-, 2- or Δ-decomposition found for {M.name or 'matroid'} (n={M.n})")


def auto_decompose(M: Matroid, max_n: int | None = None) -> Tree:
    limit = guard(max_n, "max_auto")
    if M.n > limit:
        raise GroundTooLarge(M.n, limit, "auto decomposition")
    loops = [e for e in M.ground if is_loop(M, e)]
    if loops:
        raise NotDecomposable(f"loops are not supported: {', '.join(loops)}")
    try:
        B = as_binary(M)
    except NotBinary as exc:
        raise NotDecomposable(str(exc)) from exc

    tree = _decompose(B, _Names(M.ground))
    if not same_bases(recompose(tree), M):
        raise NotDecomposable("decomposition does not recompose to the input")
    return tree


__all__ = ["find_graph_witness", "find_isomorphism", "auto_decompose"]
