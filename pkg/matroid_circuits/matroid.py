from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import networkx as nx

from . import gf2, guard
from .errors import (
    DisconnectedGraph,
    EmptyBasisSet,
    GroundTooLarge,
    MatroidError,
    NotACocircuit,
    NotBinary,
    UnknownElement,
)

logger = logging.getLogger(__name__)

Element = str
Subset = frozenset


# ============================================================
# BACKINGS
# ============================================================
@dataclass(frozen=True)
class BasisList:
    bases: frozenset


@dataclass(frozen=True)
class IndependenceOracle:
    predicate: Callable[[frozenset], bool]
    rank: int


@dataclass(frozen=True)
class BinaryRep:
    """r×n matrix over GF(2), full row rank, columns in ground order."""

    rows: tuple

    @classmethod
    def from_columns(cls, columns: Sequence[int], r: int) -> "BinaryRep":
        return cls(tuple(tuple(row) for row in gf2.columns_to_rows(columns, r)))

    @property
    def columns(self) -> list[int]:
        return gf2.rows_to_columns(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def support(self, row: int) -> list[int]:
        return [j for j, v in enumerate(self.rows[row]) if v]


@dataclass(frozen=True)
class GraphRep:
    # (label, u, v); parallel edges and loops allowed
    edges: tuple

    def graph(self) -> nx.MultiGraph:
        return edges_to_graph(self.edges)

    @property
    def vertices(self) -> list:
        seen = {}
        for _, u, v in self.edges:
            seen.setdefault(u, None)
            seen.setdefault(v, None)
        return list(seen)


def node_key(v: Hashable):
    """Sort key mixing ints and strings; ints first, numerically."""
    if isinstance(v, int):
        return (0, v, "")
    s = str(v)
    if s.lstrip("-").isdigit():
        return (0, int(s), s)
    return (1, 0, s)


def edges_to_graph(edges: Iterable[tuple]) -> nx.MultiGraph:
    G = nx.MultiGraph()
    for label, u, v in edges:
        G.add_edge(u, v, key=label)
    return G


def graph_to_edges(G: nx.Graph) -> tuple:
    if G.is_multigraph():
        return tuple((key, u, v) for u, v, key in G.edges(keys=True))
    # simple graphs: an explicit "label" attribute, else e<u><v>
    return tuple((data.get("label", f"e{u}{v}"), u, v) for u, v, data in G.edges(data=True))


# ============================================================
# MATROID
# ============================================================
class Matroid:
    """Immutable matroid over an ordered ground set with one backing."""

    __slots__ = ("ground", "rank", "backing", "name", "_index", "_bases", "_columns")

    def __init__(self, ground: Sequence[Element], rank: int, backing, name: str = ""):
        ground = tuple(ground)
        if len(set(ground)) != len(ground):
            raise MatroidError("duplicate labels in ground set")
        self.ground = ground
        self.rank = rank
        self.backing = backing
        self.name = name
        self._index = {e: i for i, e in enumerate(ground)}
        self._bases = None
        self._columns = backing.columns if isinstance(backing, BinaryRep) else None

    # ---------- constructors ----------
    @classmethod
    def from_bases(cls, ground: Sequence[Element], bases: Iterable[Iterable[Element]], name: str = "") -> "Matroid":
        bases = frozenset(frozenset(b) for b in bases)
        if not bases:
            raise EmptyBasisSet("a matroid needs at least one basis")
        sizes = {len(b) for b in bases}
        if len(sizes) != 1:
            raise MatroidError(f"bases of different sizes: {sorted(sizes)}")
        ground = tuple(ground)
        stray = set().union(*bases) - set(ground)
        if stray:
            raise UnknownElement(stray)
        return cls(ground, sizes.pop(), BasisList(bases), name)

    @classmethod
    def from_oracle(cls, ground: Sequence[Element], predicate: Callable[[frozenset], bool], rank: int, name: str = "") -> "Matroid":
        return cls(ground, rank, IndependenceOracle(predicate, rank), name)

    @classmethod
    def from_binary(cls, rows: Sequence[Sequence[int]], labels: Sequence[Element], name: str = "") -> "Matroid":
        """Column matroid of a 0/1 matrix; rows are reduced to full rank first."""
        rows = [[int(v) % 2 for v in row] for row in rows]
        if rows and len(rows[0]) != len(labels):
            raise MatroidError(f"{len(rows[0])} columns but {len(labels)} labels")
        return cls.from_columns(labels, gf2.rows_to_columns(rows), name)

    @classmethod
    def from_columns(cls, labels: Sequence[Element], columns: Sequence[int], name: str = "") -> "Matroid":
        basis_idx, coords = gf2.standard_form(list(columns))
        r = len(basis_idx)
        return cls(labels, r, BinaryRep.from_columns(coords, r), name)

    @classmethod
    def from_graph(cls, G, name: str = "") -> "Matroid":
        """Cycle matroid of a connected (multi)graph; edge keys are the labels."""
        edges = graph_to_edges(G) if isinstance(G, nx.Graph) else tuple(G)
        rep = GraphRep(edges)
        verts = rep.vertices
        if not verts:
            raise DisconnectedGraph("graph has no vertices")
        if not nx.is_connected(rep.graph()):
            raise DisconnectedGraph("graph is not connected")
        return cls([e[0] for e in edges], len(verts) - 1, rep, name)

    # ---------- element plumbing ----------
    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def columns(self) -> list[int] | None:
        return self._columns

    def mask(self, X: Iterable[Element]) -> int:
        m = 0
        unknown = []
        for e in X:
            i = self._index.get(e)
            if i is None:
                unknown.append(e)
            else:
                m |= 1 << i
        if unknown:
            raise UnknownElement(unknown)
        return m

    def labels(self, mask: int) -> frozenset:
        return frozenset(e for i, e in enumerate(self.ground) if (mask >> i) & 1)

    def ordered(self, X: Iterable[Element]) -> list[Element]:
        X = set(X)
        return [e for e in self.ground if e in X]

    # ---------- backing-specific primitives ----------
    def independent_mask(self, mask: int) -> bool:
        b = self.backing
        if isinstance(b, BasisList):
            return any(mask & ~bm == 0 for bm in self.basis_masks())
        if isinstance(b, BinaryRep):
            cols = self._columns
            return gf2.is_independent([cols[i] for i in _bits(mask)])
        if isinstance(b, GraphRep):
            return _forest_rank(b.edges, mask) == bin(mask).count("1")
        return bool(b.predicate(self.labels(mask)))

    def rank_mask(self, mask: int) -> int:
        b = self.backing
        if isinstance(b, BasisList):
            return max(bin(bm & mask).count("1") for bm in self.basis_masks())
        if isinstance(b, BinaryRep):
            cols = self._columns
            return gf2.rank(cols[i] for i in _bits(mask))
        if isinstance(b, GraphRep):
            return _forest_rank(b.edges, mask)
        # greedy is exact for matroids
        got = 0
        for i in _bits(mask):
            if self.independent_mask(got | (1 << i)):
                got |= 1 << i
        return bin(got).count("1")

    def basis_masks(self, max_n: int | None = None) -> tuple[int, ...]:
        if self._bases is not None:
            return self._bases
        b = self.backing
        if isinstance(b, BasisList):
            masks = tuple(sorted(self.mask(B) for B in b.bases))
        else:
            limit = guard(max_n, "max_enumerate")
            if self.n > limit:
                raise GroundTooLarge(self.n, limit)
            masks = tuple(
                sum(1 << i for i in combo)
                for combo in combinations(range(self.n), self.rank)
                if self.independent_mask(sum(1 << i for i in combo))
            )
            if not masks:
                raise EmptyBasisSet(f"{self.name or 'matroid'} has no bases")
        self._bases = masks
        return masks

    def __repr__(self) -> str:
        kind = type(self.backing).__name__
        return f"<Matroid {self.name or '?'} n={self.n} r={self.rank} {kind}>"


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _forest_rank(edges: Sequence[tuple], mask: int) -> int:
    """Size of a spanning forest of the selected edges."""
    forest = nx.utils.UnionFind()
    got = 0
    for i in _bits(mask):
        _, u, v = edges[i]
        if forest[u] != forest[v]:
            forest.union(u, v)
            got += 1
    return got


# ============================================================
# QUERIES
# ============================================================
def enumerate_bases(M: Matroid, max_n: int | None = None) -> set[frozenset]:
    limit = guard(max_n, "max_enumerate")
    if M.n > limit:
        raise GroundTooLarge(M.n, limit)
    return {M.labels(m) for m in M.basis_masks(max_n=limit)}


def rank_of(M: Matroid, X: Iterable[Element]) -> int:
    return M.rank_mask(M.mask(X))


def is_independent(M: Matroid, X: Iterable[Element]) -> bool:
    return M.independent_mask(M.mask(X))


def is_loop(M: Matroid, e: Element) -> bool:
    return rank_of(M, [e]) == 0


def is_coloop(M: Matroid, e: Element) -> bool:
    return M.rank_mask(M.full_mask & ~M.mask([e])) < M.rank


def is_circuit(M: Matroid, C: Iterable[Element]) -> bool:
    m = M.mask(C)
    if m == 0 or M.independent_mask(m):
        return False
    return all(M.independent_mask(m & ~(1 << i)) for i in _bits(m))


def is_cocircuit(M: Matroid, C: Iterable[Element]) -> bool:
    # C is a cocircuit iff E \ C is a hyperplane
    m = M.mask(C)
    if m == 0:
        return False
    rest = M.full_mask & ~m
    if M.rank_mask(rest) != M.rank - 1:
        return False
    return all(M.rank_mask(rest | (1 << i)) == M.rank for i in _bits(m))


def same_bases(M: Matroid, N: Matroid, max_n: int | None = None) -> bool:
    if set(M.ground) != set(N.ground) or M.rank != N.rank:
        return False
    return enumerate_bases(M, max_n) == enumerate_bases(N, max_n)


def check_basis_exchange(M: Matroid, max_n: int | None = None) -> bool:
    """Exhaustive basis-exchange axiom check."""
    limit = guard(max_n, "max_axiom")
    if M.n > limit:
        raise GroundTooLarge(M.n, limit, "axiom check")
    masks = M.basis_masks()
    table = set(masks)
    for b1 in masks:
        for b2 in masks:
            if b1 == b2:
                continue
            for i in _bits(b1 & ~b2):
                base = b1 & ~(1 << i)
                if not any(base | (1 << j) in table for j in _bits(b2 & ~b1)):
                    return False
    return True


def find_separation(M: Matroid, k: int, max_n: int | None = None) -> tuple[frozenset, frozenset] | None:
    """
    Exhaustive k-separation search, k in {1, 2}.

    Returns the partition whose smaller side is lexicographically first among
    the smallest sizes, or None.
    """
    if k not in (1, 2):
        raise MatroidError(f"k must be 1 or 2, got {k}")
    limit = guard(max_n, "max_separation")
    if M.n > limit:
        raise GroundTooLarge(M.n, limit, "separation search")

    full = M.full_mask
    for size in range(k, M.n // 2 + 1):
        for combo in combinations(range(M.n), size):
            x = sum(1 << i for i in combo)
            y = full & ~x
            if M.rank_mask(x) + M.rank_mask(y) - M.rank <= k - 1:
                logger.debug("%d-separation of %s at %s", k, M.name, combo)
                return M.labels(x), M.labels(y)
    return None


# ============================================================
# DUALITY AND MINORS
# ============================================================
def dual(M: Matroid) -> Matroid:
    name = M.name[:-1] if M.name.endswith("*") else (f"{M.name}*" if M.name else "")
    b = M.backing
    if isinstance(b, BasisList):
        bases = [frozenset(M.ground) - B for B in b.bases]
        return Matroid(M.ground, M.n - M.rank, BasisList(frozenset(bases)), name)
    if isinstance(b, BinaryRep):
        cols = gf2.dual_columns(M.columns)
        return Matroid(M.ground, M.n - M.rank, BinaryRep.from_columns(cols, M.n - M.rank), name)

    full = M.full_mask
    r = M.rank

    def predicate(X: frozenset) -> bool:
        return M.rank_mask(full & ~M.mask(X)) == r

    return Matroid(M.ground, M.n - r, IndependenceOracle(predicate, M.n - r), name)


def delete(M: Matroid, e: Element) -> Matroid:
    i = M.mask([e]).bit_length() - 1
    if is_coloop(M, e):
        raise EmptyBasisSet(f"deleting coloop {e} leaves no bases")
    ground = [x for x in M.ground if x != e]
    b = M.backing
    if isinstance(b, BinaryRep):
        cols = [c for j, c in enumerate(M.columns) if j != i]
        return Matroid(ground, M.rank, BinaryRep.from_columns(cols, M.rank), f"{M.name}\\{e}")
    if isinstance(b, GraphRep):
        return Matroid(ground, M.rank, GraphRep(tuple(x for x in b.edges if x[0] != e)), f"{M.name}\\{e}")
    bases = [B for B in enumerate_bases(M) if e not in B]
    return Matroid.from_bases(ground, bases, f"{M.name}\\{e}")


def contract(M: Matroid, e: Element) -> Matroid:
    i = M.mask([e]).bit_length() - 1
    if is_loop(M, e):
        raise EmptyBasisSet(f"contracting loop {e} leaves no bases")
    ground = [x for x in M.ground if x != e]
    b = M.backing
    if isinstance(b, BinaryRep):
        ce = M.columns[i]
        pivot = ce.bit_length() - 1
        low = (1 << pivot) - 1
        cols = []
        for j, c in enumerate(M.columns):
            if j == i:
                continue
            if (c >> pivot) & 1:
                c ^= ce
            cols.append((c & low) | ((c >> (pivot + 1)) << pivot))
        return Matroid(ground, M.rank - 1, BinaryRep.from_columns(cols, M.rank - 1), f"{M.name}/{e}")
    if isinstance(b, GraphRep):
        return Matroid(ground, M.rank - 1, GraphRep(contract_edge(b.edges, e)), f"{M.name}/{e}")
    bases = [B - {e} for B in enumerate_bases(M) if e in B]
    return Matroid.from_bases(ground, bases, f"{M.name}/{e}")


def contract_edge(edges: Sequence[tuple], label: Element) -> tuple:
    """Merge the endpoints of ``label``; edges between them become loops."""
    (u, v), = [(a, b) for lab, a, b in edges if lab == label]
    keep, drop = (u, v) if node_key(u) <= node_key(v) else (v, u)
    out = []
    for lab, a, b in edges:
        if lab == label:
            continue
        out.append((lab, keep if a == drop else a, keep if b == drop else b))
    return tuple(out)


def restrict(M: Matroid, X: Iterable[Element]) -> Matroid:
    X = M.ordered(X)
    m = M.mask(X)
    if isinstance(M.backing, BinaryRep):
        cols = [M.columns[M._index[e]] for e in X]
        return Matroid.from_columns(X, cols, f"{M.name}|")
    r = M.rank_mask(m)
    bases = {M.labels(bm & m) for bm in M.basis_masks() if bin(bm & m).count("1") == r}
    return Matroid.from_bases(X, bases, f"{M.name}|")


def relabel(M: Matroid, mapping: Mapping[Element, Element], name: str | None = None) -> Matroid:
    ground = [mapping.get(e, e) for e in M.ground]
    if len(set(ground)) != len(ground):
        raise MatroidError("relabeling is not injective")
    name = M.name if name is None else name
    b = M.backing
    if isinstance(b, BasisList):
        bases = frozenset(frozenset(mapping.get(e, e) for e in B) for B in b.bases)
        return Matroid(ground, M.rank, BasisList(bases), name)
    if isinstance(b, BinaryRep):
        return Matroid(ground, M.rank, b, name)
    if isinstance(b, GraphRep):
        return Matroid(ground, M.rank, GraphRep(tuple((mapping.get(l, l), u, v) for l, u, v in b.edges)), name)

    back = {mapping.get(e, e): e for e in M.ground}

    def predicate(X: frozenset) -> bool:
        return b.predicate(frozenset(back[x] for x in X))

    return Matroid(ground, M.rank, IndependenceOracle(predicate, M.rank), name)


def namespaced(M: Matroid, tag: str) -> Matroid:
    return relabel(M, {e: f"{tag}.{e}" for e in M.ground}, name=f"{tag}.{M.name}")


def as_binary(M: Matroid) -> Matroid:
    """Same matroid with a BinaryRep backing; NotBinary if none reproduces it."""
    if isinstance(M.backing, BinaryRep):
        return M
    B = M.labels(M.basis_masks()[0])
    rep = fundamental_rep(M, B)
    return Matroid(M.ground, M.rank, rep, M.name)


# ============================================================
# REPRESENTATIONS
# ============================================================
def fundamental_rep(M: Matroid, B: Iterable[Element], verify: bool = True) -> BinaryRep:
    """
    (I | C) from fundamental circuits: row t belongs to the t-th element of B
    (ground order); column e has a one in row t iff B - b_t + e is a basis.
    """
    order = M.ordered(B)
    bmask = M.mask(order)
    if len(order) != M.rank or not M.independent_mask(bmask):
        raise MatroidError("not a basis")
    pos = {e: t for t, e in enumerate(order)}
    cols = []
    for e in M.ground:
        if e in pos:
            cols.append(1 << pos[e])
            continue
        ei = 1 << M._index[e]
        col = 0
        for b, t in pos.items():
            if M.independent_mask((bmask & ~(1 << M._index[b])) | ei):
                col |= 1 << t
        cols.append(col)
    rep = BinaryRep.from_columns(cols, M.rank)
    if verify:
        candidate = Matroid(M.ground, M.rank, rep)
        if set(candidate.basis_masks()) != set(M.basis_masks()):
            raise NotBinary(f"{M.name or 'matroid'} is not binary")
    return rep


def rep_with_cocircuit_row(M: Matroid, D: Iterable[Element], verify: bool = True) -> BinaryRep:
    """
    Binary representation whose last row is supported exactly on the cocircuit D.

    Take d in D and a basis T of M avoiding D - d (so d in T, because E \\ D is a
    hyperplane); the fundamental-circuit representation w.r.t. T has row d
    supported on D. That row is moved last.
    """
    D = M.ordered(D)
    if not is_cocircuit(M, D):
        raise NotACocircuit(f"{{{', '.join(D)}}} is not a cocircuit")
    d = D[0]
    banned = M.mask(D[1:])
    got = 0
    for i in range(M.n):
        if (banned >> i) & 1:
            continue
        if M.independent_mask(got | (1 << i)):
            got |= 1 << i
    T = M.ordered(M.labels(got))
    rep = fundamental_rep(M, T, verify=verify)
    rows = list(rep.rows)
    t = T.index(d)
    rows.append(rows.pop(t))
    return BinaryRep(tuple(rows))


__all__ = [
    "Matroid",
    "BasisList",
    "IndependenceOracle",
    "BinaryRep",
    "GraphRep",
    "enumerate_bases",
    "rank_of",
    "is_independent",
    "is_loop",
    "is_coloop",
    "is_circuit",
    "is_cocircuit",
    "same_bases",
    "check_basis_exchange",
    "find_separation",
    "dual",
    "delete",
    "contract",
    "contract_edge",
    "restrict",
    "relabel",
    "namespaced",
    "as_binary",
    "fundamental_rep",
    "rep_with_cocircuit_row",
    "node_key",
    "edges_to_graph",
    "graph_to_edges",
]
