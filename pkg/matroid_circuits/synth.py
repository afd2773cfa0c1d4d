"""
The compiler: decomposition tree -> subtraction-free circuit for the basis
generating polynomial, within an n³ gate budget.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

import networkx as nx

from .circuit import Circuit, CircuitBuilder, dual_wrap, eliminate_zero, naive_from_bases, substitute
from .errors import (
    BudgetExceeded,
    DisconnectedGraph,
    MissingTriangle,
    NotThreeConnected,
    SynthesisError,
    VariableClash,
)
from .matroid import Matroid, enumerate_bases, find_separation, graph_to_edges, node_key
from .tree import (
    CographicLeaf,
    DeltaSum,
    DeltaSumPlus,
    DualNode,
    ExplicitLeaf,
    F7Leaf,
    GraphicLeaf,
    OneSum,
    R10Leaf,
    Tree,
    TwoSum,
    UnitLeaf,
    ground_of,
    minor_tree,
    tree_rank,
    validate_tree,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LedgerEntry:
    path: str
    rule: str
    n: int
    added: int
    size: int
    bound: int

    def line(self) -> str:
        return f"{self.path} {self.rule} n={self.n} added={self.added} size={self.size} bound={self.bound}"


@dataclass(frozen=True)
class SynthesisReport:
    circuit: Circuit
    size: int
    bound: int
    ledger: tuple[LedgerEntry, ...]
    variables: Mapping[str, str] = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [f"size={self.size} bound={self.bound}"]
        out += [f"  {entry.line()}" for entry in self.ledger]
        return out


# ============================================================
# STAR-MESH ON GRAPHS
# ============================================================
class _Elimination:
    """
    Edge weights of a shrinking graph held as gate ids (None = formal zero).
    Parallel edges are merged on entry and loops dropped.
    """

    def __init__(self, b: CircuitBuilder, edges: Sequence[tuple], weight: Mapping[str, int | None]):
        self.b = b
        self.w: dict[tuple, int | None] = {}
        self.vertices: set = set()
        for label, u, v in edges:
            self.vertices.update((u, v))
            if u == v:
                continue
            key = self.key(u, v)
            g = weight[label]
            old = self.w.get(key)
            if key not in self.w or old is None:
                self.w[key] = g
            elif g is not None:
                self.w[key] = b.add(old, g)

    @staticmethod
    def key(u, v) -> tuple:
        return (u, v) if node_key(u) <= node_key(v) else (v, u)

    def neighbours(self, v) -> list:
        out = []
        for (a, c), g in self.w.items():
            if g is None:
                continue
            if a == v:
                out.append(c)
            elif c == v:
                out.append(a)
        return sorted(out, key=node_key)

    def pick(self, keep: set):
        """Fewest live neighbours first, then the highest vertex."""
        candidates = [v for v in self.vertices if v not in keep]
        degree = {v: len(self.neighbours(v)) for v in candidates}
        low = min(degree.values())
        return max((v for v in candidates if degree[v] == low), key=node_key)

    def eliminate(self, v) -> int:
        b = self.b
        nbrs = self.neighbours(v)
        if not nbrs:
            raise DisconnectedGraph(f"vertex {v} has no edges left")
        z = {u: self.w[self.key(u, v)] for u in nbrs}
        y = b.chain("add", [z[u] for u in nbrs])
        for u, x in combinations(nbrs, 2):
            q = b.div(b.mul(z[u], z[x]), y)
            k = self.key(u, x)
            old = self.w.get(k)
            self.w[k] = q if old is None else b.add(old, q)
        for k in [k for k in self.w if v in k]:
            del self.w[k]
        self.vertices.discard(v)
        return y


def star_mesh_step_bound(live: int) -> int:
    """Gates one vertex elimination may add while `live` vertices remain, its y factor included."""
    return (live - 2) + 3 * (live - 1) * (live - 2) // 2 + 1


def _multiply_up(b: CircuitBuilder, ys: Sequence[int], inner: int) -> int:
    acc = inner
    for y in reversed(ys):
        acc = b.mul(y, acc)
    return acc


def _as_edges(G) -> tuple:
    return graph_to_edges(G) if isinstance(G, nx.Graph) else tuple(G)


def _graphic_circuit(edges: tuple) -> Circuit | None:
    """None when the graph has a single vertex (polynomial 1)."""
    Matroid.from_graph(edges)
    b = CircuitBuilder(Circuit)
    weight = {label: b.input(label) for label, _, _ in edges}
    el = _Elimination(b, edges, weight)
    if len(el.vertices) == 1:
        return None
    ys = []
    while len(el.vertices) > 2:
        v = el.pick(set())
        before = b.size
        ys.append(el.eliminate(v))
        logger.debug("eliminated vertex %s: %d gates", v, b.size - before)
    (w,) = [g for g in el.w.values() if g is not None]
    return b.build(_multiply_up(b, ys, w))


# ============================================================
# COMPOSITION RULES
# ============================================================
def compose_one_sum(c1: Circuit | None, c2: Circuit | None) -> Circuit | None:
    if c1 is None or c2 is None:
        return c2 if c1 is None else c1
    shared = set(c1.variables) & set(c2.variables)
    if shared:
        raise VariableClash(shared)
    b = CircuitBuilder(Circuit)
    return b.build(b.mul(b.splice(c1), b.splice(c2)))


def compose_two_sum(c_M1: Circuit | None, c_del: Circuit | None, c_con: Circuit | None, d: str) -> Circuit | None:
    """
    f_M1(d -> f_del / f_con) · f_con, with f_con shared by the ratio and the
    final product. A unit f_con drops both gates. When f_M1 does not see d,
    c_del is not needed and may be None.
    """
    if c_M1 is None:
        return c_con
    other = {v for sub in (c_del, c_con) if sub is not None for v in sub.variables}
    shared = (set(c_M1.variables) - {d}) & other
    if shared:
        raise VariableClash(shared)

    if d not in c_M1.variables:
        # d is a loop of M1, so f_M1 does not see the ratio
        return compose_one_sum(c_M1, c_con)
    if c_del is None:
        raise SynthesisError(f"deleting {d} left the constant polynomial")
    if c_con is None:
        return substitute(c_M1, {d: c_del})

    b = CircuitBuilder(Circuit)
    con = b.splice(c_con)
    ratio = b.div(b.splice(c_del), con)
    out = b.splice(c_M1, {d: ratio})
    return b.build(b.mul(out, con))


def _triangle_vertices(edges: tuple, D: Sequence[str]) -> dict:
    at = {label: (u, v) for label, u, v in edges}
    missing = [d for d in D if d not in at]
    if missing:
        raise MissingTriangle(f"triangle element(s) {', '.join(missing)} not in the graph")
    ends = [at[d] for d in D]
    verts = {x for e in ends for x in e}
    if len(verts) != 3 or any(u == v for u, v in ends) or len({frozenset(e) for e in ends}) != 3:
        raise MissingTriangle(f"{{{', '.join(D)}}} does not form a triangle")
    return {d: at[d] for d in D}


def _check_three_connected(edges: tuple) -> None:
    G = nx.MultiGraph()
    for label, u, v in edges:
        G.add_edge(u, v, key=label)
    if min(d for _, d in G.degree()) < 3:
        raise NotThreeConnected("a vertex has degree below 3")
    if find_separation(Matroid.from_graph(edges), 2) is not None:
        raise NotThreeConnected("the graph has a 2-separation")


def eliminate_delta_graphic(
    c_M1: Circuit,
    G2,
    triangle: Sequence[str],
    plus: bool = False,
    strict: bool = True,
    steps: list | None = None,
) -> Circuit:
    """
    Eliminate every vertex of G2 off the triangle by star-mesh steps, then
    plug the accumulated triangle weights into c_M1 at the triangle labels and
    multiply by the eliminated y's. Triangle edges start at zero for a Δ-sum
    and at their own variables for a Δ⁺-sum. When `steps` is given, one
    (vertex, live vertex count, gates added) triple is appended per step; the
    count includes the y factor multiplied in at the end.
    """
    edges = _as_edges(G2)
    D = tuple(triangle)
    ends = _triangle_vertices(edges, D)
    if strict:
        _check_three_connected(edges)
    else:
        Matroid.from_graph(edges)

    b = CircuitBuilder(Circuit)
    weight = {}
    for label, _, _ in edges:
        if label in D and not plus:
            weight[label] = None
        else:
            weight[label] = b.input(label)
    el = _Elimination(b, edges, weight)
    keep = {x for e in ends.values() for x in e}
    ys = []
    while el.vertices - keep:
        v = el.pick(keep)
        live, before = len(el.vertices), b.size
        ys.append(el.eliminate(v))
        if steps is not None:
            steps.append((v, live, b.size - before + 1))
        logger.debug("Δ elimination: vertex %s", v)

    expr = {d: el.w.get(el.key(*ends[d])) for d in D}
    zeroed = [d for d in D if expr[d] is None]
    inner = eliminate_zero(c_M1, zeroed) if zeroed else c_M1
    out = b.splice(inner, {d: g for d, g in expr.items() if g is not None})
    return b.build(_multiply_up(b, ys, out))


def synth_graphic(G) -> SynthesisReport:
    edges = _as_edges(G)
    c = _graphic_circuit(edges)
    if c is None:
        raise SynthesisError("a single vertex has the constant polynomial 1")
    n = len(edges)
    entry = LedgerEntry("root", "graphic", n, c.size, c.size, n**3 // 2)
    _check_budget(entry)
    return SynthesisReport(c, c.size, entry.bound, (entry,), {e: e for e, _, _ in edges})


def _cographic_circuit(edges: tuple) -> Circuit | None:
    ground = [label for label, _, _ in edges]
    rank = len(edges) - (len({x for _, u, v in edges for x in (u, v)}) - 1)
    if rank == 0:
        return None
    inner = _graphic_circuit(edges)
    if inner is None or len(ground) == 1:
        # every element is a coloop of the dual: the product of all variables
        b = CircuitBuilder(Circuit)
        return b.build(b.chain("mul", [b.input(e) for e in ground]))
    return dual_wrap(inner, ground)


def synth_cographic(G) -> SynthesisReport:
    edges = _as_edges(G)
    c = _cographic_circuit(edges)
    if c is None:
        raise SynthesisError("the dual of a tree is all loops: constant polynomial 1")
    n = len(edges)
    entry = LedgerEntry("root", "cographic", n, c.size, c.size, n**3)
    _check_budget(entry)
    return SynthesisReport(c, c.size, n**3, (entry,), {e: e for e, _, _ in edges})


# ============================================================
# TREE WALK
# ============================================================
def _check_budget(entry: LedgerEntry) -> None:
    if entry.size > entry.bound:
        raise BudgetExceeded(f"{entry.path}: size {entry.size} exceeds {entry.bound} ({entry.rule})")


class _Synth:
    def __init__(self, strict: bool):
        self.strict = strict
        self.ledger: list[LedgerEntry] = []

    def note(self, path: str, rule: str, tree: Tree, c: Circuit | None, added: int, graphic: bool = False) -> None:
        n = len(ground_of(tree))
        bound = n**3 // 2 if graphic else n**3
        entry = LedgerEntry(path, rule, n, added, c.size if c is not None else 0, bound)
        _check_budget(entry)
        logger.info("synth %s", entry.line())
        self.ledger.append(entry)

    def run(self, tree: Tree, path: str) -> Circuit | None:
        if isinstance(tree, UnitLeaf):
            self.note(path, "unit", tree, None, 0)
            return None
        if isinstance(tree, GraphicLeaf):
            c = _graphic_circuit(tree.edges)
            self.note(path, "graphic", tree, c, c.size if c else 0, graphic=True)
            return c
        if isinstance(tree, CographicLeaf):
            c = _cographic_circuit(tree.edges)
            self.note(path, "cographic", tree, c, c.size if c else 0)
            return c
        if isinstance(tree, (R10Leaf, F7Leaf, ExplicitLeaf)):
            M = tree.matroid()
            c = None if M.rank == 0 else naive_from_bases(enumerate_bases(M), M.ground)
            self.note(path, "naive", tree, c, c.size if c else 0)
            return c
        if isinstance(tree, DualNode):
            return self.dual_node(tree, path)
        if isinstance(tree, OneSum):
            c1 = self.run(tree.left, f"{path}.L")
            c2 = self.run(tree.right, f"{path}.R")
            c = compose_one_sum(c1, c2)
            self.note(path, "1sum", tree, c, _added(c, c1, c2))
            return c
        if isinstance(tree, TwoSum):
            return self.two_sum(tree, path)
        return self.delta_sum(tree, path)

    def dual_node(self, tree: DualNode, path: str) -> Circuit | None:
        ground = list(ground_of(tree))
        n = len(ground)
        if tree_rank(tree.child) == n:
            # the dual is all loops: constant 1, and the child circuit is never used
            self.note(path, "dual", tree, None, 0)
            return None
        c_child = self.run(tree.child, f"{path}.*")
        if c_child is None:
            b = CircuitBuilder(Circuit)
            c = b.build(b.chain("mul", [b.input(e) for e in ground]))
        else:
            c = dual_wrap(c_child, ground)
        self.note(path, "dual", tree, c, _added(c, c_child))
        return c

    def two_sum(self, tree: TwoSum, path: str) -> Circuit | None:
        d = tree.glue
        # M2 (the side minored twice) is the smaller one, the right on a tie
        plans = [("L", tree.left, "R", tree.right), ("R", tree.right, "L", tree.left)]
        if len(ground_of(tree.left)) < len(ground_of(tree.right)):
            plans.reverse()
        last_error = None
        for tag1, M1, tag2, M2 in plans:
            try:
                del_tree = minor_tree(M2, d, False)
                con_tree = minor_tree(M2, d, True)
            except SynthesisError as exc:
                last_error = exc
                continue
            c1 = self.run(M1, f"{path}.{tag1}")
            inner = _Synth(strict=False)
            c_del = None
            if c1 is not None and d in c1.variables:
                c_del = inner.run(del_tree, f"{path}.{tag2}\\{d}")
            c_con = inner.run(con_tree, f"{path}.{tag2}/{d}")
            self.ledger.extend(inner.ledger)
            c = compose_two_sum(c1, c_del, c_con, d)
            self.note(path, "2sum", tree, c, _added(c, c1, c_del, c_con))
            return c
        raise last_error

    def delta_sum(self, tree: DeltaSum | DeltaSumPlus, path: str) -> Circuit:
        plus = isinstance(tree, DeltaSumPlus)
        if isinstance(tree.right, GraphicLeaf):
            M1, G2, tag = tree.left, tree.right, "L"
        elif isinstance(tree.left, GraphicLeaf) and not plus:
            M1, G2, tag = tree.right, tree.left, "R"
        else:
            raise SynthesisError("a Δ-sum needs a graphic leaf on the eliminated side")
        c1 = self.run(M1, f"{path}.{tag}")
        if c1 is None:
            raise SynthesisError("the non-graphic side of a Δ-sum has rank 0")
        steps: list = []
        c = eliminate_delta_graphic(c1, G2.edges, tree.triangle, plus=plus, strict=self.strict, steps=steps)
        n2 = len(G2.edges)
        if sum(gates for _, _, gates in steps) > n2**3 // 2:
            raise BudgetExceeded(f"{path}: star-mesh steps exceed {n2**3 // 2} for {n2} graphic elements")
        for v, live, gates in steps:
            # breakdown of the Δ-sum entry below, not counted towards the size
            entry = LedgerEntry(f"{path}.v{v}", "star-mesh", live, gates, gates, star_mesh_step_bound(live))
            _check_budget(entry)
            logger.debug("synth %s", entry.line())
            self.ledger.append(entry)
        self.note(path, "dsum+" if plus else "dsum", tree, c, c.size - c1.size)
        return c


def _added(c: Circuit | None, *children: Circuit | None) -> int:
    total = c.size if c is not None else 0
    return total - sum(ch.size for ch in children if ch is not None)


def synth(tree: Tree, validate: bool = True) -> SynthesisReport:
    if validate:
        validate_tree(tree)
    s = _Synth(strict=True)
    c = s.run(tree, "root")
    if c is None:
        raise SynthesisError("rank-0 matroid: the polynomial is the constant 1")
    n = len(ground_of(tree))
    ground = ground_of(tree)
    return SynthesisReport(c, c.size, n**3, tuple(s.ledger), {e: e for e in ground})


__all__ = [
    "LedgerEntry",
    "SynthesisReport",
    "synth",
    "synth_graphic",
    "synth_cographic",
    "compose_one_sum",
    "compose_two_sum",
    "eliminate_delta_graphic",
    "star_mesh_step_bound",
]
