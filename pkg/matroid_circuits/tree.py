"""
Decomposition trees: declared recipes of leaves glued by 1-, 2-, Δ- and
Δ⁺-sums, plus the standard leaf matrices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence, Union

import networkx as nx

from .errors import BadInterface, EmptyBasisSet, SynthesisError
from .matroid import (
    Element,
    Matroid,
    contract,
    contract_edge,
    delete,
    dual,
    edges_to_graph,
    is_coloop,
    is_loop,
)
from .sums import delta_sum, delta_sum_plus, one_sum, triangle_ok, two_sum

logger = logging.getLogger(__name__)


# ============================================================
# STANDARD MATRICES
# ============================================================
A10 = (
    (1, 0, 0, 1, 1),
    (1, 1, 0, 0, 1),
    (0, 1, 1, 0, 1),
    (0, 0, 1, 1, 1),
    (1, 1, 1, 1, 1),
)

A12 = (
    (1, 0, 1, 1, 0, 0),
    (0, 1, 1, 1, 0, 0),
    (1, 0, 1, 0, 1, 1),
    (0, 1, 0, 1, 1, 1),
    (1, 0, 1, 0, 1, 0),
    (0, 1, 0, 1, 0, 1),
)

A7 = (
    (1, 0, 1, 1),
    (1, 1, 0, 1),
    (0, 1, 1, 1),
)

R10_LABELS = tuple(f"r{i}" for i in range(1, 11))
R12_LABELS = tuple(f"t{i}" for i in range(1, 13))
F7_LABELS = tuple(f"f{i}" for i in range(1, 8))


def with_identity(A: Sequence[Sequence[int]]) -> list[list[int]]:
    """(I | A)"""
    r = len(A)
    return [[int(i == j) for j in range(r)] + list(row) for i, row in enumerate(A)]


def r10_matroid(labels: Sequence[Element] = R10_LABELS) -> Matroid:
    return Matroid.from_binary(with_identity(A10), labels, "R10")


def r12_matroid(labels: Sequence[Element] = R12_LABELS) -> Matroid:
    return Matroid.from_binary(with_identity(A12), labels, "R12")


def f7_matroid(labels: Sequence[Element] = F7_LABELS) -> Matroid:
    return Matroid.from_binary(with_identity(A7), labels, "F7")


def complete_edges(l: int, labels: Sequence[Element] | None = None) -> tuple:
    """Edges of K_l on vertices 1..l in lexicographic order, labelled e<i><j> by default."""
    pairs = list(combinations(range(1, l + 1), 2))
    if labels is None:
        labels = [f"e{i}{j}" for i, j in pairs]
    if len(labels) != len(pairs):
        raise BadInterface(f"K{l} has {len(pairs)} edges, got {len(labels)} labels")
    return tuple((lab, i, j) for lab, (i, j) in zip(labels, pairs))


# ============================================================
# LEAVES
# ============================================================
@dataclass(frozen=True)
class GraphicLeaf:
    edges: tuple

    def matroid(self) -> Matroid:
        return Matroid.from_graph(self.edges, "M(G)")


@dataclass(frozen=True)
class CographicLeaf:
    edges: tuple

    def matroid(self) -> Matroid:
        return dual(Matroid.from_graph(self.edges, "M(G)"))


@dataclass(frozen=True)
class R10Leaf:
    labels: tuple = R10_LABELS

    def matroid(self) -> Matroid:
        return r10_matroid(self.labels)


@dataclass(frozen=True)
class F7Leaf:
    labels: tuple = F7_LABELS

    def matroid(self) -> Matroid:
        return f7_matroid(self.labels)


@dataclass(frozen=True)
class ExplicitLeaf:
    explicit: Matroid
    # where it was read from, for format_tree
    source: str = field(default="", compare=False)

    def matroid(self) -> Matroid:
        return self.explicit


@dataclass(frozen=True)
class UnitLeaf:
    """Rank 0: every label is a loop and the polynomial is the constant 1."""

    labels: tuple = ()

    def matroid(self) -> Matroid:
        return Matroid.from_bases(self.labels, [frozenset()], "U0")


Leaf = Union[GraphicLeaf, CographicLeaf, R10Leaf, F7Leaf, ExplicitLeaf, UnitLeaf]


# ============================================================
# NODES
# ============================================================
@dataclass(frozen=True)
class OneSum:
    left: "Tree"
    right: "Tree"


@dataclass(frozen=True)
class TwoSum:
    left: "Tree"
    right: "Tree"
    glue: Element


@dataclass(frozen=True)
class DeltaSum:
    left: "Tree"
    right: "Tree"
    triangle: tuple


@dataclass(frozen=True)
class DeltaSumPlus:
    left: "Tree"
    right: "Tree"
    triangle: tuple


@dataclass(frozen=True)
class DualNode:
    child: "Tree"


Tree = Union[Leaf, OneSum, TwoSum, DeltaSum, DeltaSumPlus, DualNode]
LEAVES = (GraphicLeaf, CographicLeaf, R10Leaf, F7Leaf, ExplicitLeaf, UnitLeaf)


# ============================================================
# QUERIES
# ============================================================
def ground_of(tree: Tree) -> tuple:
    if isinstance(tree, (GraphicLeaf, CographicLeaf)):
        return tuple(lab for lab, _, _ in tree.edges)
    if isinstance(tree, (R10Leaf, F7Leaf, UnitLeaf)):
        return tuple(tree.labels)
    if isinstance(tree, ExplicitLeaf):
        return tree.explicit.ground
    if isinstance(tree, DualNode):
        return ground_of(tree.child)
    left, right = ground_of(tree.left), ground_of(tree.right)
    if isinstance(tree, OneSum):
        return left + right
    if isinstance(tree, TwoSum):
        return tuple(e for e in left + right if e != tree.glue)
    D = set(tree.triangle)
    if isinstance(tree, DeltaSum):
        return tuple(e for e in left + right if e not in D)
    return left + tuple(e for e in right if e not in D)


def recompose(tree: Tree) -> Matroid:
    """The matroid the tree describes, built with the basis-level sums."""
    if isinstance(tree, LEAVES):
        return tree.matroid()
    if isinstance(tree, DualNode):
        return dual(recompose(tree.child))
    M1, M2 = recompose(tree.left), recompose(tree.right)
    if isinstance(tree, OneSum):
        return one_sum(M1, M2)
    if isinstance(tree, TwoSum):
        return two_sum(M1, M2, tree.glue)
    if isinstance(tree, DeltaSum):
        return delta_sum(M1, M2, tree.triangle)
    return delta_sum_plus(M1, M2, tree.triangle)


def validate_tree(tree: Tree) -> None:
    """Interface checks at every node; BadInterface on the first violation."""
    if isinstance(tree, LEAVES):
        ground = ground_of(tree)
        if len(set(ground)) != len(ground):
            raise BadInterface(f"duplicate labels in leaf {type(tree).__name__}")
        return
    if isinstance(tree, DualNode):
        validate_tree(tree.child)
        return

    validate_tree(tree.left)
    validate_tree(tree.right)
    shared = set(ground_of(tree.left)) & set(ground_of(tree.right))
    if isinstance(tree, OneSum):
        expected = set()
    elif isinstance(tree, TwoSum):
        expected = {tree.glue}
    else:
        expected = set(tree.triangle)
    if shared != expected:
        raise BadInterface(
            f"{type(tree).__name__}: children share {sorted(shared)}, expected {sorted(expected)}"
        )

    if isinstance(tree, TwoSum):
        for child in (tree.left, tree.right):
            M = recompose(child)
            if is_loop(M, tree.glue) or is_coloop(M, tree.glue):
                raise BadInterface(f"glue {tree.glue} is a loop or coloop of a child")
    elif isinstance(tree, (DeltaSum, DeltaSumPlus)):
        if len(expected) != 3:
            raise BadInterface("a triangle needs three distinct elements")
        for child in (tree.left, tree.right):
            if not triangle_ok(recompose(child), tree.triangle):
                raise BadInterface(f"{{{', '.join(tree.triangle)}}} is not a cocircuit-free triangle of a child")


def tree_rank(tree: Tree) -> int:
    if isinstance(tree, (GraphicLeaf, CographicLeaf)):
        G = edges_to_graph(tree.edges)
        forest = G.number_of_nodes() - nx.number_connected_components(G)
        return forest if isinstance(tree, GraphicLeaf) else len(tree.edges) - forest
    if isinstance(tree, UnitLeaf):
        return 0
    if isinstance(tree, LEAVES):
        return tree.matroid().rank
    if isinstance(tree, DualNode):
        return len(ground_of(tree)) - tree_rank(tree.child)
    r = tree_rank(tree.left) + tree_rank(tree.right)
    if isinstance(tree, OneSum):
        return r
    if isinstance(tree, TwoSum):
        return r - 1
    return r - 2


def count_nodes(tree: Tree) -> int:
    if isinstance(tree, LEAVES):
        return 1
    if isinstance(tree, DualNode):
        return 1 + count_nodes(tree.child)
    return 1 + count_nodes(tree.left) + count_nodes(tree.right)


# ============================================================
# MINORS
# ============================================================
def _leaf_or_unit(M: Matroid, leaf: Tree) -> Tree:
    return UnitLeaf(M.ground) if M.rank == 0 else leaf


def _graph_minor(edges: tuple, e: Element, contract_it: bool) -> tuple:
    if contract_it:
        return contract_edge(edges, e)
    return tuple(x for x in edges if x[0] != e)


def minor_tree(tree: Tree, e: Element, contract_it: bool) -> Tree:
    """
    Tree for M/e (``contract_it``) or M\\e, pushed down to the piece that
    holds e. Rank-0 results become UnitLeaf.
    """
    ground = ground_of(tree)
    if e not in ground:
        raise BadInterface(f"{e} is not an element of the tree")

    if isinstance(tree, GraphicLeaf):
        M = tree.matroid()
        minor = contract(M, e) if contract_it else delete(M, e)
        return _leaf_or_unit(minor, GraphicLeaf(_graph_minor(tree.edges, e, contract_it)))
    if isinstance(tree, CographicLeaf):
        M = tree.matroid()
        minor = contract(M, e) if contract_it else delete(M, e)
        # (M*)/e = (M\e)* and (M*)\e = (M/e)*
        return _leaf_or_unit(minor, CographicLeaf(_graph_minor(tree.edges, e, not contract_it)))
    if isinstance(tree, LEAVES):
        M = tree.matroid()
        if isinstance(tree, UnitLeaf) and contract_it:
            raise EmptyBasisSet(f"contracting loop {e} leaves no bases")
        minor = contract(M, e) if contract_it else delete(M, e)
        return _leaf_or_unit(minor, ExplicitLeaf(minor))
    if isinstance(tree, DualNode):
        return DualNode(minor_tree(tree.child, e, not contract_it))

    if isinstance(tree, DeltaSumPlus) and e in tree.triangle:
        raise SynthesisError(f"cannot take a minor on the shared triangle element {e}")
    side = "left" if e in ground_of(tree.left) else "right"
    child = minor_tree(getattr(tree, side), e, contract_it)
    if side == "left":
        return type(tree)(child, tree.right, *_extra(tree))
    return type(tree)(tree.left, child, *_extra(tree))


def _extra(tree: Tree) -> tuple:
    if isinstance(tree, TwoSum):
        return (tree.glue,)
    if isinstance(tree, (DeltaSum, DeltaSumPlus)):
        return (tree.triangle,)
    return ()


__all__ = [
    "A10",
    "A12",
    "A7",
    "R10_LABELS",
    "R12_LABELS",
    "F7_LABELS",
    "with_identity",
    "r10_matroid",
    "r12_matroid",
    "f7_matroid",
    "complete_edges",
    "GraphicLeaf",
    "CographicLeaf",
    "R10Leaf",
    "F7Leaf",
    "ExplicitLeaf",
    "UnitLeaf",
    "OneSum",
    "TwoSum",
    "DeltaSum",
    "DeltaSumPlus",
    "DualNode",
    "Tree",
    "LEAVES",
    "ground_of",
    "recompose",
    "validate_tree",
    "tree_rank",
    "count_nodes",
    "minor_tree",
]
