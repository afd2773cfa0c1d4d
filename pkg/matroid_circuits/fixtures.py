"""
Named fixture matroids and decomposition trees used by the suites, the
tests and ``gen``.
"""

from __future__ import annotations

import logging
import random
import re
from dataclasses import dataclass
from functools import lru_cache

from .decompose import find_graph_witness
from .errors import UnknownFixture
from .matroid import Matroid, dual
from .sums import delta_split
from .tree import (
    CographicLeaf,
    DeltaSum,
    DualNode,
    F7Leaf,
    GraphicLeaf,
    OneSum,
    R10Leaf,
    Tree,
    TwoSum,
    complete_edges,
    f7_matroid,
    r10_matroid,
    r12_matroid,
    recompose,
)

logger = logging.getLogger(__name__)

R12_SPLIT = ("t1", "t2", "t7", "t8", "t9", "t10")
R12_TRIANGLE = ("d1", "d2", "d3")


@dataclass(frozen=True)
class Fixture:
    name: str
    matroid: Matroid
    tree: Tree | None = None


# ============================================================
# GRAPHS
# ============================================================
def complete_graph(l: int, labels=None) -> tuple:
    return complete_edges(l, labels)


def wheel_edges() -> tuple:
    """Hub 5 over the rim 1-2-3-4-1, labelled like K5 (e<i><j>)."""
    return tuple(e for e in complete_edges(5) if e[0] not in ("e13", "e24"))


def k4_dsum_k4() -> DeltaSum:
    # triangle p, q, r sits on vertices 1, 2, 3 of both copies
    left = complete_edges(4, ["p", "q", "a1", "r", "a2", "a3"])
    right = complete_edges(4, ["p", "q", "b1", "r", "b2", "b3"])
    return DeltaSum(GraphicLeaf(left), GraphicLeaf(right), ("p", "q", "r"))


def c4_two_sum() -> TwoSum:
    return TwoSum(
        GraphicLeaf(complete_edges(3, ["a", "b", "d"])),
        GraphicLeaf(complete_edges(3, ["d", "c", "e"])),
        "d",
    )


@lru_cache(maxsize=None)
def r12_tree() -> DeltaSum:
    """R12 split at its 3-separation into a cographic and a graphic part."""
    parts = delta_split(r12_matroid(), R12_SPLIT, R12_TRIANGLE)
    graphic = cographic = None
    for part in parts:
        edges = find_graph_witness(part)
        if edges is not None:
            graphic = GraphicLeaf(edges)
            continue
        edges = find_graph_witness(dual(part))
        if edges is not None:
            cographic = CographicLeaf(edges)
    if graphic is None or cographic is None:
        raise UnknownFixture("R12 split does not give a graphic and a cographic part")
    return DeltaSum(cographic, graphic, R12_TRIANGLE)


# ============================================================
# RANDOM COMPOSITES
# ============================================================
_BLOCKS = ("K3", "K4", "coK4")


def _block(kind: str, labels: list[str]) -> Tree:
    if kind == "K3":
        return GraphicLeaf(complete_edges(3, labels))
    edges = complete_edges(4, labels)
    return GraphicLeaf(edges) if kind == "K4" else CographicLeaf(edges)


def random_composite(seed: int, blocks: int = 3) -> Tree:
    """
    Two or three small blocks chained by 1- or 2-sums. The glue of step k
    sits in blocks k-1 and k; a block is sometimes wrapped in a dual node.
    """
    rng = random.Random(seed)
    count = rng.randint(2, blocks)
    kinds = [rng.choice(_BLOCKS) for _ in range(count)]
    ops = [rng.choice(("1sum", "2sum")) for _ in range(count - 1)]

    labels = []
    for i, kind in enumerate(kinds):
        size = 3 if kind == "K3" else 6
        labels.append([f"s{seed}b{i}e{j}" for j in range(size)])
    taken = [set() for _ in kinds]
    for k, op in enumerate(ops, start=1):
        if op != "2sum":
            continue
        glue = f"s{seed}g{k}"
        for i in (k - 1, k):
            j = rng.choice([j for j in range(len(labels[i])) if j not in taken[i]])
            taken[i].add(j)
            labels[i][j] = glue

    trees: list[Tree] = []
    for kind, labs in zip(kinds, labels):
        t = _block(kind, labs)
        if rng.random() < 0.25:
            t = DualNode(t)
        trees.append(t)

    tree = trees[0]
    for k, op in enumerate(ops, start=1):
        if op == "1sum":
            tree = OneSum(tree, trees[k])
        else:
            tree = TwoSum(tree, trees[k], f"s{seed}g{k}")
    logger.debug("random composite %d: %s joined by %s", seed, kinds, ops)
    return tree


# ============================================================
# REGISTRY
# ============================================================
def _tree_fixture(name: str, tree: Tree) -> Fixture:
    return Fixture(name, recompose(tree), tree)


def _named(name: str) -> Fixture:
    m = re.fullmatch(r"k([3-7])-(graphic|cographic)", name)
    if m:
        edges = complete_graph(int(m.group(1)))
        leaf = GraphicLeaf(edges) if m.group(2) == "graphic" else CographicLeaf(edges)
        return Fixture(name, leaf.matroid(), leaf)
    m = re.fullmatch(r"random-composite-(\d+)", name)
    if m:
        return _tree_fixture(name, random_composite(int(m.group(1))))
    if name == "r10":
        return Fixture(name, r10_matroid(), R10Leaf())
    if name == "f7":
        return Fixture(name, f7_matroid(), F7Leaf())
    if name == "r12":
        return Fixture(name, r12_matroid(), r12_tree())
    if name == "c4-2sum":
        return _tree_fixture(name, c4_two_sum())
    if name == "k4-dsum-k4":
        return _tree_fixture(name, k4_dsum_k4())
    if name == "wheel":
        leaf = GraphicLeaf(wheel_edges())
        return Fixture(name, leaf.matroid(), leaf)
    raise UnknownFixture(f"unknown fixture {name!r}; try one of: {', '.join(fixture_names())}")


def load_fixture(name: str) -> Fixture:
    return _named(name.strip().lower())


def fixture_names(seed: int = 1) -> list[str]:
    names = [f"k{l}-{kind}" for kind in ("graphic", "cographic") for l in range(3, 8)]
    names += ["r10", "r12", "f7", "c4-2sum", "k4-dsum-k4", "wheel", f"random-composite-{seed}"]
    return names


def suite_fixtures(seed: int) -> list[Fixture]:
    """Everything the identity, size and tropical suites run over."""
    names = [f"k{l}-{kind}" for kind in ("graphic", "cographic") for l in range(3, 7)]
    names += ["r10", "f7", "c4-2sum", "k4-dsum-k4", "r12"]
    names += [f"random-composite-{seed + i}" for i in range(3)]
    return [load_fixture(name) for name in names]


__all__ = [
    "Fixture",
    "complete_graph",
    "wheel_edges",
    "k4_dsum_k4",
    "c4_two_sum",
    "r12_tree",
    "random_composite",
    "load_fixture",
    "fixture_names",
    "suite_fixtures",
]
