"""
Brute-force ground truth: basis polynomial values, greedy optimization,
spanning-tree counts and randomized identity testing of circuits.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import networkx as nx

from . import guard
from .circuit import Circuit, eval_rational
from .errors import DisconnectedGraph, DivisionByZero, GroundTooLarge
from .linalg import det_exact, incidence_matrix, weighted_gram
from .matroid import Matroid, edges_to_graph, enumerate_bases

logger = logging.getLogger(__name__)

# numerators and denominators of random points
POINT_RANGE = 10**4
MAX_TREE_VERTICES = 8


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class TestPoint:
    __test__ = False

    assignment: Mapping[str, Fraction]
    seed: int | None = None

    def __getitem__(self, var: str) -> Fraction:
        return self.assignment[var]

    def describe(self) -> str:
        return ",".join(f"{v}:{format_rational(x)}" for v, x in self.assignment.items())


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    trials: int
    seed: int | None
    point: TestPoint | None = None
    expected: Fraction | str | None = None
    got: Fraction | str | None = None
    notes: tuple[str, ...] = field(default=())

    def report_line(self) -> str:
        if self.passed:
            return f"PASS {self.name} trials={self.trials} seed={self.seed}"
        point = self.point.describe() if self.point is not None else "-"
        expected, got = _show(self.expected), _show(self.got)
        line = f"FAIL {self.name} point={point} expected={expected} got={got}"
        if self.seed is not None:
            line += f" seed={self.seed}"
        return line


def _show(value) -> str:
    if value is None:
        return "-"
    return value if isinstance(value, str) else format_rational(value)


def _values(p) -> Mapping[str, object]:
    return p.assignment if isinstance(p, TestPoint) else p


# ============================================================
# BASIS POLYNOMIAL
# ============================================================
def brute_bgp_eval(M: Matroid, p, max_n: int | None = None) -> Fraction:
    """Σ_B Π_{e∈B} p_e over the enumerated bases."""
    values = _values(p)
    x = {e: Fraction(values[e]) for e in M.ground}
    total = Fraction(0)
    for B in enumerate_bases(M, max_n):
        term = Fraction(1)
        for e in B:
            term *= x[e]
        total += term
    return total


def greedy_max_basis(M: Matroid, w: Mapping[str, object]) -> tuple[frozenset, Fraction]:
    """Heaviest element first, kept if still independent; ties in ground order."""
    order = sorted(range(M.n), key=lambda i: (-Fraction(w[M.ground[i]]), i))
    got = 0
    for i in order:
        if M.independent_mask(got | (1 << i)):
            got |= 1 << i
    B = M.labels(got)
    return B, sum((Fraction(w[e]) for e in B), Fraction(0))


def brute_max_weight(M: Matroid, w: Mapping[str, object]) -> Fraction:
    return max(sum((Fraction(w[e]) for e in B), Fraction(0)) for B in enumerate_bases(M))


# ============================================================
# SPANNING TREES
# ============================================================
def _graph(G) -> nx.MultiGraph:
    if isinstance(G, nx.MultiGraph):
        return G
    if isinstance(G, nx.Graph):
        return nx.MultiGraph(G)
    return edges_to_graph(G)


def kirchhoff_count(G) -> int:
    """det of the reduced Laplacian, as A·Aᵀ of the reduced incidence matrix."""
    H = _graph(G)
    if H.number_of_nodes() == 0 or not nx.is_connected(H):
        raise DisconnectedGraph("spanning trees need a connected graph")
    if H.number_of_nodes() == 1:
        return 1
    A = incidence_matrix(H)
    gram = weighted_gram(A, [1] * A.shape[1])
    return int(det_exact(gram.L))


def enumerate_spanning_trees(G) -> int:
    H = _graph(G)
    nv = H.number_of_nodes()
    if nv > MAX_TREE_VERTICES:
        raise GroundTooLarge(nv, MAX_TREE_VERTICES, "spanning-tree enumeration")
    edges = [(u, v) for u, v, _ in H.edges(keys=True) if u != v]
    count = 0
    for subset in combinations(edges, nv - 1):
        forest = nx.utils.UnionFind()
        for u, v in subset:
            if forest[u] == forest[v]:
                break
            forest.union(u, v)
        else:
            count += 1
    return count


# ============================================================
# RANDOM POINTS
# ============================================================
def random_point(variables: Sequence[str], rng: random.Random, seed: int | None = None) -> TestPoint:
    """Strictly positive p/q with 1 <= p, q <= 10^4."""
    values = {v: Fraction(rng.randint(1, POINT_RANGE), rng.randint(1, POINT_RANGE)) for v in variables}
    return TestPoint(values, seed)


def random_weights(variables: Sequence[str], rng: random.Random, low: int = -50, high: int = 50) -> dict[str, int]:
    return {v: rng.randint(low, high) for v in variables}


def identity_test(
    C: Circuit,
    M: Matroid,
    trials: int | None = None,
    seed: int | None = None,
    name: str = "identity",
) -> Verdict:
    """
    eval_rational(C) against the basis polynomial of M at ``trials`` seeded
    positive points. Trials run one after another from a single
    random.Random(seed), so a seed replays the same points in the same order.
    The first disagreement or division by zero fails.
    """
    trials = guard(trials, "trials")
    seed = guard(seed, "seed")
    bases = [tuple(B) for B in enumerate_bases(M)]
    rng = random.Random(seed)
    variables = list(dict.fromkeys(list(M.ground) + list(C.variables)))

    for t in range(trials):
        p = random_point(variables, rng, seed)
        expected = Fraction(0)
        for B in bases:
            term = Fraction(1)
            for e in B:
                term *= p[e]
            expected += term
        try:
            got = eval_rational(C, p.assignment)
        except DivisionByZero as exc:
            logger.warning("%s: %s at trial %d (seed %s)", name, exc, t, seed)
            return Verdict(name, False, t + 1, seed, p, expected, f"DivisionByZero(g{exc.gate})")
        if got != expected:
            logger.warning("%s: mismatch at trial %d (seed %s)", name, t, seed)
            return Verdict(name, False, t + 1, seed, p, expected, got)

    logger.info("%s: %d trials passed", name, trials)
    return Verdict(name, True, trials, seed)


def ones(variables: Iterable[str]) -> dict[str, int]:
    return {v: 1 for v in variables}


__all__ = [
    "POINT_RANGE",
    "format_rational",
    "TestPoint",
    "Verdict",
    "brute_bgp_eval",
    "greedy_max_basis",
    "brute_max_weight",
    "kirchhoff_count",
    "enumerate_spanning_trees",
    "random_point",
    "random_weights",
    "identity_test",
    "ones",
]
