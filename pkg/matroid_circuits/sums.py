"""1-, 2-, Δ- and Δ⁺-sums, Δ-Y exchanges, and splitting binary matroids
along exact 2- and 3-separations."""

from __future__ import annotations

import logging
from itertools import combinations
from typing import Sequence

from . import gf2
from .errors import BadInterface, BadTriangle
from .matroid import (
    Element,
    Matroid,
    as_binary,
    dual,
    enumerate_bases,
    is_circuit,
    is_cocircuit,
    is_coloop,
    is_loop,
)

logger = logging.getLogger(__name__)


def _ground(*parts: Sequence[Element], drop=()) -> list[Element]:
    seen: dict[Element, None] = {}
    for part in parts:
        for e in part:
            if e not in drop:
                seen.setdefault(e, None)
    return list(seen)


def _interface(M1: Matroid, M2: Matroid, expected: set, what: str) -> None:
    shared = set(M1.ground) & set(M2.ground)
    if shared != expected:
        got = ", ".join(sorted(shared)) or "nothing"
        want = ", ".join(sorted(expected)) or "nothing"
        raise BadInterface(f"{what}: operands share {{{got}}}, expected {{{want}}}")


def triangle_ok(M: Matroid, D: Sequence[Element]) -> bool:
    """D is a circuit of M and contains no cocircuit of M."""
    if len(set(D)) != 3 or not is_circuit(M, D):
        return False
    return not any(is_cocircuit(M, S) for k in (1, 2, 3) for S in combinations(D, k))


# ============================================================
# SUMS
# ============================================================
def one_sum(M1: Matroid, M2: Matroid) -> Matroid:
    _interface(M1, M2, set(), "1-sum")
    bases = {B1 | B2 for B1 in enumerate_bases(M1) for B2 in enumerate_bases(M2)}
    return Matroid.from_bases(_ground(M1.ground, M2.ground), bases, f"({M1.name}+{M2.name})")


def two_sum(M1: Matroid, M2: Matroid, d: Element) -> Matroid:
    _interface(M1, M2, {d}, "2-sum")
    for M in (M1, M2):
        if is_loop(M, d) or is_coloop(M, d):
            raise BadInterface(f"2-sum: {d} is a loop or coloop of {M.name or 'an operand'}")
    bases = set()
    for B1 in enumerate_bases(M1):
        for B2 in enumerate_bases(M2):
            # d in exactly one side
            if (d in B1) != (d in B2):
                bases.add((B1 | B2) - {d})
    return Matroid.from_bases(_ground(M1.ground, M2.ground, drop={d}), bases, f"({M1.name}+2{M2.name})")


def _check_delta_interface(M1: Matroid, M2: Matroid, D: Sequence[Element], what: str) -> None:
    if len(D) != 3 or len(set(D)) != 3:
        raise BadInterface(f"{what}: triangle needs three distinct elements")
    _interface(M1, M2, set(D), what)
    for M in (M1, M2):
        if not triangle_ok(M, D):
            raise BadInterface(f"{what}: {{{', '.join(D)}}} is not a cocircuit-free triangle of {M.name or 'an operand'}")


def _delta_bases(M1: Matroid, M2: Matroid, D: Sequence[Element]) -> set[frozenset]:
    Dset = frozenset(D)
    bases1 = enumerate_bases(M1)
    bases2 = enumerate_bases(M2)
    out = set()
    for B1 in bases1:
        in1 = B1 & Dset
        for B2 in bases2:
            if B1 & B2:
                continue
            in2 = B2 & Dset
            if len(in1) == 0 and len(in2) == 2:
                ok = True
            elif len(in1) == 2 and len(in2) == 0:
                ok = True
            elif len(in1) == 1 and len(in2) == 1:
                (di,), (dj,) = in1, in2
                rest1 = Dset - {dj}   # D - d_j contains d_i
                rest2 = Dset - {di}
                ok = (B1 ^ rest1) in bases1 and (B2 ^ rest2) in bases2
            else:
                ok = False
            if ok:
                out.add((B1 | B2) - Dset)
    return out


def delta_sum(M1: Matroid, M2: Matroid, D: Sequence[Element]) -> Matroid:
    D = tuple(D)
    _check_delta_interface(M1, M2, D, "Δ-sum")
    bases = _delta_bases(M1, M2, D)
    return Matroid.from_bases(_ground(M1.ground, M2.ground, drop=set(D)), bases, f"({M1.name}+Δ{M2.name})")


def _fresh(label: Element, taken: set) -> Element:
    out = f"{label}'"
    while out in taken:
        out += "'"
    return out


def parallel_extension(M: Matroid, D: Sequence[Element], avoid: Sequence[Element] = ()) -> tuple[Matroid, dict]:
    """Add a parallel copy of every element of D; returns (M⁺, d -> copy)."""
    taken = set(M.ground) | set(avoid)
    copies = {}
    for d in D:
        copies[d] = _fresh(d, taken)
        taken.add(copies[d])

    bases = set()
    for B in enumerate_bases(M):
        hit = [d for d in D if d in B]
        for k in range(len(hit) + 1):
            for swap in combinations(hit, k):
                bases.add((B - set(swap)) | {copies[d] for d in swap})
    ground = list(M.ground) + [copies[d] for d in D]
    return Matroid.from_bases(ground, bases, f"{M.name}+"), copies


def delta_sum_plus(M1: Matroid, M2: Matroid, D: Sequence[Element]) -> Matroid:
    """
    M1⁺ ⊕Δ M2. The parallel copies survive the sum and take over the labels
    of D, so the ground set is E(M1) ∪ (E(M2) - D).
    """
    D = tuple(D)
    _check_delta_interface(M1, M2, D, "Δ⁺-sum")
    plus, copies = parallel_extension(M1, D, avoid=M2.ground)
    back = {c: d for d, c in copies.items()}
    bases = {frozenset(back.get(e, e) for e in B) for B in _delta_bases(plus, M2, D)}
    return Matroid.from_bases(_ground(M1.ground, M2.ground), bases, f"({M1.name}+Δ+{M2.name})")


# ============================================================
# Δ-Y / Y-Δ
# ============================================================
def delta_y_exchange(M: Matroid, D: Sequence[Element]) -> Matroid:
    """
    Y_D(M): B' is a basis iff
      B' ∩ D = {d_i} and B' - d_i is a basis, or
      |B' ∩ D| = 2 and B' △ D is a basis, or
      D ⊆ B' and B' - d_i is a basis for some i.
    """
    D = tuple(D)
    if not triangle_ok(M, D):
        raise BadTriangle(f"{{{', '.join(map(str, D))}}} is not a triangle free of cocircuits")
    Dset = frozenset(D)
    bases = set()
    for B in enumerate_bases(M):
        hit = B & Dset
        if len(hit) == 0:
            bases.update(B | {d} for d in D)
        elif len(hit) == 1:
            bases.add(B ^ Dset)
        else:
            bases.add(B | Dset)
    return Matroid.from_bases(M.ground, bases, f"Y({M.name})")


def y_delta_exchange(M: Matroid, D: Sequence[Element]) -> Matroid:
    return dual(delta_y_exchange(dual(M), D))


# ============================================================
# SPLITTING BINARY MATROIDS
# ============================================================
def _split_columns(M: Matroid, X) -> tuple[list, list, list, list, set]:
    B = as_binary(M)
    X = set(X)
    xs = [e for e in B.ground if e in X]
    ys = [e for e in B.ground if e not in X]
    idx = {e: i for i, e in enumerate(B.ground)}
    xc = [B.columns[idx[e]] for e in xs]
    yc = [B.columns[idx[e]] for e in ys]
    shared = (gf2.span(xc) & gf2.span(yc)) - {0}
    return xs, ys, xc, yc, shared


def two_split(M: Matroid, X, glue: Element) -> tuple[Matroid, Matroid]:
    """Parts of an exact 2-separation (X, E \\ X): M = M1 ⊕₂ M2 on ``glue``."""
    xs, ys, xc, yc, shared = _split_columns(M, X)
    if len(shared) != 1:
        raise BadInterface(f"not an exact 2-separation (shared span has {len(shared)} nonzero vectors)")
    (w,) = shared
    M1 = Matroid.from_columns(xs + [glue], xc + [w], f"{M.name}[0]")
    M2 = Matroid.from_columns(ys + [glue], yc + [w], f"{M.name}[1]")
    return M1, M2


def delta_split(M: Matroid, X, triangle: Sequence[Element]) -> tuple[Matroid, Matroid]:
    """
    Parts of an exact 3-separation (X, E \\ X) of a binary matroid.

    span(X) ∩ span(E \\ X) is a plane; its three nonzero vectors form the
    triangle both parts are glued along.
    """
    xs, ys, xc, yc, shared = _split_columns(M, X)
    if len(shared) != 3:
        raise BadInterface(f"not an exact 3-separation (shared span has {len(shared)} nonzero vectors)")
    tri = sorted(shared)
    M1 = Matroid.from_columns(xs + list(triangle), xc + tri, f"{M.name}[0]")
    M2 = Matroid.from_columns(ys + list(triangle), yc + tri, f"{M.name}[1]")
    return M1, M2


__all__ = [
    "one_sum",
    "two_sum",
    "delta_sum",
    "delta_sum_plus",
    "parallel_extension",
    "delta_y_exchange",
    "y_delta_exchange",
    "triangle_ok",
    "two_split",
    "delta_split",
]
