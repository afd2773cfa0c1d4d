"""
Acceptance suites. Each check returns Verdicts; the manifest records which
operations a check exercises so that ``all`` can assert full coverage.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Callable

from . import guard
from .circuit import (
    CircuitBuilder,
    eliminate_zero,
    eval_rational,
    eval_tropical,
    expand_symbolic,
    forward,
    lower_to_relu,
    naive_from_bases,
    substitute,
    tropical_normal_form,
    tropicalize,
)
from .decompose import auto_decompose
from .errors import MatroidCircuitError, NotRegular
from .fixtures import Fixture, c4_two_sum, complete_graph, k4_dsum_k4, load_fixture, suite_fixtures, wheel_edges
from .linalg import IntMatrix, camion_sign, det_exact, is_tu, star_mesh, weighted_gram
from .matroid import (
    Matroid,
    as_binary,
    contract,
    delete,
    dual,
    enumerate_bases,
    find_separation,
    is_circuit,
    is_cocircuit,
    rank_of,
    relabel,
    rep_with_cocircuit_row,
    same_bases,
)
from .oracles import (
    TestPoint,
    Verdict,
    brute_bgp_eval,
    enumerate_spanning_trees,
    greedy_max_basis,
    identity_test,
    kirchhoff_count,
    ones,
    random_point,
    random_weights,
)
from .sums import delta_sum, delta_sum_plus, delta_y_exchange, one_sum, two_sum
from .synth import (
    compose_one_sum,
    compose_two_sum,
    eliminate_delta_graphic,
    star_mesh_step_bound,
    synth,
    synth_cographic,
    synth_graphic,
)
from .tree import recompose

logger = logging.getLogger(__name__)

IDENTITY_TRIALS = 50
TROPICAL_POINTS = 100
STAR_MESH_INSTANCES = 100
DUAL_POINTS = 10
NORMAL_FORM_POINTS = 20


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[int, int | None], list[Verdict]]
    covers: tuple[str, ...]


def _verdict(name: str, ok: bool, seed: int, trials: int = 1, expected=None, got=None) -> Verdict:
    if ok:
        return Verdict(name, True, trials, seed)
    return Verdict(name, False, trials, seed, None, expected, got)


def _shown(value):
    if value is None or isinstance(value, (int, Fraction, str)):
        return value
    return str(value)


def _pass_or_fail(name: str, seed: int, trials: int, body: Callable[[], tuple]) -> Verdict:
    """Run body() -> (ok, expected, got); library errors become FAILs."""
    try:
        ok, expected, got = body()
    except MatroidCircuitError as exc:
        logger.warning("%s raised %s", name, exc)
        return Verdict(name, False, trials, seed, None, None, f"{type(exc).__name__}({exc})")
    return _verdict(name, ok, seed, trials, _shown(expected), _shown(got))


def _synth_fixture(fx: Fixture):
    return synth(fx.tree)


# ============================================================
# CORE
# ============================================================
def check_r10_golden(seed: int, trials: int | None) -> list[Verdict]:
    def body():
        M = load_fixture("r10").matroid
        C = naive_from_bases(enumerate_bases(M), M.ground)
        value = eval_rational(C, ones(M.ground))
        return C.size == 809 and value == 162, "809/162", f"{C.size}/{value}"

    return [_pass_or_fail("r10-golden", seed, 1, body)]


def check_graphic(seed: int, trials: int | None) -> list[Verdict]:
    out = []
    for l in range(3, 8):
        def body(l=l):
            edges = complete_graph(l)
            report = synth_graphic(edges)
            value = eval_rational(report.circuit, ones(e for e, _, _ in edges))
            n = len(edges)
            want = l ** (l - 2)
            ok = (
                value == want
                and kirchhoff_count(edges) == want
                and enumerate_spanning_trees(edges) == want
                and report.size <= n**3 // 2
            )
            return ok, want, value

        out.append(_pass_or_fail(f"graphic-K{l}", seed, 1, body))
    return out


def check_identity(seed: int, trials: int | None) -> list[Verdict]:
    trials = trials or IDENTITY_TRIALS
    out = []
    for fx in suite_fixtures(seed):
        try:
            report = _synth_fixture(fx)
        except MatroidCircuitError as exc:
            out.append(Verdict(f"identity-{fx.name}", False, 0, seed, None, None, f"{type(exc).__name__}({exc})"))
            continue
        out.append(identity_test(report.circuit, fx.matroid, trials, seed, f"identity-{fx.name}"))
    return out


# most gates a composition rule may add on its own
_RULE_ADDED = {"1sum": 1, "2sum": 2}


def check_size_bound(seed: int, trials: int | None) -> list[Verdict]:
    out = []
    for fx in suite_fixtures(seed):
        def body(fx=fx):
            report = _synth_fixture(fx)
            n = fx.matroid.n
            problems = []
            if report.size > n**3:
                problems.append(f"size {report.size} > {n**3}")
            counted = [e for e in report.ledger if e.rule != "star-mesh"]
            if sum(e.added for e in counted) != report.size:
                problems.append("ledger does not sum to the size")
            for e in report.ledger:
                if e.size > e.bound:
                    problems.append(f"{e.path} over budget")
                if not 0 <= e.added <= _RULE_ADDED.get(e.rule, e.bound):
                    problems.append(f"{e.path} {e.rule} added {e.added}")
                if e.rule == "dual" and e.added > 2 * e.n:
                    problems.append(f"{e.path} dual added {e.added} > {2 * e.n}")
                if e.rule == "star-mesh" and e.added > star_mesh_step_bound(e.n):
                    problems.append(f"{e.path} star-mesh step added {e.added}")
            return not problems, f"size<={n**3}", "; ".join(problems) or report.size

        out.append(_pass_or_fail(f"size-{fx.name}", seed, 1, body))
    return out


def check_auto(seed: int, trials: int | None) -> list[Verdict]:
    out = []
    c4 = recompose(c4_two_sum())
    plain = Matroid.from_bases(c4.ground, enumerate_bases(c4), "C4")
    for name, M in (("c4", plain), ("f7", load_fixture("f7").matroid), ("r10", load_fixture("r10").matroid)):
        def body(M=M):
            tree = auto_decompose(M)
            report = synth(tree)
            value = eval_rational(report.circuit, ones(M.ground))
            want = len(enumerate_bases(M))
            return same_bases(recompose(tree), M) and value == want, want, value

        out.append(_pass_or_fail(f"auto-{name}", seed, 1, body))
    return out


def check_compose(seed: int, trials: int | None) -> list[Verdict]:
    """Composition rules on their documented goldens."""
    out = []

    def one():
        k3 = synth_graphic(complete_graph(3, ["a", "b", "c"])).circuit
        k3b = synth_graphic(complete_graph(3, ["u", "v", "w"])).circuit
        C = compose_one_sum(k3, k3b)
        return C.size == 11 and eval_rational(C, ones(C.variables)) == 9, "11/9", f"{C.size}/{eval_rational(C, ones(C.variables))}"

    def two():
        c1 = synth_graphic(complete_graph(3, ["a", "b", "d"])).circuit
        c_del = synth_graphic((("c", 1, 3), ("e", 2, 3))).circuit
        c_con = synth_graphic((("c", 1, 3), ("e", 1, 3))).circuit
        C = compose_two_sum(c1, c_del, c_con, "d")
        value = eval_rational(C, {"a": 1, "b": 1, "c": 2, "e": 3})
        size_ok = C.size == c1.size + c_del.size + c_con.size + 2
        return value == 17 and size_ok, 17, value

    def delta():
        tree = k4_dsum_k4()
        c1 = synth_graphic(tree.left.edges).circuit
        C = eliminate_delta_graphic(c1, tree.right.edges, tree.triangle)
        M = recompose(tree)
        p = random_point(M.ground, random.Random(seed), seed)
        return eval_rational(C, p.assignment) == brute_bgp_eval(M, p), brute_bgp_eval(M, p), eval_rational(C, p.assignment)

    def wheel():
        K5 = synth_graphic(complete_graph(5)).circuit
        C = eliminate_zero(K5, ["e13", "e24"])
        want = kirchhoff_count(wheel_edges())
        return eval_rational(C, ones(C.variables)) == want == 45, 45, eval_rational(C, ones(C.variables))

    def cographic():
        C = synth_cographic(complete_graph(3, ["a", "b", "c"])).circuit
        return eval_rational(C, {"a": 1, "b": 2, "c": 3}) == 6, 6, eval_rational(C, {"a": 1, "b": 2, "c": 3})

    def subst():
        b = CircuitBuilder()
        x = b.input("x")
        square = b.build(b.mul(x, x))
        b2 = CircuitBuilder()
        uv = b2.build(b2.add(b2.input("u"), b2.input("v")))
        C = substitute(square, {"x": uv})
        return C.size == 2 and eval_rational(C, {"u": 2, "v": 3}) == 25, 25, eval_rational(C, {"u": 2, "v": 3})

    for name, body in (("1sum", one), ("2sum", two), ("dsum", delta), ("zero", wheel), ("cographic", cographic), ("substitute", subst)):
        out.append(_pass_or_fail(f"compose-{name}", seed, 1, body))
    return out


# ============================================================
# TROPICAL
# ============================================================
def check_tropical(seed: int, trials: int | None) -> list[Verdict]:
    points = trials or TROPICAL_POINTS
    out = []
    for fx in suite_fixtures(seed):
        def body(fx=fx):
            T = tropicalize(_synth_fixture(fx).circuit)
            rng = random.Random(seed)
            for _ in range(points):
                w = random_weights(fx.matroid.ground, rng)
                _, best = greedy_max_basis(fx.matroid, w)
                got = eval_tropical(T, w)
                if got != best:
                    return False, best, got
            return True, None, None

        out.append(_pass_or_fail(f"tropical-{fx.name}", seed, points, body))
    return out


def check_relu(seed: int, trials: int | None) -> list[Verdict]:
    points = trials or TROPICAL_POINTS
    out = []
    for fx in suite_fixtures(seed):
        def body(fx=fx):
            T = tropicalize(_synth_fixture(fx).circuit)
            N = lower_to_relu(T)
            if N.size > 3 * T.size:
                return False, f"<={3 * T.size} neurons", N.size
            if any(w not in (-1, 0, 1) for w in N.all_weights()):
                return False, "weights in {0,±1}", "other weights"
            rng = random.Random(seed)
            for _ in range(points):
                w = random_weights(fx.matroid.ground, rng)
                want, got = eval_tropical(T, w), forward(N, w)
                if want != got:
                    return False, want, got
            return True, None, None

        out.append(_pass_or_fail(f"relu-{fx.name}", seed, points, body))
    return out


def _quotient():
    # (x·x + x·y) / x
    b = CircuitBuilder()
    x, y = b.input("x"), b.input("y")
    return b.build(b.div(b.add(b.mul(x, x), b.mul(x, y)), x))


def check_normal_form(seed: int, trials: int | None) -> list[Verdict]:
    """Tropicalizing the expanded quotient agrees with the tropical circuit."""
    out = []
    circuits = {
        "K3": synth_graphic(complete_graph(3)).circuit,
        # the K3 dual wrap expands past the degree guard
        "theta-dual": synth_cographic((("a", 1, 2), ("b", 1, 2), ("c", 1, 2))).circuit,
        "C4": synth(c4_two_sum()).circuit,
        "quotient": _quotient(),
    }
    for name, C in circuits.items():
        def body(C=C):
            pair = expand_symbolic(C)
            T = tropicalize(C)
            rng = random.Random(seed)
            for _ in range(NORMAL_FORM_POINTS):
                w = random_weights(C.variables, rng)
                want, got = tropical_normal_form(pair, w), eval_tropical(T, w)
                if want != got:
                    return False, want, got
            return True, None, None

        out.append(_pass_or_fail(f"normal-form-{name}", seed, NORMAL_FORM_POINTS, body))
    return out


# ============================================================
# MATRICES
# ============================================================
def _random_signed(rng: random.Random) -> IntMatrix:
    r, n = rng.randint(2, 5), rng.randint(1, 8)
    rows = [[rng.choice((-1, 0, 0, 1)) for _ in range(n)] for _ in range(r)]
    if not any(rows[-1]):
        rows[-1][rng.randrange(n)] = rng.choice((-1, 1))
    return IntMatrix(tuple(map(tuple, rows)))


def check_star_mesh(seed: int, trials: int | None) -> list[Verdict]:
    count = trials or STAR_MESH_INSTANCES

    def body():
        rng = random.Random(seed)
        for _ in range(count):
            A = _random_signed(rng)
            z = [Fraction(rng.randint(1, 100), rng.randint(1, 100)) for _ in range(A.shape[1])]
            sm = star_mesh(A)
            y, z2 = sm.weights(z)
            left = det_exact(weighted_gram(A, z).L)
            right = y * det_exact(weighted_gram(sm.matrix, z2).L)
            if left != right:
                return False, left, right
        return True, None, None

    return [_pass_or_fail("star-mesh", seed, count, body)]


def _regular_fixtures() -> list[Fixture]:
    names = [f"k{l}-graphic" for l in range(3, 7)] + ["k4-cographic", "r10", "r12"]
    return [load_fixture(name) for name in names]


def check_maurer(seed: int, trials: int | None) -> list[Verdict]:
    out = []
    for fx in _regular_fixtures():
        def body(fx=fx):
            A = camion_sign(as_binary(fx.matroid).backing.rows)
            got = det_exact(weighted_gram(A, [1] * A.shape[1]).L)
            want = len(enumerate_bases(fx.matroid))
            return got == want, want, got

        out.append(_pass_or_fail(f"maurer-{fx.name}", seed, 1, body))
    return out


def check_signing(seed: int, trials: int | None) -> list[Verdict]:
    out = []
    for fx in _regular_fixtures():
        def body(fx=fx):
            A = camion_sign(as_binary(fx.matroid).backing.rows)
            return is_tu(A), "TU", "not TU"

        out.append(_pass_or_fail(f"signing-{fx.name}", seed, 1, body))

    def fano():
        try:
            camion_sign(as_binary(load_fixture("f7").matroid).backing.rows)
        except NotRegular:
            return True, None, None
        return False, "NotRegular", "a TU signing"

    out.append(_pass_or_fail("signing-f7", seed, 1, fano))
    return out


# ============================================================
# STRUCTURE
# ============================================================
def _k4_with_star(labels_tri=("d1", "d2", "d3"), star=("s1", "s2", "s3")) -> Matroid:
    # triangle on 1, 2, 3; s_i joins vertex i to 4
    d12, d13, d23 = labels_tri
    edges = ((d12, 1, 2), (d13, 1, 3), (star[0], 1, 4), (d23, 2, 3), (star[1], 2, 4), (star[2], 3, 4))
    return Matroid.from_graph(edges, "K4")


def check_delta_plus_delete(seed: int, trials: int | None) -> list[Verdict]:
    def body():
        tree = k4_dsum_k4()
        M1, M2 = tree.left.matroid(), tree.right.matroid()
        plus = delta_sum_plus(M1, M2, tree.triangle)
        for d in tree.triangle:
            plus = delete(plus, d)
        return same_bases(plus, delta_sum(M1, M2, tree.triangle)), "equal bases", "different bases"

    return [_pass_or_fail("dsum+-delete", seed, 1, body)]


def check_delta_wye(seed: int, trials: int | None) -> list[Verdict]:
    out = []
    D = ("d1", "d2", "d3")
    # the star edge at the vertex opposite d_i stands in for d_i
    phi = {"d1": "s3", "d2": "s2", "d3": "s1"}
    instances = {
        "K4": complete_graph(4, ["d1", "d2", "m1", "d3", "m2", "m3"]),
        "K5": complete_graph(5, ["d1", "d2", "m1", "m2", "d3", "m3", "m4", "m5", "m6", "m7"]),
    }
    for name, edges in instances.items():
        def body(edges=edges):
            M = Matroid.from_graph(edges)
            Y = relabel(delta_y_exchange(M, D), phi)
            return same_bases(Y, delta_sum(M, _k4_with_star(D), D)), "isomorphic", "different"

        out.append(_pass_or_fail(f"delta-wye-{name}", seed, 1, body))
    return out


def check_cut_cocircuit(seed: int, trials: int | None) -> list[Verdict]:
    out = []
    M1 = Matroid.from_graph(complete_graph(4, ["p", "q", "a1", "r", "a2", "a3"]))
    for l in (4, 5):
        def body(l=l):
            labels = [f"k{i}{j}" for i, j in combinations(range(1, l + 1), 2)]
            labels[0], labels[1], labels[l - 1] = "p", "q", "r"
            K = Matroid.from_graph(complete_graph(l, labels))
            M = delta_sum_plus(M1, K, ("p", "q", "r"))
            star = [lab for lab, (i, j) in zip(labels, combinations(range(1, l + 1), 2)) if j == l]
            return is_cocircuit(M, star), "cocircuit", "not a cocircuit"

        out.append(_pass_or_fail(f"cut-cocircuit-K{l}", seed, 1, body))
    return out


def check_dual_identity(seed: int, trials: int | None) -> list[Verdict]:
    out = []
    for fx in suite_fixtures(seed):
        def body(fx=fx):
            M = fx.matroid
            rng = random.Random(seed)
            for _ in range(DUAL_POINTS):
                p = random_point(M.ground, rng, seed)
                inv = TestPoint({e: 1 / x for e, x in p.assignment.items()})
                want = prod(p.assignment.values()) * brute_bgp_eval(M, inv)
                got = brute_bgp_eval(dual(M), p)
                if want != got:
                    return False, want, got
            return True, None, None

        out.append(_pass_or_fail(f"dual-{fx.name}", seed, DUAL_POINTS, body))
    return out


def check_matroid_basics(seed: int, trials: int | None) -> list[Verdict]:
    out = []

    def k3():
        M = Matroid.from_graph(complete_graph(3, ["a", "b", "c"]))
        ok = (
            rank_of(M, []) == 0
            and rank_of(M, "abc") == 2
            and is_circuit(M, "abc")
            and is_cocircuit(M, "ab")
            and len(enumerate_bases(delete(M, "c"))) == 1
            and len(enumerate_bases(contract(M, "c"))) == 2
        )
        return ok, "K3 facts", "mismatch"

    def sums():
        a = Matroid.from_graph(complete_graph(3, ["a", "b", "d"]))
        b = Matroid.from_graph(complete_graph(3, ["d", "c", "e"]))
        u = Matroid.from_graph(complete_graph(3, ["u", "v", "w"]))
        c4 = two_sum(a, b, "d")
        ok = (
            len(enumerate_bases(one_sum(a, u))) == 9
            and len(enumerate_bases(c4)) == 4
            and find_separation(c4, 2) is not None
            and find_separation(load_fixture("r10").matroid, 2) is None
        )
        return ok, "sum facts", "mismatch"

    def cocircuit_row():
        M = load_fixture("r10").matroid
        D = next(
            set(S) for S in combinations(M.ground, 4) if is_cocircuit(M, S)
        )
        rep = rep_with_cocircuit_row(M, D)
        got = {M.ground[j] for j in rep.support(len(rep.rows) - 1)}
        rebuilt = Matroid(M.ground, M.rank, rep)
        return got == D and same_bases(rebuilt, M), sorted(D), sorted(got)

    for name, body in (("k3", k3), ("sums", sums), ("cocircuit-row", cocircuit_row)):
        out.append(_pass_or_fail(f"matroid-{name}", seed, 1, body))
    return out


# ============================================================
# REGISTRY
# ============================================================
SUITES: dict[str, tuple[Check, ...]] = {
    "core": (
        Check("r10-golden", check_r10_golden, ("naive_from_bases", "eval_rational", "enumerate_bases")),
        Check("graphic", check_graphic, ("synth_graphic", "kirchhoff_count", "enumerate_spanning_trees")),
        Check("identity", check_identity, ("synth", "identity_test", "brute_bgp_eval")),
        Check("size-bound", check_size_bound, ("synth",)),
        Check("compose", check_compose, (
            "compose_one_sum", "compose_two_sum", "eliminate_delta_graphic",
            "eliminate_zero", "synth_cographic", "substitute",
        )),
        Check("auto", check_auto, ("auto_decompose",)),
    ),
    "tropical": (
        Check("tropical", check_tropical, ("tropicalize", "eval_tropical", "greedy_max_basis")),
        Check("relu", check_relu, ("lower_to_relu",)),
        Check("normal-form", check_normal_form, ("expand_symbolic",)),
    ),
    "matrices": (
        Check("star-mesh", check_star_mesh, ("star_mesh", "det_exact", "weighted_gram")),
        Check("maurer", check_maurer, ("camion_sign",)),
        Check("signing", check_signing, ("is_tu",)),
    ),
    "structure": (
        Check("dsum+-delete", check_delta_plus_delete, ("delta_sum_plus", "delta_sum", "delete")),
        Check("delta-wye", check_delta_wye, ("delta_y_exchange",)),
        Check("cut-cocircuit", check_cut_cocircuit, ("is_cocircuit",)),
        Check("dual-identity", check_dual_identity, ("dual",)),
        Check("matroid-basics", check_matroid_basics, (
            "rank_of", "is_circuit", "contract", "one_sum", "two_sum",
            "find_separation", "rep_with_cocircuit_row",
        )),
    ),
}

PRIMARY_OPERATIONS = frozenset({
    # matroid core
    "enumerate_bases", "rank_of", "dual", "delete", "contract", "one_sum", "two_sum",
    "delta_sum", "delta_sum_plus", "delta_y_exchange", "is_circuit", "is_cocircuit",
    "rep_with_cocircuit_row", "find_separation",
    # linear algebra
    "camion_sign", "is_tu", "det_exact", "weighted_gram", "star_mesh",
    # circuits
    "eval_rational", "tropicalize", "eval_tropical", "lower_to_relu", "substitute",
    "eliminate_zero", "naive_from_bases", "expand_symbolic",
    # synthesizer
    "synth", "synth_graphic", "synth_cographic", "compose_one_sum", "compose_two_sum",
    "eliminate_delta_graphic", "auto_decompose",
    # oracles
    "brute_bgp_eval", "greedy_max_basis", "kirchhoff_count", "identity_test",
})


def suite_names() -> list[str]:
    return list(SUITES) + ["all"]


def checks_for(name: str) -> tuple[Check, ...]:
    if name == "all":
        return tuple(check for checks in SUITES.values() for check in checks)
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]


def uncovered(checks: tuple[Check, ...]) -> set[str]:
    covered = {op for check in checks for op in check.covers}
    return set(PRIMARY_OPERATIONS) - covered


def run_suite(name: str, seed: int | None = None, trials: int | None = None) -> list[Verdict]:
    seed = guard(seed, "seed")
    checks = checks_for(name)
    verdicts = []
    if name == "all":
        missing = uncovered(checks)
        verdicts.append(_verdict("coverage", not missing, seed, expected="all operations", got=",".join(sorted(missing))))
    for check in checks:
        logger.info("running %s", check.name)
        verdicts.extend(check.run(seed, trials))
    return verdicts


__all__ = [
    "Check",
    "SUITES",
    "PRIMARY_OPERATIONS",
    "suite_names",
    "checks_for",
    "uncovered",
    "run_suite",
]
