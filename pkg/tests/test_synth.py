import random

import pytest

from matroid_circuits.circuit import CircuitBuilder, eliminate_zero, eval_rational
from matroid_circuits.errors import (
    MissingTriangle,
    NotThreeConnected,
    SynthesisError,
    VariableClash,
)
from matroid_circuits.fixtures import complete_graph, r12_tree, random_composite, wheel_edges
from matroid_circuits.matroid import same_bases
from matroid_circuits.oracles import brute_bgp_eval, identity_test, kirchhoff_count, ones, random_point
from matroid_circuits.synth import (
    compose_one_sum,
    compose_two_sum,
    eliminate_delta_graphic,
    star_mesh_step_bound,
    synth,
    synth_cographic,
    synth_graphic,
)
from matroid_circuits.tree import (
    DeltaSumPlus,
    DualNode,
    F7Leaf,
    GraphicLeaf,
    OneSum,
    R10Leaf,
    UnitLeaf,
    r12_matroid,
    recompose,
)


def triangle(labels):
    return synth_graphic(complete_graph(3, labels)).circuit


class TestGraphic:
    @pytest.mark.parametrize("l, size", [(3, 5), (4, 17)])
    def test_sizes(self, l, size):
        assert synth_graphic(complete_graph(l)).size == size

    @pytest.mark.parametrize("l", [3, 4, 5, 6, 7])
    def test_spanning_tree_counts(self, l):
        edges = complete_graph(l)
        report = synth_graphic(edges)
        assert eval_rational(report.circuit, ones(e for e, _, _ in edges)) == l ** (l - 2)
        assert report.size <= len(edges) ** 3 // 2

    def test_weighted_k4(self, k4_edges):
        C = synth_graphic(k4_edges).circuit
        # every spanning tree has three edges of weight 2
        assert eval_rational(C, {e: 2 for e, _, _ in k4_edges}) == 16 * 8

    def test_single_vertex(self):
        with pytest.raises(SynthesisError, match="constant"):
            synth_graphic((("l", 1, 1),))

    def test_wheel_by_zeroing_k5(self):
        K5 = synth_graphic(complete_graph(5)).circuit
        C = eliminate_zero(K5, ["e13", "e24"])
        assert eval_rational(C, ones(C.variables)) == 45 == kirchhoff_count(wheel_edges())


class TestCographic:
    def test_k3_dual(self):
        report = synth_cographic(complete_graph(3, "abc"))
        assert report.size == 5 + 6
        assert eval_rational(report.circuit, {"a": 1, "b": 2, "c": 3}) == 6

    def test_dual_node(self, k4_leaf):
        report = synth(DualNode(k4_leaf))
        assert report.size == 17 + 12
        assert eval_rational(report.circuit, ones(report.circuit.variables)) == 16


class TestComposition:
    def test_one_sum(self):
        C = compose_one_sum(triangle("abc"), triangle("uvw"))
        assert C.size == 11
        assert eval_rational(C, ones("abcuvw")) == 9

    def test_one_sum_clash(self):
        with pytest.raises(VariableClash, match="c"):
            compose_one_sum(triangle("abc"), triangle("cde"))

    def test_one_sum_with_unit(self):
        C = triangle("abc")
        assert compose_one_sum(None, C) is C

    def test_two_sum_shares_the_contraction(self):
        c1 = triangle("abd")
        c_del = synth_graphic((("c", 1, 3), ("e", 2, 3))).circuit
        c_con = synth_graphic((("c", 1, 3), ("e", 1, 3))).circuit
        C = compose_two_sum(c1, c_del, c_con, "d")
        assert C.size == c1.size + c_del.size + c_con.size + 2
        assert eval_rational(C, {"a": 1, "b": 1, "c": 2, "e": 3}) == 17

    def test_two_sum_unit_contraction_substitutes(self):
        c1 = triangle("abd")
        c_del = triangle("cex")
        C = compose_two_sum(c1, c_del, None, "d")
        assert C.size == c1.size + c_del.size
        # ab + (a + b) f_cex at all ones
        assert eval_rational(C, ones("abcex")) == 7

    def test_two_sum_unit_m1(self):
        c_con = triangle("cex")
        assert compose_two_sum(None, triangle("uvw"), c_con, "d") is c_con


class TestTrees:
    def test_c4(self, c4_tree):
        report = synth(c4_tree)
        assert report.size == 9
        assert eval_rational(report.circuit, ones("abce")) == 4
        assert eval_rational(report.circuit, {"a": 1, "b": 1, "c": 2, "e": 3}) == 17

    def test_k4_delta_k4(self, k4_delta_tree):
        report = synth(k4_delta_tree)
        assert report.size == 26
        assert eval_rational(report.circuit, ones(report.circuit.variables)) == 12

    def test_one_sum_tree(self):
        tree = OneSum(GraphicLeaf(complete_graph(3, "abc")), GraphicLeaf(complete_graph(3, "uvw")))
        assert synth(tree).size == 11

    @pytest.mark.parametrize("leaf, size, value", [(R10Leaf(), 809, 162), (F7Leaf(), 83, 28)])
    def test_naive_leaves(self, leaf, size, value):
        report = synth(leaf)
        assert report.size == size
        assert eval_rational(report.circuit, ones(report.circuit.variables)) == value

    def test_delta_plus(self):
        left = GraphicLeaf(complete_graph(4, ["p", "q", "a1", "r", "a2", "a3"]))
        right = GraphicLeaf(complete_graph(4, ["p", "q", "b1", "r", "b2", "b3"]))
        tree = DeltaSumPlus(left, right, ("p", "q", "r"))
        M = recompose(tree)
        C = synth(tree).circuit
        p = random_point(M.ground, random.Random(7))
        assert eval_rational(C, p.assignment) == brute_bgp_eval(M, p)

    def test_ledger_sums_to_the_size(self, c4_tree):
        report = synth(c4_tree)
        assert sum(e.added for e in report.ledger if e.rule != "star-mesh") == report.size
        assert report.ledger[-1].path == "root"
        assert report.lines()[0] == f"size=9 bound={4 ** 3}"

    def test_rank_zero_root(self):
        with pytest.raises(SynthesisError, match="rank-0"):
            synth(UnitLeaf(("x",)))

    def test_r12(self):
        tree = r12_tree()
        assert same_bases(recompose(tree), r12_matroid())
        report = synth(tree)
        assert report.size <= 12**3
        verdict = identity_test(report.circuit, r12_matroid(), trials=5, seed=3)
        assert verdict.passed, verdict.report_line()

    @pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
    def test_random_composites(self, seed):
        tree = random_composite(seed)
        M = recompose(tree)
        verdict = identity_test(synth(tree).circuit, M, trials=5, seed=seed)
        assert verdict.passed, verdict.report_line()


class TestDeltaElimination:
    def test_missing_triangle(self, k4_edges):
        with pytest.raises(MissingTriangle, match="zz"):
            eliminate_delta_graphic(triangle("abc"), k4_edges, ("e12", "e13", "zz"))

    def test_not_three_connected(self):
        c1 = synth_graphic(complete_graph(4, ["p", "q", "a1", "r", "a2", "a3"])).circuit
        G2 = (("p", 1, 2), ("q", 1, 3), ("r", 2, 3), ("x", 3, 4), ("y", 1, 4))
        with pytest.raises(NotThreeConnected):
            eliminate_delta_graphic(c1, G2, ("p", "q", "r"))


def test_builder_clash_is_reported():
    b = CircuitBuilder()
    C = b.build(b.mul(b.input("x"), b.input("d")))
    with pytest.raises(VariableClash):
        compose_two_sum(C, triangle("xuv"), triangle("xuw"), "d")


class TestLedger:
    def test_graphic_report_uses_the_graphic_bound(self):
        report = synth_graphic(complete_graph(3, "abc"))
        assert report.bound == 27 // 2
        assert report.lines()[0] == "size=5 bound=13"

    def test_dual_of_a_full_rank_child_skips_the_child(self):
        coloops = GraphicLeaf((("a", 1, 2), ("b", 2, 3)))
        tree = OneSum(GraphicLeaf(complete_graph(3, "xyz")), DualNode(coloops))
        report = synth(tree)
        dual = [e for e in report.ledger if e.rule == "dual"]
        assert [(e.path, e.added, e.size) for e in dual] == [("root.R", 0, 0)]
        assert not any(e.path.startswith("root.R.*") for e in report.ledger)
        assert all(e.added >= 0 for e in report.ledger)
        assert sum(e.added for e in report.ledger) == report.size == 5

    def test_dual_of_a_rank_zero_child_is_the_product(self):
        tree = DualNode(UnitLeaf(("a", "b", "c")))
        report = synth(tree)
        assert report.size == 2
        assert [e.added for e in report.ledger if e.rule == "dual"] == [2]
        assert eval_rational(report.circuit, {"a": 2, "b": 3, "c": 5}) == 30

    @pytest.mark.parametrize("live, bound", [(3, 5), (4, 12), (5, 22)])
    def test_step_bound(self, live, bound):
        assert star_mesh_step_bound(live) == bound

    def test_star_mesh_steps_are_recorded(self, k4_delta_tree):
        report = synth(k4_delta_tree)
        steps = [e for e in report.ledger if e.rule == "star-mesh"]
        assert len(steps) == 1
        assert steps[0].n == 4
        assert 0 < steps[0].added <= star_mesh_step_bound(4)
        assert sum(e.added for e in report.ledger if e.rule != "star-mesh") == report.size
        assert all(e.added >= 0 for e in report.ledger)

    def test_step_list_matches_the_gates(self):
        c1 = synth_graphic(complete_graph(4, ["p", "q", "a1", "r", "a2", "a3"])).circuit
        G2 = complete_graph(5, ["p", "q", "b1", "b2", "r", "b3", "b4", "b5", "b6", "b7"])
        steps = []
        C = eliminate_delta_graphic(c1, G2, ("p", "q", "r"), steps=steps)
        assert [live for _, live, _ in steps] == [5, 4]
        assert all(gates <= star_mesh_step_bound(live) for _, live, gates in steps)
        assert sum(gates for _, _, gates in steps) <= 10**3 // 2
        assert C.size >= c1.size + sum(gates for _, _, gates in steps)
