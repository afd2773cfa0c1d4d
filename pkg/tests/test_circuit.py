from fractions import Fraction

import pytest

from matroid_circuits.circuit import (
    Circuit,
    CircuitBuilder,
    Gate,
    TropicalCircuit,
    circuit_stats,
    dual_wrap,
    eliminate_zero,
    eval_rational,
    eval_tropical,
    expand_symbolic,
    forward,
    lower_to_relu,
    naive_from_bases,
    prune,
    substitute,
    tropical_normal_form,
    tropicalize,
)
from matroid_circuits.errors import (
    CircuitError,
    DivisionByZero,
    PoleAtZero,
    TooLarge,
    UnassignedVariable,
    ZeroOutput,
)


def quotient():
    # (x·x + x·y) / x
    b = CircuitBuilder()
    x, y = b.input("x"), b.input("y")
    return b.build(b.div(b.add(b.mul(x, x), b.mul(x, y)), x))


def max_xy():
    b = CircuitBuilder(TropicalCircuit)
    return b.build(b.max(b.input("x"), b.input("y")))


class TestStructure:
    def test_inputs_are_shared(self):
        b = CircuitBuilder()
        assert b.input("x") == b.input("x")

    def test_size_counts_non_input_gates(self):
        C = quotient()
        assert C.size == 4
        assert C.variables == ("x", "y")

    def test_forward_references_rejected(self):
        with pytest.raises(CircuitError, match="earlier gates"):
            Circuit((Gate("input", (), "x"), Gate("add", (0, 2))), 1)

    def test_ops_per_kind(self):
        with pytest.raises(CircuitError, match="not allowed"):
            CircuitBuilder(Circuit).max(0, 0)
        with pytest.raises(CircuitError, match="not allowed"):
            Circuit((Gate("input", (), "x"), Gate("sub", (0, 0))), 1)

    def test_splice_binds_variables(self):
        inner = quotient()
        b = CircuitBuilder()
        z = b.input("z")
        out = b.splice(inner, {"x": z})
        C = b.build(out)
        assert set(C.variables) == {"z", "y"}
        assert eval_rational(C, {"z": 2, "y": 3}) == 5

    def test_prune(self):
        b = CircuitBuilder()
        x, y = b.input("x"), b.input("y")
        b.add(x, y)
        C = prune(b.build(b.mul(x, x)))
        assert C.size == 1
        assert C.variables == ("x",)


class TestEvaluation:
    def test_rational(self):
        assert eval_rational(quotient(), {"x": 2, "y": Fraction(1, 3)}) == Fraction(7, 3)

    def test_division_by_zero_names_the_gate(self):
        with pytest.raises(DivisionByZero, match="g5") as exc:
            eval_rational(quotient(), {"x": 0, "y": 1})
        assert exc.value.gate == 5

    def test_unassigned(self):
        with pytest.raises(UnassignedVariable, match="y"):
            eval_rational(quotient(), {"x": 1})

    def test_semantics_do_not_mix(self):
        with pytest.raises(CircuitError):
            eval_tropical(quotient(), {"x": 1, "y": 1})

    def test_tropicalize(self):
        T = tropicalize(quotient())
        assert isinstance(T, TropicalCircuit)
        assert [g.op for g in T.gates] == ["input", "input", "add", "add", "max", "sub"]
        # max(2x, x + y) - x
        assert eval_tropical(T, {"x": 5, "y": 2}) == 5
        assert eval_tropical(T, {"x": 1, "y": 4}) == 4


class TestRelu:
    def test_max_is_three_neurons(self):
        N = lower_to_relu(max_xy())
        assert N.size == 3
        assert set(N.all_weights()) <= {-1, 1}
        for x, y in [(3, -2), (-5, 4), (0, 0), (Fraction(1, 2), Fraction(1, 3))]:
            assert forward(N, {"x": x, "y": y}) == max(x, y)

    def test_collisions_are_materialized(self):
        b = CircuitBuilder(TropicalCircuit)
        x = b.input("x")
        T = b.build(b.add(x, x))
        N = lower_to_relu(T)
        assert N.size == 2
        assert all(w in (-1, 1) for w in N.all_weights())
        assert forward(N, {"x": -3}) == -6

    def test_colliding_sums_cost_two_neurons_each(self):
        b = CircuitBuilder(TropicalCircuit)
        x = b.input("x")
        T = b.build(b.add(b.add(x, x), b.add(x, x)))
        N = lower_to_relu(T)
        assert N.size == 6 <= 3 * T.size
        assert set(N.all_weights()) <= {-1, 1}
        assert forward(N, {"x": -3}) == -12
        assert forward(N, {"x": 5}) == 20

    def test_forward_unassigned(self):
        with pytest.raises(UnassignedVariable):
            forward(lower_to_relu(max_xy()), {"x": 1})

    def test_needs_tropical(self):
        with pytest.raises(CircuitError, match="tropical"):
            lower_to_relu(quotient())


class TestRewrites:
    def test_substitute_shares_the_bound_circuit(self):
        b = CircuitBuilder()
        x = b.input("x")
        square = b.build(b.mul(x, x))
        b2 = CircuitBuilder()
        uv = b2.build(b2.add(b2.input("u"), b2.input("v")))
        C = substitute(square, {"x": uv})
        assert C.size == 2
        assert eval_rational(C, {"u": 2, "v": 3}) == 25

    def test_eliminate_zero(self):
        # x·y + z with y := 0 is z
        b = CircuitBuilder()
        x, y, z = b.input("x"), b.input("y"), b.input("z")
        C = eliminate_zero(b.build(b.add(b.mul(x, y), z)), ["y"])
        assert C.size == 0
        assert C.variables == ("z",)

    def test_eliminate_zero_pole(self):
        b = CircuitBuilder()
        x, y = b.input("x"), b.input("y")
        with pytest.raises(PoleAtZero):
            eliminate_zero(b.build(b.div(x, y)), ["y"])

    def test_eliminate_zero_whole_output(self):
        b = CircuitBuilder()
        x, y = b.input("x"), b.input("y")
        with pytest.raises(ZeroOutput):
            eliminate_zero(b.build(b.mul(x, y)), ["x"])

    def test_naive_from_bases(self):
        C = naive_from_bases([{"a", "b"}, {"a", "c"}, {"b", "c"}], ["a", "b", "c"])
        # three products and two additions
        assert C.size == 5
        assert eval_rational(C, {"a": 1, "b": 2, "c": 3}) == 11

    def test_dual_wrap_adds_two_gates_per_element(self):
        C = naive_from_bases([{"a"}, {"b"}, {"c"}], ["a", "b", "c"])
        W = dual_wrap(C, ["a", "b", "c"])
        assert W.size == C.size + 6
        assert not any(g.op == "input" and g.var not in "abc" for g in W.gates)
        # a+b+c dualizes to ab+ac+bc
        assert eval_rational(W, {"a": 1, "b": 2, "c": 3}) == 11

    def test_dual_wrap_needs_two_elements(self):
        C = naive_from_bases([{"a"}], ["a"])
        with pytest.raises(CircuitError, match="two elements"):
            dual_wrap(C, ["a"])


class TestSymbolic:
    def test_expand_without_cancellation(self):
        num, den = expand_symbolic(quotient())
        assert num.terms == {(2, 0): 1, (1, 1): 1}
        assert den.terms == {(1, 0): 1}
        assert num.evaluate({"x": 2, "y": 3}) / den.evaluate({"x": 2, "y": 3}) == 5

    def test_normal_form_matches_the_tropical_circuit(self):
        C = quotient()
        pair = expand_symbolic(C)
        T = tropicalize(C)
        for w in [{"x": 5, "y": 2}, {"x": -1, "y": 7}, {"x": 0, "y": 0}]:
            assert tropical_normal_form(pair, w) == eval_tropical(T, w)

    def test_size_guard(self):
        b = CircuitBuilder()
        acc = b.input("x")
        for _ in range(61):
            acc = b.add(acc, acc)
        with pytest.raises(TooLarge, match="expansion guard"):
            expand_symbolic(b.build(acc))

    def test_dual_wrap_of_three_parallel_edges(self):
        b = CircuitBuilder()
        a, bb, c = b.input("a"), b.input("b"), b.input("c")
        D = dual_wrap(b.build(b.add(b.add(a, bb), c)), ["a", "b", "c"])
        num, den = expand_symbolic(D)
        assert num.variables == ("a", "b", "c")
        assert num.terms == {(3, 2, 2): 1, (2, 3, 2): 1, (3, 3, 1): 1}
        assert den.terms == {(2, 2, 1): 1}
        T = tropicalize(D)
        for w in [{"a": 4, "b": -1, "c": 2}, {"a": 0, "b": 0, "c": 0}, {"a": -3, "b": 5, "c": 1}]:
            top_two = sum(sorted(w.values())[1:])
            assert tropical_normal_form((num, den), w) == eval_tropical(T, w) == top_two

    def test_dual_wrap_of_a_triangle_is_past_the_degree_guard(self):
        b = CircuitBuilder()
        a, bb, c = b.input("a"), b.input("b"), b.input("c")
        K3 = b.build(b.add(b.add(b.mul(a, bb), b.mul(a, c)), b.mul(bb, c)))
        with pytest.raises(TooLarge, match="degree"):
            expand_symbolic(dual_wrap(K3, ["a", "b", "c"]))


def test_stats():
    s = circuit_stats(quotient())
    assert s.size == 4
    assert s.counts == {"input": 2, "add": 1, "mul": 2, "div": 1}
    assert s.depth == 3
    assert s.variables == 2
