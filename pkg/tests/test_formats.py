from fractions import Fraction

import pytest

from matroid_circuits.circuit import Circuit, CircuitBuilder, TropicalCircuit, eval_rational, forward, lower_to_relu
from matroid_circuits.errors import FormatError, ParseError
from matroid_circuits.fixtures import c4_two_sum, complete_graph, k4_dsum_k4
from matroid_circuits.formats import (
    format_binary_rows,
    format_circuit,
    format_matrix,
    format_matroid,
    format_point,
    format_relu,
    format_tree,
    parse_circuit,
    parse_matrix,
    parse_matroid,
    parse_point,
    parse_relu,
    parse_tree,
)
from matroid_circuits.matroid import GraphRep, enumerate_bases, same_bases
from matroid_circuits.tree import (
    A10,
    R10_LABELS,
    CographicLeaf,
    DualNode,
    ExplicitLeaf,
    GraphicLeaf,
    UnitLeaf,
    with_identity,
)

K3_TEXT = """\
# a triangle
matroid K3 rank=2 n=3
graph:
a 1 2
b 1 3
c 2 3
"""

PRODUCT = """\
g0 = input x
g1 = input y
g2 = mul g0 g1
output g2
"""


class TestMatroids:
    def test_graph_section(self):
        M = parse_matroid(K3_TEXT)
        assert isinstance(M.backing, GraphRep)
        assert (M.name, M.n, M.rank) == ("K3", 3, 2)

    def test_bases_section(self):
        M = parse_matroid("matroid U23 rank=2 n=3\nbases:\na b\na c\nb c\n")
        assert len(enumerate_bases(M)) == 3

    def test_binary_section(self):
        M = parse_matroid("matroid T rank=2 n=3\nbinary:\n1 0 1\n0 1 1\na b c\n")
        assert same_bases(M, parse_matroid(K3_TEXT))

    def test_printed_r10(self):
        text = format_binary_rows(with_identity(A10), R10_LABELS, "R10")
        assert text.splitlines()[0] == "matroid R10 rank=5 n=10"
        assert len(enumerate_bases(parse_matroid(text))) == 162

    def test_written_back(self, k4, f7, u24):
        for M in (k4, f7, u24):
            assert same_bases(parse_matroid(format_matroid(M)), M)

    @pytest.mark.parametrize(
        "text, line, message",
        [
            ("# only\n\nmatroid X\n", 3, "expected 'matroid"),
            ("matroid X rank=1 n=1\n", 1, "missing 'bases:'"),
            ("matroid X rank=1 n=2\nbases:\na\n", 3, "loops cannot be listed"),
            ("matroid X rank=1 n=2\nbinary:\n1 2\na b\n", 3, "0/1 digits"),
            ("matroid X rank=1 n=2\nbinary:\n1 1\na\n", 4, "1 labels"),
            ("matroid X rank=1 n=2\ngraph:\na 1\n", 3, "label u v"),
            ("matroid X rank=1 n=2\nfoo:\n", 2, "unknown section"),
            ("matroid K3 rank=2 n=4\ngraph:\na 1 2\nb 1 3\nc 2 3\n", 1, "header says n=4"),
            ("matroid K3 rank=1 n=3\ngraph:\na 1 2\nb 1 3\nc 2 3\n", 1, "header says rank=1"),
        ],
    )
    def test_errors(self, text, line, message):
        with pytest.raises(ParseError, match=message) as info:
            parse_matroid(text)
        assert info.value.line == line
        assert str(info.value).startswith(f"line {line}: ")

    def test_parse_error_is_a_format_error(self):
        with pytest.raises(FormatError):
            parse_matroid("")


class TestMatrices:
    def test_parse(self):
        A = parse_matrix("rows=2 cols=3\n1 0 -1\n0 1 1\na b c\n")
        assert A.rows == ((1, 0, -1), (0, 1, 1))
        assert A.col_labels == ("a", "b", "c")
        assert parse_matrix(format_matrix(A)) == A

    @pytest.mark.parametrize(
        "text, line",
        [
            ("2x3\n", 1),
            ("rows=2 cols=2\n1 0\n", 2),
            ("rows=1 cols=2\n1 x\n", 2),
            ("rows=1 cols=2\n1 0 0\n", 2),
            ("rows=1 cols=2\n1 0\na\n", 3),
        ],
    )
    def test_errors(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_matrix(text)
        assert info.value.line == line


class TestTrees:
    def test_two_sum(self):
        tree = parse_tree("(2sum (graphic K3 a b d) (graphic K3 d c e) glue=d)")
        assert tree == c4_two_sum()

    def test_delta_sum_text(self):
        text = format_tree(k4_dsum_k4())
        assert text == "(dsum (graphic K4 p q a1 r a2 a3) (graphic K4 p q b1 r b2 b3) triangle=p,q,r)"
        assert parse_tree(text) == k4_dsum_k4()

    def test_edges_and_dual(self):
        tree = parse_tree("(dual (cographic edges a:1-2 b:2-3 c:1-3))  # comment")
        assert tree == DualNode(CographicLeaf((("a", 1, 2), ("b", 2, 3), ("c", 1, 3))))
        assert format_tree(tree) == "(dual (cographic edges a:1-2 b:2-3 c:1-3))"

    def test_default_labels(self):
        assert parse_tree("(graphic K4)") == GraphicLeaf(complete_graph(4))

    def test_explicit_leaf(self, tmp_path):
        (tmp_path / "k3.mtx").write_text(K3_TEXT, encoding="utf-8")
        tree = parse_tree("(explicit k3.mtx)", base_dir=tmp_path)
        assert isinstance(tree, ExplicitLeaf)
        assert tree.matroid().rank == 2
        assert format_tree(tree) == "(explicit k3.mtx)"

    def test_missing_explicit_file(self, tmp_path):
        with pytest.raises(ParseError, match="cannot read nope.mtx"):
            parse_tree("(explicit nope.mtx)", base_dir=tmp_path)

    @pytest.mark.parametrize(
        "text, line, message",
        [
            ("(2sum (graphic K3) (graphic K3))", 1, "glue"),
            ("(1sum\n  (graphic K3 a b c)\n  (bogus))", 3, "unknown node"),
            ("(dsum (graphic K4) (graphic K4) triangle=e12,e13)", 1, "three labels"),
            ("(graphic K3 a b)", 1, "got 2 labels"),
            ("(r12 x)", 1, "r12 takes no labels"),
            ("(graphic edges a1-2)", 1, "label:u-v"),
            ("(graphic K3) (graphic K3)", 1, "trailing input"),
            ("(1sum (graphic K3)\n", 1, "unexpected end"),
        ],
    )
    def test_errors(self, text, line, message):
        with pytest.raises(ParseError, match=message) as info:
            parse_tree(text)
        assert info.value.line == line

    def test_unit_leaf_has_no_text(self):
        with pytest.raises(FormatError, match="rank-0"):
            format_tree(UnitLeaf(("x",)))


class TestCircuits:
    def test_parse(self):
        C = parse_circuit(PRODUCT)
        assert isinstance(C, Circuit)
        assert eval_rational(C, {"x": 2, "y": 3}) == 6
        assert format_circuit(C) == PRODUCT

    def test_kind_from_ops(self):
        T = parse_circuit(PRODUCT.replace("mul", "max"))
        assert isinstance(T, TropicalCircuit)

    def test_kind_mismatch(self):
        with pytest.raises(ParseError, match="not allowed"):
            parse_circuit(PRODUCT.replace("mul", "max"), kind=Circuit)

    @pytest.mark.parametrize(
        "text, line, message",
        [
            ("g1 = input x\noutput g1\n", 1, "expected gate g0"),
            ("g0 = input x\ng1 = add g0 g1\noutput g1\n", 2, "earlier gates"),
            ("g0 = input x\ng1 = add g0\noutput g1\n", 2, "two gate references"),
            ("g0 = input x\noutput g3\n", 2, "not defined"),
            ("g0 = input x\noutput g0\ng1 = input y\n", 3, "nothing may follow"),
            ("g0 = input x\ng1 = mul g0 g0\n", 2, "missing 'output"),
            ("x = 1\n", 1, "expected 'g<id>"),
        ],
    )
    def test_errors(self, text, line, message):
        with pytest.raises(ParseError, match=message) as info:
            parse_circuit(text)
        assert info.value.line == line


class TestRelu:
    def test_lowered_max(self):
        b = CircuitBuilder(TropicalCircuit)
        T = b.build(b.max(b.input("x"), b.input("y")))
        N = lower_to_relu(T)
        text = format_relu(N)
        assert text.splitlines()[-1].startswith("readout ")
        M = parse_relu(text)
        assert set(M.variables) == set(N.variables)
        for point in ({"x": 3, "y": 5}, {"x": -2, "y": -7}):
            assert forward(M, point) == forward(N, point)

    @pytest.mark.parametrize(
        "text, line, message",
        [
            ("n0 = relu 1*n0\nreadout 1*n0\n", 1, "not an earlier neuron"),
            ("n0 = relu 2x\nreadout 1*n0\n", 1, "weight"),
            ("n1 = relu 1*x[a]\nreadout 1*n1\n", 1, "expected neuron n0"),
            ("n0 = relu 1*x[a]\n", 1, "missing readout"),
            ("readout 1*x[a]\nn0 = relu 1*x[a]\n", 2, "nothing may follow"),
        ],
    )
    def test_errors(self, text, line, message):
        with pytest.raises(ParseError, match=message) as info:
            parse_relu(text)
        assert info.value.line == line


class TestPoints:
    def test_parse(self):
        p = parse_point("a 1\nb 3/2  # half\n\nc=4\n", seed=5)
        assert p.assignment == {"a": 1, "b": Fraction(3, 2), "c": 4}
        assert p.seed == 5
        assert format_point(p) == "a 1\nb 3/2\nc 4\n"

    @pytest.mark.parametrize(
        "text, line, message",
        [
            ("a 1\na 2\n", 2, "assigned twice"),
            ("a x\n", 1, "not a rational"),
            ("a 1/0\n", 1, "not a rational"),
            ("a 1 2\n", 1, "expected '<variable> <value>'"),
        ],
    )
    def test_errors(self, text, line, message):
        with pytest.raises(ParseError, match=message) as info:
            parse_point(text)
        assert info.value.line == line
