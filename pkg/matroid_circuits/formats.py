"""
Line-oriented text formats: matroids, signed matrices, decomposition trees,
circuits, ReLU networks and evaluation points. Parsers raise ParseError with
the offending line; ``#`` starts a comment everywhere.
"""

from __future__ import annotations

import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from .circuit import Circuit, Gate, Neuron, ReluNetwork, TropicalCircuit, _Dag
from .errors import FormatError, MatroidCircuitError, ParseError
from .linalg import IntMatrix
from .matroid import BinaryRep, GraphRep, Matroid, enumerate_bases
from .oracles import TestPoint, format_rational
from .tree import (
    F7_LABELS,
    R10_LABELS,
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
    complete_edges,
)

logger = logging.getLogger(__name__)


def _lines(text: str) -> Iterator[tuple[int, str]]:
    """(line number, content) for non-blank lines, comments stripped."""
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_rational(token: str, line: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(line, f"not a rational number: {token!r}") from None


def _vertex(token: str):
    return int(token) if token.lstrip("-").isdigit() else token


# ============================================================
# MATROIDS
# ============================================================
_HEADER = re.compile(r"matroid\s+(\S+)\s+rank=(\d+)\s+n=(\d+)")


def parse_matroid(text: str) -> Matroid:
    lines = list(_lines(text))
    if not lines:
        raise ParseError(1, "empty matroid file")
    no, head = lines[0]
    m = _HEADER.fullmatch(head)
    if not m:
        raise ParseError(no, "expected 'matroid <name> rank=<r> n=<n>'")
    name, r, n = m.group(1), int(m.group(2)), int(m.group(3))
    if len(lines) < 2:
        raise ParseError(no, "missing 'bases:', 'binary:' or 'graph:' section")
    no, kind = lines[1]
    body = lines[2:]
    last = body[-1][0] if body else no

    try:
        if kind == "bases:":
            bases = [line.split() for _, line in body]
            ground = list(dict.fromkeys(e for B in bases for e in B))
            if len(ground) < n:
                raise ParseError(last, f"only {len(ground)} of {n} elements occur in a basis; loops cannot be listed")
            M = Matroid.from_bases(ground, bases, name)
        elif kind == "binary:":
            if len(body) != r + 1:
                raise ParseError(last, f"expected {r} matrix rows and a label line, got {len(body)} lines")
            rows = []
            for row_no, line in body[:r]:
                digits = line.replace(" ", "")
                if set(digits) - {"0", "1"}:
                    raise ParseError(row_no, "binary rows hold 0/1 digits only")
                rows.append([int(ch) for ch in digits])
            label_no, label_line = body[r]
            labels = label_line.split()
            if any(len(row) != len(labels) for row in rows):
                raise ParseError(label_no, f"{len(labels)} labels for rows of width {len(rows[0]) if rows else 0}")
            M = Matroid.from_binary(rows, labels, name)
        elif kind == "graph:":
            edges = []
            for edge_no, line in body:
                parts = line.split()
                if len(parts) != 3:
                    raise ParseError(edge_no, "edge lines are 'label u v'")
                edges.append((parts[0], _vertex(parts[1]), _vertex(parts[2])))
            M = Matroid.from_graph(tuple(edges), name)
        else:
            raise ParseError(no, f"unknown section {kind!r}")
    except ParseError:
        raise
    except MatroidCircuitError as exc:
        raise ParseError(last, str(exc)) from exc

    if M.n != n:
        raise ParseError(1, f"header says n={n}, found {M.n} elements")
    if M.rank != r:
        raise ParseError(1, f"header says rank={r}, the data has rank {M.rank}")
    return M


def format_matroid(M: Matroid) -> str:
    name = M.name or "M"
    name = re.sub(r"[\s#]+", "_", name)
    out = [f"matroid {name} rank={M.rank} n={M.n}"]
    b = M.backing
    if isinstance(b, GraphRep):
        out.append("graph:")
        out += [f"{label} {u} {v}" for label, u, v in b.edges]
    elif isinstance(b, BinaryRep):
        out.append("binary:")
        out += [" ".join(str(v) for v in row) for row in b.rows]
        out.append(" ".join(M.ground))
    else:
        out.append("bases:")
        out += sorted(" ".join(M.ordered(B)) for B in enumerate_bases(M))
    return "\n".join(out) + "\n"


def format_binary_rows(rows, labels, name: str) -> str:
    """A binary matroid file written row for row from the given matrix."""
    out = [f"matroid {name} rank={len(rows)} n={len(labels)}", "binary:"]
    out += [" ".join(str(v) for v in row) for row in rows]
    out.append(" ".join(labels))
    return "\n".join(out) + "\n"


# ============================================================
# MATRICES
# ============================================================
_MATRIX_HEADER = re.compile(r"rows=(\d+)\s+cols=(\d+)")


def parse_matrix(text: str) -> IntMatrix:
    lines = list(_lines(text))
    if not lines:
        raise ParseError(1, "empty matrix file")
    no, head = lines[0]
    m = _MATRIX_HEADER.fullmatch(head)
    if not m:
        raise ParseError(no, "expected 'rows=<r> cols=<n>'")
    r, n = int(m.group(1)), int(m.group(2))
    body = lines[1:]
    if len(body) not in (r, r + 1):
        raise ParseError(body[-1][0] if body else no, f"expected {r} rows and an optional label line")
    rows = []
    for row_no, line in body[:r]:
        try:
            row = [int(v) for v in line.split()]
        except ValueError:
            raise ParseError(row_no, "matrix entries are integers") from None
        if len(row) != n:
            raise ParseError(row_no, f"expected {n} entries, got {len(row)}")
        rows.append(row)
    labels = ()
    if len(body) == r + 1:
        label_no, label_line = body[r]
        labels = tuple(label_line.split())
        if len(labels) != n:
            raise ParseError(label_no, f"expected {n} column labels, got {len(labels)}")
    return IntMatrix(tuple(map(tuple, rows)), (), labels)


def format_matrix(A: IntMatrix) -> str:
    r, n = A.shape
    out = [f"rows={r} cols={n}"]
    out += [" ".join(str(v) for v in row) for row in A.rows]
    if A.col_labels:
        out.append(" ".join(map(str, A.col_labels)))
    return "\n".join(out) + "\n"


# ============================================================
# DECOMPOSITION TREES
# ============================================================
_TOKEN = re.compile(r"\(|\)|[^\s()\[\]]+")


def _tokens(text: str) -> list[tuple[str, int]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        out += [(m.group(0), no) for m in _TOKEN.finditer(line)]
    return out


class _TreeParser:
    def __init__(self, text: str, base_dir: Path | None):
        self.tokens = _tokens(text)
        self.pos = 0
        self.base_dir = base_dir

    def line(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return self.tokens[-1][1] if self.tokens else 1

    def next(self) -> str:
        if self.pos >= len(self.tokens):
            raise ParseError(self.line(), "unexpected end of tree")
        tok = self.tokens[self.pos][0]
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise ParseError(self.tokens[self.pos - 1][1], f"expected {tok!r}, got {got!r}")

    def words(self) -> list[str]:
        out = []
        while self.pos < len(self.tokens) and self.tokens[self.pos][0] not in ("(", ")"):
            out.append(self.next())
        return out

    def parse(self) -> Tree:
        tree = self.node()
        if self.pos != len(self.tokens):
            raise ParseError(self.line(), "trailing input after the tree")
        return tree

    def node(self) -> Tree:
        self.expect("(")
        line = self.tokens[self.pos - 1][1]
        head = self.next()
        if head in ("1sum", "2sum", "dsum", "dsum+"):
            left, right = self.node(), self.node()
            opts = self.options(line)
            self.expect(")")
            return self.sum_node(head, left, right, opts, line)
        if head == "dual":
            child = self.node()
            self.expect(")")
            return DualNode(child)
        args = self.words()
        self.expect(")")
        return self.leaf(head, args, line)

    def options(self, line: int) -> dict:
        opts = {}
        for word in self.words():
            key, sep, value = word.partition("=")
            if not sep:
                raise ParseError(line, f"expected key=value, got {word!r}")
            opts[key] = value
        return opts

    def sum_node(self, head: str, left: Tree, right: Tree, opts: dict, line: int) -> Tree:
        if head == "1sum":
            if opts:
                raise ParseError(line, "1sum takes no options")
            return OneSum(left, right)
        if head == "2sum":
            if set(opts) != {"glue"}:
                raise ParseError(line, "2sum needs glue=<label>")
            return TwoSum(left, right, opts["glue"])
        if set(opts) != {"triangle"}:
            raise ParseError(line, f"{head} needs triangle=p,q,r")
        triangle = tuple(opts["triangle"].split(","))
        if len(triangle) != 3:
            raise ParseError(line, "a triangle has three labels")
        return (DeltaSum if head == "dsum" else DeltaSumPlus)(left, right, triangle)

    def leaf(self, head: str, args: list[str], line: int) -> Tree:
        if head in ("graphic", "cographic"):
            edges = self.graph_edges(args, line)
            return GraphicLeaf(edges) if head == "graphic" else CographicLeaf(edges)
        if head == "r10":
            return R10Leaf(self.labels(args, R10_LABELS, line))
        if head == "f7":
            return F7Leaf(self.labels(args, F7_LABELS, line))
        if head == "r12":
            if args:
                raise ParseError(line, "r12 takes no labels")
            from .fixtures import r12_tree

            return r12_tree()
        if head == "explicit":
            if len(args) != 1:
                raise ParseError(line, "explicit takes one path")
            path = Path(args[0])
            if self.base_dir is not None and not path.is_absolute():
                path = self.base_dir / path
            try:
                text = path.read_text(encoding="utf-8")
            except OSError as exc:
                raise ParseError(line, f"cannot read {args[0]}: {exc.strerror}") from exc
            return ExplicitLeaf(parse_matroid(text), args[0])
        raise ParseError(line, f"unknown node {head!r}")

    @staticmethod
    def labels(args: list[str], default: tuple, line: int) -> tuple:
        if not args:
            return default
        if len(args) != len(default):
            raise ParseError(line, f"expected {len(default)} labels, got {len(args)}")
        return tuple(args)

    @staticmethod
    def graph_edges(args: list[str], line: int) -> tuple:
        if not args:
            raise ParseError(line, "graph leaf needs K<l> or edges")
        m = re.fullmatch(r"K(\d+)", args[0])
        if m:
            l = int(m.group(1))
            try:
                return complete_edges(l, args[1:] or None)
            except MatroidCircuitError as exc:
                raise ParseError(line, str(exc)) from exc
        if args[0] != "edges":
            raise ParseError(line, f"expected K<l> or 'edges', got {args[0]!r}")
        edges = []
        for word in args[1:]:
            m = re.fullmatch(r"([^:]+):([^-]+)-(.+)", word)
            if not m:
                raise ParseError(line, f"edges are written label:u-v, got {word!r}")
            edges.append((m.group(1), _vertex(m.group(2)), _vertex(m.group(3))))
        if not edges:
            raise ParseError(line, "graph leaf without edges")
        return tuple(edges)


def parse_tree(text: str, base_dir: Path | str | None = None) -> Tree:
    """Parse the s-expression tree format; ``explicit`` paths are relative to base_dir."""
    return _TreeParser(text, Path(base_dir) if base_dir is not None else None).parse()


def _format_edges(kind: str, edges: tuple) -> str:
    labels = [label for label, _, _ in edges]
    verts = {x for _, u, v in edges for x in (u, v)}
    l = len(verts)
    if l >= 2 and len(edges) == l * (l - 1) // 2 and complete_edges(l, labels) == tuple(edges):
        return f"({kind} K{l} {' '.join(labels)})"
    return f"({kind} edges {' '.join(f'{lab}:{u}-{v}' for lab, u, v in edges)})"


def format_tree(tree: Tree) -> str:
    if isinstance(tree, GraphicLeaf):
        return _format_edges("graphic", tree.edges)
    if isinstance(tree, CographicLeaf):
        return _format_edges("cographic", tree.edges)
    if isinstance(tree, R10Leaf):
        return f"(r10 {' '.join(tree.labels)})"
    if isinstance(tree, F7Leaf):
        return f"(f7 {' '.join(tree.labels)})"
    if isinstance(tree, ExplicitLeaf):
        if not tree.source:
            raise FormatError("an explicit leaf without a source path cannot be written")
        return f"(explicit {tree.source})"
    if isinstance(tree, UnitLeaf):
        raise FormatError("rank-0 pieces have no text form")
    if isinstance(tree, DualNode):
        return f"(dual {format_tree(tree.child)})"
    left, right = format_tree(tree.left), format_tree(tree.right)
    if isinstance(tree, OneSum):
        return f"(1sum {left} {right})"
    if isinstance(tree, TwoSum):
        return f"(2sum {left} {right} glue={tree.glue})"
    head = "dsum" if isinstance(tree, DeltaSum) else "dsum+"
    return f"({head} {left} {right} triangle={','.join(tree.triangle)})"


# ============================================================
# CIRCUITS
# ============================================================
_GATE = re.compile(r"g(\d+)\s*=\s*(\w+)\s+(.*)")
_REF = re.compile(r"g(\d+)")


def parse_circuit(text: str, kind: type[_Dag] | None = None) -> _Dag:
    """
    One gate per line, ids consecutive from 0, then ``output g<id>``. Without
    ``kind`` the gate ops decide: max or sub make it tropical.
    """
    gates: list[Gate] = []
    output = None
    ops = set()
    for no, line in _lines(text):
        if output is not None:
            raise ParseError(no, "nothing may follow the output line")
        if line.startswith("output"):
            parts = line.split()
            m = _REF.fullmatch(parts[1]) if len(parts) == 2 else None
            if not m:
                raise ParseError(no, "expected 'output g<id>'")
            output = int(m.group(1))
            if output >= len(gates):
                raise ParseError(no, f"output g{output} is not defined")
            continue
        m = _GATE.fullmatch(line)
        if not m:
            raise ParseError(no, "expected 'g<id> = <op> ...'")
        gid, op, rest = int(m.group(1)), m.group(2), m.group(3).split()
        if gid != len(gates):
            raise ParseError(no, f"expected gate g{len(gates)}, got g{gid}")
        if op == "input":
            if len(rest) != 1:
                raise ParseError(no, "input gates name one variable")
            gates.append(Gate("input", (), rest[0]))
            continue
        refs = [_REF.fullmatch(tok) for tok in rest]
        if len(refs) != 2 or not all(refs):
            raise ParseError(no, f"{op} takes two gate references")
        args = tuple(int(r.group(1)) for r in refs)
        if any(a >= gid for a in args):
            raise ParseError(no, "operands must be earlier gates")
        ops.add(op)
        gates.append(Gate(op, args))
    if output is None:
        raise ParseError(len(text.splitlines()) or 1, "missing 'output g<id>' line")

    if kind is None:
        kind = TropicalCircuit if ops & {"max", "sub"} else Circuit
    bad = ops - kind.OPS
    if bad:
        raise ParseError(1, f"ops {sorted(bad)} are not allowed in a {kind.__name__}")
    return kind(tuple(gates), output)


def format_circuit(C: _Dag) -> str:
    out = []
    for i, g in enumerate(C.gates):
        if g.op == "input":
            out.append(f"g{i} = input {g.var}")
        else:
            out.append(f"g{i} = {g.op} " + " ".join(f"g{a}" for a in g.args))
    out.append(f"output g{C.output}")
    return "\n".join(out) + "\n"


# ============================================================
# RELU NETWORKS
# ============================================================
_TERM = re.compile(r"(-?\d+(?:/\d+)?)\*(x\[[^\]]+\]|n\d+)")


def _terms(words: list[str], no: int) -> tuple[tuple[str, Fraction], ...]:
    out = []
    for word in words:
        m = _TERM.fullmatch(word)
        if not m:
            raise ParseError(no, f"expected <weight>*<ref>, got {word!r}")
        out.append((m.group(2), Fraction(m.group(1))))
    return tuple(out)


def format_relu(N: ReluNetwork) -> str:
    def terms(weights) -> str:
        return " ".join(f"{format_rational(w)}*{ref}" for ref, w in weights)

    out = [f"n{k} = relu {terms(neuron.weights)}".rstrip() for k, neuron in enumerate(N.neurons)]
    out.append(f"readout {terms(N.readout)}".rstrip())
    return "\n".join(out) + "\n"


def parse_relu(text: str) -> ReluNetwork:
    neurons: list[Neuron] = []
    readout = None
    variables: dict[str, None] = {}
    for no, line in _lines(text):
        if readout is not None:
            raise ParseError(no, "nothing may follow the readout line")
        words = line.split()
        if words[0] == "readout":
            readout = _terms(words[1:], no)
            weights = readout
        else:
            m = re.fullmatch(r"n(\d+)", words[0])
            if not m or len(words) < 3 or words[1:3] != ["=", "relu"]:
                raise ParseError(no, "expected 'n<id> = relu ...' or 'readout ...'")
            if int(m.group(1)) != len(neurons):
                raise ParseError(no, f"expected neuron n{len(neurons)}")
            weights = _terms(words[3:], no)
            neurons.append(Neuron(weights))
        for ref, _ in weights:
            if ref.startswith("x["):
                variables.setdefault(ref[2:-1], None)
            elif int(ref[1:]) >= len(neurons) - (0 if readout is not None else 1):
                raise ParseError(no, f"{ref} is not an earlier neuron")
    if readout is None:
        raise ParseError(len(text.splitlines()) or 1, "missing readout line")
    return ReluNetwork(tuple(neurons), readout, tuple(variables))


# ============================================================
# POINTS
# ============================================================
def parse_point(text: str, seed: int | None = None) -> TestPoint:
    """``<variable> <value>`` per line; values are integers or p/q."""
    values: dict[str, Fraction] = {}
    for no, line in _lines(text):
        parts = line.replace("=", " ").split()
        if len(parts) != 2:
            raise ParseError(no, "expected '<variable> <value>'")
        var, value = parts
        if var in values:
            raise ParseError(no, f"variable {var} assigned twice")
        values[var] = parse_rational(value, no)
    return TestPoint(values, seed)


def format_point(p: TestPoint) -> str:
    return "".join(f"{var} {format_rational(x)}\n" for var, x in p.assignment.items())


__all__ = [
    "parse_rational",
    "parse_matroid",
    "format_matroid",
    "format_binary_rows",
    "parse_matrix",
    "format_matrix",
    "parse_tree",
    "format_tree",
    "parse_circuit",
    "format_circuit",
    "parse_relu",
    "format_relu",
    "parse_point",
    "format_point",
]
