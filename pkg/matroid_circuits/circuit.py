"""
Circuit IR.

A circuit is a topologically ordered gate list over named variables. Rational
circuits use add/mul/div, tropical circuits use max/add/sub; there are no
constant gates in either. Values are exact (``Fraction``) in both semantics.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, ClassVar, Iterable, Mapping, Sequence

import sympy

from .errors import (
    CircuitError,
    DivisionByZero,
    PoleAtZero,
    TooLarge,
    UnassignedVariable,
    ZeroOutput,
)

logger = logging.getLogger(__name__)

RATIONAL_OPS = frozenset({"input", "add", "mul", "div"})
TROPICAL_OPS = frozenset({"input", "max", "add", "sub"})

# guards for expand_symbolic
MAX_EXPAND_SIZE = 60
MAX_EXPAND_DEGREE = 12


# ============================================================
# GATES AND CIRCUITS
# ============================================================
@dataclass(frozen=True)
class Gate:
    op: str
    args: tuple[int, ...] = ()
    var: str | None = None


@dataclass(frozen=True)
class _Dag:
    gates: tuple[Gate, ...]
    output: int

    OPS: ClassVar[frozenset] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not self.gates:
            raise CircuitError("empty circuit")
        if not 0 <= self.output < len(self.gates):
            raise CircuitError(f"output g{self.output} does not exist")
        for i, g in enumerate(self.gates):
            if g.op not in self.OPS:
                raise CircuitError(f"g{i}: op {g.op!r} not allowed in {type(self).__name__}")
            if g.op == "input":
                if not g.var or g.args:
                    raise CircuitError(f"g{i}: malformed input gate")
            elif len(g.args) != 2 or any(not 0 <= a < i for a in g.args):
                raise CircuitError(f"g{i}: operands must be two earlier gates")

    @property
    def size(self) -> int:
        return sum(1 for g in self.gates if g.op != "input")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(g.var for g in self.gates if g.op == "input")

    def input_gate(self, var: str) -> int:
        for i, g in enumerate(self.gates):
            if g.op == "input" and g.var == var:
                return i
        raise KeyError(var)


class Circuit(_Dag):
    OPS = RATIONAL_OPS


class TropicalCircuit(_Dag):
    OPS = TROPICAL_OPS


# ============================================================
# BUILDER
# ============================================================
class CircuitBuilder:
    """
    Incremental construction. Inputs are deduplicated by variable name, so
    splicing a circuit whose free variables already exist here shares them.
    """

    def __init__(self, kind: type[_Dag] = Circuit):
        self.kind = kind
        self._gates: list[Gate] = []
        self._inputs: dict[str, int] = {}

    def input(self, var: str) -> int:
        got = self._inputs.get(var)
        if got is None:
            got = self._push(Gate("input", (), var))
            self._inputs[var] = got
        return got

    def _push(self, gate: Gate) -> int:
        self._gates.append(gate)
        return len(self._gates) - 1

    def op(self, name: str, a: int, b: int) -> int:
        if name not in self.kind.OPS or name == "input":
            raise CircuitError(f"op {name!r} not allowed in {self.kind.__name__}")
        return self._push(Gate(name, (a, b)))

    def add(self, a: int, b: int) -> int:
        return self.op("add", a, b)

    def mul(self, a: int, b: int) -> int:
        return self.op("mul", a, b)

    def div(self, a: int, b: int) -> int:
        return self.op("div", a, b)

    def max(self, a: int, b: int) -> int:
        return self.op("max", a, b)

    def sub(self, a: int, b: int) -> int:
        return self.op("sub", a, b)

    def chain(self, name: str, items: Sequence[int]) -> int:
        """Left fold of ``items`` with one gate per step."""
        if not items:
            raise CircuitError("empty chain")
        acc = items[0]
        for g in items[1:]:
            acc = self.op(name, acc, g)
        return acc

    def splice(self, circuit: _Dag, bindings: Mapping[str, int] | None = None) -> int:
        """
        Copy ``circuit`` in once. Variables in ``bindings`` are wired to the
        given gates, the rest become (shared) inputs. Returns the gate id of
        the copied output.
        """
        bindings = bindings or {}
        at: dict[int, int] = {}
        for i, g in enumerate(circuit.gates):
            if g.op == "input":
                at[i] = bindings[g.var] if g.var in bindings else self.input(g.var)
            else:
                at[i] = self._push(Gate(g.op, tuple(at[a] for a in g.args)))
        return at[circuit.output]

    @property
    def size(self) -> int:
        return sum(1 for g in self._gates if g.op != "input")

    def build(self, output: int) -> _Dag:
        return self.kind(tuple(self._gates), output)


def prune(C: _Dag) -> _Dag:
    """Drop gates the output does not depend on; ids are renumbered."""
    live = {C.output}
    for i in range(C.output, -1, -1):
        if i in live:
            live.update(C.gates[i].args)
    at: dict[int, int] = {}
    gates = []
    for i, g in enumerate(C.gates):
        if i in live:
            at[i] = len(gates)
            gates.append(Gate(g.op, tuple(at[a] for a in g.args), g.var))
    return type(C)(tuple(gates), at[C.output])


# ============================================================
# EVALUATION
# ============================================================
class RationalSemiring:
    @staticmethod
    def coerce(v) -> Fraction:
        return Fraction(v)

    ops: ClassVar[dict[str, Callable]] = {
        "add": lambda a, b: a + b,
        "mul": lambda a, b: a * b,
        "div": lambda a, b: a / b,
    }


class MaxPlusSemiring:
    @staticmethod
    def coerce(v) -> Fraction:
        return Fraction(v)

    ops: ClassVar[dict[str, Callable]] = {
        "max": max,
        "add": lambda a, b: a + b,
        "sub": lambda a, b: a - b,
    }


def gate_values(C: _Dag, assignment: Mapping[str, object]) -> list[Fraction]:
    """Value of every gate, in order."""
    semiring = MaxPlusSemiring if isinstance(C, TropicalCircuit) else RationalSemiring
    values: list[Fraction] = []
    for i, g in enumerate(C.gates):
        if g.op == "input":
            if g.var not in assignment:
                raise UnassignedVariable(g.var)
            values.append(semiring.coerce(assignment[g.var]))
            continue
        a, b = (values[j] for j in g.args)
        if g.op == "div" and b == 0:
            raise DivisionByZero(i)
        values.append(semiring.ops[g.op](a, b))
    return values


def eval_rational(C: Circuit, assignment: Mapping[str, object]) -> Fraction:
    if not isinstance(C, Circuit):
        raise CircuitError("eval_rational needs a rational circuit")
    return gate_values(C, assignment)[C.output]


def eval_tropical(T: TropicalCircuit, assignment: Mapping[str, object]) -> Fraction:
    if not isinstance(T, TropicalCircuit):
        raise CircuitError("eval_tropical needs a tropical circuit")
    return gate_values(T, assignment)[T.output]


_TROPICAL_OF = {"input": "input", "add": "max", "mul": "add", "div": "sub"}


def tropicalize(C: Circuit) -> TropicalCircuit:
    gates = tuple(Gate(_TROPICAL_OF[g.op], g.args, g.var) for g in C.gates)
    return TropicalCircuit(gates, C.output)


# ============================================================
# RELU NETWORKS
# ============================================================
@dataclass(frozen=True)
class Neuron:
    # (ref, weight); refs are "x[<var>]" or "n<k>"
    weights: tuple[tuple[str, Fraction], ...]


@dataclass(frozen=True)
class ReluNetwork:
    neurons: tuple[Neuron, ...]
    readout: tuple[tuple[str, Fraction], ...]
    variables: tuple[str, ...] = field(default=())

    @property
    def size(self) -> int:
        return len(self.neurons)

    def all_weights(self) -> Iterable[Fraction]:
        for n in self.neurons:
            for _, w in n.weights:
                yield w
        for _, w in self.readout:
            yield w


def input_ref(var: str) -> str:
    return f"x[{var}]"


def _merge(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for ref, w in b.items():
        v = out.get(ref, 0) + sign * w
        if v:
            out[ref] = Fraction(v)
        else:
            out.pop(ref, None)
    return out


class _Lowering:
    def __init__(self):
        self.neurons: list[Neuron] = []

    def relu(self, combo: dict) -> str:
        self.neurons.append(Neuron(tuple(combo.items())))
        return f"n{len(self.neurons) - 1}"

    def materialize(self, combo: dict) -> dict:
        """combo as relu(c) - relu(-c) on two fresh neurons."""
        pos = self.relu(combo)
        neg = self.relu({r: -w for r, w in combo.items()})
        return {pos: Fraction(1), neg: Fraction(-1)}


def lower_to_relu(T: TropicalCircuit) -> ReluNetwork:
    """
    Every gate value is kept as a linear combination of inputs and neurons.
    add/sub merge combinations; max(a, b) adds the three units

        relu(b), relu(-b), relu(a - relu(b) + relu(-b))

    and reads as the sum of the first and third minus the second. If an
    add/sub would put two terms on the same ref, the right operand is first
    carried through a relu(c) / relu(-c) pair, so all weights stay in {0, ±1}.
    That pair is the only cost of an add/sub (two neurons, none without a
    collision), so the network has at most three neurons per gate.
    """
    if not isinstance(T, TropicalCircuit):
        raise CircuitError("lower_to_relu needs a tropical circuit")
    net = _Lowering()
    values: list[dict] = []
    for g in T.gates:
        if g.op == "input":
            values.append({input_ref(g.var): Fraction(1)})
            continue
        a, b = (values[j] for j in g.args)
        if g.op == "max":
            pos = net.relu(b)
            neg = net.relu({r: -w for r, w in b.items()})
            carried_b = {pos: Fraction(1), neg: Fraction(-1)}
            top = net.relu(_merge(a, carried_b, -1))
            values.append({top: Fraction(1), pos: Fraction(1), neg: Fraction(-1)})
            continue
        if a.keys() & b.keys():
            b = net.materialize(b)
        values.append(_merge(a, b, 1 if g.op == "add" else -1))

    readout = tuple(values[T.output].items())
    logger.debug("lowered %d gates to %d neurons", T.size, len(net.neurons))
    return ReluNetwork(tuple(net.neurons), readout, T.variables)


def forward(N: ReluNetwork, assignment: Mapping[str, object]) -> Fraction:
    values: dict[str, Fraction] = {}
    for var in N.variables:
        if var not in assignment:
            raise UnassignedVariable(var)
        values[input_ref(var)] = Fraction(assignment[var])

    def combine(weights) -> Fraction:
        return sum((w * values[ref] for ref, w in weights), Fraction(0))

    for k, neuron in enumerate(N.neurons):
        values[f"n{k}"] = max(Fraction(0), combine(neuron.weights))
    return combine(N.readout)


# ============================================================
# REWRITES
# ============================================================
def substitute(C: Circuit, bindings: Mapping[str, Circuit]) -> Circuit:
    """Each bound circuit is spliced in once and shared by every use."""
    b = CircuitBuilder(type(C))
    bound = {var: b.splice(sub) for var, sub in bindings.items()}
    out = b.splice(C, bound)
    return b.build(out)


def eliminate_zero(C: Circuit, zeroed: Iterable[str]) -> Circuit:
    """
    Rewrite C with the variables in ``zeroed`` set to formal zero:
    0+a -> a, 0*a -> 0, 0/a -> 0, a/0 -> PoleAtZero.
    """
    zeroed = set(zeroed)
    b = CircuitBuilder(Circuit)
    at: list[int | None] = []
    for i, g in enumerate(C.gates):
        if g.op == "input":
            at.append(None if g.var in zeroed else b.input(g.var))
            continue
        x, y = (at[j] for j in g.args)
        if g.op == "add":
            at.append(y if x is None else x if y is None else b.add(x, y))
        elif g.op == "mul":
            at.append(None if x is None or y is None else b.mul(x, y))
        elif y is None:
            raise PoleAtZero(i)
        else:
            at.append(None if x is None else b.div(x, y))
    out = at[C.output]
    if out is None:
        raise ZeroOutput("the circuit is formally zero after the substitution")
    return prune(b.build(out))


def naive_from_bases(bases: Iterable[Iterable[str]], variables: Sequence[str]) -> Circuit:
    """Σ_B Π_{e∈B} x_e written out term by term."""
    order = {v: i for i, v in enumerate(variables)}
    terms = sorted(
        (sorted(B, key=order.__getitem__) for B in bases),
        key=lambda t: [order[e] for e in t],
    )
    if not terms:
        raise CircuitError("no bases")
    if not terms[0]:
        raise CircuitError("rank-0 matroid: the polynomial is the constant 1")
    b = CircuitBuilder(Circuit)
    for v in variables:
        b.input(v)
    products = [b.chain("mul", [b.input(e) for e in term]) for term in terms]
    return b.build(b.chain("add", products))


def dual_wrap(C: Circuit, ground: Sequence[str]) -> Circuit:
    """
    x^E · C(1/x) with exactly n mul and n div gates: a running product
    p_k = x_1···x_k, then 1/x_1 = x_2/p_2 and 1/x_k = p_{k-1}/p_k.
    """
    ground = list(ground)
    if len(ground) < 2:
        raise CircuitError("dual wrap needs at least two elements")
    stray = set(C.variables) - set(ground)
    if stray:
        raise CircuitError(f"circuit variables outside the ground set: {sorted(stray)}")
    b = CircuitBuilder(Circuit)
    xs = [b.input(e) for e in ground]
    prods = [xs[0]]
    for x in xs[1:]:
        prods.append(b.mul(prods[-1], x))
    recips = [b.div(xs[1], prods[1])]
    recips += [b.div(prods[k - 1], prods[k]) for k in range(1, len(xs))]
    out = b.splice(C, dict(zip(ground, recips)))
    return b.build(b.mul(prods[-1], out))


# ============================================================
# SYMBOLIC EXPANSION (tiny circuits only)
# ============================================================
@dataclass(frozen=True)
class SparsePolynomial:
    variables: tuple[str, ...]
    # exponent vector -> positive integer coefficient
    terms: Mapping[tuple[int, ...], int]

    def __post_init__(self):
        bad = [c for c in self.terms.values() if c < 1]
        if bad:
            raise CircuitError(f"non-positive coefficient {bad[0]}")

    @classmethod
    def from_poly(cls, poly: sympy.Poly, variables: Sequence[str]) -> "SparsePolynomial":
        return cls(tuple(variables), {tuple(m): int(c) for m, c in poly.terms()})

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        vals = [Fraction(point[v]) for v in self.variables]
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            term = Fraction(coeff)
            for v, k in zip(vals, mono):
                term *= v ** k
            total += term
        return total

    def tropical(self, weights: Mapping[str, object]) -> Fraction:
        """max over monomials of <exponent, w>; coefficients go to 0."""
        w = [Fraction(weights[v]) for v in self.variables]
        return max(sum((k * x for k, x in zip(mono, w)), Fraction(0)) for mono in self.terms)


def expand_symbolic(C: Circuit) -> tuple[SparsePolynomial, SparsePolynomial]:
    """
    (numerator, denominator) with positive coefficients, built gate by gate
    without cancellation. Equal denominators are reused on addition.
    """
    if C.size > MAX_EXPAND_SIZE:
        raise TooLarge(f"size {C.size} exceeds the expansion guard ({MAX_EXPAND_SIZE})")
    variables = list(dict.fromkeys(C.variables))
    gens = [sympy.Symbol(v) for v in variables]
    one = sympy.Poly(1, *gens)
    pairs: list[tuple[sympy.Poly, sympy.Poly]] = []
    for g in C.gates:
        if g.op == "input":
            pairs.append((sympy.Poly(sympy.Symbol(g.var), *gens), one))
            continue
        (na, da), (nb, db) = (pairs[j] for j in g.args)
        if g.op == "add":
            pair = (na + nb, da) if da == db else (na * db + nb * da, da * db)
        elif g.op == "mul":
            pair = (na * nb, da * db)
        else:
            pair = (na * db, da * nb)
        if max(pair[0].total_degree(), pair[1].total_degree()) > MAX_EXPAND_DEGREE:
            raise TooLarge(f"degree exceeds the expansion guard ({MAX_EXPAND_DEGREE})")
        pairs.append(pair)
    num, den = pairs[C.output]
    return SparsePolynomial.from_poly(num, variables), SparsePolynomial.from_poly(den, variables)


def tropical_normal_form(pair: tuple[SparsePolynomial, SparsePolynomial], weights: Mapping[str, object]) -> Fraction:
    num, den = pair
    return num.tropical(weights) - den.tropical(weights)


# ============================================================
# STATS
# ============================================================
@dataclass(frozen=True)
class CircuitStats:
    size: int
    counts: Mapping[str, int]
    depth: int
    variables: int


def circuit_stats(C: _Dag) -> CircuitStats:
    depth: list[int] = []
    counts: dict[str, int] = {}
    for g in C.gates:
        counts[g.op] = counts.get(g.op, 0) + 1
        depth.append(0 if g.op == "input" else 1 + max(depth[a] for a in g.args))
    return CircuitStats(C.size, counts, depth[C.output], len(set(C.variables)))


__all__ = [
    "Gate",
    "Circuit",
    "TropicalCircuit",
    "CircuitBuilder",
    "prune",
    "gate_values",
    "eval_rational",
    "eval_tropical",
    "tropicalize",
    "Neuron",
    "ReluNetwork",
    "input_ref",
    "lower_to_relu",
    "forward",
    "substitute",
    "eliminate_zero",
    "naive_from_bases",
    "dual_wrap",
    "SparsePolynomial",
    "expand_symbolic",
    "tropical_normal_form",
    "CircuitStats",
    "circuit_stats",
]
