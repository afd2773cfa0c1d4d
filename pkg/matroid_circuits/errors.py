from __future__ import annotations


class MatroidCircuitError(Exception):
    """Base for everything this package raises on purpose."""


# ============================================================
# MATROIDS
# ============================================================
class MatroidError(MatroidCircuitError):
    pass


class GroundTooLarge(MatroidError):
    def __init__(self, n: int, limit: int, what: str = "enumeration"):
        super().__init__(f"ground set of {n} elements exceeds the {what} guard ({limit})")
        self.n = n
        self.limit = limit


class UnknownElement(MatroidError):
    def __init__(self, labels):
        labels = sorted(map(str, labels))
        super().__init__(f"unknown element(s): {', '.join(labels)}")
        self.labels = labels


class EmptyBasisSet(MatroidError):
    pass


class BadInterface(MatroidError):
    pass


class BadTriangle(MatroidError):
    pass


class NotACocircuit(MatroidError):
    pass


class NotBinary(MatroidError):
    pass


class NotDecomposable(MatroidError):
    pass


class DisconnectedGraph(MatroidError):
    pass


# ============================================================
# LINEAR ALGEBRA
# ============================================================
class LinalgError(MatroidCircuitError):
    pass


class NotRegular(LinalgError):
    pass


class MatrixTooLarge(LinalgError):
    pass


class ZeroRow(LinalgError):
    pass


# ============================================================
# CIRCUITS
# ============================================================
class CircuitError(MatroidCircuitError):
    pass


class DivisionByZero(CircuitError):
    def __init__(self, gate: int):
        super().__init__(f"division by zero at gate g{gate}")
        self.gate = gate


class PoleAtZero(CircuitError):
    def __init__(self, gate: int):
        super().__init__(f"denominator of gate g{gate} is formally zero")
        self.gate = gate


class ZeroOutput(CircuitError):
    pass


class UnassignedVariable(CircuitError):
    def __init__(self, name: str):
        super().__init__(f"variable {name} is not assigned")
        self.name = name


class TooLarge(CircuitError):
    pass


class VariableClash(CircuitError):
    def __init__(self, names):
        names = sorted(names)
        super().__init__(f"variables shared between operands: {', '.join(names)}")
        self.names = names


# ============================================================
# SYNTHESIS
# ============================================================
class SynthesisError(MatroidCircuitError):
    pass


class BudgetExceeded(SynthesisError):
    pass


class NotThreeConnected(SynthesisError):
    pass


class MissingTriangle(SynthesisError):
    pass


# ============================================================
# FILES / FIXTURES
# ============================================================
class FormatError(MatroidCircuitError):
    pass


class ParseError(FormatError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class UnknownFixture(FormatError):
    pass
