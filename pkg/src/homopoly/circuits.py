"""Arithmetic circuits: a topologically ordered gate list with one sink."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .polynomials import MissingAssignment, SparsePolynomial, VarId, parse_var, ue

DEFAULT_TERM_CAP = 10**6

INPUT, CONST, ADD, MUL = "input", "const", "add", "mul"


class CircuitError(ValueError):
    pass


class TermCapExceeded(CircuitError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    var: VarId | None = None
    value: Fraction | None = None
    children: tuple[int, ...] = ()
    label: str = ""

    @property
    def is_input(self) -> bool:
        return self.kind in (INPUT, CONST)


class ArithmeticCircuit:
    """Immutable circuit.  Children must precede their parent in ``gates``;
    every gate except ``output`` must feed some other gate."""

    def __init__(self, gates, output: int | None = None, bounded_fan_in: bool = False):
        self.gates: tuple[Gate, ...] = tuple(gates)
        self.output = len(self.gates) - 1 if output is None else output
        self.bounded_fan_in = bounded_fan_in
        self._validate()

    def _validate(self):
        if not self.gates:
            raise CircuitError("empty circuit")
        if not 0 <= self.output < len(self.gates):
            raise CircuitError(f"output index {self.output} out of range")
        used = set()
        for idx, g in enumerate(self.gates):
            if g.kind == INPUT:
                if g.var is None or g.children:
                    raise CircuitError(f"gate {idx}: input gate needs a variable and no children")
            elif g.kind == CONST:
                if g.value is None or g.children:
                    raise CircuitError(f"gate {idx}: constant gate needs a value and no children")
            elif g.kind in (ADD, MUL):
                if not g.children:
                    raise CircuitError(f"gate {idx}: computation gate without children")
                if self.bounded_fan_in and len(g.children) != 2:
                    raise CircuitError(f"gate {idx}: fan-in {len(g.children)} in bounded mode")
                for c in g.children:
                    if not 0 <= c < idx:
                        # also rules out cycles
                        raise CircuitError(f"gate {idx}: child {c} does not precede it")
                    used.add(c)
            else:
                raise CircuitError(f"gate {idx}: unknown kind {g.kind!r}")
        sinks = [i for i in range(len(self.gates)) if i not in used]
        if sinks != [self.output]:
            raise CircuitError(f"circuit must have exactly one sink (the output); sinks are {sinks}")

    def input_variables(self) -> frozenset:
        return frozenset(g.var for g in self.gates if g.kind == INPUT)

    def evaluate(self, point: Mapping[VarId, Fraction | int]) -> Fraction:
        vals: list[Fraction] = []
        for g in self.gates:
            if g.kind == INPUT:
                if g.var not in point:
                    raise MissingAssignment(g.var)
                vals.append(Fraction(point[g.var]))
            elif g.kind == CONST:
                vals.append(g.value)
            elif g.kind == ADD:
                vals.append(sum((vals[c] for c in g.children), Fraction(0)))
            else:
                acc = Fraction(1)
                for c in g.children:
                    acc *= vals[c]
                vals.append(acc)
        return vals[self.output]

    def expand(self, term_cap: int = DEFAULT_TERM_CAP) -> SparsePolynomial:
        polys: list[SparsePolynomial] = []
        for idx, g in enumerate(self.gates):
            if g.kind == INPUT:
                p = SparsePolynomial.var(g.var)
            elif g.kind == CONST:
                p = SparsePolynomial.constant(g.value)
            elif g.kind == ADD:
                p = SparsePolynomial()
                for c in g.children:
                    p = p + polys[c]
            else:
                p = SparsePolynomial.constant(1)
                for c in g.children:
                    p = p * polys[c]
                    if len(p) > term_cap:
                        raise TermCapExceeded(f"gate {idx} exceeds {term_cap} terms")
            if len(p) > term_cap:
                raise TermCapExceeded(f"gate {idx} exceeds {term_cap} terms")
            polys.append(p)
        return polys[self.output]

    def size(self) -> int:
        return sum(1 for g in self.gates if not g.is_input)

    def depth(self) -> int:
        """Longest path measured in gate layers, the input layer counting as 1."""
        d: list[int] = []
        for g in self.gates:
            d.append(1 if g.is_input else 1 + max(d[c] for c in g.children))
        return d[self.output]

    def metrics(self) -> tuple[int, int]:
        return self.size(), self.depth()

    def to_json(self) -> dict:
        gates = []
        for idx, g in enumerate(self.gates):
            item = {"index": idx, "kind": g.kind}
            if g.kind == INPUT:
                item["var"] = str(g.var)
            elif g.kind == CONST:
                item["value"] = str(g.value)
            else:
                item["children"] = list(g.children)
            if g.label:
                item["label"] = g.label
            gates.append(item)
        return {"gates": gates, "output": self.output, "bounded_fan_in": self.bounded_fan_in}

    @classmethod
    def from_json(cls, data) -> "ArithmeticCircuit":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "gates" not in data or "output" not in data:
            raise CircuitError("circuit JSON needs `gates` and `output`")
        gates = []
        for pos, item in enumerate(data["gates"]):
            if item.get("index") != pos:
                raise CircuitError(f"gate at position {pos} has index {item.get('index')!r}")
            kind = item.get("kind")
            try:
                if kind == INPUT:
                    gates.append(Gate(INPUT, var=parse_var(item["var"]), label=item.get("label", "")))
                elif kind == CONST:
                    gates.append(Gate(CONST, value=Fraction(item["value"]), label=item.get("label", "")))
                else:
                    gates.append(Gate(kind, children=tuple(int(c) for c in item["children"]), label=item.get("label", "")))
            except (KeyError, TypeError, ValueError) as exc:
                raise CircuitError(f"gate {pos}: {exc}") from exc
        return cls(gates, int(data["output"]), bool(data.get("bounded_fan_in", False)))


def eval_circuit(c: ArithmeticCircuit, point) -> Fraction:
    return c.evaluate(point)


def expand_to_polynomial(c: ArithmeticCircuit, term_cap: int = DEFAULT_TERM_CAP) -> SparsePolynomial:
    return c.expand(term_cap)


def metrics(c: ArithmeticCircuit) -> tuple[int, int]:
    return c.metrics()


def build_loop_case_circuit(n: int) -> ArithmeticCircuit:
    """prod over edges e of K_n of (1 + x_e): one +-gate per edge and a single
    unbounded product gate (fan-in 1 when n = 2)."""
    if n < 1:
        raise CircuitError("n must be at least 1")
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    gates = [Gate(CONST, value=Fraction(1), label="1")]
    inputs = []
    for i, j in edges:
        gates.append(Gate(INPUT, var=ue(i, j)))
        inputs.append(len(gates) - 1)
    sums = []
    for pos in inputs:
        gates.append(Gate(ADD, children=(0, pos)))
        sums.append(len(gates) - 1)
    # K_1 has no edges: the empty product is taken over the constant gate
    gates.append(Gate(MUL, children=tuple(sums) or (0,)))
    return ArithmeticCircuit(gates)
