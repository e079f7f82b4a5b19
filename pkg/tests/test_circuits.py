import random
from fractions import Fraction

import pytest

from homopoly.circuits import (ADD, CONST, INPUT, MUL, ArithmeticCircuit, CircuitError, Gate, TermCapExceeded,
                               build_loop_case_circuit, eval_circuit, expand_to_polynomial, metrics)
from homopoly.families import edge_variables, hom_poly
from homopoly.graphs import make_family
from homopoly.polynomials import aux, parse_polynomial


def small():
    x, y = aux("x"), aux("y")
    gates = [Gate(INPUT, var=x), Gate(INPUT, var=y), Gate(CONST, value=Fraction(2)),
             Gate(ADD, children=(0, 1)), Gate(MUL, children=(3, 2))]
    return ArithmeticCircuit(gates)


def test_small_circuit():
    c = small()
    assert eval_circuit(c, {aux("x"): 3, aux("y"): 4}) == 14
    assert expand_to_polynomial(c) == parse_polynomial("2*x + 2*y")
    assert metrics(c) == (2, 3)


def test_json_round_trip():
    c = small()
    again = ArithmeticCircuit.from_json(c.to_json())
    assert again.to_json() == c.to_json()
    data = c.to_json()
    data["gates"][1]["index"] = 5
    with pytest.raises(CircuitError):
        ArithmeticCircuit.from_json(data)


@pytest.mark.parametrize("gates", [
    [Gate(INPUT, var=aux("x")), Gate(ADD, children=(2,)), Gate(MUL, children=(0, 1))],
    [Gate(INPUT, var=aux("x")), Gate(INPUT, var=aux("y"))],
    [Gate("pow", children=())],
    [Gate(ADD, children=())],
])
def test_invalid_circuits(gates):
    with pytest.raises(CircuitError):
        ArithmeticCircuit(gates)


def test_bounded_fan_in():
    x, y, z = aux("x"), aux("y"), aux("z")
    gates = [Gate(INPUT, var=x), Gate(INPUT, var=y), Gate(INPUT, var=z), Gate(ADD, children=(0, 1, 2))]
    ArithmeticCircuit(gates)
    with pytest.raises(CircuitError):
        ArithmeticCircuit(gates, bounded_fan_in=True)


def test_term_cap():
    c = build_loop_case_circuit(5)
    with pytest.raises(TermCapExceeded):
        c.expand(term_cap=100)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_loop_case_circuit(n):
    c = build_loop_case_circuit(n)
    loop = make_family("single_looped_vertex")
    assert c.expand() == hom_poly(loop, n)
    assert c.size() == n * (n - 1) // 2 + 1
    # K_1 has no sum layer, so its depth is one less
    assert c.depth() == (3 if n >= 2 else 2)
    rng = random.Random(n)
    for _ in range(20):
        pt = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for v in edge_variables(n)}
        assert c.evaluate(pt) == c.expand().evaluate(pt)
