import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homopoly.polynomials import (MissingAssignment, PolynomialError, SparsePolynomial, aux, comparable_pair, de,
                                  difference_witness, equals_probabilistic, format_polynomial, generators,
                                  hereditary_closure, is_hereditary, is_pure, monomial_set, parse_polynomial,
                                  parse_var, ue)

VARS = [ue(1, 2), ue(1, 3), de(2, 1), aux("y")]

coefficients = st.fractions(min_value=-20, max_value=20, max_denominator=6)
monomials = st.lists(st.tuples(st.sampled_from(VARS), st.integers(1, 3)), max_size=3).map(
    lambda items: tuple(sorted({v: e for v, e in items}.items())))
polys = st.dictionaries(monomials, coefficients, max_size=6).map(SparsePolynomial)


@given(polys, polys, polys)
@settings(max_examples=60, deadline=None)
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == SparsePolynomial()
    assert p * 1 == p


@given(polys)
@settings(max_examples=60, deadline=None)
def test_text_and_json_round_trip(p):
    assert parse_polynomial(format_polynomial(p)) == p
    assert SparsePolynomial.from_json(p.to_json()) == p


@given(polys, st.integers(0, 5))
@settings(max_examples=60, deadline=None)
def test_components_reassemble(p, _):
    total = SparsePolynomial()
    for k in range(p.degree() + 1):
        total = total + p.homogeneous_component(k)
    assert total == p
    y_only = [aux("y")]
    total = SparsePolynomial()
    for k in range(p.degree(y_only) + 1):
        total = total + p.homogeneous_component(k, y_only)
    assert total == p


@given(polys)
@settings(max_examples=40, deadline=None)
def test_evaluation_is_a_homomorphism(p):
    rng = random.Random(3)
    q = p * p + p
    pt = {v: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for v in VARS}
    assert q.evaluate(pt) == p.evaluate(pt) ** 2 + p.evaluate(pt)


def test_text_format():
    p = parse_polynomial("1 + x{1,2} + 3/2 * x{1,2}^2 * y - 2 * xd{2,1}")
    assert format_polynomial(p) == "1 + x{1,2} - 2 * xd{2,1} + 3/2 * x{1,2}^2 * y"
    assert format_polynomial(SparsePolynomial()) == "0"
    assert parse_var("x{3,1}") == ue(1, 3)
    assert parse_var("xd{3,1}") == de(3, 1)
    with pytest.raises(PolynomialError):
        parse_polynomial("x{1,1}")


def test_substitution_forms():
    x, y = aux("x"), aux("y")
    p = parse_polynomial("x*y + x^2")
    assert p.substitute({y: 1}) == parse_polynomial("x + x^2")
    assert p.substitute({x: 0}).is_zero()
    assert p.substitute({y: x}) == parse_polynomial("2*x^2")
    assert p.substitute({x: parse_polynomial("y + 1")}) == parse_polynomial("y^2 + y + y^2 + 2*y + 1")


def test_missing_assignment():
    with pytest.raises(MissingAssignment):
        parse_polynomial("x*y").evaluate({aux("x"): 1})


def test_probabilistic_and_witness():
    p, q = parse_polynomial("x + y"), parse_polynomial("y + x + 0")
    assert equals_probabilistic(p, q)
    r = parse_polynomial("x + 2*y")
    assert not equals_probabilistic(p, r)
    mono, a, b = difference_witness(p, r)
    assert str(mono[0][0]) == "y" and (a, b) == (1, 2)


def test_hereditary_machinery():
    g = monomial_set(parse_polynomial("x{1,2} * x{1,3} + x{2,3}"))
    closure = hereditary_closure(g)
    assert len(closure) == 5 and is_hereditary(closure)
    assert generators(closure) == g
    assert is_pure(g)
    pair = comparable_pair(closure)
    assert pair is not None and pair[0] < pair[1]
    with pytest.raises(PolynomialError):
        monomial_set(parse_polynomial("2*x"))


@given(st.sets(st.frozensets(st.sampled_from(VARS), max_size=3), max_size=5))
@settings(max_examples=60, deadline=None)
def test_closure_properties(g):
    g = frozenset(g)
    c = hereditary_closure(g)
    assert g <= c
    assert is_hereditary(c)
    assert hereditary_closure(c) == c
    assert hereditary_closure(generators(c)) == c
    assert is_pure(generators(c), exclude_constant=False) or generators(c) == {frozenset()}
