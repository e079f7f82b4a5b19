from fractions import Fraction

import pytest

from homopoly import chain, families
from homopoly.chain import Conventions
from homopoly.graphs import GraphError, make_family
from homopoly.polynomials import SparsePolynomial, de

CALIBRATED = Conventions(g_sum_range="1..n-1", clique_sum_range="2..n", clique_const=False)


def test_neighbor_step_examples():
    s = chain.neighbor_step(make_family("complete", 3), 3)
    assert s.passed and len(s.constructed) == 7
    assert s.constructed == families.hom_poly(make_family("edge"), 3)
    assert chain.neighbor_step(make_family("complete", 2), 2).constructed == SparsePolynomial.constant(1)
    assert chain.neighbor_step(make_family("cycle", 5), 3).constructed == SparsePolynomial.constant(1)
    assert s.transcript.call_count == 4 and s.oracle_agrees


def test_neighbor_step_needs_loop_free():
    with pytest.raises(GraphError):
        chain.neighbor_step(make_family("single_looped_vertex"), 2)


def test_iterate_neighbor_examples():
    tr = chain.iterate_neighbor(make_family("complete", 3))
    assert len(tr.graphs) == 2 and tr.reason == "1-regular"
    tr = chain.iterate_neighbor(make_family("complete", 4))
    assert tr.max_degrees == [3, 2, 1] and tr.reason == "1-regular"
    tr = chain.iterate_neighbor(make_family("cycle", 4))
    assert tr.max_degrees == [2, 0] and tr.reason == "edgeless" and tr.flagged
    with pytest.raises(GraphError):
        chain.iterate_neighbor(make_family("edgeless", 3))


@pytest.mark.parametrize("n", [2, 3])
def test_g_from_fmap_calibrated(n):
    s = chain.g_from_fmap(n, CALIBRATED)
    assert s.passed and s.factor == 2 and s.oracle_agrees
    assert s.constructed == families.G_poly(n).scale(2)


def test_g_from_fmap_extreme_summands_are_constant():
    summands = chain._g_summands(3, 6)
    assert summands[0] == SparsePolynomial.constant(1)
    assert summands[3] == SparsePolynomial.constant(1)


def test_g_from_fmap_literal_range_adds_a_constant():
    s = chain.g_from_fmap(3, Conventions())
    assert not s.passed and s.relation == {"lambda": "2", "mu": "1"}


def test_g_from_fmap_call_count():
    n = 3
    s = chain.g_from_fmap(n, CALIBRATED)
    e = n * (n - 1) // 2
    assert s.transcript.base_calls == len(s.extra["k_values"]) * 2 * (n + 1) ** 2 * (e + 1)


@pytest.mark.parametrize("n", [2, 3])
def test_clique_from_F_calibrated(n):
    s = chain.clique_from_F(n, CALIBRATED)
    assert s.passed and s.oracle_agrees
    assert s.constructed == families.clique_gf(n, include_constant=False)
    # base calls per point: (n+1)^2 (n+2) for every k in 2..n
    assert s.transcript.base_calls == (n - 1) * (n + 1) ** 2 * (n + 2)


def test_clique_from_F_literal_index_vanishes():
    s = chain.clique_from_F(3, CALIBRATED, repair=False)
    assert s.constructed.is_zero() and not s.passed


@pytest.mark.parametrize("n", [2, 3])
def test_F_from_cut2_structure(n):
    s = chain.F_from_cut2(n, Conventions(cut_trivial=True))
    assert s.extra["subset_count_agrees"]
    assert s.extra["surviving_subsets"] == 3 ** n
    # the six rules give the ordered-pair sum, i.e. twice the half closed form
    assert s.constructed == families.F_half_closed_form(n).scale(2)
    assert s.oracle_agrees and s.transcript.call_count == 1


def test_F_from_cut2_identity_does_not_hold():
    for conv in (Conventions(cut_trivial=True), Conventions(cut_trivial=False, F_const=False)):
        s = chain.F_from_cut2(2, conv)
        assert not s.passed and s.relation["lambda"] == "2"


def _cut_product_sum(n):
    total = SparsePolynomial()
    for mask in range(1 << n):
        U = [i for i in range(1, n + 1) if mask >> (i - 1) & 1]
        Uc = [i for i in range(1, n + 1) if i not in U]
        term = SparsePolynomial.constant(1)
        for i in U:
            for j in Uc:
                term = term * SparsePolynomial.var(de(i, j)) * SparsePolynomial.var(de(j, i))
        total = total + term
    return total


@pytest.mark.parametrize("n", [2, 3])
def test_cut2_from_G_gives_products_of_cuts(n):
    s = chain.cut2_from_G(n, Conventions())
    assert s.extra["t_component_uses_ab_edge"]
    assert s.constructed == _cut_product_sum(n)
    assert not s.passed and s.oracle_agrees


def test_cut2_from_G_primed_variant():
    s = chain.cut2_from_G(2, Conventions(), primed=True)
    assert s.oracle_agrees and not s.passed


def test_run_full_chain():
    steps = chain.run_full_chain(make_family("complete", 3), 3, CALIBRATED)
    names = [s.name for s in steps]
    assert names == ["neighbor_step", "g_from_fmap", "clique_from_F", "F_from_cut2", "cut2_from_G"]
    assert [s.passed for s in steps] == [True, True, True, False, False]
    steps = chain.run_full_chain(make_family("edge"), 3, CALIBRATED)
    assert steps[0].passed and steps[0].constructed == SparsePolynomial.constant(1)
    with pytest.raises(GraphError):
        chain.run_full_chain(make_family("single_looped_vertex"), 3)
    with pytest.raises(GraphError):
        chain.run_full_chain(make_family("edgeless", 2), 3)


def test_transcripts_are_reproducible():
    a = chain.run_step("clique_from_F", 2, CALIBRATED, seed=5).to_json()
    b = chain.run_step("clique_from_F", 2, CALIBRATED, seed=5).to_json()
    assert a == b


def test_conventions_round_trip():
    c = Conventions(g_sum_range="0..n", G_const=True)
    assert Conventions.from_json(c.to_json()) == c
    assert c.deviations(Conventions()) == 2
    assert len(list(chain.all_conventions())) == 288
    assert list(chain.k_range("1..n-1", 4)) == [1, 2, 3]
