"""Named polynomial families.

Each family has a definitional construction.  The homomorphism and
component-classification families enumerate every edge subset of ``K_n``
(brute force, bounded by the enumeration cap); the cut-style families and
the closed forms enumerate vertex subsets and use a separate, larger cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import kernels
from .graphs import CapExceeded, Graph, enumerate_graphs, enumeration_cap, find_homomorphism
from .polynomials import SparsePolynomial, de, ue

CLOSED_FORM_MAX_N = 12


def edge_variables(n: int):
    return [ue(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def edge_count(n: int) -> int:
    return n * (n - 1) // 2


def _check_enum(n: int, max_n: int | None):
    if n < 1:
        raise ValueError("n must be at least 1")
    cap = enumeration_cap(max_n)
    if n > cap:
        raise CapExceeded(f"n={n} exceeds enumeration cap {cap}")


def _check_closed(n: int):
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > CLOSED_FORM_MAX_N:
        raise CapExceeded(f"n={n} exceeds closed-form cap {CLOSED_FORM_MAX_N}")


def _mask_monomial(n: int, mask: int, variables) -> tuple:
    e = len(variables)
    return tuple((variables[idx], 1) for idx in range(e) if mask >> (e - 1 - idx) & 1)


def _from_indicator(n: int, indicator, include_empty: bool) -> SparsePolynomial:
    variables = edge_variables(n)
    monos = []
    for mask, flag in enumerate(indicator):
        if flag == 1 or (flag == kernels.EMPTY and include_empty):
            monos.append(_mask_monomial(n, mask, variables))
    return SparsePolynomial.from_monomials(monos)


@lru_cache(maxsize=64)
def _hom_poly_cached(h_masks: tuple, n: int) -> SparsePolynomial:
    return _from_indicator(n, kernels.hom_indicator(n, list(h_masks)), False)


def hom_poly(H: Graph, n: int, max_n: int | None = None) -> SparsePolynomial:
    """Sum of the edge monomials of every graph on ``1..n`` homomorphic to H."""
    _check_enum(n, max_n)
    return _hom_poly_cached(tuple(H.adjacency_masks()), n)


def hom_poly_reference(H: Graph, n: int, max_n: int | None = None) -> SparsePolynomial:
    """Same polynomial through per-graph backtracking; slow, kernel-independent."""
    monos = []
    for G in enumerate_graphs(n, max_n):
        if find_homomorphism(G, H) is not None:
            monos.append(tuple((ue(i, j), 1) for i, j in G.sorted_edges()))
    return SparsePolynomial.from_monomials(monos)


def F_poly(n: int, include_constant: bool = True, method: str = "brute", max_n: int | None = None) -> SparsePolynomial:
    """Graphs with one complete bipartite component and all other vertices isolated.

    ``include_constant`` decides whether the edgeless graph counts.
    ``method`` is ``"brute"`` (classify every edge subset) or ``"closed"``
    (enumerate unordered pairs of disjoint nonempty vertex sets).
    """
    if method == "brute":
        _check_enum(n, max_n)
        return _from_indicator(n, kernels.component_indicator(n, 0), include_constant)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    _check_closed(n)
    return _F_closed(n, include_constant)


@lru_cache(maxsize=32)
def _F_closed(n: int, include_constant: bool) -> SparsePolynomial:
    monos = []
    # label 0 = unused, 1 = side P, 2 = side Q; the lowest used vertex is in P
    for labels in _ternary(n):
        used = [v for v in range(n) if labels[v]]
        if not used or labels[used[0]] != 1:
            continue
        P = [v + 1 for v in used if labels[v] == 1]
        Q = [v + 1 for v in used if labels[v] == 2]
        if not Q:
            continue
        monos.append(tuple(sorted((ue(p, q), 1) for p in P for q in Q)))
    if include_constant:
        monos.append(())
    return SparsePolynomial.from_monomials(monos)


def _ternary(n: int):
    labels = [0] * n
    while True:
        yield labels
        pos = 0
        while pos < n and labels[pos] == 2:
            labels[pos] = 0
            pos += 1
        if pos == n:
            return
        labels[pos] += 1


def F_half_closed_form(n: int) -> SparsePolynomial:
    """One half of the sum over ordered pairs (V, V') of disjoint vertex sets of
    prod x{v,v'}; empty sides contribute the constant monomial."""
    _check_closed(n)
    monos = []
    for labels in _ternary(n):
        V = [v + 1 for v in range(n) if labels[v] == 1]
        W = [v + 1 for v in range(n) if labels[v] == 2]
        monos.append(tuple(sorted((ue(a, b), 1) for a in V for b in W)))
    return SparsePolynomial.from_monomials(monos, Fraction(1, 2))


def G_poly(n: int, include_constant: bool = False) -> SparsePolynomial:
    """Spanning complete bipartite graphs: one monomial per unordered cut {V, V^c}."""
    _check_closed(n)
    return _G_cached(n, include_constant)


@lru_cache(maxsize=32)
def _G_cached(n: int, include_constant: bool) -> SparsePolynomial:
    monos = []
    rest = list(range(2, n + 1))
    for r in range(len(rest)):
        for extra in combinations(rest, r):
            V = (1,) + extra
            Vc = [v for v in rest if v not in extra]
            monos.append(tuple(sorted((ue(a, b), 1) for a in V for b in Vc)))
    if include_constant:
        monos.append(())
    return SparsePolynomial.from_monomials(monos)


def cut_poly(n: int, q: int = 2, include_trivial: bool = False) -> SparsePolynomial:
    """Cut enumerator over directed variables: sum over V of
    prod_{i in V, j not in V} xd{i,j}^(q-1).  ``include_trivial`` adds V = {} and V = [n]."""
    if q < 2:
        raise ValueError("q must be at least 2")
    _check_closed(n)
    return _cut_cached(n, q, include_trivial)


@lru_cache(maxsize=32)
def _cut_cached(n: int, q: int, include_trivial: bool) -> SparsePolynomial:
    monos = []
    for mask in range(1 << n):
        V = [v + 1 for v in range(n) if mask >> v & 1]
        if not include_trivial and len(V) in (0, n):
            continue
        Vc = [v for v in range(1, n + 1) if v not in V]
        monos.append(tuple(sorted((de(a, b), q - 1) for a in V for b in Vc)))
    return SparsePolynomial.from_monomials(monos)


def clique_gf(n: int, include_constant: bool = True, method: str = "brute", max_n: int | None = None) -> SparsePolynomial:
    """Graphs with one clique component (at least one edge) and isolated vertices;
    ``include_constant`` adds the edgeless graph once."""
    if method == "brute":
        _check_enum(n, max_n)
        return _from_indicator(n, kernels.component_indicator(n, 1), include_constant)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    _check_closed(n)
    monos = [tuple((ue(a, b), 1) for a, b in combinations(A, 2))
             for r in range(2, n + 1) for A in combinations(range(1, n + 1), r)]
    if include_constant:
        monos.append(())
    return SparsePolynomial.from_monomials(monos)


@dataclass(frozen=True)
class FamilyInstance:
    family: str
    n: int
    polynomial: SparsePolynomial
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"family": self.family, "n": self.n, "params": self.params, "polynomial": self.polynomial.to_json()}


FAMILY_KINDS = ("hom", "fmap", "loop", "edgeless", "F", "G", "cut", "clique")


def build_family(kind: str, n: int, *, graph: Graph | None = None, q: int = 2,
                 include_constant: bool | None = None, include_trivial: bool = False,
                 max_n: int | None = None) -> FamilyInstance:
    """Dispatcher used by the CLI ``family`` subcommand."""
    from .graphs import make_family

    if kind == "hom":
        if graph is None:
            raise ValueError("kind `hom` needs a graph")
        return FamilyInstance("hom", n, hom_poly(graph, n, max_n), {"H": graph.to_json()})
    if kind in ("fmap", "loop", "edgeless"):
        H = {"fmap": make_family("edge"), "loop": make_family("single_looped_vertex"),
             "edgeless": make_family("edgeless", 1)}[kind]
        return FamilyInstance("hom", n, hom_poly(H, n, max_n), {"H": H.to_json()})
    if kind == "F":
        c = True if include_constant is None else include_constant
        return FamilyInstance("F", n, F_poly(n, c, max_n=max_n), {"include_constant": c})
    if kind == "G":
        c = False if include_constant is None else include_constant
        return FamilyInstance("G", n, G_poly(n, c), {"include_constant": c})
    if kind == "cut":
        return FamilyInstance("cut", n, cut_poly(n, q, include_trivial), {"q": q, "include_trivial": include_trivial})
    if kind == "clique":
        c = True if include_constant is None else include_constant
        return FamilyInstance("clique", n, clique_gf(n, c, max_n=max_n), {"include_constant": c})
    raise ValueError(f"unknown family kind {kind!r}")
