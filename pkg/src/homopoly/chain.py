"""The reduction chain from the clique generating function up to f^H_n.

Every step is carried out twice: symbolically, with substitutions and
homogeneous components taken on explicit polynomials, and through oracles,
with nested interpolation at seeded points.  The verdict is exact polynomial
equality between the symbolic construction and the independently built
target family; the oracle route must agree with the symbolic one at every
sampled point and supplies the call-count transcript.

Boundary conventions (empty-graph terms, summation ranges) are parameters
collected in :class:`Conventions`; the harness calibrates them.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from functools import lru_cache

from . import families
from .graphs import (CapExceeded, Graph, GraphError, are_bihomomorphic, enumeration_cap, make_family, max_degree,
                     neighborhood_union)
from .polynomials import SparsePolynomial, VarId, aux, de, format_monomial, random_point, ue
from .reductions import Oracle, OracleTranscript, extract_homogeneous, homogeneous_oracle, project
from .seeding import stream

STEP_NAMES = ("neighbor_step", "g_from_fmap", "clique_from_F", "F_from_cut2", "cut2_from_G")

Y, Z, W, T = aux("y"), aux("z"), aux("w"), aux("t")
YP, ZP = aux("yp"), aux("zp")

POINT_BOUND = 97
DEFAULT_POINTS = 2


@dataclass(frozen=True)
class Conventions:
    """Boundary choices the construction leaves open.

    ``*_const``: whether a family counts the edgeless graph (constant 1).
    ``cut_trivial``: whether the cut enumerator includes V = {} and V = [n].
    ``*_sum_range``: the k-range of the outer sums.
    """

    F_const: bool = True
    G_const: bool = False
    clique_const: bool = True
    cut_trivial: bool = True
    g_sum_range: str = "1..n"
    clique_sum_range: str = "1..n"
    cut_sum_range: str = "0..n"

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "Conventions":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})

    def deviations(self, other: "Conventions") -> int:
        return sum(getattr(self, f.name) != getattr(other, f.name) for f in fields(self))


CONVENTION_SPACE = {
    "F_const": (True, False),
    "G_const": (False, True),
    "clique_const": (True, False),
    "cut_trivial": (True, False),
    "g_sum_range": ("1..n", "0..n", "1..n-1"),
    "clique_sum_range": ("1..n", "2..n", "0..n"),
    "cut_sum_range": ("0..n", "1..n-1"),
}

# which conventions each identity can see
STEP_CONVENTIONS = {
    "g_from_fmap": ("g_sum_range", "G_const"),
    "clique_from_F": ("clique_sum_range", "clique_const", "F_const"),
    "F_from_cut2": ("cut_trivial", "F_const"),
    "cut2_from_G": ("cut_sum_range", "cut_trivial", "G_const"),
}


def all_conventions():
    keys = list(CONVENTION_SPACE)
    for values in itertools.product(*(CONVENTION_SPACE[k] for k in keys)):
        yield Conventions(**dict(zip(keys, values)))


def k_range(spec: str, n: int) -> range:
    lo, hi = spec.split("..")
    start = int(lo)
    stop = {"n": n, "n-1": n - 1}[hi] if not hi.isdigit() else int(hi)
    return range(start, stop + 1)


@dataclass
class ChainStep:
    name: str
    n: int
    source: str
    target: str
    constructed: SparsePolynomial
    expected: SparsePolynomial
    transcript: OracleTranscript
    verdict: str
    witness: str | None = None
    factor: Fraction | None = None
    relation: dict | None = None
    oracle_agrees: bool = True
    points: int = 0
    conventions: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self, polynomials: bool = True) -> dict:
        out = {
            "step": self.name,
            "n": self.n,
            "source": self.source,
            "target": self.target,
            "verdict": self.verdict,
            "witness": self.witness,
            "factor": None if self.factor is None else str(self.factor),
            "relation": self.relation,
            "oracle_agrees": self.oracle_agrees,
            "points": self.points,
            "transcript": self.transcript.to_json(),
            "conventions": self.conventions,
            "extra": self.extra,
        }
        if polynomials:
            out["constructed"] = str(self.constructed)
            out["expected"] = str(self.expected)
        return out


def witness_monomial(p: SparsePolynomial, q: SparsePolynomial) -> str | None:
    """A monomial present in exactly one of p, q; failing that, one whose
    coefficients differ."""
    only = sorted((set(p.terms) ^ set(q.terms)), key=lambda m: (sum(e for _, e in m), m))
    if only:
        m = only[0]
    else:
        diff = [m for m in p.terms if p.coefficient(m) != q.coefficient(m)]
        if not diff:
            return None
        m = min(diff, key=lambda m: (sum(e for _, e in m), m))
    return f"{format_monomial(m)} (constructed {p.coefficient(m)}, expected {q.coefficient(m)})"


def affine_relation(p: SparsePolynomial, q: SparsePolynomial) -> dict | None:
    """(lambda, mu) with p = lambda*q + mu, when such rationals exist."""
    nonconst = [m for m in q.terms if m]
    if not nonconst:
        return None
    lam = p.coefficient(nonconst[0]) / q.coefficient(nonconst[0])
    rest = p - q.scale(lam)
    if any(m for m in rest.terms):
        return None
    return {"lambda": str(lam), "mu": str(rest.constant_term)}


def _scale_factor(p: SparsePolynomial, q: SparsePolynomial) -> Fraction | None:
    if q.is_zero():
        return None
    m = next(iter(q.terms))
    lam = p.coefficient(m) / q.coefficient(m)
    if lam == 0 or p != q.scale(lam):
        return None
    return lam


def _oracle_points(variables, seed: int, label: str, count: int):
    rng = stream(seed, label)
    return [random_point(variables, rng, POINT_BOUND) for _ in range(count)]


def _run_oracle(evaluate, constructed: SparsePolynomial, variables, seed: int, label: str, count: int):
    """Evaluate the oracle route at seeded points; returns (agree, transcript of one point)."""
    agree = True
    first = None
    for pt in _oracle_points(variables, seed, label, count):
        value, t = evaluate(pt)
        if value != constructed.evaluate(pt):
            agree = False
        if first is None:
            first = t
    return agree, first or OracleTranscript()


def _finish(name, n, source, target, constructed, expected, transcript, agree, points, conv, extra=None,
            scale_ok=False) -> ChainStep:
    factor = None
    if scale_ok:
        factor = _scale_factor(constructed, expected)
        ok = factor is not None
    else:
        ok = constructed == expected
    ok = ok and agree
    witness = None
    if not ok:
        witness = witness_monomial(constructed, expected) or "oracle route disagrees with symbolic route"
    return ChainStep(name, n, source, target, constructed, expected, transcript, "pass" if ok else "fail",
                     witness, factor, affine_relation(constructed, expected), agree, points, conv, extra or {})


# neighbourhood reduction

def _check_loop_free(H: Graph):
    if H.loops:
        raise GraphError("the reduction chain needs a loop-free graph")


@lru_cache(maxsize=64)
def _neighbor_constructed(H: Graph, n: int, cap: int) -> SparsePolynomial:
    source = families.hom_poly(H, n + 1, cap)
    sigma = {ue(i, n + 1): Y for i in range(1, n + 1)}
    return source.substitute(sigma).homogeneous_component(n, [Y]).substitute({Y: 1})


def neighbor_step(H: Graph, n: int, max_n: int | None = None, seed: int = 0, points: int = DEFAULT_POINTS) -> ChainStep:
    """CH^n_y f^H_{n+1}(x, x_{i,n+1} = y) at y = 1, against f^{H'}_n."""
    _check_loop_free(H)
    cap = enumeration_cap(max_n)
    if n < 1:
        raise GraphError("n must be at least 1")
    if n + 1 > cap:
        raise CapExceeded(f"neighbor_step needs n+1={n + 1} vertices, cap is {cap}")
    constructed = _neighbor_constructed(H, n, cap)
    Hp = neighborhood_union(H)
    expected = families.hom_poly(Hp, n, cap)

    source = families.hom_poly(H, n + 1, cap)
    base = Oracle.from_polynomial(source, families.edge_count(n + 1), f"f^H_{n + 1}",
                                  families.edge_variables(n + 1))
    sigma = {ue(i, n + 1): Y for i in range(1, n + 1)}
    glued = project(base, sigma, label=f"x{{i,{n + 1}}}->y")
    xs = families.edge_variables(n)

    def evaluate(pt):
        before = base.calls
        value, t = extract_homogeneous(glued, n, {**pt, Y: 1}, [Y], n)
        t.base_calls = base.calls - before
        return value, t

    agree, t = _run_oracle(evaluate, constructed, xs, seed, f"neighbor_step/{H}/{n}", points)
    return _finish("neighbor_step", n, f"f^H_{n + 1} for {H}", f"f^H'_{n} for {Hp}", constructed, expected, t,
                   agree, points, {}, {"H": H.to_json(), "H_prime": Hp.to_json()})


@dataclass
class NeighborTrace:
    graphs: list
    max_degrees: list
    reason: str
    flagged: bool

    def to_json(self) -> dict:
        return {
            "graphs": [g.to_json() for g in self.graphs],
            "max_degrees": self.max_degrees,
            "termination": self.reason,
            "flagged": self.flagged,
        }


def _termination(G: Graph) -> str | None:
    if not G.edges:
        return "edgeless"
    if G.is_regular(1):
        return "1-regular"
    if are_bihomomorphic(G, make_family("edge")):
        return "bihomomorphic to the single edge"
    return None


def iterate_neighbor(H: Graph, max_steps: int = 64) -> NeighborTrace:
    """Apply the neighbourhood union at least once, then until the graph is
    1-regular, edgeless, or bihomomorphic to the single edge.

    ``flagged`` marks runs that end edgeless rather than at a graph with an
    edge, which happens for triangle-free inputs.
    """
    _check_loop_free(H)
    if not H.edges:
        raise GraphError("iterate_neighbor needs a graph with at least one edge")
    trace = [H]
    reason = None
    while reason is None:
        if len(trace) > max_steps:
            raise RuntimeError("neighbourhood iteration did not terminate")
        trace.append(neighborhood_union(trace[-1]))
        reason = _termination(trace[-1])
    return NeighborTrace(trace, [max_degree(g) for g in trace], reason, reason == "edgeless")


# G_n from f^{edge}_{n+2}

def _g_sigma(n: int) -> dict:
    sigma = {ue(n + 1, n + 2): W}
    for i in range(1, n + 1):
        sigma[ue(i, n + 1)] = Y
        sigma[ue(i, n + 2)] = Z
    return sigma


@lru_cache(maxsize=32)
def _g_summands(n: int, cap: int) -> tuple:
    source = families.hom_poly(make_family("edge"), n + 2, cap)
    s1 = source.substitute(_g_sigma(n)).homogeneous_component(1, [W])
    xs = families.edge_variables(n)
    out = []
    for k in range(0, n + 1):
        part = s1.homogeneous_component(n - k, [Z]).homogeneous_component(k, [Y])
        part = part.homogeneous_component((n - k) * k, xs)
        out.append(part.substitute({W: 1, Y: 1, Z: 1}))
    return tuple(out)


def g_from_fmap(n: int, conv: Conventions = Conventions(), max_n: int | None = None, seed: int = 0,
                points: int = DEFAULT_POINTS) -> ChainStep:
    """Sum over k of CH^{(n-k)k}_x CH^k_y CH^{n-k}_z CH^1_w f^{edge}_{n+2}, at w=y=z=1,
    against G_n up to a constant factor."""
    cap = enumeration_cap(max_n)
    if n < 1:
        raise GraphError("n must be at least 1")
    if n + 2 > cap:
        raise CapExceeded(f"g_from_fmap needs n+2={n + 2} vertices, cap is {cap}")
    ks = k_range(conv.g_sum_range, n)
    summands = _g_summands(n, cap)
    constructed = SparsePolynomial()
    for k in ks:
        constructed = constructed + summands[k]
    expected = families.G_poly(n, conv.G_const)

    source = families.hom_poly(make_family("edge"), n + 2, cap)
    base = Oracle.from_polynomial(source, families.edge_count(n + 2), f"f^edge_{n + 2}",
                                  families.edge_variables(n + 2))
    glued = project(base, _g_sigma(n), label=f"x{{{n + 1},{n + 2}}}->w, x{{i,{n + 1}}}->y, x{{i,{n + 2}}}->z")
    xs = families.edge_variables(n)
    e = families.edge_count(n)

    def evaluate(pt):
        before = base.calls
        total = Fraction(0)
        acc = OracleTranscript()
        for k in ks:
            o_w = homogeneous_oracle(glued, 1, [W], 1)
            o_z = homogeneous_oracle(o_w, n - k, [Z], n)
            o_y = homogeneous_oracle(o_z, k, [Y], n)
            value, t = extract_homogeneous(o_y, (n - k) * k, {**pt, W: 1, Y: 1, Z: 1}, xs, e)
            total += value
            acc = acc + t
        acc.base_calls = base.calls - before
        return total, acc

    agree, t = _run_oracle(evaluate, constructed, xs, seed, f"g_from_fmap/{n}", points)
    extra = {"per_k_base_calls": 2 * (n + 1) ** 2 * (e + 1), "k_values": list(ks)}
    return _finish("g_from_fmap", n, f"f^edge_{n + 2}", f"G_{n}", constructed, expected, t, agree, points,
                   {"g_sum_range": conv.g_sum_range, "G_const": conv.G_const}, extra, scale_ok=True)


# clique generating function from F_n

def bvar(i: int, j: int) -> VarId:
    """Edge from left vertex i to right vertex j of K_{m,m}."""
    return aux(f"b{i}_{j}")


@lru_cache(maxsize=16)
def _f1(m: int, F_const: bool) -> SparsePolynomial:
    """F_{2m} restricted to K_{m,m}: left vertices 1..m, right m+1..2m."""
    F = families.F_poly(2 * m, F_const, method="closed")
    return F.substitute(_restrict_sigma(m))


def _restrict_sigma(m: int) -> dict:
    sigma = {}
    for u in range(1, 2 * m + 1):
        for v in range(u + 1, 2 * m + 1):
            sigma[ue(u, v)] = bvar(u, v - m) if u <= m < v else 0
    return sigma


def _f2_sigma(n: int) -> dict:
    sigma = {bvar(n + 1, j): 0 for j in range(1, n + 2)}
    sigma.update({bvar(i, n + 1): Y for i in range(1, n + 1)})
    return sigma


def _f4_sigma(n: int) -> dict:
    sigma = {bvar(n + 1, i): Y for i in range(1, n + 1)}
    sigma.update({bvar(i, n + 1): 0 for i in range(1, n + 1)})
    sigma[bvar(n + 1, n + 1)] = 0
    return sigma


def _final_sigma(n: int) -> dict:
    """b_{i,j} -> x{i,j} for i < j and 1 for i > j: each clique edge appears in
    both orientations and is counted once."""
    return {bvar(i, j): (ue(i, j) if i < j else 1) for i in range(1, n + 1) for j in range(1, n + 1) if i != j}


@lru_cache(maxsize=32)
def _f2(n: int, F_const: bool) -> SparsePolynomial:
    return _f1(n + 1, F_const).substitute(_f2_sigma(n))


@lru_cache(maxsize=64)
def _f3(n: int, k: int, F_const: bool) -> SparsePolynomial:
    return _f2(n, F_const).homogeneous_component(k, [Y]).substitute({Y: 1})


@lru_cache(maxsize=64)
def _f6_component(n: int, k: int, F_const: bool, shift: int) -> SparsePolynomial:
    f4 = _f3(n + 1, k + shift, F_const).substitute(_f4_sigma(n))
    f5 = f4.homogeneous_component(k, [Y]).substitute({Y: 1})
    f6 = f5.substitute({bvar(i, i): Y for i in range(1, n + 1)})
    return f6.homogeneous_component(k, [Y]).substitute({Y: 1})


def clique_from_F(n: int, conv: Conventions = Conventions(), repair: bool = True, seed: int = 0,
                  points: int = DEFAULT_POINTS) -> ChainStep:
    """The f^1 ... f^6 construction on F_{2(n+2)} restricted to K_{n+2,n+2}.

    With ``repair`` the fourth stage reads f^{3,k+1}_{n+1}: removing the
    vertex n+1 from V lowers |V| by one, so the literal f^{3,k}_{n+1} leaves
    |V| = k-1 and every later component vanishes.
    """
    if n < 1:
        raise GraphError("n must be at least 1")
    m = n + 2
    if 2 * m > families.CLOSED_FORM_MAX_N:
        raise CapExceeded(f"clique_from_F needs F on {2 * m} vertices, cap is {families.CLOSED_FORM_MAX_N}")
    shift = 1 if repair else 0
    ks = [k for k in k_range(conv.clique_sum_range, n)]
    summed = SparsePolynomial()
    for k in ks:
        summed = summed + _f6_component(n, k, conv.F_const, shift)
    constructed = summed.substitute(_final_sigma(n))
    expected = families.clique_gf(n, conv.clique_const, method="closed")

    # oracle route: one base call charges F_{2m}; restriction and the f^2
    # substitution are pre-composed symbolically
    Fsrc = families.F_poly(2 * m, conv.F_const, method="closed")
    base = Oracle.from_polynomial(Fsrc, m * m, f"F_{2 * m}", families.edge_variables(2 * m))
    restricted = project(base, _restrict_sigma(m), label=f"restrict to K_{{{m},{m}}}", precompose=True)
    o2 = project(restricted, _f2_sigma(n + 1), label="f2: b{n+1,j}->0, b{i,n+1}->y", precompose=True)
    xs = families.edge_variables(n)

    def evaluate(pt):
        before = base.calls
        bpt = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j:
                    bpt[bvar(i, j)] = pt[ue(i, j)] if i < j else 1
        total = Fraction(0)
        acc = OracleTranscript()
        for k in ks:
            o3 = homogeneous_oracle(o2, k + shift, [Y], n + 1, name=f"f3[{k + shift}]")
            o3 = project(o3, {Y: 1}, label="y->1")
            o4 = project(o3, _f4_sigma(n), label="f4: b{n+1,i}->y, b{i,n+1}->0")
            o5 = homogeneous_oracle(o4, k, [Y], n, name=f"f5[{k}]")
            o5 = project(o5, {Y: 1}, label="y->1")
            o6 = project(o5, {bvar(i, i): Y for i in range(1, n + 1)}, label="f6: b{i,i}->y")
            point = {**bpt, **{bvar(i, i): 0 for i in range(1, n + 1)}, Y: 1}
            point = {v: point[v] for v in o6.universe}
            value, t = extract_homogeneous(o6, k, point, [Y], n)
            total += value
            acc = acc + t
        acc.base_calls = base.calls - before
        return total, acc

    agree, t = _run_oracle(evaluate, constructed, xs, seed, f"clique_from_F/{n}", points)
    extra = {"repair": repair, "k_values": ks, "per_k_base_calls": (n + 1) ** 2 * (n + 2)}
    return _finish("clique_from_F", n, f"F_{2 * m} on K_{{{m},{m}}}", f"GF(K_{n}, clique)", constructed, expected,
                   t, agree, points,
                   {"clique_sum_range": conv.clique_sum_range, "clique_const": conv.clique_const,
                    "F_const": conv.F_const}, extra)


# F_n from the cut enumerator on 2n vertices

def cut_rules(n: int, rules=(1, 2, 3, 4, 5, 6)) -> dict:
    """The substitution on Cut^2_{2n}; left vertices 1..n, right n+1..2n.
    Rule 6 sends x_{i, j+n} to the edge variable x{i,j} of F_n."""
    sigma = {}
    L = range(1, n + 1)
    R = range(n + 1, 2 * n + 1)
    for u in range(1, 2 * n + 1):
        for v in range(1, 2 * n + 1):
            if u == v:
                continue
            if u in L and v in L:
                rule, val = 1, 1
            elif u in L and v == u + n:
                rule, val = 2, 0
            elif u in R and v == u - n:
                rule, val = 3, 1
            elif u in R and v in L:
                rule, val = 4, 1
            elif u in R and v in R:
                rule, val = 5, 1
            else:
                rule, val = 6, ue(u, v - n)
            if rule in rules:
                sigma[de(u, v)] = val
    return sigma


def surviving_subsets(n: int, include_trivial: bool) -> int:
    """Subsets V of [2n] with no i in V whose partner i+n lies outside V."""
    count = 0
    for mask in range(1 << 2 * n):
        size = bin(mask).count("1")
        if not include_trivial and size in (0, 2 * n):
            continue
        if all(not (mask >> (i - 1) & 1) or mask >> (i + n - 1) & 1 for i in range(1, n + 1)):
            count += 1
    return count


def F_from_cut2(n: int, conv: Conventions = Conventions(), max_n: int | None = None, seed: int = 0,
                points: int = DEFAULT_POINTS) -> ChainStep:
    """Cut^2_{2n} under the six substitution rules, against F_n."""
    if n < 1:
        raise GraphError("n must be at least 1")
    if 2 * n > families.CLOSED_FORM_MAX_N:
        raise CapExceeded(f"F_from_cut2 needs the cut enumerator on {2 * n} vertices")
    source = families.cut_poly(2 * n, 2, conv.cut_trivial)
    constructed = source.substitute(cut_rules(n))
    expected = families.F_poly(n, conv.F_const, max_n=max(n, enumeration_cap(max_n)))

    base = Oracle.from_polynomial(source, n * n, f"Cut2_{2 * n}",
                                  [de(u, v) for u in range(1, 2 * n + 1) for v in range(1, 2 * n + 1) if u != v])
    proj = project(base, cut_rules(n), universe=families.edge_variables(n), label="rules (1)-(6)")

    def evaluate(pt):
        before = base.calls
        value = proj(pt)
        return value, OracleTranscript(1, base.calls - before, proj.substitutions, (), 0)

    agree, t = _run_oracle(evaluate, constructed, families.edge_variables(n), seed, f"F_from_cut2/{n}", points)
    partial = source.substitute(cut_rules(n, (1, 2, 3, 4, 5)))
    counted = partial.evaluate({v: 1 for v in partial.variables()})
    direct = surviving_subsets(n, conv.cut_trivial)
    extra = {"rules_1_to_5_at_ones": str(counted), "surviving_subsets": direct,
             "subset_count_agrees": counted == direct}
    return _finish("F_from_cut2", n, f"Cut2_{2 * n}", f"F_{n}", constructed, expected, t, agree, points,
                   {"cut_trivial": conv.cut_trivial, "F_const": conv.F_const}, extra)


# the cut enumerator from G on 2n+2 vertices

def g_layout_sigma(n: int) -> dict:
    """Labels on K_{2n+2}: left 1..n, right n+1..2n, apexes a = 2n+1, b = 2n+2."""
    a, b = 2 * n + 1, 2 * n + 2
    sigma = {ue(a, b): T}
    for u in range(1, 2 * n + 1):
        left = u <= n
        sigma[ue(u, a)] = Y if left else YP
        sigma[ue(u, b)] = Z if left else ZP
        for v in range(u + 1, 2 * n + 1):
            vleft = v <= n
            if left == vleft:
                sigma[ue(u, v)] = 1
            elif v == u + n:
                sigma[ue(u, v)] = 0
            else:
                sigma[ue(u, v)] = de(u, v - n)
    return sigma


@lru_cache(maxsize=32)
def _cut_summands(n: int, G_const: bool, primed: bool) -> tuple:
    source = families.G_poly(2 * n + 2, G_const)
    s1 = source.substitute(g_layout_sigma(n)).homogeneous_component(1, [T])
    out = []
    for k in range(0, n + 1):
        part = s1.homogeneous_component(n - k, [Z]).homogeneous_component(k, [Y])
        if primed:
            part = part.homogeneous_component(n - k, [ZP]).homogeneous_component(k, [YP])
        out.append(part.substitute({T: 1, Y: 1, YP: 1, Z: 1, ZP: 1}))
    return tuple(out)


def cut2_from_G(n: int, conv: Conventions = Conventions(), primed: bool = False, seed: int = 0,
                points: int = DEFAULT_POINTS) -> ChainStep:
    """G_{2n+2} on the two-sided layout with apexes, CH^1_t and the k-split in
    y and z, against 2 Cut^2_n.  ``primed`` also splits the right side through
    y' and z'."""
    if n < 1:
        raise GraphError("n must be at least 1")
    if 2 * n + 2 > families.CLOSED_FORM_MAX_N:
        raise CapExceeded(f"cut2_from_G needs G on {2 * n + 2} vertices")
    ks = k_range(conv.cut_sum_range, n)
    summands = _cut_summands(n, conv.G_const, primed)
    constructed = SparsePolynomial()
    for k in ks:
        constructed = constructed + summands[k]
    expected = families.cut_poly(n, 2, conv.cut_trivial).scale(2)

    m = 2 * n + 2
    source = families.G_poly(m, conv.G_const)
    base = Oracle.from_polynomial(source, (m // 2) * (m - m // 2), f"G_{m}", families.edge_variables(m))
    glued = project(base, g_layout_sigma(n), label="two-sided layout with apexes a, b", precompose=True)
    dvars = [de(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]

    def evaluate(pt):
        before = base.calls
        total = Fraction(0)
        acc = OracleTranscript()
        for k in ks:
            o = homogeneous_oracle(glued, 1, [T], 1)
            o = homogeneous_oracle(o, n - k, [Z], n)
            outer = [Y]
            if primed:
                o = homogeneous_oracle(o, k, [Y], n)
                o = homogeneous_oracle(o, n - k, [ZP], n)
                outer = [YP]
            point = {**pt, T: 1, Y: 1, Z: 1, YP: 1, ZP: 1}
            point = {v: point[v] for v in o.universe}
            value, t = extract_homogeneous(o, k, point, outer, n)
            total += value
            acc = acc + t
        acc.base_calls = base.calls - before
        return total, acc

    agree, t = _run_oracle(evaluate, constructed, dvars, seed, f"cut2_from_G/{n}", points)
    ab_only = all(any(v == T for v, _ in mono) for mono in source.substitute(g_layout_sigma(n))
                  .homogeneous_component(1, [T]).terms)
    extra = {"primed": primed, "k_values": list(ks), "t_component_uses_ab_edge": ab_only}
    return _finish("cut2_from_G", n, f"G_{m} on the apex layout", f"2*Cut2_{n}", constructed, expected, t, agree,
                   points, {"cut_sum_range": conv.cut_sum_range, "cut_trivial": conv.cut_trivial,
                            "G_const": conv.G_const}, extra)


def run_step(name: str, n: int, conv: Conventions = Conventions(), graph: Graph | None = None,
             max_n: int | None = None, seed: int = 0, points: int = DEFAULT_POINTS) -> ChainStep:
    if name == "neighbor_step":
        if graph is None:
            raise GraphError("neighbor_step needs a graph")
        return neighbor_step(graph, n, max_n, seed, points)
    if name == "g_from_fmap":
        return g_from_fmap(n, conv, max_n, seed, points)
    if name == "clique_from_F":
        return clique_from_F(n, conv, seed=seed, points=points)
    if name == "F_from_cut2":
        return F_from_cut2(n, conv, max_n, seed, points)
    if name == "cut2_from_G":
        return cut2_from_G(n, conv, seed=seed, points=points)
    raise ValueError(f"unknown step {name!r}")


def run_full_chain(H: Graph, n: int, conv: Conventions = Conventions(), max_n: int | None = None,
                   seed: int = 0, points: int = DEFAULT_POINTS) -> list[ChainStep]:
    """Neighbour steps along the iteration trace of H, then the four steps
    below f^edge_n."""
    if H.loops:
        raise GraphError("H has a loop: its homomorphism polynomial is a product of (1 + x_e), no chain applies")
    if not H.edges:
        raise GraphError("H has no edges: its homomorphism polynomial is 1, no chain applies")
    steps = []
    trace = iterate_neighbor(H)
    for G in trace.graphs[:-1]:
        steps.append(neighbor_step(G, n, max_n, seed, points))
    for name in STEP_NAMES[1:]:
        steps.append(run_step(name, n, conv, max_n=max_n, seed=seed, points=points))
    return steps
