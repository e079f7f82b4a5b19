"""Finite undirected graphs on vertices ``1..n`` and homomorphism search."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Iterator

from . import kernels

DEFAULT_MAX_N = 6


class GraphError(ValueError):
    pass


class CapExceeded(GraphError):
    """Raised when an exhaustive enumeration would exceed the vertex cap."""


def enumeration_cap(max_n: int | None = None) -> int:
    """The active enumeration cap: explicit value, else ``HOMOPOLY_MAX_N``, else 6."""
    if max_n is not None:
        return max_n
    env = os.environ.get("HOMOPOLY_MAX_N")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_MAX_N


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = field(default_factory=frozenset)
    loops: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise GraphError(f"vertex count must be a nonnegative integer, got {self.n!r}")
        canon = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise GraphError(f"edge {e} is a loop; put it in `loops`")
            for v in (i, j):
                if not 1 <= v <= self.n:
                    raise GraphError(f"endpoint {v} outside 1..{self.n}")
            canon.add((min(i, j), max(i, j)))
        for v in self.loops:
            if not 1 <= v <= self.n:
                raise GraphError(f"loop vertex {v} outside 1..{self.n}")
        object.__setattr__(self, "edges", frozenset(canon))
        object.__setattr__(self, "loops", frozenset(self.loops))

    @classmethod
    def from_edges(cls, n, edges=(), loops=()) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), frozenset(loops))

    def neighbors(self, v: int) -> set[int]:
        out = {j for i, j in self.edges if i == v} | {i for i, j in self.edges if j == v}
        if v in self.loops:
            out.add(v)
        return out

    def adjacent(self, u: int, v: int) -> bool:
        if u == v:
            return u in self.loops
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, v: int) -> int:
        return len(self.neighbors(v) - {v}) + (2 if v in self.loops else 0)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def induced(self, vertices) -> "Graph":
        """Subgraph induced by ``vertices``, relabelled ``1..k`` in increasing order."""
        order = sorted(vertices)
        index = {v: i + 1 for i, v in enumerate(order)}
        edges = [(index[i], index[j]) for i, j in self.edges if i in index and j in index]
        loops = [index[v] for v in self.loops if v in index]
        return Graph.from_edges(len(order), edges, loops)

    def adjacency_masks(self) -> list[int]:
        """0-based adjacency bitmasks; a loop sets the vertex's own bit."""
        masks = [0] * self.n
        for i, j in self.edges:
            masks[i - 1] |= 1 << (j - 1)
            masks[j - 1] |= 1 << (i - 1)
        for v in self.loops:
            masks[v - 1] |= 1 << (v - 1)
        return masks

    def is_regular(self, d: int) -> bool:
        return self.n > 0 and all(self.degree(v) == d for v in range(1, self.n + 1))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()], "loops": sorted(self.loops)}

    @classmethod
    def from_json(cls, data) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n = data["n"]
            edges = [tuple(e) for e in data.get("edges", [])]
            loops = list(data.get("loops", []))
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from exc
        if any(len(e) != 2 for e in edges):
            raise GraphError("every edge must be a pair")
        return cls.from_edges(n, edges, loops)

    def __str__(self):
        parts = [f"{i}-{j}" for i, j in self.sorted_edges()]
        parts += [f"{v}@" for v in sorted(self.loops)]
        return f"Graph(n={self.n}; {' '.join(parts) or 'no edges'})"


def load_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return Graph.from_json(json.load(fh))


def make_family(kind: str, *params: int) -> Graph:
    """Standard graphs: complete, complete_bipartite, path, cycle, edge,
    single_looped_vertex, edgeless."""
    if any(p < 1 for p in params):
        raise GraphError(f"size parameters must be positive, got {params}")
    if kind == "complete":
        (n,) = params
        return Graph.from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])
    if kind == "complete_bipartite":
        a, b = params
        return Graph.from_edges(a + b, [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)])
    if kind == "path":
        (n,) = params
        return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])
    if kind == "cycle":
        (n,) = params
        if n < 3:
            raise GraphError("a cycle needs at least 3 vertices")
        return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])
    if kind == "edge":
        if params:
            raise GraphError("`edge` takes no size parameter")
        return Graph.from_edges(2, [(1, 2)])
    if kind == "single_looped_vertex":
        if params:
            raise GraphError("`single_looped_vertex` takes no size parameter")
        return Graph.from_edges(1, [], [1])
    if kind == "edgeless":
        (n,) = params
        return Graph(n)
    raise GraphError(f"unknown graph family {kind!r}")


def is_homomorphism(G: Graph, H: Graph, mapping: dict[int, int]) -> bool:
    if set(mapping) != set(range(1, G.n + 1)):
        return False
    if any(not 1 <= w <= H.n for w in mapping.values()):
        return False
    pairs = list(G.edges) + [(v, v) for v in G.loops]
    return all(H.adjacent(mapping[u], mapping[v]) for u, v in pairs)


def find_homomorphism(G: Graph, H: Graph) -> dict[int, int] | None:
    """Backtracking search in vertex order; returns a witness map or None."""
    if G.n == 0:
        return {}
    if H.n == 0:
        return None
    g_nb = {v: G.neighbors(v) for v in range(1, G.n + 1)}
    h_nb = {v: H.neighbors(v) for v in range(1, H.n + 1)}
    image: dict[int, int] = {}

    def place(u: int) -> bool:
        if u > G.n:
            return True
        cand = set(range(1, H.n + 1))
        if u in G.loops:
            cand &= H.loops
        for w in g_nb[u]:
            if w < u:
                cand &= h_nb[image[w]]
        for c in sorted(cand):
            image[u] = c
            if place(u + 1):
                return True
        image.pop(u, None)
        return False

    return dict(image) if place(1) else None


def are_bihomomorphic(H1: Graph, H2: Graph) -> bool:
    return find_homomorphism(H1, H2) is not None and find_homomorphism(H2, H1) is not None


def disjoint_union(graphs) -> Graph:
    edges, loops, offset = [], [], 0
    for g in graphs:
        edges += [(i + offset, j + offset) for i, j in g.edges]
        loops += [v + offset for v in g.loops]
        offset += g.n
    return Graph.from_edges(offset, edges, loops)


def neighborhood_components(H: Graph) -> list[tuple[int, Graph]]:
    """(vertex, induced neighbourhood) pairs in vertex order of H."""
    if H.loops:
        raise GraphError("neighborhood_union requires a loop-free graph")
    return [(v, H.induced(H.neighbors(v))) for v in range(1, H.n + 1)]


def neighborhood_union(H: Graph) -> Graph:
    return disjoint_union(g for _, g in neighborhood_components(H))


def cone(G: Graph) -> Graph:
    apex = G.n + 1
    return Graph.from_edges(apex, list(G.edges) + [(v, apex) for v in range(1, apex)], G.loops)


def max_degree(H: Graph) -> int:
    return max((H.degree(v) for v in range(1, H.n + 1)), default=0)


def graph_from_mask(n: int, mask: int) -> Graph:
    pairs = kernels.edge_pairs(n)
    e = len(pairs)
    return Graph.from_edges(n, [(i + 1, j + 1) for idx, (i, j) in enumerate(pairs) if mask >> (e - 1 - idx) & 1])


def enumerate_graphs(n: int, max_n: int | None = None) -> Iterator[Graph]:
    """All loop-free labelled graphs on ``1..n`` in lexicographic edge-indicator order."""
    if n < 1:
        raise GraphError("n must be at least 1")
    cap = enumeration_cap(max_n)
    if n > cap:
        raise CapExceeded(f"n={n} exceeds enumeration cap {cap}")
    e = n * (n - 1) // 2
    for mask in range(1 << e):
        yield graph_from_mask(n, mask)
