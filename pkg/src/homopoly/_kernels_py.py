"""Pure-Python edge-subset kernels.

Graph ``m`` on vertices ``0..n-1`` is the edge-indicator vector of the
lexicographic edge list ``(0,1), (0,2), ..., (n-2,n-1)`` read as a binary
number with the first edge as the most significant bit.  Every kernel
returns a ``bytearray`` indexed by ``m``.

The compiled twin in ``_kernels.pyx`` must return byte-identical results.
"""

from __future__ import annotations

EMPTY = 2  # component classifiers mark the edgeless graph with this code


def edge_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _adjacency(n, pairs, m):
    e = len(pairs)
    adj = [0] * n
    for idx, (i, j) in enumerate(pairs):
        if (m >> (e - 1 - idx)) & 1:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return adj


def _has_hom(n, adj, h_adj, h_all):
    # adj: G adjacency bitmasks, h_adj: H adjacency (loop = own bit)
    image = [0] * n

    def place(u):
        if u == n:
            return True
        cand = h_all
        lower = adj[u] & ((1 << u) - 1)
        w = 0
        while lower:
            if lower & 1:
                cand &= h_adj[image[w]]
                if not cand:
                    return False
            lower >>= 1
            w += 1
        while cand:
            low = cand & -cand
            image[u] = low.bit_length() - 1
            if place(u + 1):
                return True
            cand ^= low
        return False

    return place(0)


def hom_indicator(n, h_adj):
    """1 at every graph on ``n`` vertices that maps homomorphically into H."""
    pairs = edge_pairs(n)
    total = 1 << len(pairs)
    out = bytearray(total)
    h_all = (1 << len(h_adj)) - 1
    if not h_adj:
        return out
    for m in range(total):
        if _has_hom(n, _adjacency(n, pairs, m), h_adj, h_all):
            out[m] = 1
    return out


def _components(n, adj):
    seen = 0
    comps = []
    for s in range(n):
        if seen >> s & 1:
            continue
        comp = 1 << s
        frontier = comp
        while frontier:
            nxt = 0
            f = frontier
            v = 0
            while f:
                if f & 1:
                    nxt |= adj[v]
                f >>= 1
                v += 1
            nxt &= ~comp
            comp |= nxt
            frontier = nxt
        seen |= comp
        comps.append(comp)
    return comps


def _popcount(x):
    return bin(x).count("1")


def _is_complete_bipartite(comp, adj):
    verts = [v for v in range(comp.bit_length()) if comp >> v & 1]
    side = {verts[0]: 0}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        nb = adj[v]
        w = 0
        while nb:
            if nb & 1:
                if w not in side:
                    side[w] = 1 - side[v]
                    stack.append(w)
                elif side[w] == side[v]:
                    return False
            nb >>= 1
            w += 1
    a = sum(1 for v in verts if side[v] == 0)
    b = len(verts) - a
    edges = sum(_popcount(adj[v]) for v in verts) // 2
    return edges == a * b


def _is_clique(comp, adj):
    s = _popcount(comp)
    edges = sum(_popcount(adj[v]) for v in range(comp.bit_length()) if comp >> v & 1) // 2
    return edges == s * (s - 1) // 2


def component_indicator(n, kind):
    """Classify each graph by its non-trivial components.

    ``kind`` 0: exactly one non-trivial component and it is complete
    bipartite; ``kind`` 1: exactly one and it is a clique.  Qualifying graphs
    get 1, the edgeless graph gets ``EMPTY``, everything else 0.
    """
    pairs = edge_pairs(n)
    total = 1 << len(pairs)
    out = bytearray(total)
    test = _is_complete_bipartite if kind == 0 else _is_clique
    for m in range(total):
        if m == 0:
            out[m] = EMPTY
            continue
        adj = _adjacency(n, pairs, m)
        big = [c for c in _components(n, adj) if c & (c - 1)]
        if len(big) == 1 and test(big[0], adj):
            out[m] = 1
    return out
