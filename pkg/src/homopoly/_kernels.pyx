# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled edge-subset kernels.  Same contract as ``_kernels_py``."""

from libc.stdint cimport uint64_t

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil

cdef enum:
    MAXN = 11
    MAXH = 64
    C_EMPTY = 2

EMPTY = C_EMPTY


cdef inline int _ctz(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef inline int _popc(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef void _adjacency(int n, int e, int* pi, int* pj, uint64_t m, uint64_t* adj) nogil:
    cdef int idx
    for idx in range(n):
        adj[idx] = 0
    for idx in range(e):
        if (m >> (e - 1 - idx)) & 1:
            adj[pi[idx]] |= (<uint64_t>1) << pj[idx]
            adj[pj[idx]] |= (<uint64_t>1) << pi[idx]


cdef bint _place(int u, int n, uint64_t* adj, uint64_t* h_adj, uint64_t h_all,
                 int* image) nogil:
    cdef uint64_t cand, lower, low
    cdef int w
    if u == n:
        return True
    cand = h_all
    lower = adj[u] & (((<uint64_t>1) << u) - 1)
    while lower:
        w = _ctz(lower)
        cand &= h_adj[image[w]]
        if not cand:
            return False
        lower &= lower - 1
    while cand:
        low = cand & (~cand + 1)
        image[u] = _ctz(low)
        if _place(u + 1, n, adj, h_adj, h_all, image):
            return True
        cand ^= low
    return False


def _pairs(int n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def hom_indicator(int n, h_adj_list):
    cdef int h = len(h_adj_list)
    if n > MAXN or h > MAXH:
        raise ValueError("compiled kernel supports n <= 11 and |V(H)| <= 64")
    pairs = _pairs(n)
    cdef int e = len(pairs)
    cdef uint64_t total = (<uint64_t>1) << e
    out = bytearray(total)
    if h == 0:
        return out
    cdef unsigned char[:] view = out
    cdef int pi[MAXN * MAXN]
    cdef int pj[MAXN * MAXN]
    cdef uint64_t h_adj[MAXH]
    cdef uint64_t adj[MAXN]
    cdef int image[MAXN]
    cdef int k
    for k in range(e):
        pi[k] = pairs[k][0]
        pj[k] = pairs[k][1]
    for k in range(h):
        h_adj[k] = <uint64_t>h_adj_list[k]
    cdef uint64_t h_all = ((<uint64_t>1) << h) - 1 if h < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    cdef uint64_t m
    with nogil:
        for m in range(total):
            _adjacency(n, e, pi, pj, m, adj)
            if _place(0, n, adj, h_adj, h_all, image):
                view[m] = 1
    return out


cdef int _classify(int n, uint64_t* adj, int kind) nogil:
    cdef uint64_t seen = 0, comp, frontier, nxt, f, big = 0
    cdef int s, v, nbig = 0
    cdef int side[MAXN]
    cdef int stack[MAXN]
    cdef int top, a, b, edges, w
    cdef uint64_t nb
    for s in range(n):
        if (seen >> s) & 1:
            continue
        comp = (<uint64_t>1) << s
        frontier = comp
        while frontier:
            nxt = 0
            f = frontier
            while f:
                nxt |= adj[_ctz(f)]
                f &= f - 1
            nxt &= ~comp
            comp |= nxt
            frontier = nxt
        seen |= comp
        if comp & (comp - 1):
            nbig += 1
            big = comp
    if nbig != 1:
        return 0
    edges = 0
    f = big
    while f:
        edges += _popc(adj[_ctz(f)])
        f &= f - 1
    edges //= 2
    if kind == 1:
        s = _popc(big)
        return 1 if edges == s * (s - 1) // 2 else 0
    for v in range(n):
        side[v] = -1
    v = _ctz(big)
    side[v] = 0
    top = 0
    stack[top] = v
    top += 1
    while top:
        top -= 1
        v = stack[top]
        nb = adj[v]
        while nb:
            w = _ctz(nb)
            if side[w] < 0:
                side[w] = 1 - side[v]
                stack[top] = w
                top += 1
            elif side[w] == side[v]:
                return 0
            nb &= nb - 1
    a = 0
    b = 0
    f = big
    while f:
        if side[_ctz(f)] == 0:
            a += 1
        else:
            b += 1
        f &= f - 1
    return 1 if edges == a * b else 0


def component_indicator(int n, int kind):
    if n > MAXN:
        raise ValueError("compiled kernel supports n <= 11")
    pairs = _pairs(n)
    cdef int e = len(pairs)
    cdef uint64_t total = (<uint64_t>1) << e
    out = bytearray(total)
    cdef unsigned char[:] view = out
    cdef int pi[MAXN * MAXN]
    cdef int pj[MAXN * MAXN]
    cdef uint64_t adj[MAXN]
    cdef int k
    for k in range(e):
        pi[k] = pairs[k][0]
        pj[k] = pairs[k][1]
    cdef uint64_t m
    with nogil:
        for m in range(total):
            if m == 0:
                view[m] = C_EMPTY
                continue
            _adjacency(n, e, pi, pj, m, adj)
            view[m] = _classify(n, adj, kind)
    return out
