# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; semantics identical to the pure-Python twin in _ref."""

from libc.stdlib cimport calloc, free, malloc

import numpy as np

BACKEND = "compiled"


cdef long long _extend_match(int start, int size, int nu, int l,
                             const int* uverts, unsigned char* occ,
                             long long* counts, long long nodes,
                             long long budget) noexcept:
    cdef int idx, j, ok
    for idx in range(start, nu):
        ok = 1
        for j in range(l):
            if occ[uverts[idx * l + j]]:
                ok = 0
                break
        if not ok:
            continue
        for j in range(l):
            occ[uverts[idx * l + j]] = 1
        nodes += 1
        if nodes > budget:
            return -1
        counts[size + 1] += 1
        nodes = _extend_match(idx + 1, size + 1, nu, l, uverts, occ,
                              counts, nodes, budget)
        for j in range(l):
            occ[uverts[idx * l + j]] = 0
        if nodes < 0:
            return -1
    return nodes


def size_counts(edge_verts, int m, int l, int n_vertices, int max_size,
                long long node_budget):
    cdef const int[::1] ev = np.ascontiguousarray(edge_verts, dtype=np.intc).ravel()
    cdef int e, j, k, nu = 0, distinct
    cdef int* uverts = <int*> malloc(m * l * sizeof(int))
    cdef unsigned char* occ = <unsigned char*> calloc(n_vertices, 1)
    cdef long long* counts = <long long*> calloc(max_size + 1, sizeof(long long))
    if uverts == NULL or occ == NULL or counts == NULL:
        free(uverts); free(occ); free(counts)
        raise MemoryError
    try:
        for e in range(m):
            distinct = 1
            for j in range(l):
                for k in range(j + 1, l):
                    if ev[e * l + j] == ev[e * l + k]:
                        distinct = 0
                        break
                if not distinct:
                    break
            if distinct:
                for j in range(l):
                    uverts[nu * l + j] = ev[e * l + j]
                nu += 1
        counts[0] = 1
        nodes = _extend_match(0, 0, nu, l, uverts, occ, counts, 1, node_budget)
        out = [counts[k] for k in range(max_size + 1)]
        return out, nodes
    finally:
        free(uverts)
        free(occ)
        free(counts)


cdef void _extend_walk(int v0, int cur, int e0, int depth, int b, int l,
                       const int* vo, const int* bstart, const int* bitems,
                       unsigned char* vmark, unsigned char* emark,
                       long long* twice) noexcept:
    cdef int i, h, e, g, vg, base
    for i in range(bstart[cur], bstart[cur + 1]):
        h = bitems[i]
        e = h / l
        if e <= e0 or emark[e]:
            continue
        base = e * l
        for g in range(base, base + l):
            if g == h:
                continue
            vg = vo[g]
            if vg == v0:
                twice[depth + 1] += 1
            if depth + 1 < b and vg != v0 and not vmark[vg]:
                vmark[vg] = 1
                emark[e] = 1
                _extend_walk(v0, vg, e0, depth + 1, b, l, vo, bstart, bitems,
                             vmark, emark, twice)
                emark[e] = 0
                vmark[vg] = 0


def census_counts(vertex_of, int m, int l, int n_vertices, int b):
    cdef const int[::1] vo = np.ascontiguousarray(vertex_of, dtype=np.intc)
    cdef int lm = m * l
    cdef int e, a, c, h, f, g, v0, v1, base
    cdef long long c1 = 0
    counts = [0] * b

    for e in range(m):
        base = e * l
        for a in range(l):
            for c in range(a + 1, l):
                if vo[base + a] == vo[base + c]:
                    c1 += 1
    counts[0] = c1
    if b == 1:
        return counts

    cdef int* bstart = <int*> calloc(n_vertices + 2, sizeof(int))
    cdef int* bitems = <int*> malloc(lm * sizeof(int))
    cdef unsigned char* vmark = <unsigned char*> calloc(n_vertices, 1)
    cdef unsigned char* emark = <unsigned char*> calloc(m, 1)
    cdef long long* twice = <long long*> calloc(b + 2, sizeof(long long))
    if bstart == NULL or bitems == NULL or vmark == NULL or emark == NULL or twice == NULL:
        free(bstart); free(bitems); free(vmark); free(emark); free(twice)
        raise MemoryError
    try:
        # counting sort of half-edges by vertex
        for h in range(lm):
            bstart[vo[h] + 1] += 1
        for h in range(1, n_vertices + 1):
            bstart[h] += bstart[h - 1]
        for h in range(lm):
            bitems[bstart[vo[h]]] = h
            bstart[vo[h]] += 1
        for h in range(n_vertices, 0, -1):
            bstart[h] = bstart[h - 1]
        bstart[0] = 0

        for e in range(m):
            base = e * l
            for a in range(l):
                f = base + a
                v0 = vo[f]
                for c in range(l):
                    g = base + c
                    if g == f:
                        continue
                    v1 = vo[g]
                    if v1 == v0:
                        continue
                    vmark[v0] = 1
                    vmark[v1] = 1
                    emark[e] = 1
                    _extend_walk(v0, v1, e, 1, b, l, &vo[0], bstart, bitems,
                                 vmark, emark, twice)
                    emark[e] = 0
                    vmark[v0] = 0
                    vmark[v1] = 0

        for a in range(2, b + 1):
            assert twice[a] % 2 == 0
            counts[a - 1] = twice[a] // 2
        return counts
    finally:
        free(bstart)
        free(bitems)
        free(vmark)
        free(emark)
        free(twice)
