"""Pure-Python kernels: matching counts by size and the cycle census.

Reference implementation; a Cython twin with identical semantics is
selected instead when compiled (see package __init__).  Both operate on
plain integer sequences so either backend can be driven from the same
callers.
"""

from __future__ import annotations

BACKEND = "python"


def size_counts(edge_verts, m, l, n_vertices, max_size, node_budget):
    """Count matchings of each size by depth-first search over hyperedges.

    edge_verts is the flattened m*l list of vertex ids per edge.  Returns
    (counts, nodes) where counts[k] is the number of matchings with k
    edges and nodes is the number of matchings visited (the budget unit).
    Returns nodes = -1 the moment the budget is exhausted.
    """
    counts = [0] * (max_size + 1)
    counts[0] = 1
    nodes = 1

    # Edges with an internal vertex repeat can never be matched.
    usable = []
    for e in range(m):
        vs = edge_verts[e * l : (e + 1) * l]
        if len(set(vs)) == l:
            usable.append((e, vs))

    occupied = bytearray(n_vertices)
    stack = [(0, 0)]  # (index into usable to resume from, current size)
    chosen: list[int] = []  # indices into usable, for unwinding

    def extend(start: int, size: int) -> int:
        nonlocal nodes
        for idx in range(start, len(usable)):
            vs = usable[idx][1]
            if any(occupied[v] for v in vs):
                continue
            for v in vs:
                occupied[v] = 1
            nodes += 1
            if nodes > node_budget:
                return -1
            counts[size + 1] += 1
            if extend(idx + 1, size + 1) < 0:
                return -1
            for v in vs:
                occupied[v] = 0
        return 0

    if extend(0, 0) < 0:
        return counts, -1
    return counts, nodes


def census_counts(vertex_of, m, l, n_vertices, b):
    """Count k-cycles for k = 1..b.

    A k-cycle is a set of 2k half-edges forming a single closed alternating
    walk through k distinct vertices and k distinct hyperedges; each edge on
    the cycle contributes an unordered pair of its half-edges.  k = 1 counts
    pairs of half-edges of one edge sharing a vertex.
    """
    counts = [0] * b
    lm = m * l

    # one-cycles: within-edge vertex collisions, one per half-edge pair
    c1 = 0
    for e in range(m):
        base = e * l
        for a in range(l):
            va = vertex_of[base + a]
            for c in range(a + 1, l):
                if va == vertex_of[base + c]:
                    c1 += 1
    counts[0] = c1
    if b == 1:
        return counts

    # half-edges grouped by vertex
    bucket: list[list[int]] = [[] for _ in range(n_vertices)]
    for h in range(lm):
        bucket[vertex_of[h]].append(h)

    # Longer cycles: enumerate directed closed walks rooted at their
    # minimum-index edge; each cycle is seen once per direction, so halve.
    twice = [0] * (b + 1)
    v_mark = bytearray(n_vertices)
    e_mark = bytearray(m)

    def extend(v0: int, cur: int, e0: int, depth: int) -> None:
        # depth = edges used so far; try to append edge > e0 through vertex cur
        for h in bucket[cur]:
            e = h // l
            if e <= e0 or e_mark[e]:
                continue
            base = e * l
            for g in range(base, base + l):
                if g == h:
                    continue
                vg = vertex_of[g]
                if vg == v0:
                    twice[depth + 1] += 1
                if depth + 1 < b and not v_mark[vg] and vg != v0:
                    v_mark[vg] = 1
                    e_mark[e] = 1
                    extend(v0, vg, e0, depth + 1)
                    e_mark[e] = 0
                    v_mark[vg] = 0

    for e0 in range(m):
        base = e0 * l
        for a in range(l):
            f = base + a
            v0 = vertex_of[f]
            for c in range(l):
                g = base + c
                if g == f:
                    continue
                v1 = vertex_of[g]
                if v1 == v0:
                    continue  # that collision is a 1-cycle, handled above
                v_mark[v0] = 1
                v_mark[v1] = 1
                e_mark[e0] = 1
                extend(v0, v1, e0, 1)
                e_mark[e0] = 0
                v_mark[v0] = 0
                v_mark[v1] = 0

    for k in range(2, b + 1):
        assert twice[k] % 2 == 0
        counts[k - 1] = twice[k] // 2
    return counts
