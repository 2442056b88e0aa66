"""Independent reference computations used by the tests.

Nothing here imports the package's linear algebra: ranks come from dense
numpy elimination over GF(2) on boundary matrices built from scratch.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def gf2_rank(m: np.ndarray) -> int:
    a = (np.array(m, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = np.nonzero(a[r:, c])[0]
        if piv.size == 0:
            continue
        p = r + piv[0]
        a[[r, p]] = a[[p, r]]
        below = np.nonzero(a[:, c])[0]
        below = below[below != r]
        a[below] ^= a[r]
        r += 1
    return r


def all_simplices(maximal) -> dict[int, list[tuple[int, ...]]]:
    out: dict[int, set] = {}
    for s in maximal:
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            for f in combinations(s, k):
                out.setdefault(k - 1, set()).add(f)
    return {d: sorted(v) for d, v in out.items()}


def boundary_matrix(simplices, d: int) -> np.ndarray:
    rows = simplices.get(d - 1, [])
    cols = simplices.get(d, [])
    index = {s: i for i, s in enumerate(rows)}
    m = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for j, s in enumerate(cols):
        for f in combinations(s, len(s) - 1):
            m[index[f], j] = 1
    return m


def betti(maximal, top: int = 3) -> tuple[int, ...]:
    simp = all_simplices(maximal)
    dim = max(simp) if simp else -1
    ranks = {d: gf2_rank(boundary_matrix(simp, d)) if d >= 1 and simp.get(d) else 0 for d in range(dim + 2)}
    out = []
    for i in range(top + 1):
        n = len(simp.get(i, []))
        out.append(n - ranks.get(i, 0) - ranks.get(i + 1, 0) if i <= dim else 0)
    return tuple(out)


def in_column_space(m: np.ndarray, v: np.ndarray) -> bool:
    return gf2_rank(np.column_stack([m, v])) == gf2_rank(m)


class UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> None:
        self.parent[self.find(a)] = self.find(b)

    def groups(self, items) -> int:
        return len({self.find(x) for x in items})


def surface_invariants(triangles) -> tuple[int, int]:
    """(Euler characteristic, number of boundary circles) from raw counts."""
    tris = [tuple(sorted(t)) for t in triangles]
    edges: dict = {}
    for t in tris:
        for e in combinations(t, 2):
            edges[e] = edges.get(e, 0) + 1
    verts = {v for t in tris for v in t}
    bd = [e for e, n in edges.items() if n == 1]
    uf = UnionFind()
    for a, b in bd:
        uf.union(a, b)
    circles = uf.groups({v for e in bd for v in e})
    return len(verts) - len(edges) + len(tris), circles
