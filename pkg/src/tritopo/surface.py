"""Triangulated surfaces: recognition, classification and essential circles."""

from __future__ import annotations

from collections import defaultdict, deque
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property

from . import gf2
from .complex import (
    ChainZ2,
    Simplex,
    SimplicialComplex,
    closure,
    euler_characteristic,
    facet_components,
    graph_components,
    is_boundary,
)
from .errors import NoRepresentativeError, PreconditionError, StructureError


@dataclass(frozen=True)
class SurfaceClass:
    orientable: bool
    genus: int
    boundary_count: int
    euler: int


class SurfaceComplex(SimplicialComplex):
    """A pure 2-dimensional simplicial complex that is a surface (possibly with boundary)."""

    def __init__(self, simplices=(), labels=None, *, close: bool = False):
        super().__init__(simplices, labels, close=close)
        if self.dim > 2:
            raise StructureError("a surface has no simplices above dimension 2")
        tris = self.simplices(2)
        covered = closure(tris)
        stray = [s for s in self.all_simplices() if s not in covered]
        if stray:
            raise StructureError(f"simplex {min(stray)} is not in any triangle")
        for e, co in self.cofaces.items():
            if len(e) == 2 and len(co) > 2:
                raise StructureError(f"edge {e} lies in {len(co)} triangles")
        for v in self.vertices:
            if not _link_is_path_or_cycle(self, v):
                raise StructureError(f"vertex {v} has a disconnected link")

    @classmethod
    def from_triangles(cls, triangles: Iterable[Iterable[int]], labels=None) -> "SurfaceComplex":
        return cls([tuple(sorted(t)) for t in triangles], labels, close=True)

    @classmethod
    def of(cls, K: SimplicialComplex) -> "SurfaceComplex":
        if isinstance(K, SurfaceComplex):
            return K
        return cls(K.all_simplices(), K.labels)

    @cached_property
    def boundary_edges(self) -> frozenset[Simplex]:
        return frozenset(e for e in self.simplices(1) if len(self.cofaces.get(e, ())) == 1)

    @cached_property
    def interior_edges(self) -> frozenset[Simplex]:
        return self.simplices(1) - self.boundary_edges

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(v for e in self.boundary_edges for v in e)

    @cached_property
    def classification(self) -> SurfaceClass:
        return classify(self)


def _link_is_path_or_cycle(K: SimplicialComplex, v: int) -> bool:
    edges = [tuple(x for x in t if x != v) for t in K.simplices(2) if v in t]
    if not edges:
        return False
    deg: dict[int, int] = defaultdict(int)
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    if any(d > 2 for d in deg.values()):
        return False
    return len(graph_components(deg, edges)) == 1


def components(s: SurfaceComplex) -> list[SurfaceComplex]:
    return [SurfaceComplex.from_triangles(g) for g in facet_components(s.simplices(2))]


def _orient(s: SurfaceComplex) -> tuple[bool, dict[Simplex, tuple[int, int, int]]]:
    """Propagate a coherent orientation; returns (orientable, oriented triangles)."""
    tris = s.sorted(2)
    by_edge: dict[Simplex, list[Simplex]] = defaultdict(list)
    for t in tris:
        for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2])):
            by_edge[e].append(t)
    oriented: dict[Simplex, tuple[int, int, int]] = {}
    ok = True
    for seed in tris:
        if seed in oriented:
            continue
        oriented[seed] = seed
        queue = deque([seed])
        while queue:
            t = queue.popleft()
            o = oriented[t]
            for i in range(3):
                a, b = o[i], o[(i + 1) % 3]
                for u in by_edge[tuple(sorted((a, b)))]:
                    if u == t:
                        continue
                    w = next(x for x in u if x not in (a, b))
                    want = (b, a, w)
                    if u not in oriented:
                        oriented[u] = want
                        queue.append(u)
                    elif not _same_cycle(oriented[u], want):
                        ok = False
    return ok, oriented


def _same_cycle(p, q) -> bool:
    k = p.index(q[0])
    return tuple(p[k:] + p[:k]) == tuple(q)


def boundary_circles(s: SurfaceComplex) -> list[ChainZ2]:
    """Boundary edges partitioned into simple cycles."""
    s = SurfaceComplex.of(s)
    edges = s.boundary_edges
    comps = graph_components({v for e in edges for v in e}, edges)
    out = []
    for comp in comps:
        out.append(ChainZ2(1, frozenset(e for e in edges if e[0] in comp)))
    return sorted(out, key=lambda c: min(c.support))


def classify(s: SimplicialComplex) -> SurfaceClass:
    s = SurfaceComplex.of(s)
    if not s.simplices(2):
        raise StructureError("empty surface")
    if len(facet_components(s.simplices(2))) != 1:
        raise StructureError("classify needs a connected surface")
    orientable, _ = _orient(s)
    chi = euler_characteristic(s)
    r = len(boundary_circles(s))
    if orientable:
        g2 = 2 - chi - r
        return SurfaceClass(True, g2 // 2, r, chi)
    return SurfaceClass(False, 2 - chi - r, r, chi)


def orientation(s: SurfaceComplex) -> dict[Simplex, tuple[int, int, int]]:
    ok, o = _orient(SurfaceComplex.of(s))
    if not ok:
        raise StructureError("surface is not orientable")
    return o


def is_planar(s: SimplicialComplex) -> bool:
    """Every component orientable, genus 0, with at least one boundary circle."""
    s = SurfaceComplex.of(s)
    for comp in components(s):
        c = comp.classification
        if not c.orientable or c.genus != 0 or c.boundary_count == 0:
            return False
    return True


def attach_disc(s: SurfaceComplex, k: ChainZ2, apex: int | None = None) -> SurfaceComplex:
    """Cone a boundary circle off at a new vertex."""
    s = SurfaceComplex.of(s)
    if k not in boundary_circles(s):
        raise PreconditionError("attach_disc needs a boundary circle of the surface")
    if apex is None:
        apex = max(s.vertices) + 1
    tris = list(s.simplices(2)) + [tuple(sorted(e + (apex,))) for e in k.support]
    return SurfaceComplex.from_triangles(tris, s.labels)


def cap_all(s: SurfaceComplex) -> tuple[SurfaceComplex, list[set[Simplex]]]:
    """Attach a disc to every boundary circle; also return the cap triangles."""
    caps = []
    for k in boundary_circles(s):
        apex = max(s.vertices) + 1
        s = attach_disc(s, k, apex)
        caps.append({tuple(sorted(e + (apex,))) for e in k.support})
    return s, caps


# --- circles ---------------------------------------------------------------

def is_simple_circle(c: ChainZ2) -> bool:
    if c.dim != 1 or not c.support:
        return False
    deg: dict[int, int] = defaultdict(int)
    for a, b in c.support:
        deg[a] += 1
        deg[b] += 1
    if any(d != 2 for d in deg.values()):
        return False
    return len(graph_components(deg, c.support)) == 1


def cycle_order(c: ChainZ2) -> list[int]:
    """Vertices of a simple circle in traversal order, starting at the smallest."""
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b in c.support:
        adj[a].append(b)
        adj[b].append(a)
    start = min(adj)
    order = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        order.append(cur)
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        prev, cur = cur, nxt
    return order


def circle_from_vertices(vs: list[int]) -> ChainZ2:
    return ChainZ2(1, frozenset(tuple(sorted((vs[i], vs[(i + 1) % len(vs)]))) for i in range(len(vs))))


def _rotation(s: SurfaceComplex, v: int) -> list[int]:
    """Neighbours of ``v`` ordered along its link (path or cycle)."""
    edges = [tuple(x for x in t if x != v) for t in s.simplices(2) if v in t]
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    ends = [x for x, n in adj.items() if len(n) == 1]
    start = min(ends) if ends else min(adj)
    order = [start]
    prev = None
    cur = start
    while True:
        nxt = [y for y in adj[cur] if y != prev and y not in order]
        if not nxt:
            break
        prev, cur = cur, min(nxt)
        order.append(cur)
    return order


def split_circuits(s: SurfaceComplex, cycle: ChainZ2) -> list[ChainZ2]:
    """Decompose a Z2 1-cycle on a surface into vertex-simple circles.

    At vertices of degree >= 4 edges are paired consecutively in rotation
    order so the traced circuits do not cross.  A circuit that still revisits
    a vertex is cut there into smaller closed walks.
    """
    edges = set(cycle.support)
    inc: dict[int, list[int]] = defaultdict(list)
    for a, b in edges:
        inc[a].append(b)
        inc[b].append(a)
    if any(len(n) % 2 for n in inc.values()):
        raise PreconditionError("chain is not a cycle")
    pair: dict[tuple[int, int], int] = {}
    for v, nbrs in inc.items():
        if len(nbrs) == 2:
            a, b = nbrs
            pair[(v, a)] = b
            pair[(v, b)] = a
            continue
        rot = [w for w in _rotation(s, v) if w in nbrs]
        for i in range(0, len(rot), 2):
            a, b = rot[i], rot[i + 1]
            pair[(v, a)] = b
            pair[(v, b)] = a
    used: set[Simplex] = set()
    walks = []
    for e in sorted(edges):
        if e in used:
            continue
        a, b = e
        walk = [a]
        prev, cur = a, b
        used.add(e)
        while True:
            walk.append(cur)
            nxt = pair[(cur, prev)]
            ed = tuple(sorted((cur, nxt)))
            if ed in used:
                break
            used.add(ed)
            prev, cur = cur, nxt
        walks.append(walk[:-1])
    out = []
    for w in walks:
        out.extend(_cut_walk(w))
    return out


def _cut_walk(walk: list[int]) -> list[ChainZ2]:
    stack = [walk]
    out = []
    while stack:
        w = stack.pop()
        seen: dict[int, int] = {}
        for i, v in enumerate(w):
            if v in seen:
                j = seen[v]
                stack.append(w[j:i])
                stack.append(w[:j] + w[i:])
                break
            seen[v] = i
        else:
            if len(w) >= 3:
                out.append(circle_from_vertices(w))
    return out


def interior_of(s: SurfaceComplex, t: SimplicialComplex) -> tuple[set[Simplex], set[int]]:
    """Edges and vertices of the subsurface ``t`` not on its own boundary."""
    if not t.simplices(2):
        return set(), set()
    t = SurfaceComplex.of(t)
    return set(t.interior_edges), set(t.vertices - t.boundary_vertices)


def _solve_off(s: SurfaceComplex, c: ChainZ2, bad_edges: set[Simplex], prefer: set[Simplex]) -> ChainZ2 | None:
    """Find c + dX avoiding ``bad_edges``; try X inside ``prefer`` first."""
    rows = sorted(bad_edges)
    if not rows:
        return c
    ridx = {e: i for i, e in enumerate(rows)}
    target = gf2.to_bitset(ridx[e] for e in c.support if e in ridx)
    if not target:
        return c
    for pool in (sorted(prefer), s.sorted(2)):
        if not pool:
            continue
        elim = gf2.Eliminator()
        for tri in pool:
            col = 0
            for e in ((tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])):
                if e in ridx:
                    col ^= 1 << ridx[e]
            elim.add(col)
        combo = elim.solve(target)
        if combo is not None:
            X = [pool[i] for i in gf2.bits(combo)]
            out = set(c.support)
            for tri in X:
                out ^= {(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])}
            return ChainZ2(1, frozenset(out))
    return None


def _forbidden_edges(s: SurfaceComplex, edges: set[Simplex], verts: set[int]) -> set[Simplex]:
    return {e for e in s.simplices(1) if e in edges or e[0] in verts or e[1] in verts}


def push_off(s: SurfaceComplex, c: ChainZ2, forbidden: SimplicialComplex | Iterable) -> ChainZ2:
    """A circle homologous to ``c`` sharing no vertex or edge with ``forbidden``."""
    s = SurfaceComplex.of(s)
    forb = closure(forbidden.all_simplices() if isinstance(forbidden, SimplicialComplex) else forbidden)
    if not is_simple_circle(c):
        raise PreconditionError("push_off needs a simple circle")
    c.check_in(s)
    fverts = {x[0] for x in forb if len(x) == 1}
    fedges = {x for x in forb if len(x) == 2}
    if not (c.vertices & fverts):
        return c
    bad = _forbidden_edges(s, fedges, fverts)
    prefer = {t for t in s.simplices(2) if set(t) & fverts}
    moved = _solve_off(s, c, bad, prefer)
    if moved is None:
        raise NoRepresentativeError("the forbidden region carries the class of the circle")
    pieces = [p for p in split_circuits(s, moved) if not is_boundary(p, s)[0]]
    if not pieces:
        if is_boundary(c, s)[0]:
            raise NoRepresentativeError("circle bounds; no nonempty representative off the region")
        raise NoRepresentativeError("pushed cycle has no essential circuit")
    if len(pieces) > 1:
        for p in pieces:
            if is_boundary(p + c, s)[0]:
                return p
        raise NoRepresentativeError(f"class splits into {len(pieces)} disjoint circuits off the region")
    return pieces[0]


def _nontrivial_piece(s: SurfaceComplex, z: ChainZ2) -> ChainZ2 | None:
    for p in sorted(split_circuits(s, z), key=lambda p: (len(p), sorted(p.support))):
        if not is_boundary(p, s)[0]:
            return p
    return None


def _cycle_basis(vertices: Iterable[int], edges: Iterable[Simplex]) -> list[ChainZ2]:
    """Fundamental cycles of a graph with respect to a BFS spanning forest."""
    edges = sorted(set(edges))
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    tree: set[Simplex] = set()
    for root in sorted(set(vertices) | set(adj)):
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        q = deque([root])
        while q:
            x = q.popleft()
            for y in sorted(adj[x]):
                if y not in parent:
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    tree.add(tuple(sorted((x, y))))
                    q.append(y)
    basis = []
    for a, b in edges:
        if (a, b) in tree:
            continue
        pa, pb = [a], [b]
        while pa[-1] != pb[-1]:
            if depth[pa[-1]] >= depth[pb[-1]]:
                pa.append(parent[pa[-1]])
            else:
                pb.append(parent[pb[-1]])
        walk = pa + pb[-2::-1]
        basis.append(circle_from_vertices(walk))
    return basis


def _check_hypotheses(s: SurfaceComplex, t: SimplicialComplex) -> None:
    if len(facet_components(s.simplices(2))) != 1:
        raise PreconditionError("surface must be connected")
    cls = classify(s)
    if not cls.orientable:
        raise PreconditionError("surface must be orientable")
    if cls.genus < 1:
        raise PreconditionError("surface has genus 0 after capping")
    if t.simplices(2) and not is_planar(t):
        raise PreconditionError("subsurface is not planar")
    missing = [x for x in t.all_simplices() if x not in s]
    if missing:
        raise PreconditionError(f"subsurface simplex {min(missing)} not in the surface")


def nontrivial_circle_linear(s: SurfaceComplex, t: SimplicialComplex) -> ChainZ2:
    """Essential circle off the interior of ``t`` by direct linear algebra."""
    s = SurfaceComplex.of(s)
    t = SimplicialComplex(t.all_simplices()) if t is not None else SimplicialComplex()
    _check_hypotheses(s, t)
    bad_e, bad_v = interior_of(s, t)
    allowed = [e for e in s.simplices(1) if e not in bad_e and e[0] not in bad_v and e[1] not in bad_v]
    for z in _cycle_basis((), allowed):
        if not is_boundary(z, s)[0]:
            piece = _nontrivial_piece(s, z)
            if piece is not None:
                return piece
    raise PreconditionError("every cycle off the subsurface bounds")


def nontrivial_circle_inductive(s: SurfaceComplex, t: SimplicialComplex) -> ChainZ2:
    """Essential circle off the interior of ``t`` by the double induction on (genus, circles)."""
    s = SurfaceComplex.of(s)
    t = SimplicialComplex(t.all_simplices()) if t is not None else SimplicialComplex()
    _check_hypotheses(s, t)
    if s.boundary_edges:
        capped, caps = cap_all(s)
        c = _induct(capped, set(t.simplices(2)))
        cap_tris = set().union(*caps)
        cap_verts = {v for tri in cap_tris for v in tri} - set(s.vertices)
        bad_e, bad_v = interior_of(capped, SimplicialComplex(t.simplices(2), close=True))
        bad = _forbidden_edges(capped, bad_e, bad_v | cap_verts)
        moved = _solve_off(capped, c, bad, cap_tris)
        if moved is None:
            raise PreconditionError("could not push the circle off the caps")
        piece = _nontrivial_piece(capped, moved)
        if piece is None:
            raise PreconditionError("pushed circle became trivial")
        return piece
    return _induct(s, set(t.simplices(2)))


def _sides(s: SurfaceComplex, k: ChainZ2) -> list[list[Simplex]]:
    return facet_components(s.simplices(2), blocked=k.support)


def _capped_genus(tris: list[Simplex]) -> int:
    piece = SurfaceComplex.from_triangles(tris)
    capped, _ = cap_all(piece)
    return classify(capped).genus


def _induct(S: SurfaceComplex, T: set[Simplex]) -> ChainZ2:
    """Closed connected orientable ``S`` of genus >= 1; ``T`` planar triangle set."""
    if not T:
        return _push_nontrivial(S, _any_essential(S), T)
    Tc = SurfaceComplex.from_triangles(T)
    ks = boundary_circles(Tc)
    # case (2): some boundary circle of T is essential
    for k in ks:
        if not is_boundary(k, S)[0]:
            return k
    if len(ks) == 1:
        return _push_nontrivial(S, _any_essential(S), T)
    sides = []
    for k in ks:
        a, b = _sides(S, k)
        if (len(a), sorted(a)) > (len(b), sorted(b)):
            a, b = b, a
        sides.append((k, a, b))
    # case (3): a side lies inside T, so it is a disc component of T
    for k, a, b in sides:
        for v in (a, b):
            if set(v) <= T:
                c = _induct(S, T - set(v))
                return _push_nontrivial(S, c, T)
    # case (4): compare genera of the capped sides
    g = classify(S).genus
    for k, a, b in sides:
        for v in (a, b):
            if _capped_genus(v) == 0:
                return _induct(S, T | set(v))
    for k, a, b in sides:
        for v in (a, b):
            gj = _capped_genus(v)
            if 1 <= gj <= g - 1:
                W = SurfaceComplex.from_triangles(v)
                W, caps = cap_all(W)
                Tj = (T & set(v)) | set().union(*caps)
                c = _induct(W, Tj)
                if c.support <= S.simplices(1) and not is_boundary(c, S)[0]:
                    return c
    raise PreconditionError("induction found no applicable case")


def _any_essential(S: SurfaceComplex) -> ChainZ2:
    for z in _cycle_basis((), S.simplices(1)):
        if not is_boundary(z, S)[0]:
            piece = _nontrivial_piece(S, z)
            if piece is not None:
                return piece
    raise PreconditionError("surface has no essential circle")


def _push_nontrivial(S: SurfaceComplex, c: ChainZ2, T: set[Simplex]) -> ChainZ2:
    """Move an essential circle off the interior of ``T`` keeping it essential."""
    if not T:
        return c
    bad_e, bad_v = interior_of(S, SimplicialComplex(T, close=True))
    bad = _forbidden_edges(S, bad_e, bad_v)
    if not (c.support & bad):
        return c
    moved = _solve_off(S, c, bad, set(T))
    if moved is None:
        raise PreconditionError("planar region carries the class")
    piece = _nontrivial_piece(S, moved)
    if piece is None:
        raise PreconditionError("push produced only trivial circuits")
    return piece


def find_nontrivial_circle(s: SurfaceComplex, t: SimplicialComplex | None = None, method: str = "induction") -> ChainZ2:
    """Simple circle avoiding the interior of planar ``t`` that does not bound in ``s``."""
    t = t if t is not None else SimplicialComplex()
    if method == "induction":
        return nontrivial_circle_inductive(s, t)
    if method == "linear":
        return nontrivial_circle_linear(s, t)
    raise ValueError(f"unknown method {method!r}")


def avoids_interior(s: SurfaceComplex, c: ChainZ2, t: SimplicialComplex) -> bool:
    bad_e, bad_v = interior_of(SurfaceComplex.of(s), t)
    return not (c.support & bad_e) and not (c.vertices & bad_v)
