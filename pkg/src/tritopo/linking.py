"""Triangulated 3-manifolds, mod-2 linking numbers and splitting discs."""

from __future__ import annotations

from itertools import combinations

import random
from collections import defaultdict, deque
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .complex import (
    ChainZ2,
    Simplex,
    SimplicialComplex,
    boundary,
    closure,
    euler_characteristic,
    facet_components,
    faces,
    homology_ranks,
    is_boundary,
    prism_tetrahedra,
    pure_boundary,
)
from .errors import PreconditionError, StructureError
from .surface import (
    SurfaceClass,
    SurfaceComplex,
    classify,
    components as surface_components,
    cycle_order,
    is_simple_circle,
)


class Manifold3:
    """A triangulated compact 3-manifold, possibly with boundary."""

    def __init__(self, K: SimplicialComplex | Iterable[Simplex], *, check: bool = True):
        if not isinstance(K, SimplicialComplex):
            K = SimplicialComplex(K, close=True)
        self.complex = K
        if check:
            self._validate()

    @classmethod
    def from_tets(cls, tets: Iterable[Simplex], labels=None, *, check: bool = True) -> "Manifold3":
        return cls(SimplicialComplex([tuple(sorted(t)) for t in tets], labels, close=True), check=check)

    def _validate(self) -> None:
        K = self.complex
        if K.dim != 3:
            raise StructureError("a 3-manifold complex must have dimension 3")
        covered = closure(K.simplices(3))
        stray = [s for s in K.all_simplices() if s not in covered]
        if stray:
            raise StructureError(f"simplex {min(stray)} is not in any tetrahedron")
        for t, co in K.cofaces.items():
            if len(t) == 3 and len(co) > 2:
                raise StructureError(f"triangle {t} lies in {len(co)} tetrahedra")
        star: dict[int, list[Simplex]] = defaultdict(list)
        for tet in K.simplices(3):
            for v in tet:
                star[v].append(tet)
        for v, tets in star.items():
            lk = [tuple(x for x in t if x != v) for t in tets]
            try:
                s = SurfaceComplex.from_triangles(lk)
                c = classify(s)
            except StructureError as exc:
                raise StructureError(f"link of vertex {v} is not a surface: {exc}") from None
            if not (c.orientable and c.genus == 0 and c.boundary_count <= 1):
                raise StructureError(f"link of vertex {v} is neither a disc nor a sphere")

    @property
    def tets(self) -> frozenset[Simplex]:
        return self.complex.simplices(3)

    @cached_property
    def boundary_triangles(self) -> frozenset[Simplex]:
        return frozenset(pure_boundary(self.tets))

    @cached_property
    def boundary_surface(self) -> SurfaceComplex:
        return SurfaceComplex.from_triangles(self.boundary_triangles)

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(v for t in self.boundary_triangles for v in t)

    @cached_property
    def boundary_edges(self) -> frozenset[Simplex]:
        return frozenset(e for t in self.boundary_triangles for e in faces(t))

    @cached_property
    def ranks(self) -> tuple[int, ...]:
        return homology_ranks(self.complex, 3)

    @cached_property
    def euler(self) -> int:
        return euler_characteristic(self.complex)

    def boundary_classes(self) -> list[SurfaceClass]:
        if not self.boundary_triangles:
            return []
        return sorted(
            (c.classification for c in surface_components(self.boundary_surface)),
            key=lambda c: (c.genus, c.boundary_count, c.euler),
        )

    def is_closed(self) -> bool:
        return not self.boundary_triangles

    def homotopy_disc_evidence(self) -> bool:
        """Connected, H1 = H2 = 0 and boundary a single 2-sphere."""
        r = self.ranks
        bc = self.boundary_classes()
        return (
            r[0] == 1 and r[1] == 0 and r[2] == 0
            and len(bc) == 1 and bc[0].orientable and bc[0].genus == 0 and bc[0].boundary_count == 0
        )

    def homology_sphere_evidence(self) -> bool:
        return self.is_closed() and self.ranks == (1, 0, 0, 1)

    def snapshot(self) -> dict:
        return {
            "euler": self.euler,
            "ranks": self.ranks,
            "boundary": tuple((c.orientable, c.genus, c.boundary_count) for c in self.boundary_classes()),
        }

    def __eq__(self, other) -> bool:
        return isinstance(other, Manifold3) and self.complex.all_simplices() == other.complex.all_simplices()

    def __hash__(self) -> int:
        return hash(self.complex.all_simplices())

    def __repr__(self) -> str:
        return f"Manifold3(f={self.complex.f_vector})"


@dataclass(frozen=True)
class DualCycle:
    """Closed sequence of tetrahedra, consecutive ones sharing ``crossed[i]``."""

    tets: tuple[Simplex, ...]
    crossed: tuple[Simplex, ...]

    def crossings(self, chain: ChainZ2) -> int:
        return sum(1 for t in self.crossed if t in chain.support)


@dataclass(frozen=True)
class SplittingDisc:
    triangles: frozenset[Simplex]
    boundary: ChainZ2

    @classmethod
    def of(cls, triangles: Iterable[Simplex]) -> "SplittingDisc":
        tri = frozenset(tuple(sorted(t)) for t in triangles)
        return cls(tri, boundary(ChainZ2(2, tri)))

    @property
    def chain(self) -> ChainZ2:
        return ChainZ2(2, self.triangles)


def _as_circle(c) -> ChainZ2:
    if isinstance(c, ChainZ2):
        return c
    return ChainZ2.of(c, 1)


def _check_circle(m: Manifold3, c: ChainZ2, name: str) -> None:
    if not is_simple_circle(c):
        raise PreconditionError(f"{name} is not a simple closed edge cycle")
    c.check_in(m.complex)


def to_dual_cycle(m: Manifold3, b: ChainZ2) -> DualCycle:
    """Closed tetrahedron sequence homotopic to ``b`` inside the open star of ``b``."""
    b = _as_circle(b)
    _check_circle(m, b, "b")
    if b.vertices & m.boundary_vertices:
        raise PreconditionError("b touches the boundary of the manifold")
    order = cycle_order(b)
    n = len(order)
    K = m.complex
    edge_tet = []
    for k in range(n):
        e = tuple(sorted((order[k], order[(k + 1) % n])))
        edge_tet.append(min(t for t in K.simplices(3) if set(e) <= set(t)))
    seq: list[Simplex] = []
    for k in range(n):
        v = order[(k + 1) % n]
        path = _star_path(K, v, edge_tet[k], edge_tet[(k + 1) % n])
        seq.extend(path[:-1])
    crossed = []
    for i in range(len(seq)):
        a, c = seq[i], seq[(i + 1) % len(seq)]
        shared = tuple(sorted(set(a) & set(c)))
        crossed.append(shared)
    return DualCycle(tuple(seq), tuple(crossed))


def _star_path(K: SimplicialComplex, v: int, start: Simplex, goal: Simplex) -> list[Simplex]:
    """Shortest path of tetrahedra around ``v`` joined through triangles containing ``v``."""
    if start == goal:
        return [start]
    prev = {start: None}
    q = deque([start])
    while q:
        t = q.popleft()
        for f in faces(t):
            if v not in f:
                continue
            for u in K.cofaces.get(f, ()):
                if u not in prev:
                    prev[u] = t
                    if u == goal:
                        path = [u]
                        while prev[path[-1]] is not None:
                            path.append(prev[path[-1]])
                        return path[::-1]
                    q.append(u)
    raise StructureError(f"star of vertex {v} is not connected through triangles")


def _check_link_inputs(m: Manifold3, a: ChainZ2, b: ChainZ2) -> None:
    _check_circle(m, a, "a")
    _check_circle(m, b, "b")
    if a.vertices & b.vertices:
        raise PreconditionError("a and b are not disjoint")
    r = m.ranks
    if r[0] != 1 or r[1] != 0 or r[2] != 0:
        raise PreconditionError("manifold fails the H1 = H2 = 0 evidence needed for linking numbers")


def spanning_chain(m: Manifold3, a: ChainZ2) -> ChainZ2:
    ok, w = is_boundary(a, m.complex)
    if not ok:
        raise PreconditionError("a is not null-homologous; not a homotopy disc")
    return w


def linking_number(m: Manifold3, a, b) -> int:
    """Parity of crossings between b's dual cycle and a 2-chain bounded by a."""
    a, b = _as_circle(a), _as_circle(b)
    _check_link_inputs(m, a, b)
    dual = to_dual_cycle(m, b)
    return dual.crossings(spanning_chain(m, a)) % 2


def verify_independence(m: Manifold3, a, b, trials: int = 10, seed: int = 0) -> list[int]:
    """Linking parity recomputed with ``trials`` different spanning chains."""
    a, b = _as_circle(a), _as_circle(b)
    _check_link_inputs(m, a, b)
    dual = to_dual_cycle(m, b)
    base = spanning_chain(m, a)
    rng = random.Random(seed)
    tets = m.complex.sorted(3)
    seen = set()
    out = []
    attempts = 0
    while len(out) < trials:
        attempts += 1
        if len(out) == 0:
            d = base
        else:
            W = ChainZ2(3, frozenset(t for t in tets if rng.random() < 0.5))
            d = base + boundary(W) if W else base
            if d.support in seen and attempts < 20 * trials:
                continue
        seen.add(d.support)
        out.append(dual.crossings(d) % 2)
    return out


# --- splitting --------------------------------------------------------------

@dataclass
class SplitResult:
    """Outcome of cutting a manifold along a disc.

    When the disc fails to separate, ``components`` is 1 and ``U``/``V`` are
    None: this is reported rather than raised.
    """

    components: int
    U: Manifold3 | None = None
    V: Manifold3 | None = None
    intersection_is_disc: bool = False
    boundary_spheres: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.components == 2 and self.intersection_is_disc and self.boundary_spheres

    def __iter__(self):
        yield self.U
        yield self.V


def check_splitting_disc(m: Manifold3, d: SplittingDisc) -> None:
    K = m.complex
    for t in d.triangles:
        if t not in K:
            raise PreconditionError(f"disc triangle {t} not in manifold")
    try:
        s = SurfaceComplex.from_triangles(d.triangles)
        c = classify(s)
    except StructureError as exc:
        raise PreconditionError(f"not a disc: {exc}") from None
    if not (c.orientable and c.genus == 0 and c.boundary_count == 1):
        raise PreconditionError("splitting disc is not a disc")
    if not d.boundary.support <= m.boundary_edges:
        raise PreconditionError("boundary of the disc is not in the boundary of the manifold")
    if d.triangles & m.boundary_triangles:
        raise PreconditionError("disc triangle lies in the boundary of the manifold")
    inner_v = s.vertices - s.boundary_vertices
    if inner_v & m.boundary_vertices or s.interior_edges & m.boundary_edges:
        raise PreconditionError("disc interior touches the boundary of the manifold")


def split_along_disc(m: Manifold3, d: SplittingDisc) -> SplitResult:
    check_splitting_disc(m, d)
    comps = facet_components(m.tets, blocked=d.triangles)
    if len(comps) != 2:
        return SplitResult(len(comps), notes=[f"disc leaves {len(comps)} component(s); expected 2"])
    U = Manifold3.from_tets(comps[0])
    V = Manifold3.from_tets(comps[1])
    inter = U.complex.all_simplices() & V.complex.all_simplices()
    disc_closure = closure(d.triangles)
    res = SplitResult(2, U, V)
    res.intersection_is_disc = inter == disc_closure
    res.boundary_spheres = all(
        len(x.boundary_classes()) == 1 and x.boundary_classes()[0].genus == 0
        and x.boundary_classes()[0].boundary_count == 0 and x.boundary_classes()[0].orientable
        for x in (U, V)
    )
    if not res.intersection_is_disc:
        res.notes.append("U and V meet outside the disc")
    if not res.boundary_spheres:
        res.notes.append("a piece is not bounded by a single sphere")
    return res


def boundary_sides(m: Manifold3, c: ChainZ2) -> list[list[Simplex]]:
    return facet_components(m.boundary_triangles, blocked=c.support)


def splitting_disc_for_circle(m: Manifold3, c, side: int | None = None) -> tuple[Manifold3, SplittingDisc]:
    """Push one side of ``c`` in the boundary sphere into the manifold.

    A collar over the chosen side is attached, pinched along ``c``; the old
    copy of the side becomes a properly embedded disc bounded by ``c``.
    Default side: fewer triangles, ties broken lexicographically.
    """
    c = _as_circle(c)
    if not is_simple_circle(c):
        raise PreconditionError("c is not a simple circle")
    if not c.support <= m.boundary_edges:
        raise PreconditionError("c is not in the boundary of the manifold")
    sides = boundary_sides(m, c)
    if len(sides) != 2:
        raise PreconditionError(f"c cuts the boundary into {len(sides)} pieces, expected 2")
    if side is None:
        a, b = sorted(sides, key=lambda s: (len(s), sorted(s)))
        chosen = a
    else:
        chosen = sides[side]
    return collar_over(m, chosen, c)


def collar_over(m: Manifold3, region: Iterable[Simplex], rim: ChainZ2) -> tuple[Manifold3, SplittingDisc]:
    region = sorted(region)
    pinned = rim.vertices
    for t in region:
        if set(t) <= pinned:
            raise PreconditionError(f"triangle {t} has every vertex on the rim; subdivide first")
        for e in combinations(t, 2):
            if set(e) <= pinned and e not in rim.support:
                raise PreconditionError(f"edge {e} joins two rim vertices across the region; subdivide first")
    nxt = max(m.complex.vertices) + 1
    top: dict[int, int] = {}
    for v in sorted({v for t in region for v in t}):
        if v in pinned:
            top[v] = v
        else:
            top[v] = nxt
            nxt += 1
    new_tets = list(m.tets)
    for t in region:
        new_tets.extend(prism_tetrahedra(list(t), [top[v] for v in t]))
    labels = {k: v for k, v in m.complex.labels.items()}
    labels["collar_disc"] = list(region)
    M2 = Manifold3.from_tets(new_tets, labels)
    return M2, SplittingDisc.of(region)


def interior_circles(m: Manifold3, count: int, rng: random.Random, length_range=(3, 8), avoid: set[int] = frozenset()) -> list[ChainZ2]:
    """Random simple edge cycles through interior vertices only."""
    inner = sorted(m.complex.vertices - m.boundary_vertices - set(avoid))
    adj: dict[int, set[int]] = defaultdict(set)
    inner_set = set(inner)
    for a, b in m.complex.simplices(1):
        if a in inner_set and b in inner_set:
            adj[a].add(b)
            adj[b].add(a)
    out = []
    tries = 0
    while inner and len(out) < count and tries < 200 * count:
        tries += 1
        v = rng.choice(inner)
        cyc = _random_cycle(adj, v, rng, length_range[1])
        if cyc and length_range[0] <= len(cyc) <= length_range[1]:
            from .surface import circle_from_vertices
            out.append(circle_from_vertices(cyc))
    return out


def _random_cycle(adj, start, rng, maxlen):
    """Random walk until it closes; the closing loop is returned."""
    path = [start]
    pos = {start: 0}
    for _ in range(4 * maxlen):
        nbrs = [w for w in adj[path[-1]] if len(path) < 2 or w != path[-2]]
        if not nbrs:
            return None
        w = rng.choice(sorted(nbrs))
        if w in pos:
            loop = path[pos[w]:]
            return loop if len(loop) >= 3 else None
        pos[w] = len(path)
        path.append(w)
    return None
