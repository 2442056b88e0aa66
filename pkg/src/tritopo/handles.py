"""Canonical chart geometry and combinatorial handle assembly.

Geometry: around a critical point of index n the function is the quadric
psi(x) = sum eps_i x_i^2 and its gradient flow is linear, so trajectories
have a closed form.  The chart boundary sphere is meshed piece by piece:
two bays on the sheet psi = -1, two rings swept by flow lines from the bay
rims to the cylinder psi = 1, and the cloak band on that cylinder.

Assembly: a handle specification lists level events on a triangulated
sphere; each event becomes a product stratum and the chart spheres appear
as labelled pieces of the boundary of the complement.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complex import ChainZ2, Simplex, SimplicialComplex, boundary, closure, faces
from .errors import PreconditionError, StructureError
from .linking import Manifold3
from .strata import Stratification, Stratum, validate
from .surface import (
    SurfaceComplex,
    boundary_circles,
    classify,
    cycle_order,
)

# --- quadric and flow -------------------------------------------------------


def epsilon_signs(n: int) -> tuple[int, int, int]:
    if n not in (0, 1, 2, 3):
        raise PreconditionError(f"critical point index must be 0..3, got {n}")
    return tuple(1 if i <= 3 - n else -1 for i in (1, 2, 3))


def psi(x, n: int) -> float | np.ndarray:
    e = np.asarray(epsilon_signs(n), dtype=float)
    x = np.asarray(x, dtype=float)
    return np.sum(e * x * x, axis=-1)


def grad_psi(x, n: int) -> np.ndarray:
    e = np.asarray(epsilon_signs(n), dtype=float)
    return 2.0 * e * np.asarray(x, dtype=float)


def flow(x0, t: float, n: int) -> np.ndarray:
    """Closed-form solution of y' = grad psi(y): x_i(t) = x_i(0) exp(2 eps_i t)."""
    e = np.asarray(epsilon_signs(n), dtype=float)
    return np.asarray(x0, dtype=float) * np.exp(2.0 * e * t)


def landing_time(n: int = 1) -> float:
    """Time for the flow from the bay rim (r = sqrt 3, |z| = 2) to reach psi = 1."""
    u = ring_landing_exact()["e4t"]
    return math.log(u.numerator / u.denominator) / 4.0


def ring_landing_exact() -> dict[str, Fraction]:
    """Exact landing data for the index-1 ring.

    Along the flow r^2 = 3u and z^2 = 4/u with u = exp(4t); landing on
    psi = 1 means 3u - 4/u = 1, i.e. 3u^2 - u - 4 = 0, whose positive root is
    rational because the discriminant 49 is a square.
    """
    a, b, c = 3, -1, -4
    disc = b * b - 4 * a * c
    root = math.isqrt(disc)
    if root * root != disc:
        raise ArithmeticError("landing equation has an irrational root")
    u = Fraction(-b + root, 2 * a)
    return {"e4t": u, "r2": 3 * u, "z2": Fraction(4) / u, "psi": 3 * u - Fraction(4) / u}


@dataclass(frozen=True)
class MorseData:
    """Critical points ``(index, value, radius)`` in climbing order."""

    points: tuple[tuple[int, float, float], ...]

    def __post_init__(self):
        for idx, _, rad in self.points:
            if idx not in (0, 1, 2, 3):
                raise PreconditionError(f"bad critical index {idx}")
            if rad <= 0:
                raise PreconditionError("chart radius must be positive")
        vals = [p[1] for p in self.points]
        if any(a >= b for a, b in zip(vals, vals[1:])):
            raise PreconditionError("critical values must strictly climb")
        for (_, v0, d0), (_, v1, d1) in zip(self.points, self.points[1:]):
            if not v0 + d0 < v1 - d1:
                raise PreconditionError("chart value intervals overlap")

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(p[0] for p in self.points)

    @classmethod
    def evenly(cls, indices: Sequence[int], radius: float = 0.25) -> "MorseData":
        return cls(tuple((n, float(i), radius) for i, n in enumerate(indices)))


# --- chart meshes -------------------------------------------------------------

@dataclass
class ChartMesh:
    n: int
    surface: SurfaceComplex
    coords: np.ndarray
    resolution: tuple[int, int]
    exact: dict = field(default_factory=dict)

    PIECES = ("H+", "H-", "R+", "R-", "Q")

    def piece(self, name: str) -> frozenset[Simplex]:
        return self.surface.label(name).simplices(2)


def _band(a: Sequence[int], b: Sequence[int]) -> list[Simplex]:
    n = len(a)
    out = []
    for i in range(n):
        j = (i + 1) % n
        out.append(tuple(sorted((a[i], a[j], b[i]))))
        out.append(tuple(sorted((a[j], b[j], b[i]))))
    return out


def _fan_cap(ring: Sequence[int], apex: int) -> list[Simplex]:
    n = len(ring)
    return [tuple(sorted((ring[i], ring[(i + 1) % n], apex))) for i in range(n)]


def _parse_resolution(resolution) -> tuple[int, int]:
    if isinstance(resolution, str):
        try:
            a, b = resolution.lower().split("x")
            resolution = (int(a), int(b))
        except ValueError:
            raise PreconditionError(f"resolution must look like 24x8, got {resolution!r}") from None
    around, along = resolution
    if around < 3 or along < 1:
        raise StructureError(f"degenerate mesh resolution {around}x{along}: need >= 3 around and >= 1 along")
    return int(around), int(along)


def chart_boundary_mesh(n: int, resolution=(24, 8)) -> ChartMesh:
    """Triangulated boundary sphere of the canonical chart of index 1 or 2.

    Circles of ``around`` vertices are stacked from the upper bay apex to the
    lower one; each piece gets ``along`` bands (the cloak gets twice that).
    For index 2 the index-1 mesh is rotated a quarter turn about the y axis.
    """
    if n not in (1, 2):
        raise PreconditionError("chart_boundary_mesh needs index 1 or 2")
    m, k = _parse_resolution(resolution)
    theta = 2 * np.pi * np.arange(m) / m
    cs, sn = np.cos(theta), np.sin(theta)
    t_land = landing_time()
    coords: list[np.ndarray] = []

    def add_circle(r: float, z: float) -> list[int]:
        start = len(coords)
        for c, s in zip(cs, sn):
            coords.append(np.array([r * c, r * s, z]))
        return list(range(start, start + m))

    def add_flow_circle(t: float, sign: int) -> list[int]:
        start = len(coords)
        for c, s in zip(cs, sn):
            coords.append(flow(np.array([math.sqrt(3) * c, math.sqrt(3) * s, 2.0 * sign]), t, 1))
        return list(range(start, start + m))

    top_apex = len(coords)
    coords.append(np.array([0.0, 0.0, 1.0]))
    # circles from north to south; each entry names the piece of the band below it
    seq: list[tuple[list[int], str]] = []
    for j in range(1, k + 1):  # upper bay on z = sqrt(1 + r^2), rim r = sqrt 3
        r = math.sqrt(3) * j / k
        seq.append((add_circle(r, math.sqrt(1 + r * r)), "H+" if j < k else "R+"))
    for j in range(1, k + 1):  # upper ring, swept by the flow up to psi = 1
        seq.append((add_flow_circle(t_land * j / k, 1), "R+" if j < k else "Q"))
    for j in range(1, 2 * k):  # cloak on the cylinder psi = 1
        z = math.sqrt(3) * (1 - j / k)
        seq.append((add_circle(math.sqrt(1 + z * z), z), "Q"))
    for j in range(k, -1, -1):  # lower ring, from its landing circle back to the rim
        seq.append((add_flow_circle(t_land * j / k, -1), "R-" if j > 0 else "H-"))
    for j in range(k - 1, 0, -1):
        r = math.sqrt(3) * j / k
        seq.append((add_circle(r, -math.sqrt(1 + r * r)), "H-"))
    bot_apex = len(coords)
    coords.append(np.array([0.0, 0.0, -1.0]))

    pieces: dict[str, list[Simplex]] = {p: [] for p in ChartMesh.PIECES}
    pieces["H+"] += _fan_cap(seq[0][0], top_apex)
    for (ring, piece), (nxt, _) in zip(seq, seq[1:]):
        pieces[piece] += _band(ring, nxt)
    pieces["H-"] += _fan_cap(seq[-1][0], bot_apex)
    rings = [r for r, _ in seq]
    tris = [t for p in ChartMesh.PIECES for t in pieces[p]]
    s = SurfaceComplex.from_triangles(tris, {p: pieces[p] for p in ChartMesh.PIECES})
    X = np.array(coords)
    if n == 2:
        X = np.stack([X[:, 2], X[:, 1], -X[:, 0]], axis=1)
    ex = ring_landing_exact()
    exact = {
        "rim_r2": Fraction(3), "rim_z": Fraction(2),
        "landing_r2": ex["r2"], "landing_z2": ex["z2"], "landing_psi": ex["psi"],
        "landing_circle_plus": rings[2 * k - 1], "landing_circle_minus": rings[4 * k - 1],
        "rim_plus": rings[k - 1], "rim_minus": rings[5 * k - 1],
    }
    return ChartMesh(n, s, X, (m, k), exact)


def chart_disc_mesh(n: int, resolution: int = 0) -> ChartMesh:
    """Round sphere bounding the standard 3-disc chart of index 0 or 3."""
    if n not in (0, 3):
        raise PreconditionError("chart_disc_mesh needs index 0 or 3")
    if resolution < 0:
        raise StructureError("resolution must be non-negative")
    X = [np.array(p, dtype=float) for p in ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))]
    tris = [(x, y, z) for x in (0, 1) for y in (2, 3) for z in (4, 5)]
    for _ in range(resolution):
        mid: dict[Simplex, int] = {}

        def m(a: int, b: int) -> int:
            e = (min(a, b), max(a, b))
            if e not in mid:
                mid[e] = len(X)
                p = X[a] + X[b]
                X.append(p / np.linalg.norm(p))
            return mid[e]

        new = []
        for a, b, c in tris:
            ab, bc, ca = m(a, b), m(b, c), m(c, a)
            new += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
        tris = new
    s = SurfaceComplex.from_triangles([tuple(sorted(t)) for t in tris])
    return ChartMesh(n, s, np.array(X), (resolution, 0))


@dataclass
class PiecesReport:
    classification: tuple
    partition: bool
    intersections: dict[tuple[str, str], str]

    @property
    def ok(self) -> bool:
        c = self.classification
        return (
            c == (True, 0, 0, 2)
            and self.partition
            and all(v in ("empty", "circle") for v in self.intersections.values())
        )


def pieces_report(mesh: ChartMesh) -> PiecesReport:
    s = mesh.surface
    c = classify(s)
    names = ChartMesh.PIECES
    pieces = {p: mesh.piece(p) for p in names}
    union = frozenset().union(*pieces.values())
    total = sum(len(v) for v in pieces.values())
    partition = union == s.simplices(2) and total == len(union)
    inter = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            common = closure(pieces[a]) & closure(pieces[b])
            if not common:
                inter[(a, b)] = "empty"
                continue
            edges = ChainZ2(1, frozenset(e for e in common if len(e) == 2))
            verts = {v for e in edges.support for v in e}
            loose = {e[0] for e in common if len(e) == 1} - verts
            from .surface import is_simple_circle
            inter[(a, b)] = "circle" if edges and not loose and is_simple_circle(edges) else "other"
    return PiecesReport((c.orientable, c.genus, c.boundary_count, c.euler), partition, inter)


# --- handle specifications --------------------------------------------------

@dataclass(frozen=True)
class HandleEvent:
    """One level event: ``product``, ``handle`` (index 1 or 2) or ``close``.

    Regions are triangle sets in the local ids of the current level surface:
    two disjoint bay discs for index 1, one cloak annulus for index 2.
    ``pairing`` names one rim edge of each bay; the cloak band is built so
    that these two edges bound a common strip of the band.
    """

    kind: str
    index: int | None = None
    regions: tuple[frozenset[Simplex], ...] = ()
    pairing: tuple[Simplex, Simplex] | None = None

    def __post_init__(self):
        if self.kind not in ("product", "handle", "close"):
            raise PreconditionError(f"unknown event kind {self.kind!r}")
        if self.kind == "handle":
            if self.index not in (1, 2):
                raise PreconditionError("handle events have index 1 or 2")
            need = 2 if self.index == 1 else 1
            if len(self.regions) != need:
                raise PreconditionError(f"index-{self.index} event needs {need} attaching region(s)")


@dataclass(frozen=True)
class HandleSpec:
    initial: SurfaceComplex
    events: tuple[HandleEvent, ...]

    @property
    def indices(self) -> tuple[int, ...]:
        out = [0]
        for e in self.events:
            if e.kind == "handle":
                out.append(e.index)
            elif e.kind == "close":
                out.append(3)
        return tuple(out)

    def morse(self, radius: float = 0.25) -> MorseData:
        return MorseData.evenly(self.indices, radius)

    @classmethod
    def standard(cls, indices: Sequence[int], initial: SurfaceComplex | None = None) -> "HandleSpec":
        """Spec for ``(0, 3)`` or ``(0, 1, 2, ..., 3)`` with cancelling 1/2 pairs."""
        from .corpus import cylinder_sphere

        idx = tuple(indices)
        if len(idx) < 2 or idx[0] != 0 or idx[-1] != 3:
            raise PreconditionError("standard specs start with index 0 and end with index 3")
        mid = idx[1:-1]
        if len(mid) % 2 or any(mid[i:i + 2] != (1, 2) for i in range(0, len(mid), 2)):
            raise PreconditionError("standard specs use consecutive cancelling (1, 2) pairs")
        F0 = initial if initial is not None else SurfaceComplex(cylinder_sphere(8, 6).all_simplices())
        F = F0
        events: list[HandleEvent] = []
        for _ in range(len(mid) // 2):
            e1, e2, F = plan_cancelling_pair(F)
            events += [e1, e2]
        events.append(HandleEvent("close"))
        return cls(F0, tuple(events))


def _is_disc(tris: Iterable[Simplex]) -> bool:
    try:
        c = classify(SurfaceComplex.from_triangles(tris))
    except StructureError:
        return False
    return c.orientable and c.genus == 0 and c.boundary_count == 1


def _is_annulus(tris: Iterable[Simplex]) -> bool:
    try:
        c = classify(SurfaceComplex.from_triangles(tris))
    except StructureError:
        return False
    return c.orientable and c.genus == 0 and c.boundary_count == 2


def _rim(tris: Iterable[Simplex]) -> ChainZ2:
    return boundary(ChainZ2(2, frozenset(tris)))


def _next_local(F: SurfaceComplex) -> int:
    return max(F.vertices) + 1


def _rotate_to_edge(cyc: list[int], edge: Simplex) -> list[int]:
    n = len(cyc)
    for i in range(n):
        if {cyc[i], cyc[(i + 1) % n]} == set(edge):
            return cyc[i:] + cyc[:i]
    raise PreconditionError(f"edge {edge} is not on the rim")


def apply_event(F: SurfaceComplex, ev: HandleEvent) -> tuple[SurfaceComplex, dict]:
    """Level surface after an event, in local ids, with the pieces it used."""
    tris = F.simplices(2)
    if ev.kind == "product":
        return F, {}
    if ev.kind == "close":
        c = classify(F)
        if not (c.orientable and c.genus == 0 and c.boundary_count == 0):
            raise StructureError("closing event needs the level surface to be a sphere")
        return F, {}
    for r in ev.regions:
        if not r <= tris:
            raise StructureError("attaching region is not in the current level surface")
    if ev.index == 1:
        A, B = (frozenset(r) for r in ev.regions)
        if not (_is_disc(A) and _is_disc(B)):
            raise StructureError("index-1 bays must be discs")
        va = {v for t in A for v in t}
        vb = {v for t in B for v in t}
        if va & vb:
            raise StructureError("index-1 attaching discs overlap")
        rest = tris - A - B
        a = cycle_order(_rim(A))
        b = cycle_order(_rim(B))
        if len(a) != len(b):
            raise StructureError("bay rims must have the same length")
        if ev.pairing is not None:
            a = _rotate_to_edge(a, ev.pairing[0])
            b = _rotate_to_edge(b, ev.pairing[1])
            options = [b, [b[1], b[0]] + b[:1:-1]]
        else:
            k = b.index(min(b))
            b = b[k:] + b[:k]
            options = [b, b[:1] + b[:0:-1]]
        nxt = _next_local(F)
        mid = list(range(nxt, nxt + len(a)))
        for bb in options:
            Q = _band(a, mid) + _band(mid, bb)
            try:
                Fn = SurfaceComplex.from_triangles(list(rest) + Q)
                if classify(Fn).orientable:
                    return Fn, {"A": A, "B": B, "Q": frozenset(Q), "a": a, "b": bb, "mid": mid, "rest": rest}
            except StructureError:
                continue
        raise StructureError("no orientable way to attach the cloak band")
    (Q,) = (frozenset(r) for r in ev.regions)
    if not _is_annulus(Q):
        raise StructureError("index-2 attaching region must be an annulus")
    rest = tris - Q
    rims = sorted(boundary_circles(SurfaceComplex.from_triangles(Q)), key=lambda c: min(c.support))
    nxt = _next_local(F)
    caps = []
    for i, r in enumerate(rims):
        caps.append(frozenset(_fan_cap(cycle_order(r), nxt + i)))
    Fn = SurfaceComplex.from_triangles(list(rest) + [t for c in caps for t in c])
    return Fn, {"Q": Q, "caps": tuple(caps), "rims": tuple(rims), "rest": rest}


def _vertex_distances(F: SurfaceComplex, sources: set[int]) -> dict[int, int]:
    adj: dict[int, set[int]] = {v: set() for v in F.vertices}
    for a, b in F.simplices(1):
        adj[a].add(b)
        adj[b].add(a)
    dist = {v: 0 for v in sources}
    frontier = sorted(sources)
    while frontier:
        nxt = []
        for v in frontier:
            for w in sorted(adj[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def _dual_path(allowed: set[Simplex], starts: list[Simplex], goals: set[Simplex]) -> list[Simplex] | None:
    by_edge: dict[Simplex, list[Simplex]] = {}
    for t in allowed | set(starts) | goals:
        for e in faces(t):
            by_edge.setdefault(e, []).append(t)
    prev = {s: None for s in starts}
    frontier = list(starts)
    while frontier:
        nxt = []
        for t in frontier:
            if t in goals and prev[t] is not None:
                path = [t]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            for e in faces(t):
                for u in sorted(by_edge.get(e, ())):
                    if u in prev or (u not in allowed and u not in goals):
                        continue
                    prev[u] = t
                    nxt.append(u)
        frontier = sorted(nxt)
    return None


def plan_cancelling_pair(F: SurfaceComplex) -> tuple[HandleEvent, HandleEvent, SurfaceComplex]:
    """Index-1 and index-2 events whose handles cancel, chosen on a sphere F.

    The bays are two far-apart triangles.  The index-2 annulus runs once
    through the cloak band and back along a strip of triangles joining the
    two bay rims, so its core crosses the belt of the 1-handle once.
    """
    tris = sorted(F.simplices(2))
    for _, A, B in sorted(_bay_candidates(F, tris))[:50]:
        out = _try_pair(F, A, B)
        if out is not None:
            return out
    raise StructureError("could not find a cancelling 1/2 handle pair on this surface")


def _bay_candidates(F: SurfaceComplex, tris: list[Simplex]):
    for A in tris:
        dist = _vertex_distances(F, set(A))
        for B in tris:
            if B <= A:
                continue
            d = min(dist[v] for v in B)
            if d >= 2:
                yield (-d, A, B)


def _try_pair(F: SurfaceComplex, A: Simplex, B: Simplex):
    rimv = set(A) | set(B)
    rest = set(F.simplices(2)) - {A, B}
    starts = sorted(t for t in rest if len(set(t) & set(A)) == 2 and not set(t) & set(B))
    goals = {t for t in rest if len(set(t) & set(B)) == 2 and not set(t) & set(A)}
    for s, g in ((s, g) for s in starts for g in sorted(goals)):
        e_a = tuple(sorted(set(s) & set(A)))
        e_b = tuple(sorted(set(g) & set(B)))
        allowed = {t for t in rest if set(t) & rimv <= set(e_a) | set(e_b)}
        path = _dual_path(allowed, [s], {g})
        if path is None or len(path) < 3:
            continue
        strip = frozenset(path)
        touch = {v for t in strip for v in t} & rimv
        clear = [t for t in strip if not set(t) & rimv]
        if touch != set(e_a) | set(e_b) or not clear or not _is_disc(strip):
            continue
        e1 = HandleEvent("handle", 1, (frozenset([A]), frozenset([B])), (e_a, e_b))
        F1, info = apply_event(F, e1)
        a, mid, b = info["a"], info["mid"], info["b"]
        ladder = _band(a[:2], mid[:2])[:2] + _band(mid[:2], b[:2])[:2]
        Q2 = strip | frozenset(ladder)
        if not _is_annulus(Q2) or not _is_annulus(F1.simplices(2) - Q2):
            continue
        e2 = HandleEvent("handle", 2, (Q2,))
        F2, _ = apply_event(F1, e2)
        c = classify(F2)
        if c.orientable and c.genus == 0 and c.boundary_count == 0:
            return e1, e2, F2
    return None


# --- assembly -------------------------------------------------------------

@dataclass
class ChartSphere:
    """Boundary sphere of one chart, as pieces of the complement's boundary."""

    number: int
    index: int
    pieces: dict[str, frozenset[Simplex]]

    @property
    def triangles(self) -> frozenset[Simplex]:
        return frozenset().union(*self.pieces.values())


@dataclass
class Assembly:
    spec: HandleSpec
    N: Manifold3
    stratification: Stratification
    charts: list[ChartSphere]
    levels: list[SurfaceComplex]

    def closed_up(self, outer: Iterable[Simplex] | None = None) -> tuple[Manifold3, dict[str, frozenset[Simplex]]]:
        """Fill every chart sphere with a ball.

        Charts are filled with cones on fresh apexes; if ``outer`` is given it
        replaces the cone of chart 0 (its boundary must be chart 0's sphere).
        """
        tets = set(self.N.tets)
        nxt = max(self.N.complex.vertices) + 1
        if outer is not None:
            nxt = max(nxt, max(v for t in outer for v in t) + 1)
        balls: dict[str, frozenset[Simplex]] = {}
        for ch in self.charts:
            if ch.number == 0 and outer is not None:
                ball = frozenset(tuple(sorted(t)) for t in outer)
            else:
                ball = frozenset(tuple(sorted(t + (nxt,))) for t in ch.triangles)
                nxt += 1
            balls[f"U{ch.number}"] = ball
            tets |= ball
        labels = {k: list(v) for k, v in balls.items()}
        return Manifold3.from_tets(tets, labels), balls


def _walls(edges: Iterable[Simplex], lo: dict[int, int], up: dict[int, int]) -> frozenset[Simplex]:
    from .strata import staircase

    out = set()
    for e in edges:
        out.update(staircase([lo[v] for v in e], [up[v] for v in e]))
    return frozenset(tuple(sorted(t)) for t in out)


def _image(tris: Iterable[Simplex], m: dict[int, int]) -> frozenset[Simplex]:
    return frozenset(tuple(sorted(m[v] for v in t)) for t in tris)


def assemble_stratified_complement(spec: HandleSpec, start: int | None = None) -> Assembly:
    """Complement of the chart balls as a stack of product strata.

    Level 0 keeps the ids of ``spec.initial``; fresh global ids start at
    ``start`` (default: one past the largest initial id).  A product stratum
    follows the opening sphere and every handle event, so chart spheres
    never share a level.
    """
    F = spec.initial
    c0 = classify(F)
    if not (c0.orientable and c0.genus == 0 and c0.boundary_count == 0):
        raise StructureError("the opening level surface must be a sphere")
    counter = [max(F.vertices) + 1 if start is None else start]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    G = {v: v for v in sorted(F.vertices)}
    strata: list[Stratum] = []
    levels = [F]
    charts = [ChartSphere(0, 0, {"sphere": _image(F.simplices(2), G)})]

    def product(F, G):
        up = {v: fresh() for v in sorted(F.vertices)}
        strata.append(Stratum.of(F, G, up, f"S{len(strata) + 1}"))
        return up

    G = product(F, G)
    closed = False
    for ev in spec.events:
        if closed:
            raise StructureError("events after the closing event")
        if ev.kind == "product":
            G = product(F, G)
            continue
        Fn, info = apply_event(F, ev)
        if ev.kind == "close":
            charts.append(ChartSphere(len(charts), 3, {"sphere": _image(F.simplices(2), G)}))
            closed = True
            continue
        rest = SurfaceComplex.from_triangles(info["rest"])
        up = {v: fresh() for v in sorted(rest.vertices)}
        strata.append(Stratum.of(rest, {v: G[v] for v in rest.vertices}, up, f"S{len(strata) + 1}"))
        newG = {v: up[v] if v in up else fresh() for v in sorted(Fn.vertices)}
        if ev.index == 1:
            rim_a = _rim(info["A"]).support
            rim_b = _rim(info["B"]).support
            pieces = {
                "H+": _image(info["A"], G),
                "H-": _image(info["B"], G),
                "R+": _walls(rim_a, G, up),
                "R-": _walls(rim_b, G, up),
                "Q": _image(info["Q"], newG),
            }
        else:
            rims = info["rims"]
            pieces = {
                "Q": _image(info["Q"], G),
                "R+": _walls(rims[0].support, G, up),
                "R-": _walls(rims[1].support, G, up),
                "H+": _image(info["caps"][0], newG),
                "H-": _image(info["caps"][1], newG),
            }
        charts.append(ChartSphere(len(charts), ev.index, pieces))
        F, G = Fn, newG
        levels.append(F)
        G = product(F, G)
    if not closed:
        raise StructureError("handle spec must end with a closing event")
    st = Stratification(tuple(strata))
    N = Manifold3(st.union)
    return Assembly(spec, N, st, charts, levels)


def assembly_report(a: Assembly) -> dict[str, object]:
    """Checks on an assembly: strata validate, chart spheres are spheres and tile the boundary."""
    rep = validate(a.stratification)
    spheres_ok = []
    for ch in a.charts:
        try:
            c = classify(SurfaceComplex.from_triangles(ch.triangles))
            spheres_ok.append(c.orientable and c.genus == 0 and c.boundary_count == 0)
        except StructureError:
            spheres_ok.append(False)
    tiles = frozenset().union(*(ch.triangles for ch in a.charts)) == a.N.boundary_triangles
    disjoint = sum(len(ch.triangles) for ch in a.charts) == len(a.N.boundary_triangles)
    return {
        "strata_valid": rep.ok,
        "violations": [str(v) for v in rep.violations],
        "chart_spheres": spheres_ok,
        "boundary_tiled": tiles and disjoint,
        "boundary_components": len(a.N.boundary_classes()),
        "euler": a.N.euler,
        "ranks": a.N.ranks,
    }
