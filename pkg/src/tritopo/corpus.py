"""Named example complexes with their expected invariants."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .complex import (
    SimplicialComplex,
    barycentric_subdivision,
    closure,
    faces,
    prism_to_simplicial,
    PrismComplex,
    Prism,
    stellar_subdivide,
)
from .surface import SurfaceComplex, boundary_circles, circle_from_vertices


def simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex([tuple(range(n + 1))], close=True)


def boundary_simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex(faces(tuple(range(n + 1))), close=True)


def torus7() -> SurfaceComplex:
    """Möbius' minimal 7-vertex torus."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return SurfaceComplex.from_triangles(tris)


def octahedron() -> SurfaceComplex:
    """Boundary of the octahedron: vertices 0/1 = +-x, 2/3 = +-y, 4/5 = +-z."""
    tris = [(x, y, z) for x in (0, 1) for y in (2, 3) for z in (4, 5)]
    return SurfaceComplex.from_triangles(tris, {"equator": [(0, 2), (2, 1), (1, 3), (3, 0)]})


def octahedral_ball() -> SimplicialComplex:
    """Cone from vertex 6 over the octahedron; the equatorial disc is labelled."""
    tets = [tuple(sorted(t + (6,))) for t in octahedron().simplices(2)]
    eq = [(0, 2, 6), (1, 2, 6), (1, 3, 6), (0, 3, 6)]
    return SimplicialComplex(tets, {"equator_disc": eq, "equator": [(0, 2), (1, 2), (1, 3), (0, 3)]}, close=True)


def join_triangles_s3() -> SimplicialComplex:
    """Join of two triangle boundaries: a 6-vertex 3-sphere with Hopf-linked cores."""
    a_edges = [(0, 1), (1, 2), (0, 2)]
    b_edges = [(3, 4), (4, 5), (3, 5)]
    tets = [tuple(sorted(a + b)) for a in a_edges for b in b_edges]
    return SimplicialComplex(tets, {"coreA": a_edges, "coreB": b_edges}, close=True)


def hopf_ball() -> SimplicialComplex:
    """The join 3-sphere with a small tetrahedron deep inside one cell removed.

    Four nested stellar subdivisions produce a tetrahedron with no original
    vertex; removing it leaves a 3-ball in which both Hopf cores are interior.
    """
    K = join_triangles_s3()
    t = (0, 1, 3, 4)
    fresh = []
    for k in range(4):
        v = 6 + k
        K = stellar_subdivide(K, t, v)
        fresh.append(v)
        t = min(x for x in K.simplices(3) if set(fresh) <= set(x))
    tets = [x for x in K.simplices(3) if x != t]
    return SimplicialComplex(tets, {"coreA": K.labels["coreA"], "coreB": K.labels["coreB"]}, close=True)


def subdivided_ball(K: SimplicialComplex) -> SimplicialComplex:
    """Barycentric subdivision of a closed 3-manifold minus one tetrahedron."""
    sd, _ = barycentric_subdivision(K)
    tets = sd.sorted(3)[1:]
    return SimplicialComplex(tets, close=True)


def subdivided_hopf_ball() -> SimplicialComplex:
    """Barycentric subdivision of the Hopf ball, cores still labelled."""
    return barycentric_subdivision(hopf_ball())[0]


def disc(n: int, offset: int = 0) -> SurfaceComplex:
    """Cone over an n-cycle; apex is ``offset + n``."""
    ring = [offset + i for i in range(n)]
    return SurfaceComplex.from_triangles([(ring[i], ring[(i + 1) % n], offset + n) for i in range(n)])


def annulus(n: int = 4, offset: int = 0) -> SurfaceComplex:
    a = [offset + i for i in range(n)]
    b = [offset + n + i for i in range(n)]
    tris = []
    for i in range(n):
        j = (i + 1) % n
        tris.append((a[i], a[j], b[i]))
        tris.append((a[j], b[j], b[i]))
    return SurfaceComplex.from_triangles(tris)


def grid_surface(nu: int, nv: int, wrap_u: bool, wrap_v: bool, offset: int = 0) -> SurfaceComplex:
    """Triangulated grid; wrapping in u and/or v gives cylinders and tori."""
    def vid(i, j):
        return offset + (i % nu) * nv + (j % nv)

    tris = []
    for i in range(nu if wrap_u else nu - 1):
        for j in range(nv if wrap_v else nv - 1):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            tris.append((a, b, c))
            tris.append((a, c, d))
    return SurfaceComplex.from_triangles(tris)


def cylinder_sphere(around: int = 8, rows: int = 6) -> SurfaceComplex:
    """A sphere built as a capped cylinder, poles labelled ``north``/``south``."""
    def vid(r, i):
        return r * around + (i % around)

    tris = []
    for r in range(rows - 1):
        for i in range(around):
            a, b, c, d = vid(r, i), vid(r, i + 1), vid(r + 1, i + 1), vid(r + 1, i)
            tris.append((a, b, c))
            tris.append((a, c, d))
    south, north = rows * around, rows * around + 1
    for i in range(around):
        tris.append((vid(0, i), vid(0, i + 1), south))
        tris.append((vid(rows - 1, i), vid(rows - 1, i + 1), north))
    return SurfaceComplex.from_triangles(tris, {"south": [(south,)], "north": [(north,)]})


def _strip(a: list[int], b: list[int]) -> list[tuple]:
    n = len(a)
    out = []
    for i in range(n):
        j = (i + 1) % n
        out.append((a[i], a[j], b[i]))
        out.append((a[j], b[j], b[i]))
    return out


def connected_sum(s1: SurfaceComplex, s2: SurfaceComplex) -> SurfaceComplex:
    """Remove a triangle from each surface and join the holes with a tube."""
    shift = max(s1.vertices) + 1
    t1 = max(s1.simplices(2))
    t2 = max(s2.simplices(2))
    tris = [t for t in s1.simplices(2) if t != t1]
    tris += [tuple(v + shift for v in t) for t in s2.simplices(2) if t != t2]
    nxt = shift + max(s2.vertices) + 1
    mid = [nxt, nxt + 1, nxt + 2]
    a = list(t1)
    b = [v + shift for v in t2]
    tris += _strip(a, mid) + _strip(mid, b)
    return SurfaceComplex.from_triangles(tris)


def genus_surface(g: int) -> SurfaceComplex:
    if g == 0:
        return SurfaceComplex.from_triangles(boundary_simplex(3).simplices(2))
    s = torus7()
    for _ in range(g - 1):
        s = connected_sum(s, torus7())
    return s


def punctured(s: SurfaceComplex, count: int, seed: int = 0) -> SurfaceComplex:
    """Remove the open stars of ``count`` pairwise far-apart interior vertices."""
    rng = random.Random(seed)
    verts = sorted(s.vertices - s.boundary_vertices)
    rng.shuffle(verts)
    adj = {v: set() for v in s.vertices}
    for a, b in s.simplices(1):
        adj[a].add(b)
        adj[b].add(a)
    chosen: list[int] = []
    blocked: set[int] = set(s.boundary_vertices)
    for v in verts:
        if len(chosen) == count:
            break
        if v in blocked:
            continue
        chosen.append(v)
        ring = {v} | adj[v]
        for w in list(ring):
            blocked |= adj[w] | {w}
    if len(chosen) < count:
        raise ValueError("surface too small for the requested punctures")
    tris = [t for t in s.simplices(2) if not set(t) & set(chosen)]
    return SurfaceComplex.from_triangles(tris)


def pants() -> SurfaceComplex:
    sphere = SurfaceComplex(barycentric_subdivision(barycentric_subdivision(octahedron())[0])[0].all_simplices())
    return punctured(sphere, 3, seed=1)


def prism_slab(nu: int = 3, nv: int = 3) -> SimplicialComplex:
    """A square grid times an interval, as a triangulated 3-ball."""
    base = grid_surface(nu, nv, False, False)
    n = nu * nv
    cells = [Prism(tuple(t), tuple(v + n for v in t), ("slab", t)) for t in sorted(base.simplices(2))]
    return prism_to_simplicial(PrismComplex(tuple(cells)))


def cube_ball() -> SimplicialComplex:
    """Unit cube as two square prisms side by side; the middle square is labelled."""
    # bottom layer 0..5 (2x3 grid), top layer 6..11
    sq1 = (0, 1, 4, 3)
    sq2 = (1, 2, 5, 4)
    cells = tuple(Prism(s, tuple(v + 6 for v in s), ("cube", i)) for i, s in enumerate((sq1, sq2)))
    K = prism_to_simplicial(PrismComplex(cells))
    mid = [t for t in K.simplices(2) if set(t) <= {1, 4, 7, 10}]
    return K.with_labels({"mid_disc": mid})


def square_patch(size: int, keep) -> SurfaceComplex:
    """Triangles of the (size x size)-cell grid whose cell (i, j) satisfies ``keep``.

    Vertex ids are shared by every patch of the same ``size``, so patches
    can be stacked into stratifications glued along their overlap.
    """
    def vid(i, j):
        return i * (size + 1) + j

    tris = []
    for i in range(size):
        for j in range(size):
            if keep(i, j):
                a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
                tris.append((a, b, c))
                tris.append((a, c, d))
    return SurfaceComplex.from_triangles(tris)


def ball_stack_bases(layers: int = 4, size: int = 15) -> list[SurfaceComplex]:
    """Growing concentric square discs: an inverted pyramid of ``layers`` strata."""
    c = size // 2
    out = []
    for k in range(layers):
        r = round((k + 1) * c / layers)
        out.append(square_patch(size, lambda i, j, r=r: abs(i - c + 0.5) < r and abs(j - c + 0.5) < r))
    return out


def annular_stack_bases(size: int = 8) -> list[SurfaceComplex]:
    """Disc, then an annulus containing it, then a disc filling the annulus."""
    c = size / 2

    def ring(i, j):
        return max(abs(i - c + 0.5), abs(j - c + 0.5)) > 1

    small = square_patch(size, lambda i, j: i == 1 and j in (1, 2))
    return [small, square_patch(size, ring), square_patch(size, lambda i, j: True)]


def planar_stack_fixtures() -> dict[str, list[SurfaceComplex]]:
    """Bases of the planar stratification fixtures (glued by shared ids)."""
    return {
        "single-disc": [disc(6)],
        "two-layer-pyramid": ball_stack_bases(2, 6),
        "annular": annular_stack_bases(),
        "ball-stack": ball_stack_bases(8, 15),
        "shifted": [
            square_patch(6, lambda i, j: i < 4 and j < 2),
            square_patch(6, lambda i, j: i >= 2 and j < 2),
        ],
        "overhang": [
            square_patch(6, lambda i, j: i < 3 and j < 3),
            square_patch(6, lambda i, j: 1 <= i < 5 and j < 3),
            square_patch(6, lambda i, j: i >= 2 and 1 <= j < 4),
        ],
    }


@dataclass
class CorpusEntry:
    name: str
    params: dict = field(default_factory=dict)
    complex: SimplicialComplex | None = None
    expected: dict = field(default_factory=dict)
    stratification: object = None


def generate(name: str, **params) -> CorpusEntry:
    """Build a named corpus complex together with its declared invariants."""
    if name not in GENERATORS and name not in STACKS:
        raise KeyError(f"unknown generator {name!r}")
    if name in STACKS:
        from .strata import stack

        st = stack(STACKS[name](**params))
        return CorpusEntry(name, params, st.union, {"euler": 1, "ranks": (1, 0, 0, 0)}, st)
    K, expected = GENERATORS[name](**params)
    return CorpusEntry(name, params, K, expected)


def _gen_bd4():
    return boundary_simplex(4), {"euler": 0, "ranks": (1, 0, 0, 1)}


def _gen_join():
    return join_triangles_s3(), {"euler": 0, "ranks": (1, 0, 0, 1), "f": (6, 15, 18, 9)}


def _gen_torus7():
    return torus7(), {"euler": 0, "ranks": (1, 2, 1), "f": (7, 21, 14), "genus": 1}


def _gen_genus(g: int = 2):
    s = genus_surface(g)
    return s, {"euler": 2 - 2 * g, "ranks": (1, 2 * g, 1), "genus": g}


def _gen_octa_ball():
    return octahedral_ball(), {"euler": 1, "ranks": (1, 0, 0, 0)}


def _gen_octahedron():
    return octahedron(), {"euler": 2, "ranks": (1, 0, 1), "genus": 0}


def _gen_slab(nu: int = 3, nv: int = 3):
    return prism_slab(nu, nv), {"euler": 1, "ranks": (1, 0, 0, 0)}


def _gen_cube():
    return cube_ball(), {"euler": 1, "ranks": (1, 0, 0, 0)}


def _gen_tetra():
    return simplex(3), {"euler": 1, "ranks": (1, 0, 0, 0)}


GENERATORS = {
    "boundary-4-simplex": _gen_bd4,
    "join-triangles-s3": _gen_join,
    "torus-7": _gen_torus7,
    "genus-surface": _gen_genus,
    "octahedral-ball": _gen_octa_ball,
    "octahedron": _gen_octahedron,
    "prism-slab": _gen_slab,
    "cube-ball": _gen_cube,
    "tetrahedron": _gen_tetra,
    "hopf-ball": lambda: (hopf_ball(), {"euler": 1, "ranks": (1, 0, 0, 0)}),
    "sd-join-ball": lambda: (subdivided_ball(join_triangles_s3()), {"euler": 1, "ranks": (1, 0, 0, 0)}),
    "sd-hopf-ball": lambda: (subdivided_hopf_ball(), {"euler": 1, "ranks": (1, 0, 0, 0)}),
    "sd-bd4-ball": lambda: (subdivided_ball(boundary_simplex(4)), {"euler": 1, "ranks": (1, 0, 0, 0)}),
}

# stratified planar balls; each generator returns the layer bases
STACKS = {
    "ball-stack": ball_stack_bases,
    "annular-stack": annular_stack_bases,
    "single-disc-stack": lambda n=6: [disc(n)],
    "shifted-stack": lambda: planar_stack_fixtures()["shifted"],
    "overhang-stack": lambda: planar_stack_fixtures()["overhang"],
}
