"""Seeded random inputs shared by the property tests and the acceptance suite."""

from __future__ import annotations

import random

from tritopo.complex import SimplicialComplex, barycentric_subdivision, closed_star
from tritopo.errors import StructureError
from tritopo.corpus import genus_surface, punctured
from tritopo.surface import SurfaceComplex, is_planar


def circle_instance(seed: int) -> tuple[SurfaceComplex, SimplicialComplex, dict]:
    """A surface of genus 1-3 with at most 4 boundary circles and a planar subsurface."""
    rng = random.Random(seed)
    g = 1 + seed % 3
    r = rng.randint(0, 4)
    s = genus_surface(g)
    s = SurfaceComplex(barycentric_subdivision(s)[0].all_simplices())
    if r:
        try:
            s = punctured(s, r, seed=seed)
        except ValueError:
            s = punctured(SurfaceComplex(barycentric_subdivision(s)[0].all_simplices()), r, seed=seed)
    inner = sorted(s.vertices - s.boundary_vertices)
    while True:
        centres = rng.sample(inner, rng.randint(1, 3))
        tris = [t for t in closed_star(s, centres) if len(t) == 3]
        T = SimplicialComplex(tris, close=True)
        try:
            if is_planar(T):
                break
        except StructureError:
            continue
    return s, T, {"genus": g, "circles": r, "seed": seed}


def interior_in(s: SurfaceComplex, T: SimplicialComplex) -> tuple[set, set]:
    """Edges and vertices of T not on the frontier of T in s (computed from scratch)."""
    t_tris = set(T.simplices(2))
    edge_tris: dict = {}
    for t in s.simplices(2):
        for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
            edge_tris.setdefault(e, []).append(t)
    edges = {e for e, ts in edge_tris.items() if len(ts) == 2 and all(x in t_tris for x in ts)}
    verts = set()
    for v in T.vertices:
        around = [t for t in s.simplices(2) if v in t]
        if v not in s.boundary_vertices and around and all(t in t_tris for t in around):
            verts.add(v)
    return edges, verts


LINK_BALLS = ("sd-bd4-ball", "sd-join-ball", "sd-hopf-ball")


def linking_pair(m, seed: int):
    """Two vertex-disjoint simple interior cycles of ``m``."""
    from tritopo.linking import interior_circles

    rng = random.Random(seed)
    for _ in range(50):
        (a,) = interior_circles(m, 1, rng)
        got = interior_circles(m, 1, rng, avoid=set(a.vertices))
        if got:
            return a, got[0]
    raise RuntimeError("no disjoint pair found")


def moved_cores(m, seed: int, moves: int = 4):
    """The labelled Hopf cores of ``m``, each pushed by random finger moves."""
    rng = random.Random(seed)
    a, b = m.complex.label_chain("coreA", 1), m.complex.label_chain("coreB", 1)
    for _ in range(moves):
        a = finger_move(m, b, a, rng) or a
        b = finger_move(m, a, b, rng) or b
    return a, b


def finger_move(m, a, b, rng: random.Random):
    """b with one edge replaced by the other two sides of a triangle off a."""
    from tritopo.complex import ChainZ2, boundary

    bad = set(a.vertices) | set(b.vertices) | set(m.boundary_vertices)
    options = []
    for e in sorted(b.support):
        for t in m.complex.cofaces.get(e, ()):
            if len(t) == 3 and not (set(t) - set(e)) & bad:
                options.append(t)
    if not options:
        return None
    t = rng.choice(options)
    return b + boundary(ChainZ2(2, frozenset({t})))
