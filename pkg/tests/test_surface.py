from __future__ import annotations

import numpy as np
import pytest

from instances import circle_instance, interior_in
from oracles import all_simplices, boundary_matrix, in_column_space, surface_invariants
from tritopo.complex import SimplicialComplex, barycentric_subdivision, closed_star
from tritopo.corpus import annulus, connected_sum, disc, genus_surface, octahedron, pants, punctured, torus7
from tritopo.errors import PreconditionError, StructureError
from tritopo.surface import (
    SurfaceComplex,
    attach_disc,
    boundary_circles,
    cap_all,
    classify,
    components,
    find_nontrivial_circle,
    is_planar,
    is_simple_circle,
)

SURFACES = {
    "disc": (disc(6), (True, 0, 1, 1)),
    "annulus": (annulus(4), (True, 0, 2, 0)),
    "octahedron": (octahedron(), (True, 0, 0, 2)),
    "torus": (torus7(), (True, 1, 0, 0)),
    "genus-2": (genus_surface(2), (True, 2, 0, -2)),
    "genus-3": (genus_surface(3), (True, 3, 0, -4)),
    "pants": (pants(), (True, 0, 3, -1)),
}


def _bounds(c, s) -> bool:
    simp = all_simplices(s.simplices(2))
    v = np.array([1 if e in c.support else 0 for e in simp[1]], dtype=np.uint8)
    return in_column_space(boundary_matrix(simp, 2), v)


@pytest.mark.parametrize("name", SURFACES)
def test_classification(name):
    s, (orientable, genus, r, chi) = SURFACES[name]
    c = classify(s)
    assert (c.orientable, c.genus, c.boundary_count, c.euler) == (orientable, genus, r, chi)
    assert (c.euler, c.boundary_count) == surface_invariants(s.simplices(2))


@pytest.mark.parametrize("name", SURFACES)
def test_classification_invariant_under_subdivision(name):
    s, _ = SURFACES[name]
    sd = SurfaceComplex(barycentric_subdivision(s)[0].all_simplices())
    assert classify(sd) == classify(s)


@pytest.mark.parametrize("name", ["disc", "annulus", "pants"])
def test_attach_disc_drops_one_circle(name):
    s, _ = SURFACES[name]
    before = classify(s)
    after = classify(attach_disc(s, boundary_circles(s)[0]))
    assert after.boundary_count == before.boundary_count - 1
    assert after.genus == before.genus


def test_capped_punctured_torus_is_closed():
    s = punctured(SurfaceComplex(barycentric_subdivision(torus7())[0].all_simplices()), 1)
    capped, caps = cap_all(s)
    c = classify(capped)
    assert (c.genus, c.boundary_count, len(caps)) == (1, 0, 1)


def test_mobius_band_is_non_orientable():
    # five-vertex strip closed with a half twist
    tris = [(0, 1, 2), (1, 2, 3), (2, 3, 4), (3, 4, 0), (4, 0, 1)]
    assert not classify(SurfaceComplex.from_triangles(tris)).orientable


def test_non_manifold_rejected():
    with pytest.raises(StructureError):
        SurfaceComplex.from_triangles([(0, 1, 2), (0, 1, 3), (0, 1, 4)])


def test_is_planar():
    assert is_planar(annulus(5))
    assert not is_planar(octahedron())
    assert not is_planar(punctured(SurfaceComplex(barycentric_subdivision(torus7())[0].all_simplices()), 1))


def test_components_of_disjoint_union():
    s = SurfaceComplex.from_triangles(list(disc(4).simplices(2)) + list(disc(5, offset=10).simplices(2)))
    assert len(components(s)) == 2


def test_connected_sum_adds_genus():
    assert classify(connected_sum(torus7(), torus7())).genus == 2


@pytest.mark.parametrize("method", ["induction", "linear"])
def test_torus_generator(method):
    s = torus7()
    c = find_nontrivial_circle(s, None, method)
    assert is_simple_circle(c) and not _bounds(c, s)


@pytest.mark.parametrize("method", ["induction", "linear"])
def test_torus_circle_avoids_vertex_star(method):
    s = SurfaceComplex(barycentric_subdivision(torus7())[0].all_simplices())
    T = SimplicialComplex([t for t in closed_star(s, [0]) if len(t) == 3], close=True)
    c = find_nontrivial_circle(s, T, method)
    edges, verts = interior_in(s, T)
    assert not (c.support & edges) and not (c.vertices & verts)
    assert not _bounds(c, s)


def test_genus_two_with_annulus():
    s = SurfaceComplex(barycentric_subdivision(genus_surface(2))[0].all_simplices())
    v = min(s.vertices)
    ring = closed_star(s, [v] + sorted(w for e in s.simplices(1) if v in e for w in e if w != v))
    tris = [t for t in ring if len(t) == 3 and v not in t]
    T = SimplicialComplex(tris, close=True)
    assert classify(T).boundary_count == 2 and is_planar(T)
    for method in ("induction", "linear"):
        c = find_nontrivial_circle(s, T, method)
        edges, verts = interior_in(s, T)
        assert not (c.support & edges) and not (c.vertices & verts) and not _bounds(c, s)


def test_preconditions():
    with pytest.raises(PreconditionError):
        find_nontrivial_circle(octahedron(), None)
    s = torus7()
    with pytest.raises(PreconditionError):
        find_nontrivial_circle(s, SimplicialComplex(s.simplices(2), close=True), "linear")
    with pytest.raises(ValueError):
        find_nontrivial_circle(s, None, "guess")


@pytest.mark.parametrize("seed", range(0, 120, 7))
def test_random_instances_both_routes(seed):
    s, T, info = circle_instance(seed)
    assert classify(s).genus == info["genus"]
    assert classify(s).boundary_count == info["circles"]
    edges, verts = interior_in(s, T)
    for method in ("induction", "linear"):
        c = find_nontrivial_circle(s, T, method)
        assert is_simple_circle(c)
        assert not (c.support & edges) and not (c.vertices & verts)
        assert not _bounds(c, s)
