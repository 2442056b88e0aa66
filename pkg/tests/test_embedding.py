from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tritopo.corpus import planar_stack_fixtures, torus7
from tritopo.embedding import (
    EmbeddingResult,
    _orient2,
    _orient3,
    check_planar_layout,
    embed_planar,
    simplices_meet_properly,
    simplices_meet_properly_lp,
    triangles_meet_properly,
    verify_embedding,
)
from tritopo.errors import PreconditionError
from tritopo.linking import Manifold3
from tritopo.strata import Stratification, Stratum, stack

FIXTURES = planar_stack_fixtures()
coord = st.integers(-3, 3)
point3 = st.tuples(coord, coord, coord)


def _embedded(name):
    st_ = stack(FIXTURES[name])
    h = Manifold3(st_.union)
    return h, st_, embed_planar(h, st_)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 3), st.lists(point3, min_size=8, max_size=8))
def test_certificate_matches_lp(shared, pts):
    s1 = (0, 1, 2, 3)
    s2 = tuple(range(4 - shared, 8 - shared))
    pos = dict(enumerate(pts))
    assume(_orient3(*(pos[v] for v in s1)) != 0 and _orient3(*(pos[v] for v in s2)) != 0)
    assert simplices_meet_properly(s1, s2, pos) == simplices_meet_properly_lp(s1, s2, pos)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2), st.lists(st.tuples(coord, coord), min_size=6, max_size=6))
def test_planar_predicate_matches_lp(shared, pts):
    t1 = (0, 1, 2)
    t2 = tuple(range(3 - shared, 6 - shared))
    pos = dict(enumerate(pts))
    assume(_orient2(*(pos[v] for v in t1)) != 0 and _orient2(*(pos[v] for v in t2)) != 0)
    lifted = {v: (x, y, 0) for v, (x, y) in pos.items()}
    assert triangles_meet_properly(t1, t2, pos) == simplices_meet_properly_lp(t1, t2, lifted)


def test_known_pairs():
    pos = {0: (0, 0, 0), 1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1), 4: (0, 0, -1), 5: (0, 0, Fraction(1, 2))}
    assert simplices_meet_properly((0, 1, 2, 3), (0, 1, 2, 4), pos)
    assert not simplices_meet_properly((0, 1, 2, 3), (0, 1, 2, 5), pos)
    assert not simplices_meet_properly_lp((0, 1, 2, 3), (0, 1, 2, 5), pos)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_embeds(name):
    h, st_, e = _embedded(name)
    rep = verify_embedding(e, h, "fast")
    assert rep.ok, rep.violations[:5]
    if len(h.tets) <= 800:
        ex = verify_embedding(e, h, "exhaustive")
        assert ex.mode == "exhaustive" and ex.ok, ex.violations[:5]
    assert all(isinstance(x, Fraction) for p in e.coords.values() for x in p)


def test_single_disc_slab():
    h, st_, e = _embedded("single-disc")
    zs = {p[2] for p in e.coords.values()}
    assert zs == {0, 1}


def test_pyramid_interface_shared():
    h, st_, e = _embedded("two-layer-pyramid")
    lower_top = st_.strata[0].upper_surface.vertices
    assert {e.coords[v][2] for v in lower_top} == {1}
    assert lower_top <= st_.strata[1].lower_surface.vertices


def test_translation_keeps_verdict():
    h, st_, e = _embedded("annular")
    moved = e.transformed((Fraction(3), Fraction(-1, 3), Fraction(5)))
    assert verify_embedding(moved, h, "fast").ok


def test_collapsed_edge_is_degenerate():
    h, st_, e = _embedded("two-layer-pyramid")
    a, b = min(h.complex.simplices(1))
    coords = dict(e.coords)
    coords[b] = coords[a]
    rep = verify_embedding(EmbeddingResult(coords, st_, e.layouts, e.heights), h, "exhaustive")
    assert not rep.nondegenerate and not rep.ok


def test_moved_vertex_overlaps():
    h, st_, e = _embedded("two-layer-pyramid")
    inner = sorted(h.complex.vertices - h.boundary_vertices) or sorted(h.complex.vertices)
    v = inner[0]
    coords = dict(e.coords)
    x, y, z = coords[v]
    coords[v] = (x + 7, y + 5, z)
    rep = verify_embedding(EmbeddingResult(coords, st_, e.layouts, e.heights), h, "fast")
    assert not rep.ok and rep.mode == "exhaustive"


def test_missing_coordinates():
    h, st_, e = _embedded("single-disc")
    coords = dict(e.coords)
    coords.pop(min(coords))
    assert not verify_embedding(EmbeddingResult(coords, st_, [], []), h).covers_all


def test_non_planar_rejected():
    st_ = Stratification((Stratum.product(torus7(), 0, 10),))
    with pytest.raises(PreconditionError):
        embed_planar(Manifold3(st_.union), st_)


def test_planar_layout_check_finds_flip():
    pos = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1), 4: (Fraction(1, 4), Fraction(1, 4))}
    assert check_planar_layout([(0, 1, 2), (1, 2, 3)], pos) == []
    assert check_planar_layout([(0, 1, 2), (1, 2, 4)], pos)
