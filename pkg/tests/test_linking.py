from __future__ import annotations

import random

import pytest

from instances import LINK_BALLS, finger_move, linking_pair, moved_cores
from oracles import UnionFind
from tritopo.complex import ChainZ2, boundary, link
from tritopo.corpus import generate
from tritopo.errors import PreconditionError
from tritopo.linking import (
    Manifold3,
    SplittingDisc,
    boundary_sides,
    linking_number,
    split_along_disc,
    splitting_disc_for_circle,
    to_dual_cycle,
    verify_independence,
)
from tritopo.surface import circle_from_vertices, cycle_order


@pytest.fixture(scope="module")
def balls():
    return {name: Manifold3(generate(name).complex) for name in LINK_BALLS}


def test_hopf_cores_link_in_the_join():
    K = generate("join-triangles-s3").complex
    m = Manifold3(K)
    assert linking_number(m, K.label_chain("coreA", 1), K.label_chain("coreB", 1)) == 1


def test_hopf_cores_link_in_the_ball():
    K = generate("hopf-ball").complex
    m = Manifold3(K)
    a, b = K.label_chain("coreA", 1), K.label_chain("coreB", 1)
    assert m.homotopy_disc_evidence()
    assert linking_number(m, a, b) == linking_number(m, b, a) == 1


def test_triangle_boundary_does_not_link_a_disjoint_cycle(balls):
    m = balls["sd-join-ball"]
    rng = random.Random(3)
    checked = 0
    for t in sorted(m.complex.simplices(2)):
        if set(t) & m.boundary_vertices:
            continue
        a = boundary(ChainZ2(2, frozenset({t})))
        _, b = linking_pair(m, rng.randrange(10**6))
        if set(b.vertices) & set(t):
            continue
        assert linking_number(m, a, b) == 0
        checked += 1
        if checked == 10:
            break
    assert checked == 10


@pytest.mark.parametrize("name", LINK_BALLS)
@pytest.mark.parametrize("seed", range(6))
def test_laws_on_random_pairs(balls, name, seed):
    m = balls[name]
    a, b = linking_pair(m, seed)
    lk = linking_number(m, a, b)
    assert linking_number(m, b, a) == lk
    assert verify_independence(m, a, b, 10, seed) == [lk] * 10
    rng = random.Random(seed)
    for _ in range(3):
        b = finger_move(m, a, b, rng) or b
        assert linking_number(m, a, b) == lk


@pytest.mark.parametrize("seed", range(5))
def test_moved_cores_still_link(balls, seed):
    m = balls["sd-hopf-ball"]
    a, b = moved_cores(m, seed)
    assert linking_number(m, a, b) == 1
    assert verify_independence(m, a, b, 10, seed) == [1] * 10


def test_dual_cycle_is_closed(balls):
    m = balls["sd-hopf-ball"]
    d = to_dual_cycle(m, m.complex.label_chain("coreB", 1))
    for x, y, f in zip(d.tets, d.tets[1:] + d.tets[:1], d.crossed):
        assert set(f) == set(x) & set(y) and len(f) == 3


def test_linking_preconditions(balls):
    m = balls["sd-hopf-ball"]
    a = m.complex.label_chain("coreA", 1)
    with pytest.raises(PreconditionError, match="disjoint"):
        linking_number(m, a, a)
    torus = Manifold3(generate("prism-slab").complex)
    with pytest.raises(PreconditionError):
        linking_number(torus, ChainZ2(1, frozenset({(0, 1)})), a)


# --- splitting --------------------------------------------------------------

def _check_split(m: Manifold3, d: SplittingDisc):
    res = split_along_disc(m, d)
    assert res.components == 2 and res.ok, res.notes
    assert res.U.tets | res.V.tets == m.tets
    assert not res.U.tets & res.V.tets
    uf = UnionFind()
    for t in res.U.tets:
        uf.union(t, min(res.U.tets))
    assert uf.groups(res.U.tets) == 1
    return res


@pytest.mark.parametrize("name,label", [("octahedral-ball", "equator_disc"), ("cube-ball", "mid_disc")])
def test_corpus_discs_split(name, label):
    K = generate(name).complex
    m = Manifold3(K)
    _check_split(m, SplittingDisc.of(K.label_chain(label, 2).support))


@pytest.mark.parametrize("name", ["octahedral-ball", "prism-slab", "sd-bd4-ball"])
def test_discs_from_boundary_circles_split(name):
    m = Manifold3(generate(name).complex)
    bd = m.boundary_surface
    for v in sorted(m.boundary_vertices)[:6]:
        c = circle_from_vertices(cycle_order(ChainZ2(1, link(bd, (v,)).simplices(1))))
        for side in (0, 1):
            region = boundary_sides(m, c)[side]
            if any(set(t) <= c.vertices for t in region):
                with pytest.raises(PreconditionError, match="subdivide"):
                    splitting_disc_for_circle(m, c, side)
                continue
            M2, D = splitting_disc_for_circle(m, c, side)
            assert M2.ranks == (1, 0, 0, 0)
            res = _check_split(M2, D)
            assert D.boundary == c
            assert len(boundary_sides(m, c)) == 2 and res.ok


def test_non_separating_disc_reported():
    m = Manifold3(generate("octahedral-ball").complex)
    with pytest.raises(PreconditionError):
        split_along_disc(m, SplittingDisc.of([(0, 2, 4)]))
