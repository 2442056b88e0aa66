from __future__ import annotations

import pytest

from oracles import betti
from tritopo.complex import homology_ranks
from tritopo.corpus import annulus, disc, planar_stack_fixtures, square_patch, torus7
from tritopo.errors import PreconditionError
from tritopo.strata import (
    Cut,
    Stratification,
    Stratum,
    is_planar,
    pyramid_check,
    refine,
    refines,
    stack,
    tower,
    tower_report,
    validate,
)
from tritopo.surface import SurfaceComplex

FIXTURES = planar_stack_fixtures()


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixtures_are_planar_balls(name):
    st = stack(FIXTURES[name])
    assert validate(st).ok
    assert is_planar(st)
    U = st.union
    assert homology_ranks(U, 3) == (1, 0, 0, 0)
    if len(U.simplices(3)) < 400:
        assert betti(U.facets, 3) == (1, 0, 0, 0)


def test_pyramid_property():
    assert pyramid_check(stack(FIXTURES["two-layer-pyramid"]))
    assert pyramid_check(stack(FIXTURES["ball-stack"]))
    assert not pyramid_check(stack(FIXTURES["shifted"]))
    assert pyramid_check(stack(FIXTURES["shifted"]), 1)


def test_product_stratum_body():
    s = Stratum.product(disc(5), 100, 200)
    st = Stratification((s,))
    assert validate(st).ok
    assert len(s.body.simplices(3)) == 3 * len(disc(5).simplices(2))


def test_torus_layer_is_not_planar():
    st = Stratification((Stratum.product(torus7(), 0, 10),))
    assert validate(st).ok
    assert not is_planar(st)
    assert homology_ranks(st.union, 3) == (1, 2, 1, 0)


def test_overlapping_levels_reported():
    base = disc(4)
    lo = {v: v for v in base.vertices}
    bad = Stratum.of(base, lo, {v: v if v == 0 else v + 10 for v in base.vertices})
    assert "levels-overlap" in validate(Stratification((bad,))).kinds()


def test_non_injective_level_map_reported():
    base = disc(4)
    lo = {v: v for v in base.vertices}
    up = {v: 20 for v in base.vertices}
    rep = validate(Stratification((Stratum.of(base, lo, up),)))
    assert "level-map-not-injective" in rep.kinds()


def test_distant_strata_must_not_meet():
    a = Stratum.product(disc(4), 0, 10)
    b = Stratum.product(disc(4), 10, 20)
    c = Stratum.of(disc(4), {v: v for v in range(5)}, {v: v + 30 for v in range(5)})
    rep = validate(Stratification((a, b, c)))
    assert "distant-intersection" in rep.kinds()


def test_adjacent_strata_meet_only_along_levels():
    a = Stratum.product(disc(4), 0, 10)
    b = Stratum.of(disc(4), {v: v + 10 for v in range(5)}, {v: (v + 20 if v else 0) for v in range(5)})
    assert not validate(Stratification((a, b))).ok


@pytest.mark.parametrize("cuts", [[Cut(level=True)], [Cut(subdivide=True)], [Cut(True, True)]])
def test_refine_keeps_ball(cuts):
    st = stack([disc(6)])
    new = refine(st, cuts)
    assert validate(new).ok and refines(new, st)
    assert homology_ranks(new.union, 3) == (1, 0, 0, 0)


def test_refine_subdivision_spreads_to_neighbours():
    st = stack(FIXTURES["two-layer-pyramid"])
    new = refine(st, {0: Cut(subdivide=True)})
    assert validate(new).ok and refines(new, st)
    assert len(new.strata[1].base.simplices(2)) == 6 * len(st.strata[1].base.simplices(2))


def test_refine_rejects_bad_spec():
    with pytest.raises(PreconditionError):
        refine(stack([disc(4)]), {3: Cut(level=True)})


def test_tower_over_subdisc():
    st = stack([square_patch(4, lambda i, j: True)])
    L = st.strata[0].lower_surface
    X = sorted(L.simplices(2))[:3]
    t = tower(st, 0, X)
    assert all(tower_report(st, t).values())
    assert homology_ranks(t.body, 3)[0] == 1


def test_tower_outside_lower_level_rejected():
    st = stack([disc(4)])
    with pytest.raises(PreconditionError):
        tower(st, 0, [(900, 901, 902)])


def test_annulus_layer_stack():
    st = stack([annulus(6), SurfaceComplex.from_triangles(annulus(6).simplices(2))])
    assert validate(st).ok and is_planar(st)
    assert homology_ranks(st.union, 3) == (1, 1, 0, 0)
