from __future__ import annotations

import pytest

from tritopo.companion import drill_true_companion, theorem_input
from tritopo.complex import boundary, is_boundary
from tritopo.corpus import generate, planar_stack_fixtures
from tritopo.errors import PreconditionError
from tritopo.homotopy import HomotopyOpLog
from tritopo.linking import Manifold3
from tritopo.planarize import case3_extension, first_nonplanar, planarize
from tritopo.strata import pyramid_check, stack, validate
from tritopo.surface import is_simple_circle


def _companion(name, indices):
    ti = theorem_input(generate(name).complex, indices)
    return drill_true_companion(ti.M, ti.charts, ti.stratification)


@pytest.fixture(scope="module")
def genus_one():
    cs = _companion("boundary-4-simplex", (0, 1, 2, 3))
    return cs, planarize(cs)


def test_planar_companion_unchanged():
    cs = _companion("boundary-4-simplex", (0, 3))
    ps = planarize(cs)
    assert ps.verdict == "planar" and not ps.steps
    assert ps.H is cs.H and ps.stratification is cs.stratification


def test_case3_extension_restores_pyramid():
    st = stack(planar_stack_fixtures()["shifted"])
    H = Manifold3(st.union)
    assert not pyramid_check(st)
    log = HomotopyOpLog()
    H2, st2, att = case3_extension(H, st, 0, log)
    assert validate(st2).ok and pyramid_check(st2)
    assert st2.union.simplices(3) == H2.tets
    assert H2.ranks == H.ranks == (1, 0, 0, 0)
    assert len(log) == 1 and log.all_preserved and log.records[0].kind == "extension"
    assert len(att.P) == 8 and att.W


def test_case3_needs_overhang():
    st = stack(planar_stack_fixtures()["two-layer-pyramid"])
    with pytest.raises(PreconditionError):
        case3_extension(Manifold3(st.union), st, 0)


def test_genus_one_layer_located(genus_one):
    cs, ps = genus_one
    assert first_nonplanar(cs.stratification) == ps.r == 3


def test_genus_one_steps_certified(genus_one):
    _, ps = genus_one
    assert ps.steps and ps.steps_certified
    assert ps.log.all_preserved
    assert ps.H.ranks == (1, 0, 0, 0)


def test_genus_one_audit_record(genus_one):
    _, ps = genus_one
    layer = ps.stratification.strata[ps.r - 1].lower_surface
    assert is_simple_circle(ps.C)
    assert not is_boundary(ps.C, layer)[0]
    assert ps.circle_checks["non_bounding_in_layer"]
    assert ps.disc_checks["boundary_is_C"] and ps.disc_checks["collar_preserves_ranks"]
    assert ps.split.components == 2 and ps.split.ok
    assert set(ps.audit) == {
        "split_two_pieces", "split_ok", "recorded_boundary_consistent", "Z_boundary_equals_C",
        "Z_boundary_equals_C_mod_layer_frontier", "C_bounds_in_layer",
    }
    assert ps.Z_boundary == boundary(ps.Z)
    assert ps.audit["recorded_boundary_consistent"]
    assert ps.audit["Z_boundary_equals_C_mod_layer_frontier"]
    assert ps.verdict
    lines = ps.lines()
    assert lines[0].startswith("verdict:") and any(x.startswith("audit.") for x in lines)


def test_budget(genus_one):
    cs, _ = genus_one
    ps = planarize(cs, budget=0)
    assert ps.verdict == "budget exhausted" and not ps.steps
