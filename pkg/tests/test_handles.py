from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from oracles import surface_invariants
from tritopo.errors import PreconditionError, StructureError
from tritopo.handles import (
    ChartMesh,
    HandleSpec,
    assemble_stratified_complement,
    assembly_report,
    chart_boundary_mesh,
    chart_disc_mesh,
    epsilon_signs,
    flow,
    grad_psi,
    landing_time,
    pieces_report,
    psi,
    ring_landing_exact,
)
from tritopo.surface import classify


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_closed_form_flow_matches_integration(n):
    rng = np.random.default_rng(100 + n)
    starts = rng.uniform(-2, 2, size=(200, 3))
    t_end = 0.4
    sol = solve_ivp(lambda t, y: grad_psi(y.reshape(-1, 3), n).ravel(), (0, t_end), starts.ravel(),
                    method="DOP853", rtol=1e-13, atol=1e-14)
    numeric = sol.y[:, -1].reshape(-1, 3)
    exact = np.array([flow(x, t_end, n) for x in starts])
    assert np.max(np.abs(numeric - exact)) < 1e-9


def test_signs():
    assert epsilon_signs(0) == (1, 1, 1)
    assert epsilon_signs(1) == (1, 1, -1)
    assert epsilon_signs(3) == (-1, -1, -1)
    with pytest.raises(PreconditionError):
        epsilon_signs(4)


def test_psi_increases_along_flow():
    x = np.array([0.3, -0.2, 0.5])
    for n in range(4):
        values = [psi(flow(x, t, n), n) for t in np.linspace(0, 1, 11)]
        assert all(b > a for a, b in zip(values, values[1:]))


def test_ring_landing_exact():
    ex = ring_landing_exact()
    assert ex["e4t"] == Fraction(4, 3)
    assert ex["r2"] == 4 and ex["z2"] == 3 and ex["psi"] == 1
    x = flow(np.array([math.sqrt(3), 0.0, 2.0]), landing_time(), 1)
    assert math.hypot(x[0], x[1]) == pytest.approx(2.0, abs=1e-12)
    assert x[2] == pytest.approx(math.sqrt(3), abs=1e-12)


@pytest.mark.parametrize("res", ["24x8", "32x12", "48x16"])
def test_chart_mesh_pieces(res):
    mesh = chart_boundary_mesh(1, res)
    rep = pieces_report(mesh)
    assert rep.ok
    assert surface_invariants(mesh.surface.simplices(2)) == (2, 0)
    meets = {k for k, v in rep.intersections.items() if v == "circle"}
    assert meets == {("H+", "R+"), ("H-", "R-"), ("R+", "Q"), ("R-", "Q")}


def test_landing_circle_on_mesh():
    mesh = chart_boundary_mesh(1, "24x8")
    for key, sign in (("landing_circle_plus", 1), ("landing_circle_minus", -1)):
        pts = mesh.coords[mesh.exact[key]]
        assert np.allclose(np.hypot(pts[:, 0], pts[:, 1]), 2.0, atol=1e-12)
        assert np.allclose(pts[:, 2], sign * math.sqrt(3), atol=1e-12)


def test_index_two_mesh_is_rotated():
    a, b = chart_boundary_mesh(1, "24x8"), chart_boundary_mesh(2, "24x8")
    assert np.allclose(psi(a.coords[a.exact["rim_plus"]], 1), -1)
    assert np.allclose(psi(b.coords[b.exact["rim_plus"]], 2), 1)
    assert pieces_report(b).ok


def test_disc_chart_mesh():
    for n in (0, 3):
        m = chart_disc_mesh(n, 2)
        assert classify(m.surface).euler == 2
        assert np.allclose(np.linalg.norm(m.coords, axis=1), 1)


def test_bad_resolutions():
    with pytest.raises(StructureError):
        chart_boundary_mesh(1, (2, 8))
    with pytest.raises(PreconditionError):
        chart_boundary_mesh(1, "big")
    with pytest.raises(PreconditionError):
        chart_boundary_mesh(0)


@pytest.mark.parametrize("indices", [(0, 3), (0, 1, 2, 3), (0, 1, 2, 1, 2, 3)])
def test_assembly(indices):
    spec = HandleSpec.standard(indices)
    assert spec.indices == indices
    a = assemble_stratified_complement(spec)
    rep = assembly_report(a)
    assert rep["strata_valid"] and all(rep["chart_spheres"]) and rep["boundary_tiled"]
    k = len(indices)
    # complement of k balls in a 3-sphere: k boundary spheres, H2 of rank k-1
    assert rep["boundary_components"] == k
    assert rep["ranks"] == (1, 0, k - 1, 0)
    M, _ = a.closed_up()
    assert M.ranks == (1, 0, 0, 1)


def test_chart_pieces_of_assembly():
    a = assemble_stratified_complement(HandleSpec.standard((0, 1, 2, 3)))
    for ch in a.charts:
        if ch.index in (1, 2):
            assert set(ch.pieces) == set(ChartMesh.PIECES)


def test_bad_spec():
    with pytest.raises(PreconditionError):
        HandleSpec.standard((0, 2, 1, 3))
