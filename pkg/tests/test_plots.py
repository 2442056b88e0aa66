from __future__ import annotations

from tritopo import plots
from tritopo.corpus import planar_stack_fixtures
from tritopo.embedding import embed_planar
from tritopo.handles import chart_boundary_mesh
from tritopo.linking import Manifold3
from tritopo.strata import stack


def test_figures_written(tmp_path):
    st = stack(planar_stack_fixtures()["annular"])
    h = Manifold3(st.union)
    e = embed_planar(h, st)
    paths = [
        plots.chart_mesh_figure(chart_boundary_mesh(1, "24x8"), tmp_path / "chart.png"),
        plots.layouts_figure(e, tmp_path / "layouts.png"),
        plots.embedding_figure(e, h, tmp_path / "boundary.png"),
        plots.strata_figure(st, tmp_path / "strata.png"),
    ]
    for p in paths:
        assert p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
