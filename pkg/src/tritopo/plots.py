"""Figures written next to CLI reports (matplotlib, non-interactive backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import PolyCollection  # noqa: E402

from .embedding import EmbeddingResult  # noqa: E402
from .handles import ChartMesh  # noqa: E402
from .linking import Manifold3  # noqa: E402
from .strata import Stratification  # noqa: E402
from .surface import components  # noqa: E402

PIECE_COLORS = {"H+": "#c44e52", "H-": "#dd8452", "R+": "#4c72b0", "R-": "#64b5cd", "Q": "#55a868"}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def chart_mesh_figure(mesh: ChartMesh, path: str | Path) -> Path:
    """Chart sphere coloured by piece."""
    fig = plt.figure(figsize=(6, 6))
    ax = fig.add_subplot(projection="3d")
    for name in ChartMesh.PIECES:
        tris = sorted(mesh.piece(name))
        if not tris:
            continue
        ax.plot_trisurf(
            mesh.coords[:, 0], mesh.coords[:, 1], mesh.coords[:, 2],
            triangles=np.array(tris), color=PIECE_COLORS[name], alpha=0.8, linewidth=0.1, edgecolor="k",
        )
        ax.plot([], [], color=PIECE_COLORS[name], label=name)
    ax.set_box_aspect((1, 1, 1))
    ax.set_title(f"index-{mesh.n} chart, resolution {mesh.resolution[0]}x{mesh.resolution[1]}")
    ax.legend(loc="upper left")
    return _save(fig, path)


def layouts_figure(e: EmbeddingResult, path: str | Path) -> Path:
    """Planar layout of every layer, one panel each."""
    st = e.stratification
    k = len(st.strata)
    cols = min(k, 4)
    rows = (k + cols - 1) // cols
    fig, axes = plt.subplots(rows, cols, figsize=(3.2 * cols, 3.2 * rows), squeeze=False)
    for ax in axes.flat:
        ax.set_axis_off()
    for i, s in enumerate(st.strata):
        ax = axes.flat[i]
        lay = e.layouts[i]
        polys = [[(float(lay[v][0]), float(lay[v][1])) for v in t] for t in sorted(s.base.simplices(2))]
        ax.add_collection(PolyCollection(polys, facecolor="#4c72b0", edgecolor="k", linewidth=0.3, alpha=0.6))
        ax.autoscale()
        ax.set_aspect("equal")
        ax.set_title(f"layer {i + 1}: {len(polys)} triangles", fontsize=9)
    return _save(fig, path)


def embedding_figure(e: EmbeddingResult, h: Manifold3, path: str | Path) -> Path:
    """Embedded boundary surface of the companion."""
    tris = sorted(h.boundary_triangles)
    vs = sorted({v for t in tris for v in t})
    index = {v: i for i, v in enumerate(vs)}
    pts = e.as_array(vs)
    fig = plt.figure(figsize=(6, 5))
    ax = fig.add_subplot(projection="3d")
    ax.plot_trisurf(pts[:, 0], pts[:, 1], pts[:, 2], triangles=[[index[v] for v in t] for t in tris],
                    color="#55a868", alpha=0.7, linewidth=0.1, edgecolor="k")
    ax.set_title("embedded boundary sphere")
    return _save(fig, path)


def strata_figure(st: Stratification, path: str | Path) -> Path:
    """Genus and boundary-circle count of each layer."""
    genus, circles = [], []
    for s in st.strata:
        comps = components(s.base)
        genus.append(sum(c.classification.genus for c in comps))
        circles.append(sum(c.classification.boundary_count for c in comps))
    x = np.arange(1, len(st.strata) + 1)
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.bar(x - 0.2, genus, width=0.4, label="genus")
    ax.bar(x + 0.2, circles, width=0.4, label="boundary circles")
    ax.set_xlabel("layer")
    ax.set_xticks(x)
    ax.legend()
    return _save(fig, path)
