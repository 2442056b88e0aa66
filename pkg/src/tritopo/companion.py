"""Theorem inputs with explicit charts, and drilling of a true companion."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .complex import Simplex, SimplicialComplex, barycentric_subdivision, closure, faces, pure_boundary
from .errors import PreconditionError, StructureError
from .handles import Assembly, HandleSpec, assemble_stratified_complement
from .homotopy import HomotopyOpLog, reduction
from .linking import Manifold3
from .strata import Stratification, Stratum, tower, validate
from .surface import SurfaceComplex


# --- inputs -----------------------------------------------------------------

def shell_ball(M: Manifold3, min_triangles: int) -> frozenset[Simplex]:
    """Grow a ball of tetrahedra, one triangle-attachment at a time.

    Each step adds a tetrahedron meeting the current ball in exactly one
    boundary triangle (closure included), which keeps the ball a ball.
    """
    tets = sorted(M.tets)
    ball = {tets[0]}
    bd = set(faces(tets[0]))
    verts = set(tets[0])
    while len(bd) < min_triangles:
        grown = False
        for tri in sorted(bd):
            for t in M.complex.cofaces[tri]:
                if t in ball:
                    continue
                apex = (set(t) - set(tri)).pop()
                if apex in verts:
                    continue
                ball.add(t)
                verts.add(apex)
                bd.remove(tri)
                bd.update(f for f in faces(t) if f != tri)
                grown = True
                break
            if grown:
                break
        if not grown:
            raise StructureError(f"cannot shell a ball with {min_triangles} boundary triangles")
    return frozenset(ball)


@dataclass
class TheoremInput:
    M: Manifold3
    charts: dict[str, frozenset[Simplex]]
    stratification: Stratification
    assembly: Assembly
    source: str = ""


def theorem_input(M: Manifold3 | SimplicialComplex, indices: Sequence[int], *, min_triangles: int = 40, subdivide: bool = True, source: str = "") -> TheoremInput:
    """Closed input carrying a handle structure with the given critical indices.

    The (optionally subdivided) manifold keeps the complement of a shelled ball
    as the index-0 chart; the ball is replaced by the stratified complement of
    the remaining charts, each remaining chart being a cone on its sphere.
    """
    K = M.complex if isinstance(M, Manifold3) else M
    if subdivide:
        K = barycentric_subdivision(K)[0]
    base = Manifold3(K)
    if not base.homology_sphere_evidence():
        raise PreconditionError("input fails homology-sphere evidence")
    ball = shell_ball(base, min_triangles)
    F0 = SurfaceComplex.from_triangles(pure_boundary(ball))
    spec = HandleSpec.standard(indices, initial=F0)
    asm = assemble_stratified_complement(spec, start=max(K.vertices) + 1)
    outer = base.tets - ball
    M2, charts = asm.closed_up(outer=outer)
    return TheoremInput(M2, charts, asm.stratification, asm, source)


# --- drilling -----------------------------------------------------------------

@dataclass
class Column:
    chart: int
    cells: list[tuple[int, Simplex]]
    top: Simplex

    @property
    def bottom(self) -> Simplex:
        return self.cells[0][1]


@dataclass
class CompanionState:
    ambient: Manifold3
    charts: dict[str, frozenset[Simplex]]
    paths: dict[str, list[int]]
    tubes: dict[str, frozenset[Simplex]]
    drilled: dict[str, frozenset[Simplex]]
    H: Manifold3
    stratification: Stratification
    log: HomotopyOpLog
    conditions: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.conditions.values())


def _chart_order(charts: Mapping[str, frozenset[Simplex]]) -> list[str]:
    return sorted(charts, key=lambda k: int(k[1:]) if k[1:].isdigit() else k)


def _column(st: Stratification, j: int, x: Simplex) -> tuple[list[tuple[int, Simplex]], Simplex]:
    cells = []
    g = x
    while True:
        s = st.strata[j]
        inv = {w: v for v, w in s.lower.items()}
        cells.append((j, g))
        top = tuple(sorted(s.upper[inv[v]] for v in g))
        if j + 1 < len(st.strata) and top in st.strata[j + 1].lower_surface.simplices(2):
            g, j = top, j + 1
            continue
        return cells, top


def _column_body(st: Stratification, cells: list[tuple[int, Simplex]]) -> frozenset[Simplex]:
    out: set[Simplex] = set()
    for j, g in cells:
        out |= tower(st, j, [g]).body.simplices(3)
    return frozenset(out)


def find_columns(st: Stratification, spheres: Mapping[str, frozenset[Simplex]]) -> dict[str, Column]:
    """Vertical columns of prisms from the index-0 chart sphere to each other chart.

    Charts are served in order; a column is rejected if it touches another
    chart, meets its end spheres outside its end triangles, or reuses a
    vertex of an earlier column (successive search with used-vertex deletion).
    """
    names = _chart_order(spheres)
    first, rest = names[0], names[1:]
    sph_cl = {k: closure(v) for k, v in spheres.items()}
    starts = []
    for j, s in enumerate(st.strata):
        for x in sorted(s.lower_surface.simplices(2) & spheres[first]):
            starts.append((j, x))
    used: set[int] = set()
    out: dict[str, Column] = {}
    for name in rest:
        found = None
        for j, x in starts:
            cells, top = _column(st, j, x)
            if top not in spheres[name]:
                continue
            body = closure(_column_body(st, cells))
            vs = {v for s in body for v in s if len(s) == 1}
            if vs & used:
                continue
            if body & sph_cl[first] != closure([x]) or body & sph_cl[name] != closure([top]):
                continue
            if any(body & sph_cl[o] for o in names if o not in (first, name)):
                continue
            found = Column(int(name[1:]) if name[1:].isdigit() else -1, cells, top)
            used |= vs
            break
        if found is None:
            raise StructureError(f"no admissible column from {first} to {name} at the current subdivision")
        out[name] = found
    return out


def drill_true_companion(m: Manifold3, charts: Mapping[str, Sequence[Simplex]], st: Stratification) -> CompanionState:
    charts = {k: frozenset(tuple(sorted(t)) for t in v) for k, v in charts.items()}
    names = _chart_order(charts)
    if not names:
        raise PreconditionError("at least one chart is needed")
    verts = {}
    for k in names:
        if not charts[k] <= m.tets:
            raise PreconditionError(f"chart {k} is not a set of tetrahedra of the manifold")
        verts[k] = {v for t in charts[k] for v in t}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            if verts[a] & verts[b]:
                raise PreconditionError(f"charts {a} and {b} overlap")
    for k in names:
        if not Manifold3.from_tets(charts[k]).homotopy_disc_evidence():
            raise PreconditionError(f"chart {k} is not a ball (homological evidence)")
    rep = validate(st)
    if not rep.ok:
        raise PreconditionError("stratification does not validate: " + "; ".join(map(str, rep.violations[:3])))
    all_chart = frozenset().union(*charts.values())
    if st.union.simplices(3) != m.tets - all_chart:
        raise PreconditionError("stratification does not cover the complement of the charts")

    spheres = {k: frozenset(pure_boundary(v)) for k, v in charts.items()}
    columns = find_columns(st, spheres)
    log = HomotopyOpLog()
    current = Manifold3.from_tets(m.tets - charts[names[0]])
    tubes, drilled, paths = {}, {}, {}
    for name in names[1:]:
        col = columns[name]
        tube = _column_body(st, col.cells)
        tubes[name] = tube
        drilled[name] = charts[name] | tube
        v0 = min(col.bottom)
        path = [v0]
        for j, g in col.cells:
            s = st.strata[j]
            inv = {w: v for v, w in s.lower.items()}
            path.append(s.upper[inv[path[-1]]])
        paths[name] = path
        current = reduction(current, drilled[name], log, note=f"drill {name}")

    removed: dict[int, set[Simplex]] = {}
    for col in columns.values():
        for j, g in col.cells:
            removed.setdefault(j, set()).add(g)
    strata = []
    for j, s in enumerate(st.strata):
        inv = {w: v for v, w in s.lower.items()}
        drop = {tuple(sorted(inv[v] for v in g)) for g in removed.get(j, ())}
        keep = s.base.simplices(2) - drop
        if not keep:
            continue
        base = SurfaceComplex.from_triangles(keep)
        strata.append(Stratum.of(base, {v: s.lower[v] for v in base.vertices}, {v: s.upper[v] for v in base.vertices}, s.name))
    new_st = Stratification(tuple(strata))
    H = current

    tube_verts = {k: {v for t in t_ for v in t} for k, t_ in tubes.items()}
    tv = list(tube_verts.values())
    interiors = {k: verts[k] - {v for t in spheres[k] for v in t} for k in names}
    conds = {
        "tubes_disjoint": all(not (a & b) for i, a in enumerate(tv) for b in tv[i + 1:]),
        "tubes_avoid_other_charts": all(
            not (closure(tubes[k]) & closure(spheres[o])) for k in tubes for o in names[1:] if o != k
        ),
        "tube_ends_on_U0": all(tubes[k] and closure(tubes[k]) & closure(spheres[names[0]]) == closure([columns[k].bottom]) for k in tubes),
        "tube_ends_on_Ui": all(closure(tubes[k]) & closure(spheres[k]) == closure([columns[k].top]) for k in tubes),
        "stratification_valid": validate(new_st).ok,
        "stratification_covers_H": new_st.union.simplices(3) == H.tets if strata else not H.tets,
        "H_avoids_chart_interiors": not (H.tets & all_chart) and all(not (H.complex.vertices & interiors[k]) for k in names[1:]),
        "homotopy_disc_evidence": H.homotopy_disc_evidence(),
        "operations_preserve_invariants": log.all_preserved,
    }
    return CompanionState(m, charts, paths, tubes, drilled, H, new_st, log, conds)
