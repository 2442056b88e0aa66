"""Reductions, extensions and the gluing of two homotopy discs."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import networkx as nx

from .complex import Simplex, SimplicialComplex, closure, faces, pure_boundary
from .errors import PreconditionError, StructureError
from .linking import Manifold3
from .surface import SurfaceComplex, classify


def snapshot(m: Manifold3) -> dict:
    return m.snapshot()


@dataclass(frozen=True)
class OpRecord:
    kind: str
    cell: frozenset[Simplex]
    interface: frozenset[Simplex]
    pre: dict
    post: dict
    note: str = ""

    @property
    def preserved(self) -> bool:
        return self.pre == self.post


@dataclass
class HomotopyOpLog:
    records: list[OpRecord] = field(default_factory=list)

    def append(self, rec: OpRecord) -> None:
        self.records.append(rec)

    @property
    def all_preserved(self) -> bool:
        return all(r.preserved for r in self.records)

    def __len__(self) -> int:
        return len(self.records)

    def lines(self) -> list[str]:
        out = []
        for i, r in enumerate(self.records):
            out.append(
                f"{i + 1}. {r.kind} cell={len(r.cell)} tets interface={len(r.interface)} triangles "
                f"preserved={r.preserved}" + (f" ({r.note})" if r.note else "")
            )
        return out


def _is_disc(tris: Iterable[Simplex]) -> bool:
    tris = list(tris)
    if not tris:
        return False
    try:
        c = classify(SurfaceComplex.from_triangles(tris))
    except StructureError:
        return False
    return c.orientable and c.genus == 0 and c.boundary_count == 1


def _ball_evidence(tets: Iterable[Simplex]) -> bool:
    try:
        return Manifold3.from_tets(tets).homotopy_disc_evidence()
    except StructureError:
        return False


def _meet(a: Iterable[Simplex], b: Iterable[Simplex]) -> set[Simplex]:
    return closure(a) & closure(b)


def reduction_interface(m: Manifold3, d: Iterable[Simplex]) -> frozenset[Simplex]:
    d = {tuple(sorted(t)) for t in d}
    return frozenset(pure_boundary(d) & m.boundary_triangles)


def reduction(m: Manifold3, d: Iterable[Simplex], log: HomotopyOpLog | None = None, note: str = "") -> Manifold3:
    """Remove a 3-cell meeting the boundary in a disc."""
    d = frozenset(tuple(sorted(t)) for t in d)
    if not d or not d <= m.tets:
        raise PreconditionError("reduction cell must be a non-empty set of tetrahedra of the manifold")
    if d == m.tets:
        raise PreconditionError("reduction would remove the whole manifold")
    if not _ball_evidence(d):
        raise PreconditionError("reduction cell is not a 3-ball (homological evidence)")
    iface = reduction_interface(m, d)
    if not _is_disc(iface):
        raise PreconditionError("reduction interface cl(boundary(d) & boundary(m)) is not a disc")
    if _meet(d, m.boundary_triangles) != closure(iface):
        raise PreconditionError("the cell meets the boundary of the manifold outside its interface disc")
    rest = m.tets - d
    if not _is_disc(pure_boundary(d) - iface):
        raise PreconditionError("the cell meets the rest of the manifold outside a disc")
    if _meet(d, rest) != closure(pure_boundary(d) - iface):
        raise PreconditionError("the cell touches the rest of the manifold outside its inner disc")
    kept = closure(rest)
    out = Manifold3.from_tets(rest, {k: [s for s in v if s in kept] for k, v in m.complex.labels.items()})
    if log is not None:
        log.append(OpRecord("reduction", d, iface, m.snapshot(), out.snapshot(), note))
    return out


def extension(
    m: Manifold3,
    w: Iterable[Simplex],
    interface: Iterable[Simplex] | None = None,
    log: HomotopyOpLog | None = None,
    note: str = "",
) -> Manifold3:
    """Attach a 3-cell along a disc in the boundary."""
    w = frozenset(tuple(sorted(t)) for t in w)
    if not w:
        raise PreconditionError("extension cell is empty")
    if w & m.tets:
        raise PreconditionError("extension cell overlaps the interior of the manifold")
    if not _ball_evidence(w):
        raise PreconditionError("extension cell is not a 3-ball (homological evidence)")
    iface = frozenset(pure_boundary(w) & m.boundary_triangles)
    if interface is not None and frozenset(tuple(sorted(t)) for t in interface) != iface:
        raise PreconditionError("declared interface differs from cl(boundary(w) & boundary(m))")
    if not _is_disc(iface):
        raise PreconditionError("extension interface is not a disc")
    shared = closure(w) & m.complex.all_simplices()
    if shared != closure(iface):
        raise PreconditionError("extension cell meets the manifold outside the interface disc")
    out = Manifold3.from_tets(m.tets | w, {k: list(v) for k, v in m.complex.labels.items()})
    if log is not None:
        log.append(OpRecord("extension", w, iface, m.snapshot(), out.snapshot(), note))
    return out


def _hasse(K: SimplicialComplex) -> nx.Graph:
    g = nx.Graph()
    for s in K.all_simplices():
        g.add_node(s, dim=len(s) - 1)
        if len(s) > 1:
            for f in faces(s):
                g.add_edge(s, f)
    return g


def is_isomorphic(a: SimplicialComplex, b: SimplicialComplex) -> bool:
    """Combinatorial isomorphism of two complexes (face posets)."""
    if a.f_vector != b.f_vector:
        return False
    if a.all_simplices() == b.all_simplices():
        return True
    return nx.is_isomorphic(_hasse(a), _hasse(b), node_match=lambda x, y: x["dim"] == y["dim"])


@dataclass
class GlueReport:
    closed_manifold: bool
    euler: int
    ranks: tuple[int, ...]

    @property
    def sphere_evidence(self) -> bool:
        return self.closed_manifold and self.euler == 0 and self.ranks == (1, 0, 0, 1)


def glue_discs(a: Manifold3, b: Manifold3, identification: Mapping[int, int]) -> tuple[Manifold3, GlueReport]:
    """Glue ``b`` to ``a`` along their boundaries; ``identification`` maps boundary vertices of b to a."""
    for name, x in (("a", a), ("b", b)):
        if not x.homotopy_disc_evidence():
            raise PreconditionError(f"{name} fails homotopy-disc evidence")
    bv = b.boundary_vertices
    if set(identification) != set(bv):
        raise StructureError("identification must be defined exactly on the boundary vertices of b")
    image = {tuple(sorted(identification[v] for v in t)) for t in b.boundary_triangles}
    if image != set(a.boundary_triangles):
        raise StructureError("boundary triangulations do not match under the identification")
    nxt = max(a.complex.vertices) + 1
    rename = dict(identification)
    for v in sorted(b.complex.vertices - bv):
        rename[v] = nxt
        nxt += 1
    tets = set(a.tets) | {tuple(sorted(rename[v] for v in t)) for t in b.tets}
    try:
        out = Manifold3.from_tets(tets)
        closed = out.is_closed()
    except StructureError:
        out = Manifold3.from_tets(tets, check=False)
        closed = False
    return out, GlueReport(closed, out.euler, out.ranks)
