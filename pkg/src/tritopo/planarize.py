"""Auditable executor for the planarization procedure of a true companion.

The procedure locates the first non-planar layer, tries to restore the
inverted pyramid property below it by attaching 3-cells, finds an essential
circle in that layer off the layer beneath, pushes in a splitting disc
bounded by it and splits.  Each step is certified on its own; the executor
reports what it finds and never concludes more than it has checked.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .complex import ChainZ2, Simplex, boundary, closure, facet_components, is_boundary
from .companion import CompanionState
from .errors import PreconditionError, StructureError, TopologyError
from .homotopy import HomotopyOpLog, extension
from .linking import Manifold3, SplitResult, SplittingDisc, boundary_sides, collar_over, split_along_disc
from .strata import Stratification, Stratum, pyramid_check, validate
from .surface import SurfaceComplex, avoids_interior, classify, components, find_nontrivial_circle, is_simple_circle

GAP = (
    "the procedure reaches a contradiction without a constructive genus-reducing step; "
    "this executor exhibits the objects involved and does not decide the outcome"
)


@dataclass
class Step:
    kind: str
    detail: str
    validates: bool
    ranks_preserved: bool


@dataclass
class Attachment:
    """A case-(3) cell: ``W`` over the disc ``P`` of U(S_i) outside L(S_{i+1})."""

    stratum: int
    P: frozenset[Simplex]
    W: frozenset[Simplex]
    interface: frozenset[Simplex]


@dataclass
class PlanarizationState:
    H: Manifold3
    stratification: Stratification
    r: int | None
    delta: float = 0.5
    steps: list[Step] = field(default_factory=list)
    attachments: list[Attachment] = field(default_factory=list)
    log: HomotopyOpLog = field(default_factory=HomotopyOpLog)
    C: ChainZ2 | None = None
    circle_checks: dict[str, bool] = field(default_factory=dict)
    disc: SplittingDisc | None = None
    disc_checks: dict[str, bool] = field(default_factory=dict)
    split: SplitResult | None = None
    Z: ChainZ2 | None = None
    Z_boundary: ChainZ2 | None = None
    audit: dict[str, bool] = field(default_factory=dict)
    verdict: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def steps_certified(self) -> bool:
        return all(s.validates and s.ranks_preserved for s in self.steps)

    def lines(self) -> list[str]:
        out = [f"verdict: {self.verdict}", f"first non-planar layer: {self.r}"]
        for i, s in enumerate(self.steps):
            out.append(f"step {i + 1}: {s.kind} {s.detail} validates={s.validates} ranks_preserved={s.ranks_preserved}")
        for name, checks in (("circle", self.circle_checks), ("disc", self.disc_checks), ("audit", self.audit)):
            for k, v in checks.items():
                out.append(f"{name}.{k}: {v}")
        out += [f"note: {n}" for n in self.notes]
        return out


def first_nonplanar(st: Stratification) -> int | None:
    """1-based index of the first stratum with a non-planar base."""
    for i, s in enumerate(st.strata):
        for comp in components(s.base):
            c = comp.classification
            if not c.orientable or c.genus != 0 or c.boundary_count == 0:
                return i + 1
    return None


# --- case (3): attach P x I ---------------------------------------------------

def case3_extension(H: Manifold3, st: Stratification, i: int, log: HomotopyOpLog | None = None) -> tuple[Manifold3, Stratification, Attachment]:
    """Absorb a disc component P of U(S_i) outside L(S_{i+1}) into S_{i+1} (0-based i).

    The cell W = P x [0,1] meets H in P together with the vertical walls
    over the edges of P shared with the next layer.
    """
    s, t = st.strata[i], st.strata[i + 1]
    over = set(s.upper_surface.simplices(2)) - set(t.lower_surface.simplices(2))
    if not over:
        raise PreconditionError(f"U(S_{i + 1}) already lies in L(S_{i + 2})")
    pieces = [p for p in facet_components(sorted(over)) if _is_disc(p)]
    if not pieces:
        raise PreconditionError("no component of the overhang is a disc")
    P = frozenset(min(pieces, key=lambda p: (len(p), sorted(p))))
    inv = {g: b for b, g in t.lower.items()}
    nxt_local = max(t.base.vertices) + 1
    nxt_global = max(H.complex.vertices | st.vertices) + 1
    lower, upper = dict(t.lower), dict(t.upper)
    for g in sorted({v for tri in P for v in tri}):
        if g in inv:
            continue
        inv[g] = nxt_local
        lower[nxt_local] = g
        upper[nxt_local] = nxt_global
        nxt_local += 1
        nxt_global += 1
    tris = list(t.base.simplices(2)) + [tuple(sorted(inv[v] for v in tri)) for tri in P]
    try:
        base = SurfaceComplex.from_triangles(tris)
    except StructureError as exc:
        raise PreconditionError(f"the enlarged base is not a surface: {exc}") from None
    new_t = Stratum.of(base, lower, upper, t.name)
    W = frozenset(new_t.body.simplices(3) - t.body.simplices(3))
    H2 = extension(H, W, log=log, note=f"case (3) over U(S_{i + 1})")
    strata = list(st.strata)
    strata[i + 1] = new_t
    st2 = Stratification(tuple(strata))
    iface = log.records[-1].interface if log is not None and log.records else frozenset()
    return H2, st2, Attachment(i, P, W, iface)


def _edge_parity(tris) -> frozenset[Simplex]:
    count = Counter(e for t in tris for e in combinations(t, 2))
    return frozenset(e for e, n in count.items() if n % 2)


def _is_disc(tris) -> bool:
    try:
        c = classify(SurfaceComplex.from_triangles(tris))
    except StructureError:
        return False
    return c.orientable and c.genus == 0 and c.boundary_count == 1


# --- the loop -----------------------------------------------------------------

def planarize(cs: CompanionState, budget: int = 20) -> PlanarizationState:
    H, st = cs.H, cs.stratification
    if not validate(st).ok:
        raise PreconditionError("companion stratification does not validate")
    state = PlanarizationState(H, st, first_nonplanar(st))
    if state.r is None:
        state.verdict = "planar"
        return state
    ranks = H.ranks
    used = 0
    stuck = False
    while not pyramid_check(state.stratification, state.r) and not stuck:
        if used >= budget:
            state.verdict = "budget exhausted"
            state.notes.append(f"stopped after {used} steps while restoring the pyramid property")
            return state
        i = next(
            j for j in range(state.r - 1)
            if not set(state.stratification.strata[j].upper_surface.simplices(2))
            <= set(state.stratification.strata[j + 1].lower_surface.simplices(2))
        )
        try:
            H2, st2, att = case3_extension(state.H, state.stratification, i, state.log)
        except TopologyError as exc:
            state.notes.append(f"case (3) over U(S_{i + 1}) not performed: {exc}")
            stuck = True
            break
        ok = validate(st2).ok and st2.union.simplices(3) == H2.tets
        state.steps.append(Step("case-3 extension", f"P={len(att.P)} triangles, W={len(att.W)} tetrahedra", ok, H2.ranks == ranks))
        used += 1
        if not ok:
            state.notes.append("the extended stratification does not validate; the extension is not adopted")
            stuck = True
            break
        state.H, state.stratification = H2, st2
        state.attachments.append(att)
        r = first_nonplanar(st2)
        if r is None:
            state.r = None
            state.verdict = "planar"
            return state
        state.r = r
    if stuck:
        state.notes.append("pyramid property below the non-planar layer not reached; steps (iii)-(v) run on the current stratification")
    _circle_disc_split(state)
    return state


def _circle_disc_split(state: PlanarizationState) -> None:
    st, H, r = state.stratification, state.H, state.r
    Sr = st.strata[r - 1]
    L = Sr.lower_surface
    U_prev = st.strata[r - 2].upper_surface if r >= 2 else SurfaceComplex()
    comp = next(
        c for c in components(L)
        if c.classification.genus > 0 or not c.classification.orientable or c.classification.boundary_count == 0
    )
    T_tris = set(U_prev.simplices(2)) & set(comp.simplices(2))
    T = SurfaceComplex.from_triangles(sorted(T_tris)) if T_tris else SurfaceComplex()
    C = None
    # first try to avoid every vertex of U(S_{r-1}) by searching off its star
    star = [t for t in comp.simplices(2) if set(t) & U_prev.vertices]
    for cand in (star, sorted(T_tris)):
        try:
            Tc = SurfaceComplex.from_triangles(cand) if cand else SurfaceComplex()
            C = find_nontrivial_circle(comp, Tc)
            break
        except TopologyError:
            continue
    if C is None:
        state.verdict = "stopped at circle search"
        state.notes.append("no essential circle found off the lower layer")
        return
    state.C = C
    u_verts = U_prev.vertices
    state.circle_checks = {
        "simple": is_simple_circle(C),
        "non_bounding_in_layer": not is_boundary(C, comp)[0],
        "avoids_interior_of_lower_layer": avoids_interior(comp, C, T),
        "disjoint_from_lower_layer": not (C.vertices & u_verts),
        "in_boundary_of_H": C.support <= H.boundary_edges,
    }
    if not state.circle_checks["in_boundary_of_H"]:
        state.verdict = "stopped at splitting disc"
        state.notes.append("the circle is not in the boundary of H")
        return

    # (iv) push the side of C avoiding the lower strata into H along a collar
    sides = boundary_sides(H, C)
    lower_verts = set().union(*(s.vertices for s in st.strata[: r - 1])) if r > 1 else set()
    scored = sorted(
        range(len(sides)),
        key=lambda k: (len({v for t in sides[k] for v in t} & lower_verts - C.vertices), len(sides[k]), sorted(sides[k])),
    )
    side = sides[scored[0]] if sides else []
    try:
        M2, D = collar_over(H, side, C)
    except TopologyError as exc:
        state.verdict = "stopped at splitting disc"
        state.notes.append(f"collar failed: {exc}")
        return
    state.disc = D
    state.disc_checks = {
        "boundary_is_C": D.boundary.support == C.support,
        "avoids_lower_strata": not ({v for t in D.triangles for v in t} - C.vertices) & lower_verts,
        "collar_preserves_ranks": M2.ranks == H.ranks,
    }

    # (v) split and record U meet L(S_r)
    res = split_along_disc(M2, D)
    state.split = res
    if res.components != 2:
        state.verdict = "stopped at split"
        state.notes.append(f"the disc leaves {res.components} component(s)")
        return
    L_tris = set(comp.simplices(2))
    pieces = [(x, frozenset(L_tris & x.complex.simplices(2))) for x in (res.U, res.V)]
    U, Z = max(pieces, key=lambda p: (len(p[1]), sorted(p[1])))
    state.Z = ChainZ2(2, Z)
    state.Z_boundary = boundary(state.Z)
    frontier = set(comp.boundary_edges) | (set(T.boundary_edges) if T_tris else set())
    diff = state.Z_boundary.support ^ C.support
    state.audit = {
        "split_two_pieces": res.components == 2,
        "split_ok": res.ok,
        "recorded_boundary_consistent": _edge_parity(Z) == state.Z_boundary.support,
        "Z_boundary_equals_C": state.Z_boundary.support == C.support,
        "Z_boundary_equals_C_mod_layer_frontier": diff <= frontier,
        "C_bounds_in_layer": is_boundary(C, comp)[0],
    }
    if state.audit["Z_boundary_equals_C"]:
        state.verdict = "contradiction object exhibited: Z is a 2-chain in L(S_r) bounded by C"
    else:
        state.verdict = (
            "non-planar layer persists: the split does not yield a 2-chain of L(S_r) bounded by C "
            "(its boundary differs from C along the layer frontier); " + GAP
        )
