"""Layer-stacking embedding of planarly stratified 3-manifolds into R^3.

Stratum i becomes the slab between heights i and i+1, filled by vertical
prisms over a planar layout of its base surface.  Layouts are convex
(Tutte) layouts computed in floating point and rounded to dyadic rationals;
the verifier then decides injectivity with exact rational predicates, so
rounding can only cause a reported failure, never a false pass.
"""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.sparse import lil_matrix
from scipy.sparse.linalg import spsolve

from .complex import Simplex, faces, graph_components
from .errors import PreconditionError, StructureError
from .linking import Manifold3
from .strata import Stratification, is_planar, validate
from .surface import SurfaceComplex, boundary_circles, classify, cycle_order
from .surface import is_planar as surface_is_planar

Point2 = tuple[Fraction, Fraction]
Point3 = tuple[Fraction, Fraction, Fraction]

GRID = 2 ** 24


def _q(x: float) -> Fraction:
    return Fraction(int(round(x * GRID)), GRID)


@dataclass
class EmbeddingResult:
    coords: dict[int, Point3]
    stratification: Stratification
    layouts: list[dict[int, Point2]]
    heights: list[int]
    notes: list[str] = field(default_factory=list)

    def as_array(self, vertices: Iterable[int]) -> np.ndarray:
        return np.array([[float(c) for c in self.coords[v]] for v in vertices])

    def transformed(self, shift: Point3) -> "EmbeddingResult":
        coords = {v: (p[0] + shift[0], p[1] + shift[1], p[2] + shift[2]) for v, p in self.coords.items()}
        return EmbeddingResult(coords, self.stratification, self.layouts, self.heights, list(self.notes))


# --- planar layouts -----------------------------------------------------------

def _polygon(n: int, center: tuple[float, float], radius: float) -> list[tuple[float, float]]:
    return [
        (center[0] + radius * math.cos(2 * math.pi * k / n), center[1] + radius * math.sin(2 * math.pi * k / n))
        for k in range(n)
    ]


def _tutte(
    vertices: set[int],
    edges: Iterable[Simplex],
    fixed: Mapping[int, tuple[float, float]],
) -> dict[int, tuple[float, float]]:
    """Each free vertex at the average of its neighbours; fixed ones stay put."""
    adj: dict[int, set[int]] = defaultdict(set)
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    free = sorted(v for v in vertices if v not in fixed)
    out = {v: fixed[v] for v in vertices if v in fixed}
    if not free:
        return out
    idx = {v: i for i, v in enumerate(free)}
    A = lil_matrix((len(free), len(free)))
    bx = np.zeros(len(free))
    by = np.zeros(len(free))
    for v in free:
        i = idx[v]
        nb = sorted(adj[v])
        if not nb:
            raise StructureError(f"isolated vertex {v} in layout")
        A[i, i] = len(nb)
        for w in nb:
            if w in idx:
                A[i, idx[w]] -= 1
            else:
                bx[i] += fixed[w][0]
                by[i] += fixed[w][1]
    A = A.tocsc()
    xs = np.atleast_1d(spsolve(A, bx))
    ys = np.atleast_1d(spsolve(A, by))
    for v in free:
        out[v] = (float(xs[idx[v]]), float(ys[idx[v]]))
    return out


def layout_component(
    tris: Iterable[Simplex],
    pinned: Mapping[int, Point2],
    offset: float = 0.0,
) -> dict[int, Point2]:
    """Convex layout of a planar surface piece, extending ``pinned`` positions.

    With nothing pinned, the longest boundary circle goes on a regular
    polygon.  Otherwise the longest boundary circle with no pinned vertex is
    placed on a polygon enclosing the pinned points; if there is none, only
    interior free vertices move.  Remaining free circles are filled by a
    virtual cone vertex so that every free vertex is a convex combination of
    its neighbours.
    """
    tris = [tuple(sorted(t)) for t in tris]
    s = SurfaceComplex.from_triangles(tris)
    c = classify(s)
    if not c.orientable or c.genus != 0:
        raise StructureError("layout needs an orientable genus-0 piece")
    circles = [cycle_order(k) for k in boundary_circles(s)]
    free_circles = [cy for cy in circles if not any(v in pinned for v in cy)]
    fixed: dict[int, tuple[float, float]] = {v: (float(p[0]), float(p[1])) for v, p in pinned.items() if v in s.vertices}
    edges = set(s.simplices(1))
    verts = set(s.vertices)
    if fixed:
        pts = np.array(list(fixed.values()))
        center = tuple(pts.mean(axis=0))
        radius = 2.0 * float(np.max(np.hypot(pts[:, 0] - center[0], pts[:, 1] - center[1]))) + 1.0
    else:
        center, radius = (offset, 0.0), 1.0
    outer = None
    if free_circles and (not fixed or len(free_circles) == len(circles) or _pinned_inside(circles, pinned)):
        outer = max(free_circles, key=lambda cy: (len(cy), -min(cy)))
        n = len(outer)
        radius = max(radius, n / (2 * math.pi))
        for v, p in zip(outer, _polygon(n, center, radius)):
            fixed[v] = p
    if not fixed:
        raise StructureError("closed piece cannot be laid out in the plane")
    nxt = max(verts) + 1
    for cy in free_circles:
        if cy is outer:
            continue
        for v in cy:
            edges.add((min(v, nxt), max(v, nxt)))
        verts.add(nxt)
        nxt += 1
    pos = _tutte(verts, edges, fixed)
    out: dict[int, Point2] = {}
    for v in s.vertices:
        if v in pinned:
            out[v] = pinned[v]
        else:
            out[v] = (_q(pos[v][0]), _q(pos[v][1]))
    return out


def _pinned_inside(circles, pinned) -> bool:
    """Every boundary circle that has pinned vertices is entirely pinned."""
    return all(all(v in pinned for v in cy) for cy in circles if any(v in pinned for v in cy))


def _layout_level(level: set[Simplex], pos: dict[int, Point2], extent: list[float], where: str) -> None:
    for comp in _triangle_components(level):
        vs = {v for t in comp for v in t}
        if vs <= pos.keys():
            continue
        pinned = {v: pos[v] for v in vs if v in pos}
        try:
            lay = layout_component(comp, pinned, offset=extent[0] + 3.0 if not pinned else 0.0)
        except StructureError as exc:
            raise StructureError(f"layout extension infeasible at {where}, component with vertices {sorted(vs)[:8]}: {exc}") from None
        pos.update(lay)
        extent[0] = max(extent[0], max(float(p[0]) for p in pos.values()))


def projected_surface(st: Stratification) -> tuple[dict[int, int], set[Simplex]] | None:
    """Union of all layers after identifying each stratum's lower and upper copies.

    Returns the vertex-to-class map and the triangles of the projected
    union, or None when some base does not map injectively.
    """
    parent: dict[int, int] = {}

    def find(v: int) -> int:
        parent.setdefault(v, v)
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for s in st.strata:
        for b in s.base.vertices:
            a, c = find(s.lower[b]), find(s.upper[b])
            if a != c:
                parent[max(a, c)] = min(a, c)
    cls = {v: find(v) for s in st.strata for v in s.vertices}
    tris: set[Simplex] = set()
    for s in st.strata:
        if len({cls[s.lower[b]] for b in s.base.vertices}) != len(s.base.vertices):
            return None
        tris |= {tuple(sorted(cls[s.lower[v]] for v in t)) for t in s.base.simplices(2)}
    return cls, tris


def embed_planar(h: Manifold3, st: Stratification) -> EmbeddingResult:
    """Stack vertical prisms over planar layouts, stratum i in the slab i <= z <= i+1.

    When the projected union of all layers is itself a planar surface, it is
    laid out once and every layer layout is a restriction of it; so each
    extension of a layout contains the previous one by construction.
    Otherwise each level layout extends the one below it.
    """
    if not is_planar(st):
        raise PreconditionError("stratification is not planar")
    rep = validate(st)
    if not rep.ok:
        raise PreconditionError("stratification does not validate")
    if st.union.simplices(3) != h.tets:
        raise PreconditionError("the strata do not make up the manifold")
    strata = st.strata
    r = len(strata)
    pos: dict[int, Point2] = {}
    notes: list[str] = []
    proj = projected_surface(st)
    master = None
    if proj is not None:
        try:
            if surface_is_planar(SurfaceComplex.from_triangles(proj[1])):
                master = proj
        except StructureError:
            master = None
    if master is not None:
        cls, tris = master
        flat: dict[int, Point2] = {}
        _layout_level(tris, flat, [0.0], "the projected surface")
        pos = {v: flat[c] for v, c in cls.items()}
        notes.append("layouts restricted from one layout of the projected union of the layers")
    else:
        extent = [0.0]
        for i, s in enumerate(strata):
            below = strata[i - 1].upper_surface.simplices(2) if i else frozenset()
            _layout_level(set(below) | set(s.lower_surface.simplices(2)), pos, extent, f"level {i}")
            for b, g in s.lower.items():
                pos[s.upper[b]] = pos[g]
        notes.append("layouts extended level by level")
    height: dict[int, int] = {}
    layouts: list[dict[int, Point2]] = []
    for i, s in enumerate(strata):
        layouts.append({b: pos[g] for b, g in s.lower.items()})
        for g in s.lower.values():
            height[g] = i
        for g in s.upper.values():
            height[g] = i + 1
    coords = {v: (pos[v][0], pos[v][1], Fraction(height[v])) for v in height}
    missing = h.complex.vertices - coords.keys()
    if missing:
        raise StructureError(f"vertices {sorted(missing)[:5]} received no coordinates")
    return EmbeddingResult(coords, st, layouts, list(range(r + 1)), notes)


def _triangle_components(tris: Iterable[Simplex]) -> list[list[Simplex]]:
    tris = sorted(tris)
    verts = {v for t in tris for v in t}
    edges = {e for t in tris for e in faces(t)}
    comps = graph_components(verts, edges)
    out = []
    for c in sorted(comps, key=min):
        out.append([t for t in tris if t[0] in c])
    return out


# --- exact predicates -----------------------------------------------------------

def _orient2(a: Point2, b: Point2, c: Point2) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _in_closed_cone(v: Point2, a: Point2, b: Point2, p: Point2) -> bool:
    """Is p - v in the closed convex cone spanned by a - v and b - v (angle < pi)?"""
    o = _sign(_orient2(v, a, b))
    return _sign(_orient2(v, a, p)) * o >= 0 and _sign(_orient2(v, p, b)) * o >= 0


def _axis_separates(P: list[Point2], Q: list[Point2]) -> bool:
    for poly in (P, Q):
        n = len(poly)
        for i in range(n):
            a, b = poly[i], poly[(i + 1) % n]
            nx, ny = b[1] - a[1], a[0] - b[0]
            pp = [nx * p[0] + ny * p[1] for p in P]
            qq = [nx * q[0] + ny * q[1] for q in Q]
            if max(pp) < min(qq) or max(qq) < min(pp):
                return True
    return False


def triangles_meet_properly(t1: Simplex, t2: Simplex, pos: Mapping[int, Point2]) -> bool:
    """Exact test: the images of two triangles meet exactly in their common face."""
    shared = set(t1) & set(t2)
    P = [pos[v] for v in t1]
    Q = [pos[v] for v in t2]
    if len(shared) == 3:
        return True
    if len(shared) == 2:
        a, b = (pos[v] for v in sorted(shared))
        c1 = pos[(set(t1) - shared).pop()]
        c2 = pos[(set(t2) - shared).pop()]
        return _sign(_orient2(a, b, c1)) * _sign(_orient2(a, b, c2)) < 0
    if len(shared) == 1:
        v = shared.pop()
        pv = pos[v]
        a1, b1 = (pos[w] for w in t1 if w != v)
        a2, b2 = (pos[w] for w in t2 if w != v)
        for p in (a2, b2):
            if _in_closed_cone(pv, a1, b1, p):
                return False
        for p in (a1, b1):
            if _in_closed_cone(pv, a2, b2, p):
                return False
        return True
    return _axis_separates(P, Q)


def _orient3(a: Point3, b: Point3, c: Point3, d: Point3) -> Fraction:
    ux, uy, uz = (b[i] - a[i] for i in range(3))
    vx, vy, vz = (c[i] - a[i] for i in range(3))
    wx, wy, wz = (d[i] - a[i] for i in range(3))
    return ux * (vy * wz - vz * wy) - uy * (vx * wz - vz * wx) + uz * (vx * wy - vy * wx)


def _solve(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    n = len(M)
    A = [row[:] + [r] for row, r in zip(M, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [A[r][n] for r in range(n)]


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _strictly_separates(n, left, right) -> bool:
    return all(_dot(n, r) > 0 for r in left) and all(_dot(n, r) < 0 for r in right)


def _cone_separable(left, right, candidates) -> bool:
    """Is there n with n.r > 0 on ``left`` and n.r < 0 on ``right``?

    The closed solution cone is pointed; when the open one is non-empty the
    sum of its extreme rays lies inside it, and every extreme ray is among
    ``candidates`` up to sign.
    """
    total = (0, 0, 0)
    for c in candidates:
        for n in (c, (-c[0], -c[1], -c[2])):
            if n != (0, 0, 0) and all(_dot(n, r) >= 0 for r in left) and all(_dot(n, r) <= 0 for r in right):
                total = (total[0] + n[0], total[1] + n[1], total[2] + n[2])
    return _strictly_separates(total, left, right)


def _tet_faces(pts):
    return [(pts[i], pts[j], pts[k]) for i, j, k in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))]


def _tet_edges(pts):
    return [_sub(pts[j], pts[i]) for i, j in combinations(range(len(pts)), 2)]


def simplices_meet_properly(s1: Simplex, s2: Simplex, pos: Mapping[int, Point3]) -> bool:
    """Exact test in R^3: the images of two simplices meet exactly in their common face.

    Two non-degenerate simplices do so iff some plane through the common face
    has the remaining vertices of each strictly on opposite sides.
    """
    shared = sorted(set(s1) & set(s2))
    o1 = [pos[v] for v in s1 if v not in shared]
    o2 = [pos[v] for v in s2 if v not in shared]
    if not o1 or not o2:
        return True
    if not shared:
        P, Q = [pos[v] for v in s1], [pos[v] for v in s2]
        axes = []
        for pts in (P, Q):
            if len(pts) == 4:
                axes += [_cross(_sub(b, a), _sub(c, a)) for a, b, c in _tet_faces(pts)]
        axes += [_cross(e, f) for e in _tet_edges(P) for f in _tet_edges(Q)]
        for n in axes:
            if n == (0, 0, 0):
                continue
            pp = [_dot(n, p) for p in P]
            qq = [_dot(n, q) for q in Q]
            if max(pp) < min(qq) or max(qq) < min(pp):
                return True
        return False
    base = pos[shared[0]]
    left = [_sub(p, base) for p in o1]
    right = [_sub(p, base) for p in o2]
    span = [_sub(pos[v], base) for v in shared[1:]]
    if len(span) == 2:
        n = _cross(span[0], span[1])
        return _strictly_separates(n, left, right) or _strictly_separates(n, right, left)
    if len(span) == 1:
        d = span[0]
        cands = [_cross(d, r) for r in left + right]
        return _cone_separable(left, right, cands)
    rays = left + right
    cands = [_cross(a, b) for a, b in combinations(rays, 2)]
    return _cone_separable(left, right, cands)


def _independent_rows(A: list[list[Fraction]], rhs: list[Fraction]) -> list[int] | None:
    """Indices of a maximal independent set of rows, or None if the system is inconsistent."""
    reduced: list[list[Fraction]] = []
    pivots: list[int] = []
    keep = []
    for r, row in enumerate(A):
        v = list(row) + [rhs[r]]
        for piv, red in zip(pivots, reduced):
            if v[piv]:
                f = v[piv] / red[piv]
                v = [x - f * y for x, y in zip(v, red)]
        nz = next((j for j in range(len(row)) if v[j]), None)
        if nz is None:
            if v[-1]:
                return None
            continue
        reduced.append(v)
        pivots.append(nz)
        keep.append(r)
    return keep


def simplices_meet_properly_lp(s1: Simplex, s2: Simplex, pos: Mapping[int, Point3]) -> bool:
    """Reference version of :func:`simplices_meet_properly` by exact linear programming.

    A violation is a common point whose barycentric coordinates in ``s1``
    weigh a vertex not shared with ``s2``.  The optimum of that program sits
    at a basic solution, and all basic solutions are enumerated.
    """
    shared = set(s1) & set(s2)
    if not set(s1) - shared or not set(s2) - shared:
        return True
    cols = [(v, 1) for v in s1] + [(v, 2) for v in s2]
    rows = 5
    A = [[Fraction(0)] * len(cols) for _ in range(rows)]
    for j, (v, side) in enumerate(cols):
        p = pos[v]
        for k in range(3):
            A[k][j] = Fraction(p[k]) if side == 1 else -Fraction(p[k])
        A[3][j] = Fraction(side == 1)
        A[4][j] = Fraction(side == 2)
    rhs = [Fraction(0)] * 3 + [Fraction(1), Fraction(1)]
    keep = _independent_rows(A, rhs)
    if keep is None:
        return True
    A, rhs, rows = [A[r] for r in keep], [rhs[r] for r in keep], len(keep)
    objective = [int(side == 1 and v not in shared) for v, side in cols]
    for basis in combinations(range(len(cols)), rows):
        sol = _solve([[A[r][j] for j in basis] for r in range(rows)], rhs)
        if sol is None or any(x < 0 for x in sol):
            continue
        if sum(objective[j] * x for j, x in zip(basis, sol)) > 0:
            return False
    return True


# --- verification ---------------------------------------------------------------

@dataclass
class EmbeddingReport:
    mode: str
    covers_all: bool
    nondegenerate: bool
    pairs_checked: int
    violations: list[str]
    boundary_closed_surface: bool

    @property
    def ok(self) -> bool:
        return self.covers_all and self.nondegenerate and not self.violations and self.boundary_closed_surface


def _bucket_pairs(boxes: dict[Simplex, tuple], cell: Fraction) -> set[tuple[Simplex, Simplex]]:
    grid: dict[tuple, list[Simplex]] = defaultdict(list)
    for s, (lo, hi) in boxes.items():
        ranges = [range(int(lo[k] // cell), int(hi[k] // cell) + 1) for k in range(len(lo))]
        for key in _product(ranges):
            grid[key].append(s)
    pairs = set()
    for items in grid.values():
        for a, b in combinations(sorted(items), 2):
            la, ha = boxes[a]
            lb, hb = boxes[b]
            if all(la[k] <= hb[k] and lb[k] <= ha[k] for k in range(len(la))):
                pairs.add((a, b))
    return pairs


def _product(ranges):
    if not ranges:
        yield ()
        return
    for x in ranges[0]:
        for rest in _product(ranges[1:]):
            yield (x,) + rest


def _box(pts):
    return tuple(min(p[k] for p in pts) for k in range(len(pts[0]))), tuple(max(p[k] for p in pts) for k in range(len(pts[0])))


def _cell_size(boxes) -> Fraction:
    spans = sorted(max(hi[k] - lo[k] for k in range(len(lo))) for lo, hi in boxes.values())
    med = spans[len(spans) // 2] if spans else Fraction(1)
    return med if med > 0 else Fraction(1)


def check_planar_layout(tris: Iterable[Simplex], pos: Mapping[int, Point2]) -> list[str]:
    tris = sorted(set(tris))
    bad = [f"degenerate triangle {t}" for t in tris if _orient2(*(pos[v] for v in t)) == 0]
    boxes = {t: _box([pos[v] for v in t]) for t in tris}
    for a, b in sorted(_bucket_pairs(boxes, _cell_size(boxes))):
        if not triangles_meet_properly(a, b, pos):
            bad.append(f"triangles {a} and {b} overlap")
    return bad


def _vertical_structure(e: EmbeddingResult) -> list[tuple[Fraction, Fraction]] | None:
    """Slab heights if every stratum is a stack of vertical prisms, else None."""
    slabs = []
    for s in e.stratification.strata:
        zl = {e.coords[g][2] for g in s.lower.values()}
        zu = {e.coords[g][2] for g in s.upper.values()}
        if len(zl) != 1 or len(zu) != 1:
            return None
        lo, hi = zl.pop(), zu.pop()
        if hi <= lo:
            return None
        for b in s.base.vertices:
            p, q = e.coords[s.lower[b]], e.coords[s.upper[b]]
            if p[:2] != q[:2]:
                return None
        slabs.append((lo, hi))
    for (a0, a1), (b0, b1) in zip(slabs, slabs[1:]):
        if not a1 <= b0:
            return None
    return slabs


def verify_embedding(e: EmbeddingResult, h: Manifold3, mode: str = "fast") -> EmbeddingReport:
    """Exact injectivity check of a simplexwise-linear map of ``h``.

    ``fast`` uses the slab structure: vertical prisms over planar layouts are
    embedded iff every layer layout and every interface plane is embedded in
    the plane.  ``exhaustive`` tests every pair of tetrahedra with
    overlapping boxes in R^3.  Fast mode falls back to exhaustive when the
    coordinates are not in slab form.
    """
    covers = h.complex.vertices <= e.coords.keys()
    if not covers:
        return EmbeddingReport(mode, False, False, 0, ["vertices without coordinates"], False)
    e = _integral(e)
    tets = sorted(h.tets)
    nondeg = all(_orient3(*(e.coords[v] for v in t)) != 0 for t in tets)
    violations: list[str] = []
    if not nondeg:
        violations += [f"degenerate tetrahedron {t}" for t in tets if _orient3(*(e.coords[v] for v in t)) == 0][:10]
    slabs = _vertical_structure(e) if mode == "fast" else None
    checked = 0
    if slabs is not None:
        st = e.stratification
        for i, s in enumerate(st.strata):
            pos2 = {g: e.coords[g][:2] for g in s.lower.values()}
            tri = s.lower_surface.simplices(2)
            violations += [f"layer {i}: {m}" for m in check_planar_layout(tri, pos2)]
            checked += len(tri)
        for i in range(1, len(st.strata)):
            if slabs[i - 1][1] != slabs[i][0]:
                continue
            plane = set(st.strata[i - 1].upper_surface.simplices(2)) | set(st.strata[i].lower_surface.simplices(2))
            pos2 = {v: e.coords[v][:2] for t in plane for v in t}
            violations += [f"plane {i}: {m}" for m in check_planar_layout(plane, pos2)]
            checked += len(plane)
        used = "fast"
    else:
        boxes = {t: _box([e.coords[v] for v in t]) for t in tets}
        pairs = _bucket_pairs(boxes, _cell_size(boxes))
        for a, b in sorted(pairs):
            checked += 1
            if not simplices_meet_properly(a, b, e.coords):
                violations.append(f"tetrahedra {a} and {b} overlap")
        used = "exhaustive"
    try:
        bs = h.boundary_surface
        bc = classify(bs)
        closed = bc.boundary_count == 0 and all(
            _cross_nonzero(*(e.coords[v] for v in t)) for t in bs.simplices(2)
        )
    except StructureError:
        closed = False
    return EmbeddingReport(used, covers, nondeg, checked, violations, closed)


def _integral(e: EmbeddingResult) -> EmbeddingResult:
    """Same embedding scaled by a positive integer so all coordinates are integers.

    Every predicate used here is invariant under positive scaling, and
    integer arithmetic is much faster than rational arithmetic.
    """
    den = 1
    for p in e.coords.values():
        for x in p:
            den = math.lcm(den, Fraction(x).denominator)
    coords = {v: tuple(int(Fraction(x) * den) for x in p) for v, p in e.coords.items()}
    return EmbeddingResult(coords, e.stratification, e.layouts, e.heights, e.notes)


def _cross_nonzero(a: Point3, b: Point3, c: Point3) -> bool:
    u = [b[i] - a[i] for i in range(3)]
    v = [c[i] - a[i] for i in range(3)]
    return any(x != 0 for x in (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]))
