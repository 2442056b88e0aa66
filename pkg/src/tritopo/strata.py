"""Stratifications of 3-manifolds into surface-times-interval products.

Every stratum stores its base surface in local vertex ids together with two
injective maps into global ids: ``lower`` (level 0) and ``upper`` (level 1).
Consecutive strata are glued implicitly, by sharing global ids, so the
gluing is the identity on the shared subsurface and both intersection
conditions can be checked by comparing simplex sets.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .complex import (
    Prism,
    PrismComplex,
    Simplex,
    SimplicialComplex,
    all_faces,
    barycentric_subdivision,
    closure,
    prism_to_simplicial,
)
from .errors import PreconditionError, StructureError
from .surface import SurfaceComplex, classify, components as surface_components, is_planar as surface_is_planar


def _frozen(m: Mapping[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(m.items()))


@dataclass(frozen=True)
class Stratum:
    base: SurfaceComplex
    lower_map: tuple[tuple[int, int], ...]
    upper_map: tuple[tuple[int, int], ...]
    name: str = ""

    @classmethod
    def of(cls, base: SurfaceComplex | Iterable[Simplex], lower: Mapping[int, int], upper: Mapping[int, int], name: str = "") -> "Stratum":
        if not isinstance(base, SurfaceComplex):
            base = SurfaceComplex.from_triangles(base)
        return cls(base, _frozen(lower), _frozen(upper), name)

    @classmethod
    def product(cls, base: SurfaceComplex, offset_lower: int, offset_upper: int, name: str = "") -> "Stratum":
        """Stratum whose lower/upper ids are the base ids shifted by constants."""
        vs = sorted(base.vertices)
        return cls.of(base, {v: v + offset_lower for v in vs}, {v: v + offset_upper for v in vs}, name)

    @cached_property
    def lower(self) -> dict[int, int]:
        return dict(self.lower_map)

    @cached_property
    def upper(self) -> dict[int, int]:
        return dict(self.upper_map)

    def _image(self, m: Mapping[int, int], simplices: Iterable[Simplex]) -> list[Simplex]:
        return [tuple(sorted(m[v] for v in s)) for s in simplices]

    @cached_property
    def lower_surface(self) -> SurfaceComplex:
        return SurfaceComplex.from_triangles(self._image(self.lower, self.base.simplices(2)))

    @cached_property
    def upper_surface(self) -> SurfaceComplex:
        return SurfaceComplex.from_triangles(self._image(self.upper, self.base.simplices(2)))

    @cached_property
    def prisms(self) -> PrismComplex:
        cells = []
        for t in self.base.sorted(2):
            cells.append(Prism(tuple(self.lower[v] for v in t), tuple(self.upper[v] for v in t), (self.name, t)))
        return PrismComplex(tuple(cells))

    @cached_property
    def body(self) -> SimplicialComplex:
        return prism_to_simplicial(self.prisms)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.lower.values()) | frozenset(self.upper.values())


@dataclass(frozen=True)
class Stratification:
    strata: tuple[Stratum, ...]
    parents: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.strata)

    def __getitem__(self, i: int) -> Stratum:
        return self.strata[i]

    def gluing(self, i: int) -> frozenset[Simplex]:
        """Simplices identified between U(S_i) and L(S_{i+1})."""
        return self.strata[i].upper_surface.all_simplices() & self.strata[i + 1].lower_surface.all_simplices()

    @cached_property
    def union(self) -> SimplicialComplex:
        tets: set[Simplex] = set()
        for s in self.strata:
            tets |= s.body.simplices(3)
        return SimplicialComplex(tets, close=True)

    @property
    def vertices(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for s in self.strata:
            out |= s.vertices
        return out


@dataclass
class Violation:
    kind: str
    strata: tuple[int, ...]
    cells: tuple = ()

    def __str__(self) -> str:
        cells = f" cells={list(self.cells)[:6]}" if self.cells else ""
        return f"{self.kind} strata={self.strata}{cells}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __bool__(self) -> bool:
        return self.ok


def validate(st: Stratification) -> ValidationReport:
    rep = ValidationReport()
    bodies: list[SimplicialComplex | None] = []
    for i, s in enumerate(st.strata):
        lo, up = s.lower, s.upper
        bv = s.base.vertices
        if set(lo) != bv or set(up) != bv:
            rep.violations.append(Violation("level-map-domain", (i,)))
        if len(set(lo.values())) != len(lo) or len(set(up.values())) != len(up):
            rep.violations.append(Violation("level-map-not-injective", (i,)))
        clash = set(lo.values()) & set(up.values())
        if clash:
            rep.violations.append(Violation("levels-overlap", (i,), tuple(sorted(clash))))
        for comp in surface_components(s.base):
            if not comp.classification.orientable:
                rep.violations.append(Violation("base-non-orientable", (i,)))
        try:
            tags_ok = all(c.tag is not None and c.tag[1] in s.base.simplices(2) for c in s.prisms.cells)
        except StructureError as exc:
            rep.violations.append(Violation(f"prism-invalid: {exc}", (i,)))
            bodies.append(None)
            continue
        if not tags_ok:
            rep.violations.append(Violation("product-tag", (i,)))
        try:
            bodies.append(s.body)
        except StructureError as exc:
            rep.violations.append(Violation(f"body-invalid: {exc}", (i,)))
            bodies.append(None)
    r = len(st.strata)
    for i in range(r):
        for j in range(i + 1, r):
            if bodies[i] is None or bodies[j] is None:
                continue
            inter = bodies[i].all_simplices() & bodies[j].all_simplices()
            if j == i + 1:
                expected = st.strata[i].upper_surface.all_simplices() & st.strata[j].lower_surface.all_simplices()
                if inter != expected:
                    extra = sorted(inter - expected)
                    missing = sorted(expected - inter)
                    rep.violations.append(Violation("adjacent-intersection", (i, j), tuple(extra or missing)))
            elif inter:
                rep.violations.append(Violation("distant-intersection", (i, j), tuple(sorted(inter))))
    return rep


def is_planar(st: Stratification) -> bool:
    return all(surface_is_planar(s.base) for s in st.strata)


def pyramid_check(st: Stratification, up_to: int | None = None) -> bool:
    """U(S_i) is contained in L(S_{i+1}) for all 1-based i < up_to."""
    r = len(st.strata)
    up_to = r if up_to is None else min(up_to, r)
    for i in range(up_to - 1):
        if not st.strata[i].upper_surface.all_simplices() <= st.strata[i + 1].lower_surface.all_simplices():
            return False
    return True


# --- refinement -----------------------------------------------------------

@dataclass(frozen=True)
class Cut:
    """Per-stratum refinement request: split at mid-level and/or subdivide the base."""

    level: bool = False
    subdivide: bool = False


def _subdivision_closure(st: Stratification, seeds: set[int]) -> set[int]:
    """Strata whose bases must be subdivided together so interfaces keep matching."""
    todo = list(seeds)
    out = set(seeds)
    r = len(st.strata)
    while todo:
        i = todo.pop()
        for j in range(r):
            if j in out:
                continue
            shared = st.strata[i].body.all_simplices() & st.strata[j].body.all_simplices()
            if any(len(s) > 1 for s in shared):
                out.add(j)
                todo.append(j)
    return out


def refine(st: Stratification, cuts: Mapping[int, Cut] | Sequence[Cut]) -> Stratification:
    if not isinstance(cuts, Mapping):
        cuts = dict(enumerate(cuts))
    r = len(st.strata)
    for k, c in cuts.items():
        if not isinstance(k, int) or not 0 <= k < r or not isinstance(c, Cut):
            raise PreconditionError(f"malformed cut spec entry {k!r}: {c!r}")
    sub = _subdivision_closure(st, {k for k, c in cuts.items() if c.subdivide})
    nxt = max(st.vertices, default=-1) + 1

    # barycenters get one global id per global simplex they subdivide
    keys: set[Simplex] = set()
    for i in sorted(sub):
        s = st.strata[i]
        for sim in s.base.all_simplices():
            if len(sim) > 1:
                keys.add(tuple(sorted(s.lower[v] for v in sim)))
                keys.add(tuple(sorted(s.upper[v] for v in sim)))
    bary_id = {}
    for key in sorted(keys, key=lambda x: (len(x), x)):
        bary_id[key] = nxt
        nxt += 1

    strata: list[Stratum] = []
    parents: list[int] = []
    old_parents = st.parents or tuple(range(r))
    for i, s in enumerate(st.strata):
        base, lo, up = s.base, s.lower, s.upper
        if i in sub:
            sd, bary = barycentric_subdivision(base)
            new_lo, new_up = {}, {}
            for sim, w in bary.items():
                if len(sim) == 1:
                    new_lo[w], new_up[w] = lo[sim[0]], up[sim[0]]
                else:
                    new_lo[w] = bary_id[tuple(sorted(lo[v] for v in sim))]
                    new_up[w] = bary_id[tuple(sorted(up[v] for v in sim))]
            base, lo, up = SurfaceComplex(sd.all_simplices()), new_lo, new_up
        cut = cuts.get(i)
        if cut is not None and cut.level:
            mid = {}
            for v in sorted(base.vertices):
                mid[v] = nxt
                nxt += 1
            strata.append(Stratum.of(base, lo, mid, f"{s.name}.a"))
            strata.append(Stratum.of(base, mid, up, f"{s.name}.b"))
            parents += [old_parents[i], old_parents[i]]
        else:
            strata.append(Stratum.of(base, lo, up, s.name))
            parents.append(old_parents[i])
    return Stratification(tuple(strata), tuple(parents))


def refines(new: Stratification, old: Stratification) -> bool:
    """Every new stratum sits inside the old stratum recorded as its parent.

    Checked on the old vertices it uses and on its prism volume: a parent's
    prism count times the subdivision factor must be exactly shared out.
    """
    if new.parents is None or len(new.parents) != len(new.strata):
        return False
    old_v = old.vertices
    volume: dict[int, int] = {}
    for s, p in zip(new.strata, new.parents):
        if not 0 <= p < len(old.strata):
            return False
        if not (s.vertices & old_v) <= old.strata[p].vertices:
            return False
        volume[p] = volume.get(p, 0) + len(s.prisms.cells)
    for p, vol in volume.items():
        base = len(old.strata[p].prisms.cells)
        if vol % base:
            return False
        k = vol // base
        if k not in (1, 2, 6, 12):
            return False
    return True


# --- towers ---------------------------------------------------------------

@dataclass(frozen=True)
class Tower:
    stratum: int
    base: frozenset[Simplex]
    top: frozenset[Simplex]
    body: SimplicialComplex


def staircase(bottom: Sequence[int], top: Sequence[int]) -> list[Simplex]:
    """Product of a simplex with an interval, split compatibly with prisms."""
    order = sorted(range(len(bottom)), key=lambda i: bottom[i])
    a = [bottom[i] for i in order]
    b = [top[i] for i in order]
    k = len(a)
    return [tuple(sorted(a[: i + 1] + b[i:])) for i in range(k)]


def tower(st: Stratification, i: int, X: SimplicialComplex | Iterable[Simplex]) -> Tower:
    """Product body over a subcomplex X of the lower boundary of stratum i."""
    s = st.strata[i]
    xs = X.all_simplices() if isinstance(X, SimplicialComplex) else closure(X)
    L = s.lower_surface.all_simplices()
    outside = [x for x in xs if x not in L]
    if outside:
        raise PreconditionError(f"simplex {min(outside)} of X is not in the lower boundary of stratum {i}")
    inv = {g: v for v, g in s.lower.items()}
    cells: list[Simplex] = []
    for x in xs:
        top = [s.upper[inv[g]] for g in x]
        cells.extend(staircase(list(x), top))
    body = SimplicialComplex(closure(cells))
    top_copy = frozenset(tuple(sorted(s.upper[inv[g]] for g in x)) for x in xs)
    return Tower(i, frozenset(xs), top_copy, body)


def tower_report(st: Stratification, t: Tower) -> dict[str, bool]:
    s = st.strata[t.stratum]
    body = t.body.all_simplices()
    return {
        "in_stratum": body <= s.body.all_simplices(),
        "meets_lower_in_X": body & s.lower_surface.all_simplices() == t.base,
        "meets_upper_in_copy": body & s.upper_surface.all_simplices() == t.top,
    }


# --- constructors ---------------------------------------------------------

def stack(bases: Sequence[SurfaceComplex], names: Sequence[str] | None = None) -> Stratification:
    """Strata over the given bases, each one's upper level equal to the next one's lower.

    Bases are given in a shared id space so that the overlap of consecutive
    bases is what gets glued; vertices of later bases not in the previous one
    get fresh lower ids.
    """
    names = list(names) if names is not None else [f"S{i + 1}" for i in range(len(bases))]
    nxt = 0
    level_ids: dict[tuple[int, int], int] = {}

    def gid(level: int, v: int) -> int:
        nonlocal nxt
        key = (level, v)
        if key not in level_ids:
            level_ids[key] = nxt
            nxt += 1
        return level_ids[key]

    strata = []
    for k, base in enumerate(bases):
        lo = {v: gid(k, v) for v in sorted(base.vertices)}
        up = {v: gid(k + 1, v) for v in sorted(base.vertices)}
        strata.append(Stratum.of(base, lo, up, names[k]))
    return Stratification(tuple(strata))


def body_complex(st: Stratification) -> SimplicialComplex:
    return st.union
