"""Simplicial and prism complexes, Z2 chains and mod-2 homology.

Simplices are sorted tuples of integer vertex ids.  A chain is identified
with its support, so adding chains is a symmetric difference.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations

from . import gf2
from .errors import ComplexError, InvalidChainError, PreconditionError, StructureError

Simplex = tuple[int, ...]


def faces(s: Simplex) -> list[Simplex]:
    """Codimension-one faces of a simplex."""
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def all_faces(s: Simplex) -> Iterable[Simplex]:
    """Every nonempty face of ``s`` including ``s`` itself."""
    for k in range(1, len(s) + 1):
        yield from combinations(s, k)


def closure(simplices: Iterable[Iterable[int]]) -> set[Simplex]:
    out: set[Simplex] = set()
    for s in simplices:
        s = tuple(sorted(s))
        if s in out:
            continue
        out.update(all_faces(s))
    return out


class SimplicialComplex:
    """A finite face-closed set of simplices with named subcomplexes.

    Instances are treated as immutable; every operation returns a new one.
    """

    def __init__(
        self,
        simplices: Iterable[Iterable[int]] = (),
        labels: Mapping[str, Iterable[Iterable[int]]] | None = None,
        *,
        close: bool = False,
    ):
        items: set[Simplex] = set()
        for s in simplices:
            t = tuple(s)
            if not t:
                continue
            if close:
                t = tuple(sorted(t))
            if any(not isinstance(v, int) for v in t):
                raise ComplexError(f"non-integer vertex in simplex {t}")
            if any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
                raise ComplexError(f"simplex {t} is not strictly increasing")
            items.add(t)
        if close:
            items = closure(items)
        else:
            for s in items:
                for f in faces(s):
                    if f not in items:
                        raise ComplexError(f"face {f} of simplex {s} is missing")
        by_dim: dict[int, set[Simplex]] = defaultdict(set)
        for s in items:
            by_dim[len(s) - 1].add(s)
        top = max(by_dim) if by_dim else -1
        self._by_dim = tuple(frozenset(by_dim.get(d, ())) for d in range(top + 1))
        self._all = frozenset(items)
        lab: dict[str, frozenset[Simplex]] = {}
        for name, members in (labels or {}).items():
            ms = {tuple(sorted(m)) if close else tuple(m) for m in members}
            if close:
                ms = closure(ms)
            missing = [m for m in ms if m not in self._all]
            if missing:
                raise ComplexError(f"label {name!r} uses simplex {sorted(missing)[0]} not in complex")
            for m in ms:
                for f in faces(m):
                    if f not in ms:
                        raise ComplexError(f"label {name!r} is not face-closed: {f} missing")
            lab[name] = frozenset(ms)
        self.labels: Mapping[str, frozenset[Simplex]] = dict(sorted(lab.items()))

    # --- basic accessors -------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def simplices(self, d: int) -> frozenset[Simplex]:
        if 0 <= d < len(self._by_dim):
            return self._by_dim[d]
        return frozenset()

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(s[0] for s in self.simplices(0))

    def all_simplices(self) -> frozenset[Simplex]:
        return self._all

    def __contains__(self, s) -> bool:
        return tuple(s) in self._all

    def __len__(self) -> int:
        return len(self._all)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._all == other._all and dict(self.labels) == dict(other.labels)

    def __hash__(self) -> int:
        return hash(self._all)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f={self.f_vector}, labels={list(self.labels)})"

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self._by_dim)

    def sorted(self, d: int) -> list[Simplex]:
        return self._sorted[d] if 0 <= d <= self.dim else []

    def index(self, d: int) -> dict[Simplex, int]:
        return self._index[d] if 0 <= d <= self.dim else {}

    @cached_property
    def _sorted(self) -> list[list[Simplex]]:
        return [sorted(s) for s in self._by_dim]

    @cached_property
    def _index(self) -> list[dict[Simplex, int]]:
        return [{s: i for i, s in enumerate(lst)} for lst in self._sorted]

    @cached_property
    def facets(self) -> frozenset[Simplex]:
        cofaced = set()
        for s in self._all:
            cofaced.update(faces(s))
        return frozenset(self._all - cofaced)

    @cached_property
    def cofaces(self) -> dict[Simplex, list[Simplex]]:
        """Map from each simplex to the simplices one dimension higher containing it."""
        co: dict[Simplex, list[Simplex]] = defaultdict(list)
        for d in range(1, self.dim + 1):
            for s in self.sorted(d):
                for f in faces(s):
                    co[f].append(s)
        return co

    def label(self, name: str) -> "SimplicialComplex":
        return SimplicialComplex(self.labels[name])

    def label_chain(self, name: str, d: int | None = None) -> "ChainZ2":
        """Top-dimensional (or ``d``-dimensional) simplices of a label as a chain."""
        L = self.label(name)
        d = L.dim if d is None else d
        return ChainZ2(d, L.simplices(d))

    def with_labels(self, labels: Mapping[str, Iterable[Iterable[int]]], *, replace: bool = False):
        merged = {} if replace else {k: v for k, v in self.labels.items()}
        merged.update({k: closure(v) for k, v in labels.items()})
        return SimplicialComplex(self._all, merged)

    def subcomplex(self, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        sub = closure(facets)
        missing = [s for s in sub if s not in self._all]
        if missing:
            raise ComplexError(f"simplex {min(missing)} not in complex")
        return SimplicialComplex(sub)

    # --- Z2 machinery ----------------------------------------------------
    def boundary_matrix(self, d: int) -> "BoundaryMatrix":
        return BoundaryMatrix.of(self, d)

    @cached_property
    def _eliminators(self) -> dict[int, gf2.Eliminator]:
        return {}

    def eliminator(self, d: int) -> gf2.Eliminator:
        """Reduced column space of the boundary map from dimension ``d``."""
        if d not in self._eliminators:
            e = gf2.Eliminator()
            for col in self.boundary_matrix(d).columns:
                e.add(col)
            self._eliminators[d] = e
        return self._eliminators[d]


@dataclass(frozen=True)
class ChainZ2:
    """A mod-2 chain stored as its support."""

    dim: int
    support: frozenset[Simplex] = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.support, frozenset):
            object.__setattr__(self, "support", frozenset(tuple(s) for s in self.support))
        for s in self.support:
            if len(s) != self.dim + 1:
                raise InvalidChainError(f"simplex {s} has wrong dimension for a {self.dim}-chain")

    @classmethod
    def of(cls, simplices: Iterable[Iterable[int]], dim: int | None = None) -> "ChainZ2":
        sup = frozenset(tuple(sorted(s)) for s in simplices)
        if dim is None:
            if not sup:
                raise ValueError("cannot infer dimension of an empty chain")
            dim = len(next(iter(sup))) - 1
        return cls(dim, sup)

    def __add__(self, other: "ChainZ2") -> "ChainZ2":
        if other.dim != self.dim:
            raise InvalidChainError("cannot add chains of different dimension")
        return ChainZ2(self.dim, self.support ^ other.support)

    __sub__ = __add__

    def __bool__(self) -> bool:
        return bool(self.support)

    def __len__(self) -> int:
        return len(self.support)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for s in self.support for v in s)

    def check_in(self, K: SimplicialComplex) -> None:
        for s in self.support:
            if s not in K:
                raise InvalidChainError(f"simplex {s} is not in the complex")


@dataclass(frozen=True)
class BoundaryMatrix:
    """Sparse 0/1 matrix of the boundary map, one bitset per column."""

    dim: int
    rows: list[Simplex]
    cols: list[Simplex]
    columns: list[int]

    @classmethod
    def of(cls, K: SimplicialComplex, d: int) -> "BoundaryMatrix":
        rows = K.sorted(d - 1)
        cols = K.sorted(d)
        if d <= 0:
            return cls(d, rows, cols, [0] * len(cols))
        idx = K.index(d - 1)
        columns = []
        for s in cols:
            c = 0
            for f in faces(s):
                c ^= 1 << idx[f]
            columns.append(c)
        return cls(d, rows, cols, columns)

    def to_dense(self):
        import numpy as np

        m = np.zeros((len(self.rows), len(self.cols)), dtype=np.uint8)
        for j, c in enumerate(self.columns):
            for i in gf2.bits(c):
                m[i, j] = 1
        return m


def _chain_bits(chain: ChainZ2, K: SimplicialComplex) -> int:
    idx = K.index(chain.dim)
    try:
        return gf2.to_bitset(idx[s] for s in chain.support)
    except KeyError as exc:
        raise InvalidChainError(f"simplex {exc.args[0]} is not in the complex") from None


def boundary(chain: ChainZ2, K: SimplicialComplex | None = None) -> ChainZ2:
    """Mod-2 boundary of a chain."""
    if chain.dim < 1:
        raise PreconditionError("boundary needs a chain of dimension >= 1")
    if K is not None:
        chain.check_in(K)
    out: set[Simplex] = set()
    for s in chain.support:
        for f in faces(s):
            out ^= {f}
    return ChainZ2(chain.dim - 1, frozenset(out))


def is_cycle(chain: ChainZ2) -> bool:
    return chain.dim == 0 or not boundary(chain)


def is_boundary(chain: ChainZ2, K: SimplicialComplex) -> tuple[bool, ChainZ2 | None]:
    """Decide whether a cycle bounds; return a witness one dimension up."""
    chain.check_in(K)
    if chain.dim >= 1 and boundary(chain):
        raise PreconditionError("is_boundary needs a cycle")
    if not chain:
        return True, ChainZ2(chain.dim + 1, frozenset())
    target = _chain_bits(chain, K)
    combo = K.eliminator(chain.dim + 1).solve(target)
    if combo is None:
        return False, None
    cols = K.sorted(chain.dim + 1)
    return True, ChainZ2(chain.dim + 1, frozenset(cols[i] for i in gf2.bits(combo)))


def homology_rank(K: SimplicialComplex, i: int) -> int:
    """Rank of H_i(K; Z2)."""
    if i < 0 or i > max(K.dim, 0):
        raise PreconditionError(f"dimension {i} outside 0..{K.dim}")
    n_i = len(K.simplices(i))
    rank_i = K.eliminator(i).rank if i > 0 else 0
    rank_up = K.eliminator(i + 1).rank if i + 1 <= K.dim else 0
    return n_i - rank_i - rank_up


def homology_ranks(K: SimplicialComplex, top: int = 3) -> tuple[int, ...]:
    return tuple(homology_rank(K, i) if i <= K.dim else 0 for i in range(top + 1))


def euler_characteristic(K: SimplicialComplex) -> int:
    return sum((-1) ** d * n for d, n in enumerate(K.f_vector))


# --- subdivision -------------------------------------------------------------

def _flags_in(s: Simplex, bary: Mapping[Simplex, int]) -> Iterable[Simplex]:
    """Top simplices of the barycentric subdivision of a single simplex."""
    for perm in permutations(s):
        yield tuple(sorted(bary[tuple(sorted(perm[:k]))] for k in range(1, len(s) + 1)))


def barycentric_subdivision(K: SimplicialComplex) -> tuple[SimplicialComplex, dict[Simplex, int]]:
    """First barycentric subdivision and the simplex -> barycenter-vertex map.

    Vertices keep their ids; new barycenters are numbered after the largest
    existing id in (dimension, lexicographic) order.
    """
    nxt = max(K.vertices, default=-1) + 1
    bary: dict[Simplex, int] = {}
    for d in range(K.dim + 1):
        for s in K.sorted(d):
            if d == 0:
                bary[s] = s[0]
            else:
                bary[s] = nxt
                nxt += 1
    # a flag ending at s lies in s; record which old simplex carries each new one
    new_facets = []
    for s in K.facets:
        new_facets.extend(_flags_in(s, bary))
    carrier_of: dict[Simplex, Simplex] = {}
    for s in K.all_simplices():
        for t in _flags_in(s, bary):
            carrier_of[t] = s
    labels = {}
    for name, members in K.labels.items():
        labels[name] = [t for t, s in carrier_of.items() if s in members]
    sd = SimplicialComplex(new_facets, labels, close=True)
    return sd, bary


def subdivide_chain(chain: ChainZ2, bary: Mapping[Simplex, int]) -> ChainZ2:
    out: set[Simplex] = set()
    for s in chain.support:
        out.update(_flags_in(s, bary))
    return ChainZ2(chain.dim, frozenset(out))


def barycentric_subdivide(
    K: SimplicialComplex, carried: Sequence[ChainZ2] = ()
) -> tuple[SimplicialComplex, list[ChainZ2]]:
    """Subdivide ``K`` once and carry the given chains along."""
    for c in carried:
        c.check_in(K)
    sd, bary = barycentric_subdivision(K)
    return sd, [subdivide_chain(c, bary) for c in carried]


def stellar_subdivide(K: SimplicialComplex, sigma: Simplex, new_vertex: int | None = None) -> SimplicialComplex:
    """Star ``sigma`` at a new vertex; labels follow their carriers."""
    sigma = tuple(sigma)
    if sigma not in K:
        raise PreconditionError(f"{sigma} is not a simplex of the complex")
    if new_vertex is None:
        new_vertex = max(K.vertices) + 1
    elif new_vertex in K.vertices:
        raise PreconditionError(f"vertex {new_vertex} already used")
    sset = set(sigma)
    containing = [r for r in K.all_simplices() if sset <= set(r)]
    keep = K.all_simplices() - set(containing)
    proper = [f for k in range(0, len(sigma)) for f in combinations(sigma, k)]
    carrier: dict[Simplex, Simplex] = {}
    for r in containing:
        rest = tuple(v for v in r if v not in sset)
        for phi in proper:
            t = tuple(sorted(rest + phi + (new_vertex,)))
            carrier[t] = r
    simplices = set(keep) | set(carrier)
    labels = {}
    for name, members in K.labels.items():
        labels[name] = [m for m in members if m in keep] + [t for t, r in carrier.items() if r in members]
    return SimplicialComplex(simplices, labels, close=True)


def regular_neighborhood(K: SimplicialComplex, L: Iterable[Iterable[int]]) -> tuple[SimplicialComplex, SimplicialComplex]:
    """Closed simplicial neighbourhood of ``L`` in the second barycentric subdivision.

    Returns the subdivided complex together with the neighbourhood subcomplex.
    """
    L = closure(L)
    missing = [s for s in L if s not in K]
    if missing:
        raise PreconditionError(f"{min(missing)} is not in the complex")
    work = K.with_labels({"__nbhd_core": L})
    sd2 = barycentric_subdivision(barycentric_subdivision(work)[0])[0]
    core_vertices = {s[0] for s in sd2.labels["__nbhd_core"] if len(s) == 1}
    star = [s for s in sd2.facets if core_vertices.intersection(s)]
    labels = {k: v for k, v in sd2.labels.items() if k != "__nbhd_core"}
    sd2 = SimplicialComplex(sd2.all_simplices(), labels)
    return sd2, SimplicialComplex(star, close=True)


# --- combinatorial helpers ---------------------------------------------------

def facet_components(facets: Iterable[Simplex], blocked: Iterable[Simplex] = ()) -> list[list[Simplex]]:
    """Connected components of facets glued along codimension-one faces.

    Faces in ``blocked`` do not connect their two sides.
    """
    facets = sorted(set(facets))
    blocked = set(blocked)
    by_face: dict[Simplex, list[int]] = defaultdict(list)
    for i, s in enumerate(facets):
        for f in faces(s):
            if f not in blocked:
                by_face[f].append(i)
    parent = list(range(len(facets)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for members in by_face.values():
        r = find(members[0])
        for m in members[1:]:
            parent[find(m)] = r
    groups: dict[int, list[Simplex]] = defaultdict(list)
    for i, s in enumerate(facets):
        groups[find(i)].append(s)
    return sorted(groups.values(), key=lambda g: (-len(g), g[0]))


def pure_boundary(facets: Iterable[Simplex]) -> set[Simplex]:
    """Codimension-one faces lying in exactly one of the given facets."""
    count: dict[Simplex, int] = defaultdict(int)
    for s in facets:
        for f in faces(s):
            count[f] += 1
    return {f for f, c in count.items() if c == 1}


def link(K: SimplicialComplex, s: Simplex) -> SimplicialComplex:
    sset = set(s)
    out = [tuple(v for v in r if v not in sset) for r in K.all_simplices() if sset < set(r)]
    return SimplicialComplex(out, close=True)


def closed_star(K: SimplicialComplex, vertices: Iterable[int]) -> set[Simplex]:
    vs = set(vertices)
    return closure(s for s in K.facets if vs.intersection(s))


def graph_components(vertices: Iterable[int], edges: Iterable[Simplex]) -> list[set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    seen: set[int] = set()
    comps = []
    for v in sorted(adj):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def relabel(K: SimplicialComplex, mapping: Mapping[int, int]) -> SimplicialComplex:
    def m(s):
        return tuple(sorted(mapping.get(v, v) for v in s))

    return SimplicialComplex(
        [m(s) for s in K.all_simplices()],
        {k: [m(s) for s in v] for k, v in K.labels.items()},
        close=True,
    )


# --- prism complexes ---------------------------------------------------------

@dataclass(frozen=True)
class Prism:
    """A polygon times an interval.

    ``bottom[i]`` and ``top[i]`` are the global vertices over the i-th corner
    of the base polygon.  A corner with ``bottom[i] == top[i]`` is pinched: the
    vertical edge over it is collapsed to a point.
    """

    bottom: tuple[int, ...]
    top: tuple[int, ...]
    tag: tuple | None = None

    def __post_init__(self):
        if len(self.bottom) != len(self.top):
            raise StructureError("bottom and top polygons differ in size")
        if len(self.bottom) < 3:
            raise StructureError("prism base needs at least 3 corners")
        if len(set(self.bottom)) != len(self.bottom) or len(set(self.top)) != len(self.top):
            raise StructureError(f"repeated vertex in prism {self.bottom}/{self.top}")
        for i, b in enumerate(self.bottom):
            if b in self.top and self.top.index(b) != i:
                raise StructureError(f"bottom vertex {b} reappears at a different top corner")


@dataclass(frozen=True)
class PrismComplex:
    cells: tuple[Prism, ...]

    @property
    def product_tags(self) -> dict[int, tuple | None]:
        return {i: c.tag for i, c in enumerate(self.cells)}


def _fan(poly: Sequence[int]) -> list[tuple[int, int, int]]:
    """Fan triangulation of a cyclic polygon from its lowest-id corner."""
    k = poly.index(min(poly))
    p = list(poly[k:]) + list(poly[:k])
    return [(0, i, i + 1) for i in range(1, len(p) - 1)], k


def prism_tetrahedra(bottom: Sequence[int], top: Sequence[int]) -> list[Simplex]:
    """Staircase split of a triangular prism, ordered by bottom vertex id.

    For the side quad over corners i < j (in that order) the diagonal joins
    bottom[i] to top[j]; adjacent prisms therefore agree on every shared face.
    Pinched corners drop the degenerate tetrahedra.
    """
    order = sorted(range(3), key=lambda i: bottom[i])
    a = [bottom[i] for i in order]
    b = [top[i] for i in order]
    out = []
    for tet in ((a[0], a[1], a[2], b[2]), (a[0], a[1], b[1], b[2]), (a[0], b[0], b[1], b[2])):
        if len(set(tet)) == 4:
            out.append(tuple(sorted(tet)))
    return out


def prism_to_simplicial(p: PrismComplex) -> SimplicialComplex:
    tets: list[Simplex] = []
    for cell in p.cells:
        n = len(cell.bottom)
        if n == 3:
            tris = [(0, 1, 2)]
            rot = 0
        else:
            tris, rot = _fan(cell.bottom)
        for tri in tris:
            idx = [(rot + t) % n for t in tri]
            tets.extend(prism_tetrahedra([cell.bottom[i] for i in idx], [cell.top[i] for i in idx]))
    count: dict[Simplex, int] = defaultdict(int)
    for t in tets:
        if count[t]:
            raise StructureError(f"tetrahedron {t} produced twice")
        count[t] += 1
        for f in faces(t):
            count[f] += 1
    over = [f for f, c in count.items() if len(f) == 3 and c > 2]
    if over:
        raise StructureError(f"triangle {min(over)} lies in more than two tetrahedra")
    return SimplicialComplex(tets, close=True)


def product_prisms(triangles: Iterable[Simplex], lower: Mapping[int, int], upper: Mapping[int, int], tag=None) -> PrismComplex:
    """Prisms over a triangulated surface given its lower and upper vertex maps."""
    cells = []
    for t in sorted(triangles):
        cells.append(Prism(tuple(lower[v] for v in t), tuple(upper[v] for v in t), (tag, t)))
    return PrismComplex(tuple(cells))
