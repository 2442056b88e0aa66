"""Plain-text complex files and OFF mesh export.

Grammar (one statement per line, ``#`` starts a comment)::

    TRITOPO 1
    DIMENSION d
    VERTICES
    id id id ...
    SIMPLICES k                   # k >= 1, one simplex per line
    v0 v1 ... vk
    LABELS
    name: v v v; v v; ...         # maximal simplices of the label
    STRATA
    name | a b c; ... | b:g ... | b:g ...   # base triangles | lower map | upper map
    HANDLESPEC
    indices i i ...
    END

Serialization is canonical: sorted vertex tuples, sorted label names, labels
written by their maximal simplices, strata in file order.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .complex import Simplex, SimplicialComplex, faces
from .errors import ComplexError, FormatError
from .strata import Stratification, Stratum

VERSION = 1
SECTIONS = ("VERTICES", "SIMPLICES", "LABELS", "STRATA", "HANDLESPEC")
_INT = re.compile(r"-?\d+")


@dataclass
class ComplexFile:
    complex: SimplicialComplex
    stratification: Stratification | None = None
    handle_indices: tuple[int, ...] | None = None


def _ints(text: str, line: int, offset: int) -> list[int]:
    out = []
    for m in re.finditer(r"\S+", text):
        tok = m.group()
        if not _INT.fullmatch(tok):
            raise FormatError(f"expected an integer, got {tok!r}", line, offset + m.start() + 1)
        out.append(int(tok))
    return out


def _simplex_list(text: str, line: int, offset: int) -> list[Simplex]:
    out = []
    pos = 0
    for part in text.split(";"):
        if part.strip():
            vs = _ints(part, line, offset + pos)
            out.append(_canonical(vs, line, offset + pos))
        pos += len(part) + 1
    return out


def _canonical(vs: list[int], line: int, col: int) -> Simplex:
    s = tuple(sorted(vs))
    if len(set(s)) != len(s):
        raise FormatError(f"repeated vertex in simplex {tuple(vs)}", line, col)
    return s


def _pairs(text: str, line: int, offset: int) -> dict[int, int]:
    out = {}
    for m in re.finditer(r"\S+", text):
        tok = m.group()
        a, sep, b = tok.partition(":")
        if not sep or not _INT.fullmatch(a) or not _INT.fullmatch(b):
            raise FormatError(f"expected 'local:global', got {tok!r}", line, offset + m.start() + 1)
        out[int(a)] = int(b)
    return out


def parse(text: str) -> ComplexFile:
    lines = text.splitlines()
    stmts = []
    for no, raw in enumerate(lines, 1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            stmts.append((no, body))
    if not stmts:
        raise FormatError("empty file", 1, 1)
    no, first = stmts[0]
    head = first.split()
    if head[:1] != ["TRITOPO"] or len(head) != 2 or head[1] != str(VERSION):
        raise FormatError(f"expected header 'TRITOPO {VERSION}'", no, 1)
    dim = None
    vertices: list[int] = []
    simplices: list[tuple[Simplex, int]] = []
    labels: dict[str, list[Simplex]] = {}
    strata_rows: list[tuple[int, str, list[Simplex], dict[int, int], dict[int, int]]] = []
    indices = None
    section = None
    seen: set[str] = set()
    k_dim = None
    ended = False
    for no, body in stmts[1:]:
        if ended:
            raise FormatError("content after END", no, 1)
        words = body.split()
        key = words[0]
        if key == "END":
            ended = True
            continue
        if key == "DIMENSION" and section is None:
            if len(words) != 2 or not _INT.fullmatch(words[1]):
                raise FormatError("DIMENSION takes one integer", no, 1)
            dim = int(words[1])
            continue
        if key.isupper() and key.isalpha() and body == body.lstrip():
            if key not in SECTIONS:
                raise FormatError(f"unknown section {key!r}", no, 1)
            if key == "SIMPLICES":
                if len(words) != 2 or not _INT.fullmatch(words[1]) or int(words[1]) < 1:
                    raise FormatError("SIMPLICES takes a dimension >= 1", no, 1)
                k_dim = int(words[1])
                tag = f"SIMPLICES {k_dim}"
            else:
                if len(words) != 1:
                    raise FormatError(f"section header {key} takes no arguments", no, len(key) + 2)
                tag = key
            if tag in seen:
                raise FormatError(f"duplicate section {tag}", no, 1)
            seen.add(tag)
            section = key
            continue
        indent = len(body) - len(body.lstrip())
        if section is None:
            raise FormatError(f"statement outside any section: {body.strip()!r}", no, indent + 1)
        if section == "VERTICES":
            vertices += _ints(body, no, 0)
        elif section == "SIMPLICES":
            vs = _ints(body, no, 0)
            if len(vs) != k_dim + 1:
                raise FormatError(f"a {k_dim}-simplex needs {k_dim + 1} vertices, got {len(vs)}", no, indent + 1)
            simplices.append((_canonical(vs, no, indent + 1), no))
        elif section == "LABELS":
            name, sep, rest = body.partition(":")
            name = name.strip()
            if not sep or not name or " " in name:
                raise FormatError("expected 'name: simplices'", no, indent + 1)
            if name in labels:
                raise FormatError(f"duplicate label {name!r}", no, indent + 1)
            labels[name] = _simplex_list(rest, no, len(body) - len(rest))
        elif section == "STRATA":
            parts = body.split("|")
            if len(parts) != 4:
                raise FormatError("a stratum row has 4 fields separated by '|'", no, indent + 1)
            offs = [0]
            for p in parts[:-1]:
                offs.append(offs[-1] + len(p) + 1)
            strata_rows.append((
                no, parts[0].strip(), _simplex_list(parts[1], no, offs[1]),
                _pairs(parts[2], no, offs[2]), _pairs(parts[3], no, offs[3]),
            ))
        elif section == "HANDLESPEC":
            if words[0] != "indices":
                raise FormatError(f"unknown HANDLESPEC entry {words[0]!r}", no, indent + 1)
            indices = tuple(_ints(body.split(None, 1)[1] if len(words) > 1 else "", no, len(words[0]) + indent + 1))
    if not ended:
        raise FormatError("missing END", len(lines), 1)
    vset = set(vertices)
    if len(vset) != len(vertices):
        raise FormatError("duplicate vertex id in VERTICES", None, None)
    items = {(v,) for v in vset}
    for s, no in simplices:
        items.add(s)
    for s, no in sorted(simplices, key=lambda x: (len(x[0]), x[0])):
        for f in faces(s):
            if f not in items:
                raise FormatError(f"face {f} of simplex {s} is missing (face closure)", no, 1)
    if dim is not None:
        top = max((len(s) - 1 for s in items), default=-1)
        if top != dim:
            raise FormatError(f"DIMENSION {dim} but the top simplex has dimension {top}", None, None)
    try:
        K = SimplicialComplex(items).with_labels(labels)
    except ComplexError as exc:
        raise FormatError(str(exc)) from None
    st = None
    if strata_rows:
        strata = []
        for no, name, base, lo, up in strata_rows:
            bv = {v for t in base for v in t}
            if set(lo) != bv or set(up) != bv:
                raise FormatError(f"stratum {name!r}: maps must be defined exactly on the base vertices", no, 1)
            strata.append(Stratum.of(base, lo, up, name))
        st = Stratification(tuple(strata))
    return ComplexFile(K, st, indices)


def _maximal(simplices: Iterable[Simplex]) -> list[Simplex]:
    ss = set(simplices)
    covered = set()
    for s in ss:
        for f in faces(s):
            covered.add(f)
    out = []
    for s in sorted(ss, key=lambda x: (-len(x), x)):
        if s in covered:
            continue
        out.append(s)
    return sorted(out, key=lambda x: (len(x), x))


def _fmt(s: Simplex) -> str:
    return " ".join(map(str, s))


def serialize(cf: ComplexFile | SimplicialComplex) -> str:
    if isinstance(cf, SimplicialComplex):
        cf = ComplexFile(cf)
    K = cf.complex
    out = [f"TRITOPO {VERSION}", f"DIMENSION {K.dim}", "VERTICES"]
    vs = sorted(K.vertices)
    for i in range(0, len(vs), 20):
        out.append(" ".join(map(str, vs[i:i + 20])))
    for d in range(1, K.dim + 1):
        out.append(f"SIMPLICES {d}")
        out += [_fmt(s) for s in sorted(K.simplices(d))]
    if K.labels:
        out.append("LABELS")
        for name in sorted(K.labels):
            out.append(f"{name}: " + "; ".join(_fmt(s) for s in _maximal(K.labels[name])))
    if cf.stratification is not None:
        out.append("STRATA")
        for s in cf.stratification.strata:
            base = "; ".join(_fmt(t) for t in sorted(s.base.simplices(2)))
            lo = " ".join(f"{b}:{g}" for b, g in sorted(s.lower.items()))
            up = " ".join(f"{b}:{g}" for b, g in sorted(s.upper.items()))
            out.append(f"{s.name} | {base} | {lo} | {up}")
    if cf.handle_indices is not None:
        out += ["HANDLESPEC", "indices " + " ".join(map(str, cf.handle_indices))]
    out.append("END")
    return "\n".join(out) + "\n"


def canonicalize(text: str) -> str:
    return serialize(parse(text))


def read(path: str | Path) -> ComplexFile:
    return parse(Path(path).read_text())


def write(path: str | Path, cf: ComplexFile | SimplicialComplex) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize(cf))


# --- OFF --------------------------------------------------------------------

def _num(x) -> str:
    return repr(float(x))


def off_text(coords: Mapping[int, Iterable], triangles: Iterable[Simplex]) -> str:
    """OFF mesh with vertices in increasing id order; faces keep the given orientation."""
    tris = list(triangles)
    used = sorted({v for t in tris for v in t})
    index = {v: i for i, v in enumerate(used)}
    out = ["OFF", f"{len(used)} {len(tris)} 0"]
    for v in used:
        p = list(coords[v])
        p += [0] * (3 - len(p))
        out.append(" ".join(_num(x) for x in p[:3]))
    for t in tris:
        out.append("3 " + " ".join(str(index[v]) for v in t))
    return "\n".join(out) + "\n"


def write_off(path: str | Path, coords: Mapping[int, Iterable], triangles: Iterable[Simplex]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(off_text(coords, triangles))


def read_off(text: str) -> tuple[list[tuple[float, float, float]], list[tuple[int, ...]]]:
    toks = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    toks = [t for t in toks if t]
    if not toks or toks[0] != ["OFF"]:
        raise FormatError("missing OFF header", 1, 1)
    nv, nf = int(toks[1][0]), int(toks[1][1])
    pts = [tuple(float(x) for x in toks[2 + i][:3]) for i in range(nv)]
    fs = [tuple(int(x) for x in toks[2 + nv + i][1:]) for i in range(nf)]
    return pts, fs


# --- exact coordinates ----------------------------------------------------------

def coords_text(coords: Mapping[int, Iterable[Fraction]]) -> str:
    """Exact vertex coordinates, one ``id x y z`` line each, rationals as p/q."""
    out = ["COORDS 1"]
    for v in sorted(coords):
        out.append(f"{v} " + " ".join(str(Fraction(x)) for x in coords[v]))
    return "\n".join(out) + "\n"


def parse_coords(text: str) -> dict[int, tuple[Fraction, ...]]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "COORDS 1":
        raise FormatError("expected header 'COORDS 1'", 1, 1)
    out = {}
    for no, ln in enumerate(lines[1:], 2):
        parts = ln.split()
        if not parts:
            continue
        if len(parts) != 4 or not _INT.fullmatch(parts[0]):
            raise FormatError("expected 'id x y z'", no, 1)
        try:
            out[int(parts[0])] = tuple(Fraction(x) for x in parts[1:])
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad rational in {ln.strip()!r}", no, len(parts[0]) + 2) from None
    return out
